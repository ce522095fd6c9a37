import pytest
from hypothesis import given, settings, strategies as st

from order3 import classify as cl
from order3 import matrixgroups as mg
from order3.permcore import Permutation, perm_order
from order3.permcore.search import OrderIs, element_search

from conftest import group
from oracles import ALT_EXCEPTIONS, CLASS_DATA

ORACLE_GROUPS = ["Alt(5)", "Alt(6)", "Alt(7)", "PSL(2,7)", "PSL(2,8)", "PSL(3,2)", "PSU(3,3)",
                 "PGammaL2(8)", "FrobA4", "PSL(2,11)", "PSL(2,13)", "PSL(3,3)", "PSL(3,4)"]


_CACHE = {}


def records(name):
    if name not in _CACHE:
        _CACHE[name] = cl.order3_class_records(group(name))
    return _CACHE[name]


def test_alt5_alt6_examples():
    (r,) = records("Alt(5)")
    assert (r.class_size, r.centralizer_order) == (20, 3)
    assert [r.centralizer_order for r in records("Alt(6)")] == [9, 9]


def test_psl2_13_even():
    (r,) = records("PSL(2,13)")
    assert r.centralizer_order % 2 == 0 and r.centralizes_involution


def test_psl27_false_but_normalizes():
    (r,) = records("PSL(2,7)")
    assert not r.centralizes_involution
    assert r.normalizes_2subgroup and r.witness_group_order == 4


def test_alt7():
    h = group("Alt(7)")
    x = Permutation.parse("(0 1 2)(3 4 5)", 7)
    assert not cl.centralizes_involution(h, x, exhaustive=True).value
    d = cl.centralizes_involution(h, Permutation.parse("(0 1 2)", 7))
    assert d.value and d.witness.cycle_type() == (2, 2, 1, 1, 1)
    assert all(d.witness[i] == i for i in (0, 1, 2))


def test_psu33_j3_class():
    h = group("PSU(3,3)")
    for x, _, size in cl.order3_classes(h):
        J = mg.jordan_partition(h.matrix_of(x))
        d = cl.centralizes_involution(h, x, class_size=size, exhaustive=True)
        assert d.value == (J != (3,))


@pytest.mark.parametrize("name,expect", [("PSL(2,8)", [False]), ("PSL(2,7)", [True])])
def test_normalizes_examples(name, expect):
    assert [r.normalizes_2subgroup for r in records(name)] == expect


def test_pgl34_irreducible_class():
    h = group("PGL(3,4)")
    found = False
    for r in records("PGL(3,4)"):
        if mg.semisimple_label(h.matrix_of(r.representative)) == "irreducible":
            assert not r.normalizes_2subgroup
            found = True
    assert found


def test_two_group_order_examples():
    t = Permutation.parse("(0 1)(2 3)", 6)
    u = Permutation.parse("(0 2)(1 3)", 6)
    assert cl.two_group_order([t], 8) == 2
    assert cl.two_group_order([t, u, t * u], 8) == 4
    v = Permutation.parse("(0 1)", 3)
    w = Permutation.parse("(1 2)", 3)
    assert perm_order(v * w) == 3
    res = cl.two_group_order([v, w], 8)
    assert isinstance(res, cl.Overflow) and not res
    assert cl.two_group_order([], 8) == 1
    big = [Permutation.parse("(0 1)", 8), Permutation.parse("(2 3)", 8), Permutation.parse("(4 5)", 8)]
    assert isinstance(cl.two_group_order(big, 4), cl.Overflow)


def test_triple_witness():
    x = Permutation.parse("(0 1 2)(3 4 5)(6 7 8)", 9)
    w = Permutation.parse("(0 1)(3 4)", 9)
    # w^x = (1 2)(4 5) does not commute with w
    with pytest.raises(ValueError):
        cl.triple_involution_witness(w, x)
    w = Permutation.parse("(0 3)(1 4)(2 5)", 9)
    y = cl.triple_involution_witness(w, x)
    assert (y * y).is_identity() and y * x == x * y
    k = Permutation.parse("(0 1)(2 3)", 12)
    xs = Permutation.parse("(4 5 6)", 12)
    y = cl.triple_involution_witness(k, xs)
    assert y == k
    with pytest.raises(ValueError):
        cl.triple_involution_witness(Permutation.parse("(0 1)", 3), Permutation.parse("(0 1 2)", 3))


def test_wreath_triple():
    w = group("Wreath(PSL2(16),Sym2)")
    y = w.extras["diagonal"]
    assert perm_order(y) == 3


@pytest.mark.parametrize("name", ORACLE_GROUPS)
def test_oracle_agreement(name):
    h = group(name)
    for r in records(name):
        assert r.normalizes_2subgroup == cl.oracle_normalizes_2subgroup(h, r.representative)
        assert r.centralizes_involution == cl.oracle_centralizes_involution(h, r.representative)


@pytest.mark.parametrize("name", ORACLE_GROUPS)
def test_record_invariants(name):
    h = group(name)
    recs = records(name)
    for r in recs:
        x = r.representative
        assert perm_order(x) == 3
        assert r.class_size * r.centralizer_order == h.order
        assert r.centralizes_involution == (r.centralizer_order % 2 == 0)
        assert (not r.centralizes_involution) or r.normalizes_2subgroup
        t = r.normalizer_witness
        if t is not None:
            assert perm_order(t) == 2
            if t * x != x * t:
                tx = t ** x
                n = cl.two_group_order([t, tx, tx ** x], h.order)
                assert n and n >= 2 and n == r.witness_group_order
        if r.centralizer_witness is not None:
            assert r.centralizer_witness * x == x * r.centralizer_witness
        assert cl.ClassRecord.from_json(r.to_json()) == r
    assert sum(r.class_size for r in recs) == element_search(h.chain, OrderIs(3))


@pytest.mark.parametrize("name", sorted(CLASS_DATA))
def test_class_sizes_frozen(name):
    assert sorted(r.class_size for r in records(name)) == CLASS_DATA[name][1]


def test_representatives_first_in_stream():
    h = group("Alt(6)")
    ranks = cl.order3_ranks(h)
    assert records("Alt(6)")[0].rank == int(ranks[0])
    assert [r.rank for r in records("Alt(6)")] == sorted(r.rank for r in records("Alt(6)"))


def test_threads_do_not_change_records():
    h = group("PSL(3,3)")
    a = cl.order3_class_records(h, threads=1)
    b = cl.order3_class_records(h, threads=4)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_refusals():
    with pytest.raises(cl.NotOrderThree):
        cl.centralizes_involution(group("Alt(5)"), Permutation.parse("(0 1)(2 3)", 5))
    with pytest.raises(cl.OracleRefused):
        cl.oracle_normalizes_2subgroup(group("PGL(3,4)"), records("PGL(3,4)")[0].representative)
    with pytest.raises(cl.ExcludedGroup):
        cl.order3_class_records(group("Sp4(2)"))


@pytest.mark.parametrize("n", sorted(ALT_EXCEPTIONS))
def test_alt_brute_force(n):
    for c in range(1, n // 3 + 1):
        label = cl.cycle_type_label(cl.alt_type_rep(n, c))
        assert cl.alt_centralizes_involution(n, c) == (label not in ALT_EXCEPTIONS[n])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["Alt(6)", "PSL(2,8)", "PSL(2,7)", "PGammaL2(8)", "FrobA4"]), st.data())
def test_conjugation_invariance(name, data):
    h = group(name)
    recs = records(name)
    r = data.draw(st.sampled_from(recs))
    g = h.chain.element(data.draw(st.integers(0, h.order - 1)))
    y = r.representative ** g
    c = cl.centralizes_involution(h, y)
    assert c.value == r.centralizes_involution
    assert cl.normalizes_nontrivial_2subgroup(h, y, centralizes=c).value == r.normalizes_2subgroup
