from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from order3 import robinson as rb

from conftest import group

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def test_fixtures_load():
    assert rb.load_degrees(FIX / "a5.deg").multiset == {1: 1, 3: 2, 4: 1, 5: 1}
    assert rb.load_degrees(FIX / "psl27.deg").order == 168
    assert rb.load_degrees(FIX / "psl28.deg").order == 504


def test_corrupt_fixture_rejected():
    with pytest.raises(rb.DegreeDataError, match="455"):
        rb.load_degrees(FIX / "psl28_corrupt.deg")


@pytest.mark.parametrize("text", [
    "order 60\n", "degrees 1 3 3 4 5\n", "order 60\ndegrees 1 3 3 4 5 7\n",
    "order 60\ndegrees 2 3 3 4 5\n", "order 60\nweights 1\n", "order sixty\ndegrees 1\n",
    "order 4\ndegrees 2\n",
])
def test_invalid_degree_text(text):
    with pytest.raises(rb.DegreeDataError):
        rb.parse_degrees(text)


def test_defect_zero_examples():
    assert rb.defect_zero_count(rb.load_degrees(FIX / "a5.deg")) == 1
    assert rb.defect_zero_count(rb.load_degrees(FIX / "psl28.deg")) == 1
    assert rb.defect_zero_count(rb.load_degrees(FIX / "psl27.deg")) == 1
    # Sym(3): degrees 1 1 2, order 6; nu_2(2) = nu_2(6)
    assert rb.defect_zero_count(rb.DegreeData(6, (1, 1, 2))) == 1
    # Alt(4): degrees 1 1 1 3, no degree with full 2-part
    assert rb.defect_zero_count(rb.DegreeData(12, (1, 1, 1, 3))) == 0


@pytest.mark.parametrize("name,bound", [("PSL(2,8)", 1), ("Alt(5)", 0), ("PSL(2,7)", 0)])
def test_lower_bound(name, bound):
    assert rb.robinson_lower_bound(group(name)) == bound


def test_lower_bound_pgl34_counts_inverse_classes():
    # x and x^-1 lie in different outer cosets, so the irreducible type splits into two classes
    h = group("PGL(3,4)")
    assert rb.robinson_lower_bound(h) == 2
    from order3.classify import order3_class_records
    from order3.permcore.search import conjugation_orbit
    bad = [r for r in order3_class_records(h) if not r.normalizes_2subgroup]
    inv = conjugation_orbit(h.chain, h.generators, ~bad[0].representative)
    assert int(inv.members.min()) == bad[1].rank


@pytest.mark.parametrize("name,fixture", [("PSL(2,8)", "psl28.deg"), ("Alt(5)", "a5.deg"),
                                          ("PSL(2,7)", "psl27.deg")])
def test_bound_holds(name, fixture):
    rep = rb.check_bound(group(name), rb.load_degrees(FIX / fixture))
    assert rep.passed and rep.lower_bound <= rep.blocks
    assert rep.line().endswith("pass")


def test_bound_mismatch():
    with pytest.raises(rb.BoundMismatch):
        rb.check_bound(group("Alt(5)"), rb.load_degrees(FIX / "psl28.deg"))


def test_bound_violation_is_an_error():
    fake = rb.DegreeData(504, (1,) * 504)
    with pytest.raises(rb.BoundViolated):
        rb.check_bound(group("PSL(2,8)"), fake)


@given(st.lists(st.integers(1, 40), min_size=1, max_size=8))
def test_valuation(ds):
    n = 1
    for d in ds:
        n *= d
    assert rb.valuation(n) == sum(rb.valuation(d) for d in ds)
    assert n % 2 ** rb.valuation(n) == 0 and (n >> rb.valuation(n)) % 2 == 1
