import itertools

import numpy as np
import pytest

from order3 import matrixgroups as mg
from order3.classify import order3_classes
from order3.finitefield import field_of_order
from order3.permcore import build_chain, perm_order

from conftest import group
from oracles import CLASS_DATA, ORDERS

ALL_ORDERS = {**ORDERS, **{k: v[0] for k, v in CLASS_DATA.items()}}


@pytest.mark.parametrize("n,q,order", [(2, 4, 60), (3, 2, 168), (2, 9, 360), (2, 8, 504), (3, 3, 5616)])
def test_psl_orders(n, q, order):
    F = field_of_order(q)
    act = mg.projective_action(F, n)
    ch = build_chain(mg.projectivize(mg.sl_generators(n, q), act), act.degree)
    assert ch.order == order
    assert all(g.det() == 1 for g in mg.sl_generators(n, q))


def test_projective_point_counts():
    assert mg.projective_action(field_of_order(3), 3).degree == 13
    assert mg.projective_action(field_of_order(8), 2).degree == 9
    F = field_of_order(4)
    act = mg.projective_action(F, 3)
    alpha = F.generator.code
    assert mg.projectivize([mg.Matrix.scalar(F, 3, alpha)], act)[0].is_identity()


def test_psl28_three_transitive():
    h = group("PSL(2,8)")
    X = h.chain.elements_at(np.arange(h.order))
    triples = {tuple(r[[0, 1, 2]]) for r in X}
    assert len(triples) == 9 * 8 * 7


@pytest.mark.parametrize("n,q", [(3, 3), (3, 4), (3, 8), (4, 3), (3, 5)])
def test_unitary_generators_preserve_form(n, q):
    J = mg.hermitian_gram(q, n)
    for g in mg.su_generators(n, q):
        assert mg.preserves_hermitian(g, J, q) and g.det() == 1
    for g in mg.gu_generators(n, q):
        assert mg.preserves_hermitian(g, J, q)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_symplectic_generators_preserve_form(q):
    J = mg.symplectic_gram(q)
    for g in mg.sp_generators(4, q):
        assert mg.preserves_bilinear(g, J)


@pytest.mark.parametrize("name", ["PSU(3,3)", "PSU(4,3)", "Sp4(3)", "Sp4(2)", "PGL(3,4)", "PSU(3,4)", "PSL(4,3)"])
def test_classical_orders(name):
    assert group(name).order == ALL_ORDERS[name]


def test_su32_solvable_flagged():
    h = group("PSU(3,2)")
    assert h.order == 72 and h.excluded == "solvable"


def test_unipotent_reps():
    u = mg.unipotent_rep([2], 2, 9)
    assert (u ** 3).is_identity() and not u.is_identity()
    v = mg.unipotent_rep([3, 1], 4, 3)
    assert (v ** 3).is_identity() and mg.jordan_partition(v) == (3, 1)
    assert mg.unipotent_rep([1, 1, 1], 3, 3).is_identity()
    with pytest.raises(mg.MatrixError):
        mg.unipotent_rep([2], 2, 4)
    with pytest.raises(mg.MatrixError):
        mg.unipotent_rep([4], 4, 3)


def test_sp4_jordan_types():
    """J2+J2 occurs in Sp4(3); J3+J1 does not (every order-3 class is inspected)."""
    h = group("Sp4(3)")
    seen = set()
    total = 0
    for x, _, size in order3_classes(h):
        seen.add(mg.jordan_partition(h.matrix_of(x)))
        total += size
    assert (2, 2) in seen and (3, 1) not in seen
    assert seen == {(2, 1, 1), (2, 2)}


@pytest.mark.parametrize("family,torus,q,label", [
    ("PSL3", "split", 4, "split"), ("PSL3", "partially-split", 2, "partially-split"),
    ("PSL3", "partially-split", 8, "partially-split"), ("PGL3", "irreducible", 4, "irreducible"),
    ("PGL3", "irreducible", 7, "irreducible"), ("PSL2", "split", 7, "split"),
    ("PSL2", "irreducible", 8, "irreducible"), ("PSU3", "split", 8, "split"),
    ("PSU3", "partially-split", 4, "partially-split"), ("PGU3", "irreducible", 8, "irreducible"),
    ("PGU3", "irreducible", 5, "irreducible"),
])
def test_torus_reps(family, torus, q, label):
    M = mg.torus_order3_rep(family, torus, q)
    assert M.projective_order() == 3
    uq = q if family in ("PSU3", "PGU3") else None
    assert mg.semisimple_label(M, uq) == label
    if family in ("PSU3", "PGU3"):
        assert mg.preserves_hermitian(M, mg.hermitian_gram(q, 3), q)


def test_split_example_is_diagonal():
    F = field_of_order(4)
    M = mg.torus_order3_rep("PSL3", "split", 4)
    a = M.codes[1, 1]
    assert M.codes[0, 0] == 1 and int(F.vpow(int(a), 3)) == 1 and a != 1
    assert (M.codes == np.diag(np.diag(M.codes))).all()


@pytest.mark.parametrize("family,torus,q", [("PSL3", "irreducible", 4), ("PSL3", "split", 5),
                                            ("PSL2", "split", 8), ("PSL3", "split", 9)])
def test_torus_refusals(family, torus, q):
    with pytest.raises(mg.MatrixError):
        mg.torus_order3_rep(family, torus, q)


def test_twist():
    t = mg.frobenius_twist_perm(8)
    assert perm_order(t) == 3
    act = mg.projective_action(field_of_order(8), 2)
    for i, pt in enumerate(act.points):
        if set(pt.tolist()) <= {0, 1}:
            assert t[i] == i
    assert group("PGammaL2(8)").order == 1512


def test_matrix_of_round_trip():
    h = group("PSL(3,4)")
    rng = np.random.default_rng(3)
    for r in rng.integers(0, h.order, size=20):
        x = h.chain.element(int(r))
        M = h.matrix_of(x)
        assert mg.projectivize([M], h.action)[0] == x


def test_lifting_modulo_center_sl29():
    """In SL2(9): an order-3 x and a 2-element w commute modulo scalars iff they commute."""
    F = field_of_order(9)
    mats = []
    for a, b, c, d in itertools.product(range(9), repeat=4):
        M = mg.Matrix(F, [[a, b], [c, d]])
        if M.det() == 1:
            mats.append(M)
    assert len(mats) == 720
    I = mg.Matrix.identity(F, 2)
    x = mg.unipotent_rep([2], 2, 9)

    def order(M):
        P, k = M, 1
        while not P.is_identity():
            P, k = P @ M, k + 1
        return k

    two = [w for w in mats if order(w) & (order(w) - 1) == 0]
    # 1 + 1 (-I) + 90 (order 4) + 2 * 90 (order 8); all lie in split tori of order 8
    assert len(two) == 272
    for w in two:
        comm = w.inverse() @ x.inverse() @ w @ x
        assert comm.is_scalar() == (comm == I)


def test_kernel_orders():
    assert mg.scalar_kernel_order(mg.sl_generators(3, 4)) == 3
    assert mg.scalar_kernel_order(mg.sl_generators(3, 3)) == 1
    assert mg.scalar_kernel_order(mg.su_generators(3, 8), "hermitian", 8) == 3
