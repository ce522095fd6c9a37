import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from order3.finitefield import (FieldMismatchError, element_order, field_of_order, frobenius,
                                inv, make_field, prime_power)

SMALL_Q = [q for q in range(2, 82) if len(sympy.factorint(q)) == 1]


def test_prime_fields_and_moduli():
    assert make_field(2, 1).q == 2
    F4 = make_field(2, 2)
    assert F4.modulus == (1, 1, 1)          # x^2 + x + 1, low degree first
    F9 = make_field(3, 2)
    # the least primitive monic quadratic over GF(3)
    x = sympy.symbols("x")
    poly = sympy.Poly(sum(c * x**i for i, c in enumerate(F9.modulus)), x, modulus=3)
    assert poly.is_irreducible
    assert F9.generator.code == 3 and element_order(F9.generator) == 8


@pytest.mark.parametrize("q", [q for q in SMALL_Q if prime_power(q)[1] > 1])
def test_modulus_is_irreducible(q):
    F = field_of_order(q)
    x = sympy.symbols("x")
    poly = sympy.Poly(sum(c * x**i for i, c in enumerate(F.modulus)), x, modulus=F.p)
    assert poly.is_irreducible
    assert element_order(F.generator) == q - 1


def test_gf4_examples():
    F = field_of_order(4)
    x = F.from_coeffs([0, 1])
    assert x * x == F.from_coeffs([1, 1])
    assert element_order(x) == 3
    assert frobenius(x, 1) == x * x
    assert element_order(field_of_order(2).one) == 1


@pytest.mark.parametrize("q", SMALL_Q)
def test_axioms_exhaustive(q):
    F = field_of_order(q)
    a = np.arange(q)[:, None]
    b = np.arange(q)[None, :]
    assert (F.vadd(a, b) == F.vadd(b, a)).all()
    assert (F.vmul(a, b) == F.vmul(b, a)).all()
    for c in range(q):
        assert (F.vmul(F.vadd(a, b), c) == F.vadd(F.vmul(a, c), F.vmul(b, c))).all()
        assert (F.vmul(F.vmul(a, b), c) == F.vmul(a, F.vmul(b, c))).all()
        assert (F.vadd(F.vadd(a, b), c) == F.vadd(a, F.vadd(b, c))).all()
    nz = np.arange(1, q)
    assert (F.vmul(nz, F.vinv(nz)) == 1).all()
    assert (F.vpow(nz, q - 1) == 1).all()
    threes = sum(1 for c in nz if element_order(F.element(int(c))) == 3)
    assert threes == (2 if (q - 1) % 3 == 0 else 0)


@pytest.mark.parametrize("q", SMALL_Q)
def test_frobenius_is_automorphism(q):
    F = field_of_order(q)
    a = np.arange(q)[:, None]
    b = np.arange(q)[None, :]
    fa, fb = F.vfrob(a), F.vfrob(b)
    assert (F.vfrob(F.vadd(a, b)) == F.vadd(fa, fb)).all()
    assert (F.vfrob(F.vmul(a, b)) == F.vmul(fa, fb)).all()
    fixed = [c for c in range(q) if F.vfrob(c) == c]
    assert len(fixed) == F.p
    assert all(F.vfrob(c, F.k) == c for c in range(q))


def test_errors():
    with pytest.raises(ValueError):
        field_of_order(6)
    with pytest.raises(ZeroDivisionError):
        inv(field_of_order(9).zero)
    with pytest.raises(FieldMismatchError):
        field_of_order(4).one + field_of_order(8).one


def test_vsum_matches_reduce():
    for q in (2, 7, 9, 16):
        F = field_of_order(q)
        rng = np.random.default_rng(q)
        A = rng.integers(0, q, size=(5, 6))
        expect = [_fold_add(F, row) for row in A]
        assert list(F.vsum(A, axis=1)) == expect
        assert list(F.vsum(A.T, axis=0)) == expect


def _fold_add(F, row):
    acc = 0
    for v in row:
        acc = int(F.vadd(acc, v))
    return acc


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_Q), st.data())
def test_scalar_and_vector_agree(q, data):
    F = field_of_order(q)
    a, b = (data.draw(st.integers(0, q - 1)) for _ in range(2))
    ea, eb = F.element(a), F.element(b)
    assert (ea + eb).code == int(F.vadd(a, b))
    assert (ea * eb).code == int(F.vmul(a, b))
    e = data.draw(st.integers(0, 40))
    assert (ea ** e).code == int(F.vpow(a, e))
    if a:
        assert (ea ** -e) * (ea ** e) == F.one


def test_subfield_codes():
    F = field_of_order(64)
    for d in (2, 4, 8, 64):
        sub = F.subfield_codes(d)
        assert len(sub) == d
        assert all(int(F.vpow(int(c), d)) == int(c) for c in sub)
