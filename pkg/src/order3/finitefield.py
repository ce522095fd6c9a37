"""Arithmetic in GF(p^k) for small prime powers.

Elements are stored in the polynomial basis over GF(p).  Each element also has
an integer *code* ``sum(c_i * p**i)``; the matrix-group code works on numpy
arrays of codes through the vectorised helpers on :class:`FieldSpec`.

The defining polynomial of GF(p^k), k > 1, is the lexicographically least
primitive monic polynomial of degree k, coefficients compared from the
constant term upwards.  Prime fields use the modulus ``x``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

FIELD_CAP = 2**20


class FieldMismatchError(ValueError):
    """Operands come from different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    k = 0
    n = q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


# -- polynomials over GF(p), coefficient lists low degree first -------------

def _polymulmod(a, b, mod, p):
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # mod is monic
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return (prod + [0] * k)[:k]


def _polypowmod(base, e, mod, p):
    result = [1] + [0] * (len(mod) - 2)
    while e:
        if e & 1:
            result = _polymulmod(result, base, mod, p)
        base = _polymulmod(base, base, mod, p)
        e >>= 1
    return result


def _is_primitive(mod, p):
    k = len(mod) - 1
    if mod[0] == 0:
        return False
    n = p**k - 1
    x = [0, 1] + [0] * (k - 2) if k > 1 else [0]
    one = [1] + [0] * (k - 1)
    if _polypowmod(x, n, mod, p) != one:
        return False
    return all(_polypowmod(x, n // r, mod, p) != one for r in prime_factors(n))


def _least_primitive(p: int, k: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=k):
        mod = list(low) + [1]
        if _is_primitive(mod, p):
            return tuple(mod)
    raise AssertionError(f"no primitive polynomial of degree {k} over GF({p})")


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise AssertionError("unreachable")


# -- field descriptions -------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]
    _t: "_Tables" = field(default=None, repr=False, compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __str__(self) -> str:
        return f"GF({self.q})"

    # scalar access
    def element(self, code: int) -> "FieldElement":
        code = int(code)
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside {self}")
        coeffs = tuple((code // self.p**i) % self.p for i in range(self.k))
        return FieldElement(self, coeffs)

    def from_coeffs(self, coeffs) -> "FieldElement":
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.k:
            raise ValueError("too many coordinates")
        return FieldElement(self, coeffs + (0,) * (self.k - len(coeffs)))

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def generator(self) -> "FieldElement":
        """The primitive element (the class of x, or the least primitive root)."""
        return self.element(self._t.exp[1 % (self.q - 1)])

    def elements(self):
        return [self.element(c) for c in range(self.q)]

    # vectorised code arithmetic; arguments are ints or integer arrays
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        d = self._t.digits
        return ((d[a] + d[b]) % self.p) @ self._t.weights

    def vsum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        d = self._t.digits[a].sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return d @ self._t.weights

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self._t.neg[a]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        t = self._t
        prod = t.exp[(t.log[a] + t.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError(f"inverse of 0 in {self}")
        t = self._t
        return t.exp[(-t.log[a]) % (self.q - 1)]

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        t = self._t
        if e == 0:
            return np.ones_like(a)
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError(f"negative power of 0 in {self}")
        res = t.exp[(t.log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, res)

    def vfrob(self, a, i: int = 1):
        return self.vpow(a, self.p ** (i % self.k))

    def log(self, code: int) -> int:
        if code == 0:
            raise ZeroDivisionError("log of 0")
        return int(self._t.log[code])

    def exp(self, e: int) -> int:
        return int(self._t.exp[e % (self.q - 1)])

    def subfield_codes(self, order: int) -> np.ndarray:
        """Codes of the subfield with ``order`` elements."""
        if (self.q - 1) % (order - 1):
            raise ValueError(f"GF({order}) is not a subfield of {self}")
        step = (self.q - 1) // (order - 1)
        return np.sort(np.concatenate([[0], self._t.exp[::step][: order - 1]]))


class _Tables:
    __slots__ = ("exp", "log", "digits", "weights", "neg")

    def __init__(self, p, k, modulus):
        q = p**k
        self.weights = np.array([p**i for i in range(k)], dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        self.digits = (codes[:, None] // self.weights[None, :]) % p
        self.neg = ((-self.digits) % p) @ self.weights
        exp = np.zeros(q - 1, dtype=np.int64)
        if k == 1:
            g = _primitive_root(p)
            v = 1
            for i in range(q - 1):
                exp[i] = v
                v = v * g % p
        else:
            cur = [1] + [0] * (k - 1)
            mod = list(modulus)
            for i in range(q - 1):
                exp[i] = sum(c * p**j for j, c in enumerate(cur))
                # multiply by x
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [(c - top * m) % p for c, m in zip(cur, mod)]
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        if len(set(exp.tolist())) != q - 1:
            raise AssertionError("modulus is not primitive")
        self.exp = exp
        self.log = log


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """Canonical GF(p^k)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be at least 1")
    if p**k > FIELD_CAP:
        raise ValueError(f"GF({p}^{k}) exceeds the field cap {FIELD_CAP}")
    modulus = (0, 1) if k == 1 else _least_primitive(p, k)
    spec = FieldSpec(p, k, modulus)
    object.__setattr__(spec, "_t", _Tables(p, k, modulus))
    return spec


def field_of_order(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return make_field(p, k)


# -- elements -------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -self._check(other))

    def __neg__(self):
        return self.field.element(int(self.field.vneg(self.code)))

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return mul(self, inv(other))

    def __pow__(self, e: int):
        return power(self, e)

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.coeffs[0]}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}{'' if i == 0 else '*' + mono}")
        return " + ".join(terms) if terms else "0"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    p = a.field.p
    return FieldElement(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return a.field.element(int(a.field.vmul(a.code, b.code)))


def inv(a: FieldElement) -> FieldElement:
    if a.is_zero():
        raise ZeroDivisionError(f"inverse of 0 in {a.field}")
    return a.field.element(int(a.field.vinv(a.code)))


def power(a: FieldElement, e: int) -> FieldElement:
    """Square-and-multiply exponentiation."""
    if e < 0:
        a, e = inv(a), -e
    result = a.field.one
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def element_order(a: FieldElement) -> int:
    if a.is_zero():
        raise ValueError("0 has no multiplicative order")
    n = a.field.q - 1
    m = n
    for r in prime_factors(n):
        while m % r == 0 and power(a, m // r) == a.field.one:
            m //= r
    return m


def frobenius(a: FieldElement, i: int = 1) -> FieldElement:
    """a ** (p ** i); the identity when k divides i."""
    return power(a, a.field.p ** (i % a.field.k))
