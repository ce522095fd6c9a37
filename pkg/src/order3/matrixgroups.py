"""Classical matrix groups over finite fields and their point actions.

Matrices hold numpy arrays of field codes (see :mod:`order3.finitefield`).
Groups act on *row* vectors, ``v -> v @ M``, so the permutation of a product
is the product of the permutations in the package's left-to-right
convention.  Form preservation for row actions reads ``M J M^T = J``
(alternating) and ``M J conj(M)^T = J`` (Hermitian, ``conj`` being
``x -> x**q`` entrywise on GF(q^2)); the canonical Gram matrices are
antidiagonal.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .finitefield import FieldSpec, field_of_order, make_field, prime_power
from .permcore import Permutation


class MatrixError(ValueError):
    pass


# -- matrices -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Matrix:
    field: FieldSpec
    codes: np.ndarray

    def __post_init__(self):
        c = np.array(self.codes, dtype=np.int64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise MatrixError(f"not a square matrix: shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "codes", c)

    @classmethod
    def identity(cls, F: FieldSpec, n: int) -> "Matrix":
        return cls(F, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, F: FieldSpec, n: int, c: int) -> "Matrix":
        return cls(F, np.eye(n, dtype=np.int64) * int(c))

    @classmethod
    def diag(cls, F: FieldSpec, entries) -> "Matrix":
        return cls(F, np.diag(np.asarray(entries, dtype=np.int64)))

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def entries(self):
        return [[self.field.element(c) for c in row] for row in self.codes]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, matmul(self.field, self.codes, other.codes))

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field == self.field
                and np.array_equal(self.codes, other.codes))

    def __hash__(self):
        return hash(self.codes.tobytes())

    def __repr__(self):
        return f"Matrix({self.field}, {self.codes.tolist()})"

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.codes.T)

    def conj(self, q: int) -> "Matrix":
        """Entrywise x -> x**q."""
        return Matrix(self.field, self.field.vpow(self.codes, q))

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.field, self.field.vmul(int(c), self.codes))

    def det(self) -> int:
        return det(self.field, self.codes)

    def rank(self) -> int:
        return rank(self.field, self.codes)

    def inverse(self) -> "Matrix":
        return Matrix(self.field, inverse(self.field, self.codes))

    def __pow__(self, e: int) -> "Matrix":
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def is_scalar(self) -> bool:
        c = self.codes
        return bool(np.all(c[~np.eye(self.n, dtype=bool)] == 0) and np.all(np.diag(c) == c[0, 0]))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.codes, np.eye(self.n, dtype=np.int64)))

    def projective_order(self, limit: int = 10**6) -> int:
        """Least e >= 1 with M**e scalar."""
        cur = self
        for e in range(1, limit + 1):
            if cur.is_scalar():
                return e
            cur = cur @ self
        raise MatrixError("projective order beyond limit")


def matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    prod = F.vmul(np.asarray(A)[..., :, :, None], np.asarray(B)[..., None, :, :])
    return F.vsum(prod, axis=-2)


def _eliminate(F: FieldSpec, A: np.ndarray, aug: np.ndarray | None = None):
    """Gauss-Jordan elimination; returns (reduced, augmented, pivots, det)."""
    M = [list(map(int, row)) for row in np.asarray(A)]
    X = None if aug is None else [list(map(int, row)) for row in np.asarray(aug)]
    rows, cols = len(M), len(M[0]) if M else 0
    mul = lambda a, b: int(F.vmul(a, b))
    sub = lambda a, b: int(F.vsub(a, b))
    inv = lambda a: int(F.vinv(a))
    d = 1
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            d = 0
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            if X is not None:
                X[r], X[piv] = X[piv], X[r]
            d = int(F.vneg(d))
        lead = M[r][c]
        d = mul(d, lead)
        li = inv(lead)
        M[r] = [mul(li, v) for v in M[r]]
        if X is not None:
            X[r] = [mul(li, v) for v in X[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [sub(a, mul(f, b)) for a, b in zip(M[i], M[r])]
                if X is not None:
                    X[i] = [sub(a, mul(f, b)) for a, b in zip(X[i], X[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if len(pivots) < min(rows, cols):
        d = 0
    return M, X, pivots, d


def rank(F: FieldSpec, A) -> int:
    return len(_eliminate(F, A)[2])


def det(F: FieldSpec, A) -> int:
    A = np.asarray(A)
    if A.shape[0] != A.shape[1]:
        raise MatrixError("determinant of a non-square matrix")
    return _eliminate(F, A)[3]


def inverse(F: FieldSpec, A) -> np.ndarray:
    A = np.asarray(A)
    n = A.shape[0]
    _, X, piv, _ = _eliminate(F, A, np.eye(n, dtype=np.int64))
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return np.array(X, dtype=np.int64)


def solve_rows(F: FieldSpec, B, v) -> np.ndarray:
    """Coefficients c with c @ B = v (B square, invertible)."""
    return matmul(F, np.asarray(v)[None, :], inverse(F, B))[0]


def char_poly_values(M: Matrix) -> np.ndarray:
    """det(t I - M) for every field element t (indexed by code)."""
    F, n = M.field, M.n
    t = np.arange(F.q, dtype=np.int64)
    A = np.broadcast_to(F.vneg(M.codes), (F.q, n, n)).copy()
    for i in range(n):
        A[:, i, i] = F.vadd(t, A[:, i, i])
    total = np.zeros(F.q, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = np.ones(F.q, dtype=np.int64)
        for i, j in enumerate(perm):
            term = F.vmul(term, A[:, i, j])
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        total = F.vsub(total, term) if inversions % 2 else F.vadd(total, term)
    return total


def eigenvalue_multiplicities(M: Matrix) -> dict[int, int]:
    """Roots in the field of definition -> geometric multiplicity."""
    F = M.field
    roots = np.nonzero(char_poly_values(M) == 0)[0]
    out = {}
    for t in roots.tolist():
        A = F.vsub(M.codes, np.eye(M.n, dtype=np.int64) * t)
        out[t] = M.n - rank(F, A)
    return out


def jordan_partition(u: Matrix) -> tuple[int, ...]:
    """Block sizes (descending) of a unipotent matrix."""
    F, n = u.field, u.n
    N = Matrix(F, F.vsub(u.codes, np.eye(n, dtype=np.int64)))
    ranks = [n]
    P = Matrix.identity(F, n)
    while ranks[-1] > 0:
        P = P @ N
        ranks.append(P.rank())
        if len(ranks) > n + 1:
            raise MatrixError("matrix is not unipotent")
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k, cnt in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        sizes += [k] * (cnt - nxt)
    return tuple(sorted(sizes, reverse=True))


def unipotent_lift(M: Matrix) -> Matrix:
    """The scalar multiple of M of order 3, for M of projective order 3 in characteristic 3."""
    F = M.field
    if F.p != 3:
        raise MatrixError("unipotent lifts need characteristic 3")
    C = M ** 3
    if not C.is_scalar():
        raise MatrixError("matrix does not have projective order 3")
    c = int(C.codes[0, 0])
    # cubing is bijective on GF(3^k)*
    e = pow(3, -1, F.q - 1) if F.q > 2 else 1
    lam = int(F.vpow(int(F.vinv(c)), e))
    return M.scale(lam)


def semisimple_label(M: Matrix, unitary_q: int | None = None) -> str:
    """Torus type of a projective order-3 element in dimension 3 (or 2).

    Linear: split when all eigenvalues lie in the field, partially-split when
    exactly one does, irreducible when none does.  Unitary (M over GF(q^2)):
    eigenvalues in GF(q^2) with pairwise ratios of norm 1 mean split, other
    ratios partially-split.  Repeated eigenvalues give ``nonregular``.
    """
    F = M.field
    mult = eigenvalue_multiplicities(M)
    total = sum(mult.values())
    if any(m > 1 for m in mult.values()):
        return "nonregular"
    if total == 0:
        return "irreducible"
    if total < M.n:
        return "partially-split"
    if unitary_q is None:
        return "split"
    roots = sorted(mult)
    for a, b in itertools.combinations(roots, 2):
        r = int(F.vmul(a, F.vinv(b)))
        if int(F.vpow(r, unitary_q + 1)) != 1:
            return "partially-split"
    return "split"


# -- forms -------------------------------------------------------------------------

def antidiagonal(F: FieldSpec, n: int, signs=None) -> Matrix:
    J = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        s = 1 if signs is None else signs[i]
        J[i, n - 1 - i] = 1 if s > 0 else int(F.vneg(1))
    return Matrix(F, J)


def hermitian_gram(q: int, n: int) -> Matrix:
    return antidiagonal(_ext_field(q), n)


def symplectic_gram(q: int, n: int = 4) -> Matrix:
    return antidiagonal(field_of_order(q), n, signs=[1] * (n // 2) + [-1] * (n // 2))


def preserves_hermitian(M: Matrix, J: Matrix, q: int) -> bool:
    return (M @ J @ M.T.conj(q)) == J


def preserves_bilinear(M: Matrix, J: Matrix) -> bool:
    return (M @ J @ M.T) == J


def _ext_field(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return make_field(p, 2 * k)


def _basis_codes(F: FieldSpec) -> list[int]:
    """An additive GF(p)-basis of F: 1, x, ..., x^(k-1)."""
    return [F.p**i for i in range(F.k)]


def _span(F: FieldSpec, vecs: list[int]) -> set[int]:
    out = {0}
    for v in vecs:
        new = set()
        for s in out:
            cur = s
            for _ in range(F.p):
                new.add(cur)
                cur = int(F.vadd(cur, v))
        out = new
    return out


def _root(F: FieldSpec, n: int, entries) -> Matrix:
    M = np.eye(n, dtype=np.int64)
    for (i, j), v in entries:
        M[i, j] = F.vadd(M[i, j], v)
    return Matrix(F, M)


# -- generator recipes ----------------------------------------------------------

def _check_n(n, allowed):
    if n not in allowed:
        raise MatrixError(f"unsupported dimension {n}; expected one of {allowed}")


def sl_generators(n: int, q: int) -> list[Matrix]:
    """Elementary transvections along adjacent positions, scalars over a basis."""
    _check_n(n, (2, 3, 4))
    F = field_of_order(q)
    gens = []
    for i in range(n - 1):
        for a in _basis_codes(F):
            gens.append(_root(F, n, [((i, i + 1), a)]))
            gens.append(_root(F, n, [((i + 1, i), a)]))
    return gens


def gl_generators(n: int, q: int) -> list[Matrix]:
    F = field_of_order(q)
    dil = [int(F.generator.code)] + [1] * (n - 1)
    return sl_generators(n, q) + ([Matrix.diag(F, dil)] if q > 2 else [])


def su_generators(n: int, q: int) -> list[Matrix]:
    """Unitary root elements (and a torus element for n = 3) over GF(q^2)."""
    _check_n(n, (3, 4))
    F = _ext_field(q)
    bar = lambda a: int(F.vpow(a, q))
    J = antidiagonal(F, n)
    trace_zero = [b for b in range(1, F.q) if int(F.vadd(b, bar(b))) == 0]
    tz_basis = []
    for b in trace_zero:
        if b not in _span(F, tz_basis):
            tz_basis.append(b)
    cols = []
    if n == 3:
        for a in _basis_codes(F):
            target = int(F.vneg(F.vpow(a, q + 1)))
            b = next(b for b in range(F.q) if int(F.vadd(b, bar(b))) == target)
            cols.append(_root(F, 3, [((0, 1), a), ((0, 2), b), ((1, 2), int(F.vneg(bar(a))))]))
        for b in tz_basis:
            cols.append(_root(F, 3, [((0, 2), b)]))
        w = antidiagonal(F, 3, signs=[1, -1, 1])
        cols += [w @ u @ w.inverse() for u in list(cols)]
        g = int(F.generator.code)
        cols.append(Matrix.diag(F, [g, int(F.vpow(g, q - 1)), int(F.vpow(g, -q))]))
    else:
        seen = set()
        for i, j in itertools.permutations(range(n), 2):
            jj, ii = n - 1 - j, n - 1 - i
            if j == n - 1 - i:
                mats = [_root(F, n, [((i, j), b)]) for b in tz_basis]
            else:
                mats = [_root(F, n, [((i, j), a), ((jj, ii), int(F.vneg(bar(a))))])
                        for a in _basis_codes(F)]
            for m in mats:
                if m not in seen:
                    seen.add(m)
                    cols.append(m)
    gens = []
    for m in cols:
        # column recipes preserve g^T J conj(g) = J; transposes act on rows
        g = m.T
        if not preserves_hermitian(g, J, q):
            raise AssertionError(f"unitary generator violates the form: {g}")
        if g.det() != 1:
            raise AssertionError("unitary generator has determinant != 1")
        gens.append(g)
    return gens


def gu_generators(n: int, q: int) -> list[Matrix]:
    F = _ext_field(q)
    g = int(F.generator.code)
    dil = Matrix.diag(F, [g] + [1] * (n - 2) + [int(F.vpow(g, -q))])
    if not preserves_hermitian(dil, antidiagonal(F, n), q):
        raise AssertionError("dilation violates the form")
    return su_generators(n, q) + [dil]


def sp_generators(n: int, q: int) -> list[Matrix]:
    """Symplectic transvections I + c J u^T u for u in a spanning set."""
    _check_n(n, (4,))
    F = field_of_order(q)
    J = symplectic_gram(q, n)
    vecs = []
    for i in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        vecs.append(v)
    for i, j in itertools.combinations(range(n), 2):
        v = np.zeros(n, dtype=np.int64)
        v[i] = v[j] = 1
        vecs.append(v)
    gens = []
    for u in vecs:
        Ju = matmul(F, J.codes, u[:, None])
        for c in _basis_codes(F):
            T = F.vadd(np.eye(n, dtype=np.int64), F.vmul(c, matmul(F, Ju, u[None, :])))
            g = Matrix(F, T)
            if not preserves_bilinear(g, J):
                raise AssertionError(f"symplectic generator violates the form: {g}")
            gens.append(g)
    return gens


# -- point actions ----------------------------------------------------------------

def _all_vectors(F: FieldSpec, n: int) -> np.ndarray:
    codes = np.arange(F.q**n, dtype=np.int64)
    w = F.q ** np.arange(n, dtype=np.int64)
    return (codes[:, None] // w[None, :]) % F.q


def _normalize(F: FieldSpec, V: np.ndarray) -> np.ndarray:
    lead_idx = np.argmax(V != 0, axis=1)
    lead = V[np.arange(len(V)), lead_idx]
    return F.vmul(F.vinv(lead)[:, None], V)


@dataclass(frozen=True, eq=False)
class PointAction:
    """A group of matrices acting on vectors or projective points (rows)."""

    field: FieldSpec
    n: int
    kind: str                 # "projective" or "vector"
    points: np.ndarray
    lookup: np.ndarray
    frame: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.points)

    def _keys(self, V):
        return V @ (self.field.q ** np.arange(self.n, dtype=np.int64))

    def images(self, M: Matrix) -> np.ndarray:
        W = matmul(self.field, self.points, M.codes)
        if self.kind == "projective":
            W = _normalize(self.field, W)
        idx = self.lookup[self._keys(W)]
        if np.any(idx < 0):
            raise MatrixError("matrix does not preserve the point set")
        return idx

    def perm(self, M: Matrix) -> Permutation:
        return Permutation.from_array(self.images(M))

    def matrix_of(self, x) -> Matrix:
        """A matrix inducing the permutation x (unique up to scalars when projective)."""
        F, n = self.field, self.n
        img = np.asarray(x.images if isinstance(x, Permutation) else x)
        if self.kind == "vector":
            return Matrix(F, self.points[img[list(self.frame[:n])]])
        src = self.points[list(self.frame)]
        dst = self.points[img[list(self.frame)]]
        a = solve_rows(F, src[:n], src[n])
        c = solve_rows(F, dst[:n], dst[n])
        # rows: a_i f_i -> c_i w_i, up to a common scalar
        S = F.vmul(a[:, None], src[:n])
        D = F.vmul(c[:, None], dst[:n])
        return Matrix(F, matmul(F, inverse(F, S), D))

    def frobenius_perm(self, i: int = 1) -> Permutation:
        """Points permuted by the coordinatewise field automorphism x -> x**(p**i)."""
        W = self.field.vfrob(self.points, i)
        if self.kind == "projective":
            W = _normalize(self.field, W)
        return Permutation.from_array(self.lookup[self._keys(W)])


def _make_lookup(F, n, points):
    size = F.q**n
    lookup = np.full(size, -1, dtype=np.int64)
    lookup[points @ (F.q ** np.arange(n, dtype=np.int64))] = np.arange(len(points))
    return lookup


def _find_frame(F: FieldSpec, points: np.ndarray, n: int) -> tuple[int, ...]:
    """n independent points plus one with all coordinates nonzero in that basis."""
    chosen = []
    for i in range(len(points)):
        if rank(F, points[chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == n:
                break
    for combo in itertools.chain([tuple(chosen)], itertools.combinations(range(len(points)), n)):
        B = points[list(combo)]
        if rank(F, B) < n:
            continue
        coeffs = matmul(F, points, inverse(F, B))
        ok = np.nonzero((coeffs != 0).all(axis=1))[0]
        if len(ok):
            return tuple(combo) + (int(ok[0]),)
    raise MatrixError("no frame in the point set")


def projective_action(F: FieldSpec, n: int, hermitian_q: int | None = None) -> PointAction:
    """Projective points of F^n, or only the isotropic ones of a Hermitian form."""
    return _projective_action(F, n, hermitian_q)


@functools.lru_cache(maxsize=None)
def _projective_action(F, n, hermitian_q):
    V = _all_vectors(F, n)[1:]
    lead = V[np.arange(len(V)), np.argmax(V != 0, axis=1)]
    P = V[lead == 1]
    if hermitian_q is not None:
        # h(v, v) = sum_i v_i conj(v_{n-1-i})
        h = F.vsum(F.vmul(P, F.vpow(P[:, ::-1], hermitian_q)), axis=1)
        P = P[h == 0]
    P.flags.writeable = False
    return PointAction(F, n, "projective", P, _make_lookup(F, n, P), _find_frame(F, P, n))


@functools.lru_cache(maxsize=None)
def vector_action(F: FieldSpec, n: int) -> PointAction:
    """Nonzero vectors of F^n (a faithful action of any matrix group)."""
    V = _all_vectors(F, n)[1:]
    # frame = standard basis vectors
    frame = tuple(int(np.nonzero((V == np.eye(n, dtype=np.int64)[i]).all(axis=1))[0][0])
                  for i in range(n))
    V.flags.writeable = False
    return PointAction(F, n, "vector", V, _make_lookup(F, n, V), frame)


def scalar_kernel_order(gens: list[Matrix], form: str | None = None, q: int | None = None) -> int:
    """Scalars lambda*I in the determinant-closed group generated by gens.

    ``form`` is None (linear), "hermitian" (needs lambda^(q+1) = 1) or
    "alternating" (lambda^2 = 1).
    """
    F = gens[0].field
    n = gens[0].n
    m = F.q - 1
    g = m
    for M in gens:
        g = np.gcd(g, F.log(M.det()))
    count = 0
    for e in range(m):
        if (n * e) % g:
            continue
        if form == "hermitian" and (e * (q + 1)) % m:
            continue
        if form == "alternating" and (2 * e) % m:
            continue
        count += 1
    return count


def projectivize(gens: list[Matrix], action: PointAction) -> list[Permutation]:
    out = [action.perm(M) for M in gens]
    for M, x in zip(gens, out):
        if action.kind == "projective" and M.is_scalar() and not x.is_identity():
            raise AssertionError("scalar matrix acts nontrivially")
    return out


# -- distinguished elements -----------------------------------------------------------

def unipotent_rep(partition, n: int, q: int) -> Matrix:
    """Block-diagonal Jordan matrix with the given block sizes, over GF(q), q = 3^a."""
    F = field_of_order(q)
    sizes = [int(s) for s in partition]
    if F.p != 3:
        raise MatrixError("order-3 unipotents need characteristic 3")
    if sum(sizes) != n or any(s < 1 for s in sizes):
        raise MatrixError(f"partition {sizes} does not sum to {n}")
    if any(s > 3 for s in sizes):
        raise MatrixError("Jordan blocks of an order-3 unipotent have size at most 3")
    M = np.eye(n, dtype=np.int64)
    pos = 0
    for s in sizes:
        for i in range(pos, pos + s - 1):
            M[i, i + 1] = 1
        pos += s
    return Matrix(F, M)


def orthonormal_basis(q: int, n: int) -> Matrix:
    """Rows b_i with h(b_i, b_j) = delta_ij for the antidiagonal Hermitian form."""
    F = _ext_field(q)
    V = _all_vectors(F, n)
    conjV = F.vpow(V, q)
    rows = []
    for _ in range(n):
        ok = F.vsum(F.vmul(V, conjV[:, ::-1]), axis=1) == 1
        for b in rows:
            # h(v, b) = sum_i v_i conj(b_{n-1-i})
            hb = F.vsum(F.vmul(V, F.vpow(b[::-1], q)[None, :]), axis=1)
            ok &= hb == 0
        rows.append(V[np.nonzero(ok)[0][0]])
    return Matrix(F, np.array(rows))


def _element_of_order(F: FieldSpec, order: int) -> int:
    if (F.q - 1) % order:
        raise MatrixError(f"GF({F.q}) has no element of order {order}")
    return F.exp((F.q - 1) // order)


TORUS_FAMILIES = ("PSL2", "PSL3", "PGL3", "PSU3", "PGU3")


def torus_order3_rep(family: str, torus: str, q: int) -> Matrix:
    """A matrix whose projective image has order 3 and lies in the named torus type."""
    if family not in TORUS_FAMILIES:
        raise MatrixError(f"unknown family {family}")
    p, _ = prime_power(q)
    if p == 3:
        raise MatrixError("order-3 elements are unipotent in characteristic 3")
    unitary = family in ("PSU3", "PGU3")
    eps = -1 if unitary else 1
    r = q % 3
    outer = family in ("PGL3", "PGU3")

    def refuse():
        raise MatrixError(f"no order-3 element in the {torus} torus of {family}({q})")

    if family == "PSL2":
        F = field_of_order(q)
        if torus == "split" and r == 1:
            a = _element_of_order(F, 3)
            return Matrix.diag(F, [a, int(F.vmul(a, a))])
        if torus == "irreducible" and r == 2:
            m1 = int(F.vneg(1))
            return Matrix(F, [[0, m1], [1, m1]])
        refuse()
    if torus == "irreducible":
        if not outer or (r - eps) % 3:
            refuse()
        if not unitary:
            F = field_of_order(q)
            c = int(F.generator.code)       # a non-cube, since 3 | q - 1
            return Matrix(F, [[0, 1, 0], [0, 0, 1], [c, 0, 0]])
        F = _ext_field(q)
        c = F.exp(q - 1)                    # generates the norm-1 subgroup
        A = Matrix(F, [[0, 1, 0], [0, 0, 1], [c, 0, 0]])
        B = orthonormal_basis(q, 3)
        M = B.inverse() @ A @ B
        if not preserves_hermitian(M, antidiagonal(F, 3), q):
            raise AssertionError("irreducible unitary element violates the form")
        return M
    if torus == "split":
        if (r - eps) % 3:
            refuse()
        if not unitary:
            F = field_of_order(q)
            a = _element_of_order(F, 3)
            return Matrix.diag(F, [1, a, int(F.vmul(a, a))])
        F = _ext_field(q)
        a = _element_of_order(F, 3)
        B = orthonormal_basis(q, 3)
        M = B.inverse() @ Matrix.diag(F, [1, a, int(F.vmul(a, a))]) @ B
        if not preserves_hermitian(M, antidiagonal(F, 3), q):
            raise AssertionError("split unitary element violates the form")
        return M
    if torus == "partially-split":
        if (r + eps) % 3:
            refuse()
        if not unitary:
            F = field_of_order(q)
            m1 = int(F.vneg(1))
            return Matrix(F, [[1, 0, 0], [0, 0, m1], [0, 1, m1]])
        F = _ext_field(q)
        a = _element_of_order(F, 3)
        return Matrix.diag(F, [a, 1, int(F.vinv(a))])
    raise MatrixError(f"unknown torus label {torus!r}")


def frobenius_twist_perm(q: int = 8) -> Permutation:
    """Coordinatewise squaring on the projective line over GF(q)."""
    if q != 8:
        raise MatrixError("the twist is provided for q = 8 only")
    return projective_action(field_of_order(q), 2).frobenius_perm(1)
