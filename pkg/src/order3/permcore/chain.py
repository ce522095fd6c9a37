"""Stabilizer chains (base and strong generating set) over numpy arrays.

Every element of a chained group has a unique factorisation
``x = u_L[j_L] * ... * u_2[j_2] * u_1[j_1]`` (right action, ``u_L`` applied
first) with ``u_i[j]`` the transversal element sending base point ``b_i`` to
the j-th point of its basic orbit.  The mixed-radix number ``(j_1, ..., j_L)``
with ``j_1`` most significant is the *rank* of ``x``; ranks give the
deterministic stream order used by every search in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .perm import DegreeMismatch, Permutation

INDEX = np.int32


def _as_array(g, degree=None) -> np.ndarray:
    if isinstance(g, Permutation):
        arr = np.asarray(g.images, dtype=INDEX)
    else:
        arr = np.asarray(g, dtype=INDEX)
    if degree is not None and arr.shape != (degree,):
        raise DegreeMismatch(f"expected degree {degree}, got {arr.shape[-1]}")
    return arr


def _first_moved(g: np.ndarray) -> int:
    moved = np.nonzero(g != np.arange(len(g)))[0]
    return int(moved[0]) if len(moved) else -1


@dataclass(frozen=True)
class Level:
    point: int
    gens: np.ndarray      # strong generators fixing the earlier base points
    orbit: np.ndarray     # basic orbit, BFS order
    pos: np.ndarray       # point -> index in orbit, or -1
    reps: np.ndarray      # reps[j][point] == orbit[j]
    inv_reps: np.ndarray

    @property
    def size(self) -> int:
        return len(self.orbit)


def make_level(point: int, gens: np.ndarray, degree: int) -> Level:
    """Basic orbit of ``point`` with a BFS transversal."""
    ident = np.arange(degree, dtype=INDEX)
    pos = np.full(degree, -1, dtype=np.int64)
    pos[point] = 0
    orbit = [point]
    reps = [ident]
    head = 0
    # image table: img[s, p] = s(p)
    while head < len(orbit):
        p = orbit[head]
        rep = reps[head]
        for s in gens:
            r = int(s[p])
            if pos[r] < 0:
                pos[r] = len(orbit)
                orbit.append(r)
                reps.append(s[rep])
        head += 1
    reps = np.stack(reps).astype(INDEX)
    inv = np.empty_like(reps)
    rows = np.arange(len(reps))[:, None]
    inv[rows, reps] = np.arange(degree, dtype=INDEX)[None, :]
    return Level(point, gens, np.array(orbit, dtype=INDEX), pos, reps, inv)


def _sift_batch(levels, start: int, X: np.ndarray, degree: int):
    """Sift rows of X through levels[start:].

    Returns (residues, fail_level) where fail_level[r] is the index of the
    level at which row r dropped out, ``len(levels)`` if it sifted through
    every level (residue may still be non-identity), or -1 for identity.
    """
    X = X.copy()
    M = len(X)
    fail = np.full(M, -2, dtype=np.int64)
    active = np.arange(M)
    for k in range(start, len(levels)):
        if not len(active):
            break
        lev = levels[k]
        j = lev.pos[X[active, lev.point]]
        bad = j < 0
        fail[active[bad]] = k
        active = active[~bad]
        j = j[~bad]
        if len(active):
            X[active] = np.take_along_axis(lev.inv_reps[j], X[active], axis=1)
    if len(active):
        ident = np.arange(degree, dtype=INDEX)
        is_id = (X[active] == ident).all(axis=1)
        fail[active[is_id]] = -1
        fail[active[~is_id]] = len(levels)
    return X, fail


class StabilizerChain:
    """A verified base and strong generating set."""

    def __init__(self, degree: int, levels: list[Level]):
        self.degree = degree
        self.levels = list(levels)
        self.base = tuple(lev.point for lev in self.levels)
        self._base_arr = np.array(self.base, dtype=np.int64)
        order = 1
        for lev in self.levels:
            order *= lev.size
        self.order = order
        self._radix = [lev.size for lev in self.levels]

    @property
    def strong_generators(self) -> list[np.ndarray]:
        if not self.levels:
            return []
        return list(self.levels[0].gens)

    # -- membership ----------------------------------------------------------

    def sift(self, x):
        """Residue and the level at which sifting stopped (-1 for identity)."""
        X = _as_array(x, self.degree)[None, :]
        res, fail = _sift_batch(self.levels, 0, X, self.degree)
        return res[0], int(fail[0])

    def contains(self, x) -> bool:
        return self.sift(x)[1] == -1

    def contains_batch(self, X: np.ndarray) -> np.ndarray:
        _, fail = _sift_batch(self.levels, 0, np.asarray(X, dtype=INDEX), self.degree)
        return fail == -1

    # -- ranks ---------------------------------------------------------------

    def ranks_from_base_images(self, B: np.ndarray) -> np.ndarray:
        """Ranks of group elements given their images of the base (rows of B).

        Rows must be images of genuine group elements; use ``contains`` to
        test membership of arbitrary permutations.
        """
        cur = np.array(B, dtype=np.int64, copy=True)
        if cur.ndim == 1:
            cur = cur[None, :]
        rank = np.zeros(len(cur), dtype=np.int64)
        for k, lev in enumerate(self.levels):
            j = lev.pos[cur[:, k]]
            if np.any(j < 0):
                raise ValueError("base image outside the basic orbit")
            rank = rank * lev.size + j
            if k + 1 < len(self.levels):
                cur = lev.inv_reps[j[:, None], cur].astype(np.int64)
        return rank

    def ranks(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim == 1:
            X = X[None, :]
        return self.ranks_from_base_images(X[:, self._base_arr])

    def rank(self, x) -> int:
        return int(self.ranks(_as_array(x, self.degree))[0])

    def digits(self, ranks) -> np.ndarray:
        ranks = np.asarray(ranks, dtype=np.int64).copy()
        out = np.zeros((len(ranks), len(self.levels)), dtype=np.int64)
        for k in range(len(self.levels) - 1, -1, -1):
            out[:, k] = ranks % self._radix[k]
            ranks //= self._radix[k]
        return out

    def elements_at(self, ranks) -> np.ndarray:
        """Full permutation rows for the given ranks."""
        ranks = np.atleast_1d(np.asarray(ranks, dtype=np.int64))
        if not self.levels:
            return np.tile(np.arange(self.degree, dtype=INDEX), (len(ranks), 1))
        dig = self.digits(ranks)
        L = len(self.levels)
        X = self.levels[L - 1].reps[dig[:, L - 1]]
        for k in range(L - 2, -1, -1):
            X = self.levels[k].reps[dig[:, k][:, None], X]
        return X

    def element(self, rank: int) -> Permutation:
        if not 0 <= rank < self.order:
            raise IndexError(rank)
        return Permutation.from_array(self.elements_at([rank])[0])

    # -- streaming -------------------------------------------------------------

    def split_for_blocks(self, max_rows: int) -> int:
        """Number s of leading levels enumerated as prefixes."""
        rows = 1
        s = len(self.levels)
        while s > 0 and rows * self.levels[s - 1].size <= max_rows:
            rows *= self.levels[s - 1].size
            s -= 1
        return s

    def tail_table(self, s: int) -> np.ndarray:
        """All elements of the stabilizer of base[:s], in rank order."""
        T = np.arange(self.degree, dtype=INDEX)[None, :]
        for k in range(len(self.levels) - 1, s - 1, -1):
            reps = self.levels[k].reps
            T = reps[:, T].reshape(-1, self.degree)
        return T

    def prefix_heads(self, s: int):
        """Yield (prefix_number, head) in lexicographic prefix order."""
        ranges = [range(self.levels[k].size) for k in range(s)]
        for n, digs in enumerate(itertools.product(*ranges)):
            head = self.levels[s - 1].reps[digs[s - 1]] if s else np.arange(self.degree, dtype=INDEX)
            for k in range(s - 2, -1, -1):
                head = self.levels[k].reps[digs[k]][head]
            yield n, head

    def __repr__(self):
        sizes = [lev.size for lev in self.levels]
        return f"StabilizerChain(degree={self.degree}, base={self.base}, orbits={sizes}, order={self.order})"


def build_chain(generators, degree: int | None = None) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    Terminates only once every Schreier generator at every level sifts to the
    identity, so the returned chain is verified by construction.
    """
    gens = [_as_array(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generator list")
        degree = len(gens[0])
    gens = [_as_array(g, degree) for g in gens]
    ident = np.arange(degree, dtype=INDEX)
    strong: list[np.ndarray] = []
    seen = set()
    for g in gens:
        key = g.tobytes()
        if not np.array_equal(g, ident) and key not in seen:
            seen.add(key)
            strong.append(g)
    if not strong:
        return StabilizerChain(degree, [])

    base: list[int] = []
    for g in strong:
        if all(g[b] == b for b in base):
            base.append(_first_moved(g))
    levels: list[Level | None] = [None] * len(base)

    def gens_at(i):
        if i == 0:
            return np.stack(strong)
        sel = [s for s in strong if all(s[b] == b for b in base[:i])]
        return np.stack(sel) if sel else np.empty((0, degree), dtype=INDEX)

    i = len(base) - 1
    while i >= 0:
        levels[i] = make_level(base[i], gens_at(i), degree)
        h, j = _schreier_failure(levels, i, degree)
        if h is None:
            i -= 1
            continue
        strong.append(h)
        if j == len(base):
            base.append(_first_moved(h))
            levels.append(None)
        i = j
    return StabilizerChain(degree, levels)


def _schreier_failure(levels, i: int, degree: int):
    """First Schreier generator at level i not sifting through levels > i."""
    lev = levels[i]
    S = lev.gens
    if not len(S):
        return None, None
    # sg(j, s) = reps[j] * S[s] * inv_reps[pos(S[s](orbit[j]))], j-major order
    m, g = lev.size, len(S)
    img = lev.pos[S[:, lev.orbit]].T.reshape(m * g)
    chunk = max(1, 400000 // max(degree, 1))
    for start in range(0, m * g, chunk):
        idx = np.arange(start, min(start + chunk, m * g))
        jj, ss = idx // g, idx % g
        blockA = np.take_along_axis(S[ss], lev.reps[jj], axis=1)
        sg = np.take_along_axis(lev.inv_reps[img[idx]], blockA, axis=1)
        res, fail = _sift_batch(levels, i + 1, sg, degree)
        bad = np.nonzero(fail >= 0)[0]
        if len(bad):
            r = bad[0]
            return res[r].astype(INDEX), int(fail[r])
    return None, None


def verify_chain(chain: StabilizerChain) -> bool:
    """Independent re-check of a finished chain.

    Every strong generator of level i fixes base[:i], orbits are closed, each
    transversal element maps the base point correctly, and all Schreier
    generators sift to the identity.
    """
    d = chain.degree
    for i, lev in enumerate(chain.levels):
        for s in lev.gens:
            if any(s[b] != b for b in chain.base[:i]):
                return False
        if not np.array_equal(lev.reps[:, lev.point], lev.orbit):
            return False
        if len(lev.gens):
            imgs = lev.gens[:, lev.orbit]
            if np.any(lev.pos[imgs] < 0):
                return False
        h, _ = _schreier_failure(chain.levels, i, d)
        if h is not None:
            return False
    return True
