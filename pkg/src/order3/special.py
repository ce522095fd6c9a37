"""The PGammaL2(8) normalizer computations and the two small counterexample groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import order3_class_records
from .groupfactory import construct
from .permcore import Permutation, perm_order
from .permcore.search import conjugation_orbit


def _all_elements(handle) -> np.ndarray:
    return handle.chain.elements_at(np.arange(handle.order))


def _order_mask(X: np.ndarray, n: int) -> np.ndarray:
    ident = np.arange(X.shape[1])
    P = X.copy()
    powers = [P]
    for _ in range(n - 1):
        P = np.take_along_axis(P, X, axis=1)
        powers.append(P)
    fixed = [(Q == ident).all(axis=1) for Q in powers]
    ok = fixed[n - 1].copy()
    for k in range(1, n):
        if n % k == 0:
            ok &= ~fixed[k - 1]
    return ok


def _conjugate_rows(U: np.ndarray, g: np.ndarray) -> np.ndarray:
    """u^g = g^-1 u g for every row u, with g applied after u."""
    ginv = np.argsort(g)
    return g[U[:, ginv]]


def _keys(U: np.ndarray) -> set[bytes]:
    return {r.tobytes() for r in np.ascontiguousarray(U)}


def normalizer_order(X: np.ndarray, U: np.ndarray) -> int:
    """|{g : U^g = U}| for a subgroup U given by all its elements."""
    target = _keys(U)
    return sum(1 for g in X if _keys(_conjugate_rows(U, g)) == target)


def _subgroup(gens: list[np.ndarray]) -> np.ndarray:
    d = len(gens[0])
    ident = np.arange(d, dtype=gens[0].dtype)
    seen = {ident.tobytes(): ident}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g[a]
                k = b.tobytes()
                if k not in seen:
                    seen[k] = b
                    nxt.append(b)
        frontier = nxt
    return np.array([seen[k] for k in sorted(seen)])


@dataclass
class GammaReport:
    order: int
    involution_classes: int
    involutions: int
    four_group_classes: int
    four_groups: int
    normalizer_y: int
    normalizer_k: int
    normalizer_p: int
    order3_classes: int
    order3_classes_normalizing: int

    @property
    def checks(self) -> dict[str, bool]:
        return {"|N(K)| = 24": self.normalizer_k == 24,
                "|N(P)| = 168": self.normalizer_p == 168,
                "|N(<y>)| prime to 3": self.normalizer_y % 3 != 0,
                "one class of involutions": self.involution_classes == 1,
                "one class of four-groups": self.four_group_classes == 1}


def _orbit_classes(X: np.ndarray, items: list[frozenset[bytes]], gens) -> int:
    """Number of orbits of the generators (acting by conjugation) on subgroups given as key sets."""
    index = {s: i for i, s in enumerate(items)}
    seen = np.zeros(len(items), dtype=bool)
    classes = 0
    for i, s in enumerate(items):
        if seen[i]:
            continue
        classes += 1
        seen[i] = True
        stack = [s]
        while stack:
            cur = stack.pop()
            U = np.array([np.frombuffer(k, dtype=X.dtype) for k in cur])
            for g in gens:
                img = frozenset(_keys(_conjugate_rows(U, g)))
                j = index[img]
                if not seen[j]:
                    seen[j] = True
                    stack.append(img)
    return classes


def gamma_l28_report() -> GammaReport:
    h = construct("PGammaL2(8)")
    X = _all_elements(h)
    gens = [np.asarray(g.images, dtype=X.dtype) for g in h.generators]
    inv = X[_order_mask(X, 2)]
    inv_classes = []
    seen = set()
    for t in inv:
        if t.tobytes() in seen:
            continue
        orb = conjugation_orbit(h.chain, h.generators, Permutation.from_array(t))
        inv_classes.append(orb.size)
        seen |= _keys(h.chain.elements_at(orb.members))
    # four-groups: pairs of distinct commuting involutions
    fours = set()
    for i, a in enumerate(inv):
        for b in inv[i + 1:]:
            if np.array_equal(a[b], b[a]):
                fours.add(frozenset(_keys(_subgroup([a, b]))))
    fours = sorted(fours, key=lambda s: sorted(s))
    y = inv[0]
    Y = _subgroup([y])
    K = np.array([np.frombuffer(k, dtype=X.dtype) for k in sorted(fours[0])])
    # Sylow 2-subgroup: grow a 2-group containing K greedily
    P = _sylow2(X, inv, K)
    records = order3_class_records(h, witnesses=False)
    return GammaReport(h.order, len(inv_classes), len(inv), _orbit_classes(X, fours, gens), len(fours),
                       normalizer_order(X, Y), normalizer_order(X, K), normalizer_order(X, P),
                       len(records), sum(1 for r in records if r.normalizes_2subgroup))


def _sylow2(X: np.ndarray, inv: np.ndarray, U: np.ndarray) -> np.ndarray:
    target = X.shape[0] & -X.shape[0]
    gens = list(U)
    cur = U
    for t in inv:
        if len(cur) == target:
            break
        if t.tobytes() in _keys(cur):
            continue
        cand = _subgroup(gens + [t])
        if len(cand) & (len(cand) - 1) == 0:
            gens.append(t)
            cur = cand
    if len(cur) != target:
        raise AssertionError("failed to grow a Sylow 2-subgroup")
    return cur


@dataclass
class CounterexampleReport:
    frob_order: int
    frob_o3_trivial: bool
    frob_order3_classes: int
    frob_classes_up_to_inversion: int
    frob_normalizes: bool
    frob_witness_orders: list[int]
    wreath_order: int
    wreath_commutes: bool
    wreath_diagonal_order: int

    @property
    def checks(self) -> dict[str, bool]:
        return {"FrobA4 O3 trivial": self.frob_o3_trivial,
                "FrobA4 one order-3 class up to inversion": self.frob_classes_up_to_inversion == 1,
                "FrobA4 order-3 class normalizes a four-group": self.frob_normalizes,
                "wreath (x,x) commutes with the swap": self.wreath_commutes}


def counterexamples_report() -> CounterexampleReport:
    f = construct("FrobA4")
    records = order3_class_records(f)
    n3 = sum(r.class_size for r in records)
    # a normal Sylow 3-subgroup (order 3) would leave exactly two elements of order 3
    sylow3 = 3 ** _val3(f.order)
    o3_trivial = n3 != sylow3 - 1
    pairs = set()
    for r in records:
        x = r.representative
        inv_orbit = conjugation_orbit(f.chain, f.generators, ~x)
        pairs.add(min(r.rank, int(inv_orbit.members[0])))
    w = construct("Wreath(PSL2(16),Sym2)")
    y, swap = w.extras["diagonal"], w.extras["swap"]
    return CounterexampleReport(
        f.order, o3_trivial, len(records), len(pairs),
        all(r.normalizes_2subgroup for r in records),
        [r.witness_group_order for r in records],
        w.order, swap * y == y * swap and w.chain.contains(y) and w.chain.contains(swap),
        perm_order(y))


def _val3(n: int) -> int:
    v = 0
    while n % 3 == 0:
        n //= 3
        v += 1
    return v

