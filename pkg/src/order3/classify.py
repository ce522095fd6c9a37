"""Order-3 conjugacy classes and the two involution predicates, by brute force.

An order-3 element x centralizes an involution iff |C(x)| is even.  It
normalizes a nontrivial 2-subgroup iff some involution t makes
<t, t^x, t^(x^2)> a 2-group: the group is visibly x-invariant, and conversely
the involutions in the centre of an x-invariant 2-subgroup form such a t.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .permcore import Permutation, perm_order
from .permcore.chain import INDEX
from .permcore.search import (RankSet, check_cap, conjugation_orbit, is_power_of_two,
                              order_mask, scan, two_part)

log = logging.getLogger(__name__)

ORACLE_CAP = 33_000


class NotOrderThree(ValueError):
    pass


class OracleRefused(RuntimeError):
    pass


class ExcludedGroup(ValueError):
    """Classification refused for a group outside the almost simple setting."""


@dataclass
class ClassRecord:
    representative: Permutation
    rank: int
    class_size: int
    centralizer_order: int
    centralizes_involution: bool
    normalizes_2subgroup: bool
    centralizer_witness: Permutation | None = None
    normalizer_witness: Permutation | None = None
    witness_group_order: int | None = None
    label: str | None = None
    inner: bool = True

    def to_json(self) -> dict:
        img = lambda p: None if p is None else list(p.images)
        return {"representative": img(self.representative), "rank": self.rank,
                "class_size": self.class_size, "centralizer_order": self.centralizer_order,
                "centralizes_involution": self.centralizes_involution,
                "normalizes_2subgroup": self.normalizes_2subgroup,
                "centralizer_witness": img(self.centralizer_witness),
                "normalizer_witness": img(self.normalizer_witness),
                "witness_group_order": self.witness_group_order,
                "label": self.label, "inner": self.inner}

    @classmethod
    def from_json(cls, d: dict) -> "ClassRecord":
        perm = lambda v: None if v is None else Permutation(v)
        return cls(perm(d["representative"]), d["rank"], d["class_size"], d["centralizer_order"],
                   d["centralizes_involution"], d["normalizes_2subgroup"],
                   perm(d["centralizer_witness"]), perm(d["normalizer_witness"]),
                   d["witness_group_order"], d["label"], d["inner"])


def _arr(x) -> np.ndarray:
    return np.asarray(x.images if isinstance(x, Permutation) else x, dtype=INDEX)


def _require_order3(x):
    if perm_order(x) != 3:
        raise NotOrderThree(f"{x} does not have order 3")


# -- closure of small 2-groups ------------------------------------------------------------

class Overflow:
    """Closure abandoned: too large, or an element of order not a power of 2."""

    def __init__(self, reason: str):
        self.reason = reason

    def __bool__(self):
        return False

    def __repr__(self):
        return f"Overflow({self.reason})"


def _order_is_2power(g: np.ndarray, bound: int) -> bool:
    ident = np.arange(len(g))
    cur = g
    e = 1
    while e < bound:
        if np.array_equal(cur, ident):
            return True
        cur = cur[cur]
        e *= 2
    return bool(np.array_equal(cur, ident))


def two_group_order(elements, cap: int):
    """Order of the subgroup generated by the given elements, if it is a 2-group of order <= cap."""
    gens = [_arr(g) for g in elements]
    if not gens:
        return 1
    d = len(gens[0])
    ident = np.arange(d, dtype=INDEX)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g[a]                       # a then g
                key = b.tobytes()
                if key in seen:
                    continue
                if not _order_is_2power(b, cap):
                    return Overflow("element of order not a power of 2")
                seen.add(key)
                if len(seen) > cap:
                    return Overflow(f"more than {cap} elements")
                nxt.append(b)
        frontier = nxt
    n = len(seen)
    if not is_power_of_two(n):
        return Overflow(f"order {n} is not a power of 2")
    return n


# -- involution scans -----------------------------------------------------------------------

def _involution_rows(blk):
    rows = np.nonzero(order_mask(blk, 2))[0]
    return rows, blk.full(rows)


def first_commuting_involution(handle, x, *, cap=None, threads=None) -> Permutation | None:
    """The first involution in stream order commuting with x."""
    xa = _arr(x)

    def per_block(blk):
        rows, T = _involution_rows(blk)
        if not len(rows):
            return None
        ok = np.nonzero((T[:, xa] == xa[T]).all(axis=1))[0]
        return Permutation.from_array(T[ok[0]]) if len(ok) else None

    for r in scan(handle.chain, per_block, cap=cap, threads=threads, stop=lambda r: r is not None):
        if r is not None:
            return r
    return None


def commuting_involution_count(handle, x, *, cap=None, threads=None) -> int:
    xa = _arr(x)

    def per_block(blk):
        _, T = _involution_rows(blk)
        return int((T[:, xa] == xa[T]).all(axis=1).sum()) if len(T) else 0

    return sum(scan(handle.chain, per_block, cap=cap, threads=threads))


def _conj_rows(T: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Rows t -> g^-1 t g (maps g(i) to g(t(i)))."""
    out = np.empty_like(T)
    out[:, g] = g[T]
    return out


def _rows_2power(U: np.ndarray, bound: int) -> np.ndarray:
    ident = np.arange(U.shape[1], dtype=U.dtype)
    cur = U
    e = 1
    while e < bound:
        cur = np.take_along_axis(cur, cur, axis=1)
        e *= 2
    return (cur == ident).all(axis=1)


def triple_candidates(T: np.ndarray, x: np.ndarray, bound: int) -> np.ndarray:
    """Mask of involution rows t with t t^x, t t^x2, t^x t^x2 all of 2-power order."""
    T1 = _conj_rows(T, x)
    T2 = _conj_rows(T1, x)
    ok = np.ones(len(T), dtype=bool)
    for A, B in ((T, T1), (T, T2), (T1, T2)):
        idx = np.nonzero(ok)[0]
        if not len(idx):
            break
        prod = np.take_along_axis(B[idx], A[idx], axis=1)      # A then B
        ok[idx[~_rows_2power(prod, bound)]] = False
    return ok


def triple_witness_scan(handle, x, *, cap=None, threads=None):
    """First involution t (stream order) with <t, t^x, t^x2> a 2-group, and that order."""
    xa = _arr(x)
    bound = two_part(handle.order)

    def per_block(blk):
        rows, T = _involution_rows(blk)
        if not len(rows):
            return None
        for r in np.nonzero(triple_candidates(T, xa, bound))[0]:
            t = Permutation.from_array(T[r])
            tx = t ** x
            n = two_group_order([t, tx, tx ** x], bound)
            if n:
                return t, n
        return None

    for r in scan(handle.chain, per_block, cap=cap, threads=threads, stop=lambda r: r is not None):
        if r is not None:
            return r
    return None


# -- the predicates ---------------------------------------------------------------------------

@dataclass
class Decision:
    value: bool
    witness: Permutation | None = None
    group_order: int | None = None


def centralizes_involution(handle, x, *, class_size: int | None = None, witness: bool = True,
                           exhaustive: bool = False, cap=None, threads=None) -> Decision:
    """Parity of |C(x)| decides; a commuting involution is searched when true.

    With ``exhaustive`` and a false verdict, every involution is checked to
    confirm that none commutes with x.
    """
    _require_order3(x)
    if class_size is None:
        class_size = conjugation_orbit(handle.chain, handle.generators, x, cap=0).size
    value = (handle.order // class_size) % 2 == 0
    if value:
        if not witness:
            return Decision(True)
        t = first_commuting_involution(handle, x, cap=cap, threads=threads)
        if t is None or not (t * x == x * t) or perm_order(t) != 2:
            raise AssertionError("even centralizer but no commuting involution found")
        return Decision(True, t, 2)
    if exhaustive and commuting_involution_count(handle, x, cap=cap, threads=threads):
        raise AssertionError("odd centralizer yet an involution commutes with x")
    return Decision(False)


def normalizes_nontrivial_2subgroup(handle, x, *, centralizes: Decision | None = None,
                                    cap=None, threads=None) -> Decision:
    _require_order3(x)
    if centralizes is None:
        centralizes = centralizes_involution(handle, x, cap=cap, threads=threads)
    if centralizes.value:
        return Decision(True, centralizes.witness, 2 if centralizes.witness is not None else None)
    check_cap(handle.chain, cap)
    found = triple_witness_scan(handle, x, cap=cap, threads=threads)
    if found is None:
        return Decision(False)
    t, n = found
    return Decision(True, t, n)


# -- class records ------------------------------------------------------------------------------

def order3_ranks(handle, *, cap=None, threads=None) -> np.ndarray:
    """Ranks of all order-3 elements, ascending (stream order)."""
    parts = scan(handle.chain, lambda blk: blk.ranks[order_mask(blk, 3)], cap=cap, threads=threads)
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def order3_classes(handle, *, cap=None, threads=None):
    """(representative, rank, class size) per class, representatives first in stream order."""
    chain = handle.chain
    check_cap(chain, cap)
    ranks = order3_ranks(handle, cap=cap, threads=threads)
    seen = RankSet(chain.order)
    out = []
    i = 0
    step = 1 << 16
    while i < len(ranks):
        chunk = ranks[i:i + step]
        fresh = np.nonzero(~seen.contains(chunk))[0]
        if not len(fresh):
            i += len(chunk)
            continue
        r = int(chunk[fresh[0]])
        x = chain.element(r)
        orb = conjugation_orbit(chain, handle.generators, x, cap=0, seen=seen)
        out.append((x, r, orb.size))
        i += int(fresh[0]) + 1
    total = sum(s for _, _, s in out)
    if total != len(ranks):
        raise AssertionError(f"class sizes sum to {total}, expected {len(ranks)}")
    return out


def order3_class_records(handle, *, cap=None, threads=None, witnesses: bool = True,
                         labeler=None) -> list[ClassRecord]:
    if handle.excluded:
        raise ExcludedGroup(f"{handle.name} is excluded: {handle.excluded}")
    records = []
    for x, r, size in order3_classes(handle, cap=cap, threads=threads):
        cen = centralizes_involution(handle, x, class_size=size, witness=witnesses,
                                     cap=cap, threads=threads)
        nor = normalizes_nontrivial_2subgroup(handle, x, centralizes=cen, cap=cap, threads=threads)
        rec = ClassRecord(x, r, size, handle.order // size, cen.value, nor.value,
                          cen.witness, nor.witness, nor.group_order,
                          inner=handle.is_inner(x))
        if labeler is not None:
            rec.label = labeler(handle, x)
        records.append(rec)
    return records


# -- the independent oracle ------------------------------------------------------------------------

def _closure(gens, d, cap=None):
    """All elements generated, as a dict bytes -> array, breadth-first from the identity."""
    ident = np.arange(d, dtype=INDEX)
    elems = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g[a]
                k = b.tobytes()
                if k not in elems:
                    elems[k] = b
                    nxt.append(b)
                    if cap is not None and len(elems) > cap:
                        return None
        frontier = nxt
    return elems


def _order(g: np.ndarray) -> int:
    return perm_order(Permutation.from_array(g))


@dataclass
class _SylowData:
    elements: list
    P: list
    index: dict
    subgroups: list = field(default_factory=list)     # (membership mask, generator indices)
    transversal: list = field(default_factory=list)


def _sylow_data(handle) -> _SylowData:
    cache = handle.extras.setdefault("_oracle", {})
    if "data" in cache:
        return cache["data"]
    d = handle.degree
    gens = [_arr(g) for g in handle.generators] or [np.arange(d, dtype=INDEX)]
    elems = _closure(gens, d, cap=ORACLE_CAP)
    if elems is None:
        raise OracleRefused(f"{handle.name}: group larger than the oracle cap {ORACLE_CAP}")
    G = list(elems.values())
    N = len(G)
    full2 = two_part(N)
    # a maximal 2-subgroup under inclusion is a Sylow 2-subgroup
    P = {np.arange(d, dtype=INDEX).tobytes(): np.arange(d, dtype=INDEX)}
    Pgens = []
    twos = [g for g in G if is_power_of_two(_order(g)) and _order(g) > 1]
    changed = True
    while changed and len(P) < full2:
        changed = False
        for g in twos:
            if g.tobytes() in P:
                continue
            Q = _closure(Pgens + [g], d, cap=full2)
            if Q is not None and is_power_of_two(len(Q)):
                P, Pgens, changed = Q, Pgens + [g], True
                if len(P) == full2:
                    break
    if len(P) != full2:
        raise AssertionError(f"maximal 2-subgroup of order {len(P)}, expected {full2}")
    Plist = list(P.values())
    index = {p.tobytes(): i for i, p in enumerate(Plist)}
    m = len(Plist)
    mult = np.array([[index[Plist[j][Plist[i]].tobytes()] for j in range(m)] for i in range(m)])

    def generated(gens):
        mask = np.zeros(m, dtype=bool)
        mask[ident_idx] = True
        frontier = np.array([ident_idx])
        while len(frontier):
            img = np.unique(mult[np.ix_(frontier, gens)].ravel())
            frontier = img[~mask[img]]
            mask[frontier] = True
        return mask

    ident_idx = index[np.arange(d, dtype=INDEX).tobytes()]
    start = np.zeros(m, dtype=bool)
    start[ident_idx] = True
    subgroups = {start.tobytes(): []}
    layer = [(start, [])]
    while layer:
        nxt = []
        for S, sg in layer:
            skip = S.copy()
            members = np.nonzero(S)[0]
            for i in range(m):
                if skip[i]:
                    continue
                skip[mult[members, i]] = True       # <S, i> depends only on the coset S i
                T = generated(sg + [i])
                key = T.tobytes()
                if key not in subgroups:
                    subgroups[key] = sg + [i]
                    nxt.append((T, sg + [i]))
        layer = nxt
    subs = [(np.frombuffer(k, dtype=bool).copy(), g) for k, g in subgroups.items() if g]
    # right cosets P t
    covered = set()
    transversal = []
    for g in G:
        k = g.tobytes()
        if k in covered:
            continue
        transversal.append(g)
        for p in Plist:
            covered.add(g[p].tobytes())           # p then g
    data = _SylowData(G, Plist, index, subs, transversal)
    cache["data"] = data
    return data


def oracle_normalizes_2subgroup(handle, x) -> bool:
    """Whether x normalizes a nontrivial 2-subgroup, via the subgroups of a Sylow 2-subgroup."""
    _require_order3(x)
    data = _sylow_data(handle)
    xa = _arr(x)
    P = np.stack(data.P)
    for t in data.transversal:
        tinv = np.argsort(t).astype(INDEX)
        y = tinv[xa[t]]                     # t, then x, then t^-1
        conj = _conj_rows(P, y)
        img = np.array([data.index.get(r.tobytes(), -1) for r in conj])
        for mask, gens in data.subgroups:
            if all(img[i] >= 0 and mask[img[i]] for i in gens):
                return True
    return False


def oracle_centralizes_involution(handle, x) -> bool:
    """Direct search over the closure for an involution commuting with x."""
    data = _sylow_data(handle)
    xa = _arr(x)
    for g in data.elements:
        if _order(g) == 2 and np.array_equal(g[xa], xa[g]):
            return True
    return False


# -- the triple-involution construction --------------------------------------------------------------

def triple_involution_witness(w: Permutation, x: Permutation) -> Permutation:
    """y = w * w^x * w^(x^2) for pairwise commuting conjugates; y is an involution
    (or trivial) commuting with x."""
    wx = w ** x
    wxx = wx ** x
    for a, b in ((w, wx), (w, wxx), (wx, wxx)):
        if not (a * b == b * a):
            raise ValueError("the conjugates of w under x do not pairwise commute")
    y = w * wx * wxx
    if not (y * y).is_identity() or not (y * x == x * y):
        raise AssertionError("triple product is not an involution commuting with x")
    return y


# -- alternating-group brute force ---------------------------------------------------------------------

def _involutions(n: int):
    """All involutions of Sym(n), as image tuples."""
    def rec(rest, img):
        if not rest:
            yield tuple(img)
            return
        a = rest[0]
        yield from rec(rest[1:], img)
        for j, b in enumerate(rest[1:], start=1):
            img[a], img[b] = b, a
            yield from rec(rest[1:j] + rest[j + 1:], img)
            img[a], img[b] = a, b
    yield from (t for t in rec(list(range(n)), list(range(n))) if t != tuple(range(n)))


def alt_type_rep(n: int, threes: int) -> Permutation:
    return Permutation.from_cycles([(3 * i, 3 * i + 1, 3 * i + 2) for i in range(threes)], n)


def alt_centralizes_involution(n: int, threes: int) -> bool:
    """Whether the element with the given number of 3-cycles commutes with an even involution."""
    if 3 * threes > n or threes < 1:
        raise NotOrderThree(f"no order-3 type with {threes} three-cycles on {n} points")
    x = np.array(alt_type_rep(n, threes).images)
    for t in _involutions(n):
        ta = np.array(t)
        moved = int((ta != np.arange(n)).sum())
        if moved % 4 == 0 and np.array_equal(ta[x], x[ta]):
            return True
    return False


def cycle_type_label(x: Permutation) -> str:
    """Order-3 cycle type written on the first points, e.g. "(123)(456)"."""
    c = sum(1 for cyc in x.cycles() if len(cyc) == 3)
    if any(len(cyc) not in (1, 3) for cyc in x.cycles()):
        raise NotOrderThree(str(x))
    return "".join("(" + "".join(str(3 * i + j + 1) for j in range(3)) + ")" if 3 * i + 3 < 10 else
                   f"({3 * i + 1} {3 * i + 2} {3 * i + 3})" for i in range(c))
