"""Streaming enumeration, element searches and conjugacy orbits.

Groups are walked in rank order, one *block* at a time: a block is a fixed
prefix element ``head`` composed after every element of a tail table, so that
row r of the block is the element of rank ``start + r``.  Predicates that
only need an element's images of a handful of points (orders 2 and 3 are
decided on the base) never materialise the full permutations.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chain import INDEX, StabilizerChain
from .perm import Permutation

log = logging.getLogger(__name__)

ENUMERATION_CAP = 20_000_000
BLOCK_ROWS = 1 << 15
BITMAP_LIMIT = 1 << 28


class EnumerationRefused(RuntimeError):
    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds the enumeration cap {cap}")
        self.order = order
        self.cap = cap


def default_threads() -> int:
    return os.cpu_count() or 1


@dataclass
class Block:
    start: int
    head: np.ndarray
    tail: np.ndarray
    base: np.ndarray

    def __len__(self):
        return len(self.tail)

    @property
    def ranks(self) -> np.ndarray:
        return self.start + np.arange(len(self.tail), dtype=np.int64)

    def full(self, rows=None) -> np.ndarray:
        t = self.tail if rows is None else self.tail[rows]
        return self.head[t]

    def at(self, points: np.ndarray, rows=None) -> np.ndarray:
        """x(points[r, c]) for each row r of the block."""
        t = self.tail if rows is None else self.tail[rows]
        return self.head[np.take_along_axis(t, points, axis=1)]

    def base_powers(self, e: int, rows=None) -> np.ndarray:
        """Images of the base under x**e, e >= 1."""
        n = len(self.tail) if rows is None else len(rows)
        cur = np.broadcast_to(self.base, (n, len(self.base)))
        for _ in range(e):
            cur = self.at(cur, rows)
        return cur


def _divisors_to_test(n: int):
    return [n // r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, r))]


def order_mask(block: Block, n: int) -> np.ndarray:
    """Rows whose element has order exactly n (decided on base images)."""
    base = block.base
    if n == 1:
        return (block.base_powers(1) == base).all(axis=1)
    ok = (block.base_powers(n) == base).all(axis=1)
    for m in _divisors_to_test(n):
        if not ok.any():
            break
        rows = np.nonzero(ok)[0]
        trivial = (block.base_powers(m, rows) == base).all(axis=1)
        ok[rows[trivial]] = False
    return ok


def check_cap(chain: StabilizerChain, cap: int | None):
    cap = ENUMERATION_CAP if cap is None else cap
    if chain.order > cap:
        raise EnumerationRefused(chain.order, cap)


def blocks(chain: StabilizerChain, cap: int | None = None, max_rows: int = BLOCK_ROWS):
    """Yield the blocks of the stream in rank order."""
    check_cap(chain, cap)
    base = np.array(chain.base, dtype=INDEX)
    if not chain.levels:
        ident = np.arange(chain.degree, dtype=INDEX)
        yield Block(0, ident, ident[None, :], base)
        return
    s = chain.split_for_blocks(max_rows)
    tail = chain.tail_table(s)
    R = len(tail)
    for n, head in chain.prefix_heads(s):
        yield Block(n * R, head, tail, base)


def enumerate_stream(chain: StabilizerChain, visitor: Callable[[Permutation], object],
                     cap: int | None = None) -> int:
    """Call visitor on every element in rank order; stop when it returns truthy.

    Returns the number of visits.
    """
    visits = 0
    for blk in blocks(chain, cap):
        X = blk.full()
        for row in X:
            visits += 1
            if visitor(Permutation.from_array(row)):
                return visits
    return visits


def _mask_of(predicate, block: Block) -> np.ndarray:
    if hasattr(predicate, "mask"):
        return np.asarray(predicate.mask(block), dtype=bool)
    X = block.full()
    return np.fromiter((bool(predicate(Permutation.from_array(r))) for r in X),
                       dtype=bool, count=len(X))


class OrderIs:
    """Predicate: element order equals n."""

    def __init__(self, n: int):
        self.n = n

    def mask(self, block: Block) -> np.ndarray:
        return order_mask(block, self.n)


def scan(chain: StabilizerChain, fn: Callable[[Block], object], *, cap: int | None = None,
         threads: int | None = None, stop: Callable[[object], bool] | None = None,
         max_rows: int = BLOCK_ROWS) -> list:
    """Apply fn to each block; results come back in stream order.

    With ``stop``, scanning ends after the first block whose result satisfies
    it (blocks of the same parallel window beyond it are discarded), so the
    outcome never depends on the thread count.
    """
    threads = threads or 1
    out = []
    it = blocks(chain, cap, max_rows)
    if threads <= 1:
        for blk in it:
            r = fn(blk)
            out.append(r)
            if stop is not None and stop(r):
                break
        return out
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            window = [b for _, b in zip(range(threads), it)]
            if not window:
                break
            results = list(pool.map(fn, window))
            for r in results:
                out.append(r)
                if stop is not None and stop(r):
                    return out
    return out


def element_search(chain: StabilizerChain, predicate, mode: str = "count", *,
                   cap: int | None = None, threads: int | None = None):
    """Deterministic scan of the stream.

    mode "count" returns the number of hits, "first" the first hit in stream
    order (or None), "all" the list of hits in stream order.
    """
    if mode not in ("count", "first", "all"):
        raise ValueError(f"unknown mode {mode!r}")

    def per_block(blk):
        mask = _mask_of(predicate, blk)
        if mode == "count":
            return int(mask.sum())
        rows = np.nonzero(mask)[0]
        if mode == "first":
            rows = rows[:1]
        return [Permutation.from_array(r) for r in blk.full(rows)] if len(rows) else []

    if mode == "count":
        return sum(scan(chain, per_block, cap=cap, threads=threads))
    if mode == "first":
        res = scan(chain, per_block, cap=cap, threads=threads, stop=bool)
        for r in res:
            if r:
                return r[0]
        return None
    return [p for r in scan(chain, per_block, cap=cap, threads=threads) for p in r]


# -- conjugacy orbits --------------------------------------------------------

class RankSet:
    """Set of ranks backed by a bitmap when the group is small enough."""

    def __init__(self, order: int):
        self.order = order
        self.bitmap = np.zeros(order, dtype=bool) if order <= BITMAP_LIMIT else None
        self.items = None if self.bitmap is not None else set()

    def add_new(self, ranks: np.ndarray) -> np.ndarray:
        """Insert ranks; return those not present before (unique, sorted)."""
        ranks = np.unique(ranks)
        if self.bitmap is not None:
            fresh = ranks[~self.bitmap[ranks]]
            self.bitmap[fresh] = True
            return fresh
        fresh = np.array([r for r in ranks.tolist() if r not in self.items], dtype=np.int64)
        self.items.update(fresh.tolist())
        return fresh

    def contains(self, ranks: np.ndarray) -> np.ndarray:
        ranks = np.asarray(ranks, dtype=np.int64)
        if self.bitmap is not None:
            return self.bitmap[ranks]
        return np.fromiter((r in self.items for r in ranks.tolist()), dtype=bool, count=len(ranks))


@dataclass
class Orbit:
    size: int
    members: np.ndarray | None   # sorted ranks, present when size <= cap


def conjugation_orbit(chain: StabilizerChain, generators, x, cap: int = 1_000_000,
                      seen: RankSet | None = None, chunk: int = 20000) -> Orbit:
    """Conjugacy class of x, by closure under conjugation by the generators.

    ``seen`` (optional) is a shared rank set that receives the class members;
    the caller guarantees it holds no member of this class beforehand.
    """
    x = np.asarray(x.images if isinstance(x, Permutation) else x, dtype=INDEX)
    gens = [np.asarray(g.images if isinstance(g, Permutation) else g, dtype=INDEX)
            for g in generators]
    invs = [np.argsort(g).astype(INDEX) for g in gens]
    local = seen if seen is not None else RankSet(chain.order)
    first = local.add_new(chain.ranks(x))
    collected = [first]
    frontier = first
    size = len(first)
    while len(frontier):
        nxt = []
        for start in range(0, len(frontier), chunk):
            X = chain.elements_at(frontier[start:start + chunk])
            for g, gi in zip(gens, invs):
                Y = g[X[:, gi]]
                fresh = local.add_new(chain.ranks(Y))
                if len(fresh):
                    nxt.append(fresh)
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.empty(0, dtype=np.int64)
        size += len(frontier)
        if collected is not None:
            collected = collected + [frontier] if size <= cap else None
    if chain.order % size:
        raise AssertionError(f"class size {size} does not divide {chain.order}")
    members = np.sort(np.concatenate(collected)) if collected is not None and size <= cap else None
    return Orbit(size, members)


def two_part(n: int) -> int:
    return n & -n


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0
