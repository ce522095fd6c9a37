"""Permutations on {0, ..., d-1}.

Products act on the right: ``a * b`` applies ``a`` first, then ``b``, so
``(a * b)[i] == b[a[i]]``.  Conjugation is ``a ** g == g**-1 * a * g``.
"""

from __future__ import annotations

import math
import re

import numpy as np

DEGREE_CAP = 65535


class DegreeMismatch(ValueError):
    pass


class Permutation:
    __slots__ = ("images", "_hash", "_arr")

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        d = len(images)
        if d > DEGREE_CAP:
            raise ValueError(f"degree {d} exceeds cap {DEGREE_CAP}")
        if sorted(images) != list(range(d)):
            raise ValueError("images do not form a bijection")
        self.images = images
        self._hash = None
        self._arr = None

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        obj = cls.__new__(cls)
        obj.images = images
        obj._hash = None
        obj._arr = None
        return obj

    @classmethod
    def from_array(cls, arr) -> "Permutation":
        return cls._trusted(tuple(int(i) for i in arr))

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation such as ``(0 1 2)(3 4)``."""
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def array(self) -> np.ndarray:
        if self._arr is None:
            arr = np.array(self.images, dtype=np.int64)
            arr.flags.writeable = False
            self._arr = arr
        return self._arr

    def __getitem__(self, i):
        return self.images[i]

    def __len__(self):
        return len(self.images)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, e):
        if isinstance(e, Permutation):
            return conjugate(self, e)
        return power(self, e)

    def __invert__(self):
        return inverse(self)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.images[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths (fixed points included), descending."""
        lens = [len(c) for c in self.cycles()]
        lens += [1] * (self.degree - sum(lens))
        return tuple(sorted(lens, reverse=True))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self):
        return f"Permutation({self})"


def _check(a: Permutation, b: Permutation):
    if a.degree != b.degree:
        raise DegreeMismatch(f"degrees {a.degree} and {b.degree}")


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply ``a`` then ``b``."""
    _check(a, b)
    bi = b.images
    return Permutation._trusted(tuple(bi[i] for i in a.images))


def inverse(a: Permutation) -> Permutation:
    out = [0] * a.degree
    for i, j in enumerate(a.images):
        out[j] = i
    return Permutation._trusted(tuple(out))


def conjugate(a: Permutation, g: Permutation) -> Permutation:
    """g^-1 a g: maps g(i) to g(a(i))."""
    _check(a, g)
    out = [0] * a.degree
    gi = g.images
    for i, j in enumerate(a.images):
        out[gi[i]] = gi[j]
    return Permutation._trusted(tuple(out))


def perm_order(a: Permutation) -> int:
    return math.lcm(1, *(len(c) for c in a.cycles()))


def power(a: Permutation, e: int) -> Permutation:
    if e < 0:
        a, e = inverse(a), -e
    result = Permutation.identity(a.degree)
    base = a
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def commutes(a: Permutation, b: Permutation) -> bool:
    return compose(a, b) == compose(b, a)
