"""Robinson's bound: order-3 classes normalizing no 2-subgroup vs 2-blocks of defect zero."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .classify import order3_class_records


class DegreeDataError(ValueError):
    pass


class BoundMismatch(ValueError):
    """The degree data describes a group of a different order."""


class BoundViolated(AssertionError):
    pass


@dataclass(frozen=True)
class DegreeData:
    order: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1 or not self.degrees:
            raise DegreeDataError("degree data needs a positive order and at least one degree")
        if any(d < 1 or self.order % d for d in self.degrees):
            bad = [d for d in self.degrees if d < 1 or self.order % d]
            raise DegreeDataError(f"degrees {bad} do not divide the group order {self.order}")
        total = sum(d * d for d in self.degrees)
        if total != self.order:
            raise DegreeDataError(f"sum of squared degrees is {total}, not the group order {self.order}")
        if 1 not in self.degrees:
            raise DegreeDataError("the trivial character (degree 1) is missing")

    @property
    def multiset(self) -> Counter:
        return Counter(self.degrees)


def parse_degrees(text: str) -> DegreeData:
    order = None
    degrees = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "order":
                order = int(rest)
            elif key == "degrees":
                degrees = tuple(int(t) for t in rest.split())
            else:
                raise DegreeDataError(f"line {lineno}: unknown keyword {key!r}")
        except ValueError as e:
            if isinstance(e, DegreeDataError):
                raise
            raise DegreeDataError(f"line {lineno}: {e}") from None
    if order is None or degrees is None:
        raise DegreeDataError("degree file needs both 'order' and 'degrees' lines")
    return DegreeData(order, degrees)


def load_degrees(path) -> DegreeData:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DegreeDataError(f"cannot read {path}: {e}") from None
    return parse_degrees(text)


def valuation(n: int, p: int = 2) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def defect_zero_count(data: DegreeData, p: int = 2) -> int:
    full = valuation(data.order, p)
    return sum(1 for d in data.degrees if valuation(d, p) == full)


def robinson_lower_bound(handle, *, cap=None, threads=None, records=None) -> int:
    if records is None:
        records = order3_class_records(handle, cap=cap, threads=threads, witnesses=False)
    return sum(1 for r in records if not r.normalizes_2subgroup)


@dataclass(frozen=True)
class BoundReport:
    name: str
    order: int
    lower_bound: int
    blocks: int

    @property
    def passed(self) -> bool:
        return self.lower_bound <= self.blocks

    def line(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return f"{self.name}: {self.lower_bound} <= {self.blocks} {verdict}"


def check_bound(handle, data: DegreeData, *, cap=None, threads=None, records=None) -> BoundReport:
    if handle.order != data.order:
        raise BoundMismatch(f"{handle.name} has order {handle.order}, degree data says {data.order}")
    rep = BoundReport(handle.name, handle.order,
                      robinson_lower_bound(handle, cap=cap, threads=threads, records=records),
                      defect_zero_count(data))
    if not rep.passed:
        raise BoundViolated(rep.line())
    return rep
