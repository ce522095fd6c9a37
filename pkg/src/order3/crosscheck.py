"""Match brute-force class records to symbolic descriptors and compare verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lieformulas as lf
from . import matrixgroups as mg
from .classify import ClassRecord, cycle_type_label, order3_class_records
from .permcore import Permutation
from .permcore.search import conjugation_orbit

CHAR3_FAMILIES = ("PSL2", "PSL3", "PSU3", "PSL4", "PSU4", "PGL3", "PGU3", "Sp4")


class UnmatchedClass(RuntimeError):
    pass


def _matrix_label(handle, x) -> str:
    M = handle.matrix_of(x)
    if M.field.p == 3:
        u = M if handle.family == "Sp4" else mg.unipotent_lift(M)
        return lf.jordan_label(mg.jordan_partition(u))
    if handle.family == "Sp4":
        return "semisimple"
    return mg.semisimple_label(M, handle.unitary_q)


def _bundle_label(handle, x) -> str:
    chain = handle.chain
    labels = handle.extras.get("labels", {})
    rank = int(chain.ranks(np.asarray(x.images)[None, :])[0])
    for lab in sorted(labels):
        y = labels[lab]
        orb = conjugation_orbit(chain, handle.generators, y)
        if orb.members is not None and np.isin(rank, orb.members):
            return lf.normalize_label(lab)
    return "other"


def describe_class(handle, x: Permutation) -> lf.ClassDescriptor | None:
    """Structural label of the class of x, or None for groups with no symbolic family."""
    fam = handle.family
    if fam in ("Alt", "Sym"):
        return lf.ClassDescriptor(fam, handle.n, cycle_type_label(x))
    if fam in ("PSL2", "PSL3", "PSL4", "PSU3", "PSU4", "Sp4"):
        return lf.ClassDescriptor(fam, handle.q, _matrix_label(handle, x))
    if fam in ("PGL3", "PGU3"):
        lab = _matrix_label(handle, x)
        return lf.ClassDescriptor(fam, handle.q, lab)
    if fam == "PGammaL2":
        if not handle.is_inner(x):
            return lf.ClassDescriptor(fam, handle.q, "field")
        return lf.ClassDescriptor(fam, handle.q, _matrix_label(handle, x))
    if fam in ("G2", "2G2", "J3", "J3:2"):
        return lf.ClassDescriptor(fam, handle.q or 0, _bundle_label(handle, x))
    return None


def fixed_points(x: Permutation) -> int:
    return int((np.asarray(x.images) == np.arange(len(x.images))).sum())


@dataclass
class ClassComparison:
    record: ClassRecord
    descriptor: lf.ClassDescriptor | None
    verdict: lf.Verdict | None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        v = self.verdict
        return (v is not None and v.excluded is None
                and v.centralizes_involution == self.record.centralizes_involution
                and v.normalizes_2subgroup == self.record.normalizes_2subgroup)


@dataclass
class CrosscheckResult:
    name: str
    order: int
    comparisons: list[ClassComparison]

    @property
    def passed(self) -> bool:
        return bool(self.comparisons) and all(c.matches for c in self.comparisons)


def _first_involution_fixed(handle) -> int | None:
    from .classify import first_commuting_involution
    t = first_commuting_involution(handle, Permutation(list(range(handle.degree))))
    return None if t is None else fixed_points(t)


def crosscheck(handle, *, cap=None, threads=None, records=None) -> CrosscheckResult:
    if records is None:
        records = order3_class_records(handle, cap=cap, threads=threads)
    out = []
    inv_fixed = None
    for rec in records:
        try:
            d = describe_class(handle, rec.representative)
        except lf.InadmissibleDescriptor as e:
            out.append(ClassComparison(rec, None, None, [f"unlabelled class: {e}"]))
            continue
        if d is None:
            out.append(ClassComparison(rec, None, None, [f"no symbolic family for {handle.name}"]))
            continue
        rec.label = d.label
        try:
            v = lf.theorem1_verdict(d)
        except lf.InadmissibleDescriptor as e:
            out.append(ClassComparison(rec, d, None, [f"inadmissible descriptor {d}: {e}"]))
            continue
        cmp = ClassComparison(rec, d, v)
        if not cmp.matches:
            cmp.diagnostics.append(
                f"brute force centralizes={rec.centralizes_involution} normalizes={rec.normalizes_2subgroup};"
                f" predicted centralizes={v.centralizes_involution} normalizes={v.normalizes_2subgroup}")
            if rec.normalizes_2subgroup is False:
                if inv_fixed is None:
                    inv_fixed = _first_involution_fixed(handle)
                cmp.diagnostics.append(
                    f"representative fixes {fixed_points(rec.representative)} of {handle.degree} points;"
                    f" a sample involution fixes {inv_fixed}")
        out.append(cmp)
    return CrosscheckResult(handle.name, handle.order, out)


def centralizer_orders_for(result: CrosscheckResult, label: str) -> list[int]:
    label = lf.normalize_label(label)
    return sorted((c.record.centralizer_order for c in result.comparisons
                   if c.descriptor is not None and c.descriptor.label == label), reverse=True)
