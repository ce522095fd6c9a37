"""Symbolic verdicts: torus orders, Jordan-form rules and the exception lists.

Every rule carries a short provenance string so that emitted tables can be
traced back to the statement that produced them.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import re
from dataclasses import asdict, dataclass

from .finitefield import prime_power

FAMILIES = ("Alt", "Sym", "PSL2", "PSL3", "PSL4", "PSU3", "PSU4", "PGL3", "PGU3", "Sp4",
            "G2", "2G2", "J3", "J3:2", "E6", "PGammaL2")
LIE_FAMILIES = ("PSL2", "PSL3", "PSL4", "PSU3", "PSU4", "PGL3", "PGU3", "Sp4", "G2", "2G2",
                "PGammaL2")
TORUS_LABELS = ("split", "partially-split", "irreducible")
SEMISIMPLE_LABELS = TORUS_LABELS + ("nonregular",)
NAMED_LABELS = {"A1t3", "3A", "3B", "field", "other"}
ALT_TABLE_LIMIT = 12

NOT_DESK_VERIFIABLE = "not desk-verifiable"


class InadmissibleDescriptor(ValueError):
    pass


@dataclass(frozen=True)
class ClassDescriptor:
    family: str
    param: int            # n for Alt/Sym; q for Lie type (q^2 = 3^(2f+1) for 2G2); 0 for sporadic
    label: str

    def __str__(self):
        return f"{self.family}({self.param}) {self.label}"


@dataclass(frozen=True)
class Verdict:
    centralizes_involution: bool | None
    normalizes_2subgroup: bool | None
    provenance: str
    excluded: str | None = None
    flag: str | None = None


# -- labels -------------------------------------------------------------------------------

def jordan_label(partition) -> str:
    parts = sorted((int(p) for p in partition), reverse=True)
    return "".join(f"J{p}" for p in parts)


def parse_jordan(label: str) -> tuple[int, ...] | None:
    s = label.replace(" ", "").replace("⊕", "").replace("+", "")
    m = re.fullmatch(r"\[(\d+(?:,\d+)*)\]", s)
    if m:
        return tuple(sorted((int(t) for t in m[1].split(",")), reverse=True))
    if re.fullmatch(r"(J\d+)+", s):
        return tuple(sorted((int(t) for t in re.findall(r"J(\d+)", s)), reverse=True))
    return None


def alt_threes(label: str, n: int) -> int:
    """Number of 3-cycles named by a label such as "(123)(456)" or "3^2"."""
    s = label.strip()
    m = re.fullmatch(r"3\^(\d+)", s)
    if m:
        c = int(m[1])
    else:
        groups = re.findall(r"\(([^()]*)\)", s)
        if not groups or re.sub(r"\([^()]*\)", "", s).strip():
            raise InadmissibleDescriptor(f"not a cycle type: {label!r}")
        for g in groups:
            g = g.strip()
            pts = re.split(r"[\s,]+", g) if re.search(r"[\s,]", g) else list(g)
            if len(pts) != 3:
                raise InadmissibleDescriptor(f"{label!r} is not an order-3 cycle type")
        c = len(groups)
    if c < 1 or 3 * c > n:
        raise InadmissibleDescriptor(f"{label!r} is not an order-3 type on {n} points")
    return c


def alt_label(threes: int) -> str:
    return "".join("(" + "".join(str(3 * i + j + 1) for j in range(3)) + ")" if 3 * i + 3 < 10
                   else f"({3 * i + 1} {3 * i + 2} {3 * i + 3})" for i in range(threes))


def normalize_label(label: str) -> str:
    s = label.strip()
    low = s.lower().replace("_", "-").replace(" ", "-")
    if low in ("partially-split", "partial", "partially"):
        return "partially-split"
    if low in ("split", "irreducible", "nonregular", "unique"):
        return low
    if s in ("(Ã1)3", "(Ã₁)₃", "(Ã1)^3", "(Ã₁)³", "A1t3", "(~A1)3", "A1~3"):
        return "A1t3"
    j = parse_jordan(s)
    if j is not None:
        return jordan_label(j)
    return s


# -- torus arithmetic ---------------------------------------------------------------------------

def _char(q: int) -> int:
    return prime_power(q)[0]


def torus_orders(family: str, q: int) -> dict[str, int]:
    prime_power(q)
    if family == "PSL2":
        d = math.gcd(2, q - 1)
        return {"split": (q - 1) // d, "irreducible": (q + 1) // d}
    if family == "PSL3":
        d = math.gcd(3, q - 1)
        return {"split": (q - 1) ** 2 // d, "partially-split": (q * q - 1) // d,
                "irreducible": (q * q + q + 1) // d}
    if family == "PSU3":
        d = math.gcd(3, q + 1)
        return {"split": (q + 1) ** 2 // d, "partially-split": (q * q - 1) // d,
                "irreducible": (q * q - q + 1) // d}
    raise InadmissibleDescriptor(f"no torus table for {family}")


def torus_has_order3(family: str, torus: str, q: int) -> bool:
    """Whether the (inner) torus of the named type contains elements of order 3."""
    torus = normalize_label(torus)
    if _char(q) == 3:
        return False
    if family == "PSL2":
        if torus == "split":
            return q % 3 == 1
        if torus == "irreducible":
            return q % 3 == 2
        raise InadmissibleDescriptor(f"PSL2 has no {torus} torus")
    if family not in ("PSL3", "PSU3"):
        raise InadmissibleDescriptor(f"no torus table for {family}")
    eps = 1 if family == "PSL3" else -1
    if torus == "split":
        return (q - eps) % 3 == 0
    if torus == "partially-split":
        return (q + eps) % 3 == 0
    if torus == "irreducible":
        return False
    raise InadmissibleDescriptor(f"unknown torus {torus!r}")


def jordan_valid(family: str, partition) -> bool:
    """Whether a unipotent Jordan type occurs in SL, Sp or O."""
    parts = [int(p) for p in partition]
    mult = {s: parts.count(s) for s in set(parts)}
    if family == "SL":
        return True
    if family == "Sp":
        return all(m % 2 == 0 for s, m in mult.items() if s % 2)
    if family == "O":
        return all(m % 2 == 0 for s, m in mult.items() if s % 2 == 0)
    raise InadmissibleDescriptor(f"unknown classical type {family!r}")


QUOTED_CENTRALIZERS = {
    "Sp4-J2J2": lambda q: [2 * q**3 * (q + 1), 2 * q**3 * (q - 1)],
    "SO7-J3J3J1": lambda q: [2 * q**6 * (q + 1), 2 * q**6 * (q - 1)],
    "SO8-J3J3J1J1": lambda q: [2 * q**8 * (q + 1) ** 2, 2 * q**8 * (q - 1) ** 2, 2 * q**8 * (q * q - 1)],
    "SO8-minus-J3J3J1J1": lambda q: [2 * q**8 * (q * q - 1)],
}


def quoted_centralizer_orders(case: str, q: int) -> list[int]:
    try:
        return QUOTED_CENTRALIZERS[case](q)
    except KeyError:
        raise InadmissibleDescriptor(f"unknown case {case!r}") from None


# -- admissibility and exclusions ------------------------------------------------------------------

EXCLUSIONS = {
    ("PSL2", 2): "solvable", ("PSL2", 3): "solvable",
    ("PGammaL2", 2): "solvable", ("PGammaL2", 3): "solvable",
    ("PSU3", 2): "solvable", ("PGU3", 2): "solvable",
    ("Sp4", 2): "derived subgroup simple", ("G2", 2): "derived subgroup simple",
    ("2G2", 3): "derived subgroup simple",
}


def _check_q(d: ClassDescriptor):
    try:
        p, k = prime_power(d.param)
    except ValueError:
        raise InadmissibleDescriptor(f"{d.param} is not a prime power") from None
    if d.family == "2G2" and (p != 3 or k % 2 == 0):
        raise InadmissibleDescriptor("2G2 needs q^2 = 3^(2f+1)")
    if d.family == "G2" and p != 3 and d.label == "A1t3":
        raise InadmissibleDescriptor("the class A1t3 is a characteristic-3 label")
    return p, k


def exclusion(d: ClassDescriptor) -> str | None:
    if d.family in ("Alt", "Sym") and d.param < 5:
        return "solvable"
    return EXCLUSIONS.get((d.family, d.param))


def _admissible(d: ClassDescriptor):
    """Validate the descriptor; return (p, k) for Lie families."""
    if d.family not in FAMILIES:
        raise InadmissibleDescriptor(f"unknown family {d.family!r}")
    if d.family in ("Alt", "Sym"):
        alt_threes(d.label, d.param)
        return None
    if d.family in ("J3", "J3:2", "E6"):
        return None
    p, k = _check_q(d)
    lab = d.label
    jordan = parse_jordan(lab)
    if jordan is not None:
        if p != 3:
            raise InadmissibleDescriptor("Jordan labels need characteristic 3")
        dim = {"PSL2": 2, "PGammaL2": 2, "PSL3": 3, "PGL3": 3, "PSU3": 3, "PGU3": 3,
               "PSL4": 4, "PSU4": 4, "Sp4": 4}.get(d.family)
        if dim is None or sum(jordan) != dim or max(jordan) > 3 or jordan == (1,) * dim:
            raise InadmissibleDescriptor(f"{lab} is not an order-3 Jordan type for {d.family}")
        if d.family == "Sp4" and not jordan_valid("Sp", jordan):
            raise InadmissibleDescriptor(f"{lab} does not occur in Sp4")
        return p, k
    if lab in SEMISIMPLE_LABELS or lab == "unique":
        if p == 3:
            raise InadmissibleDescriptor("order-3 elements are unipotent in characteristic 3")
        if lab in TORUS_LABELS and d.family in ("PSL2", "PSL3", "PSU3"):
            if not torus_has_order3(d.family, lab, d.param):
                raise InadmissibleDescriptor(f"the {lab} torus of {d.family}({d.param}) has no element of order 3")
        if lab in TORUS_LABELS and d.family in ("PGL3", "PGU3"):
            base = "PSL3" if d.family == "PGL3" else "PSU3"
            eps = 1 if d.family == "PGL3" else -1
            outer_irr = lab == "irreducible" and (d.param - eps) % 3 == 0
            if not outer_irr and not torus_has_order3(base, lab, d.param):
                raise InadmissibleDescriptor(f"no order-3 element of {d.family}({d.param}) in a {lab} torus")
        if lab in ("partially-split",) and d.family == "PSL2":
            raise InadmissibleDescriptor("PSL2 has no partially split torus")
        return p, k
    if lab in NAMED_LABELS:
        return p, k
    raise InadmissibleDescriptor(f"label {lab!r} not admissible for {d.family}")


# -- Alt/Sym -------------------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def alt_brute_force_table(limit: int = ALT_TABLE_LIMIT) -> dict[tuple[int, int], bool]:
    """(n, number of 3-cycles) -> centralizes an involution, computed by enumeration."""
    from .classify import alt_centralizes_involution
    return {(n, c): alt_centralizes_involution(n, c)
            for n in range(5, limit + 1) for c in range(1, n // 3 + 1)}


def alt_class_verdict(n: int, cycle_type: str, family: str = "Alt") -> Verdict:
    c = alt_threes(cycle_type, n)
    if n < 5:
        return Verdict(None, None, "alternating/symmetric groups of degree below 5", excluded="solvable")
    if family == "Sym":
        return Verdict(True, True, "Sym(n), n >= 5: two fixed points or two 3-cycles give a commuting transposition or product")
    if n <= ALT_TABLE_LIMIT:
        cen = alt_brute_force_table()[(n, c)]
        prov = f"Alt({n}) brute-force table"
    else:
        cen = True
        prov = "Alt(n), n > 12: an even commuting involution always exists"
    return Verdict(cen, True, prov + "; every order-3 element normalizes a four-group")


# -- verdict rules --------------------------------------------------------------------------------

def _centralizes(d: ClassDescriptor, pk) -> tuple[bool, str]:
    f, q, lab = d.family, d.param, d.label
    if f in ("J3",):
        return (lab != "3B", "J3 class 3B" if lab == "3B" else "J3 classes other than 3B")
    if f == "J3:2":
        return True, "J3:2: every order-3 element has an even centralizer"
    if f == "E6":
        return True, "adjoint E6 / 2E6 diagonal elements: even centralizers"
    p, a = pk
    jordan = parse_jordan(lab)
    if f == "PGammaL2":
        if lab == "field":
            return True, "field automorphisms fix the prime-field subgroup, of even order"
        f = "PSL2"
    if f == "PSL2":
        if p == 2:
            return False, "PSL2(2^a): unique class"
        if p == 3:
            return False, "PSL2(3^a): Jordan form J2"
        if q % 12 == 5:
            return False, "PSL2(q), q = 5 mod 12: unique class"
        if q % 12 == 7:
            return False, "PSL2(q), q = 7 mod 12: unique class"
        return True, "PSL2(q), q = 1 or 11 mod 12: even torus"
    inner = f in ("PSL3", "PSU3") or (f in ("PGL3", "PGU3") and lab != "irreducible")
    if f in ("PGL3", "PGU3") and lab == "irreducible":
        eps = 1 if f == "PGL3" else -1
        if (q - eps) % 3 == 0:
            return False, f"{f}(q), q = {eps} mod 3: irreducible torus"
    if inner:
        unitary = f in ("PSU3", "PGU3")
        name = "PSU3" if unitary else "PSL3"
        if p == 3:
            if jordan == (3,):
                return False, f"{name}(3^a): Jordan form J3"
            return True, f"{name}(3^a): Jordan form {lab} has a commuting involution"
        if p == 2 and lab in TORUS_LABELS:
            odd_label = ("split" if a % 2 == 0 else "partially-split") if not unitary else \
                        ("split" if a % 2 == 1 else "partially-split")
            if lab == odd_label:
                return False, f"{name}(2^a), a {'even' if a % 2 == 0 else 'odd'}: {lab} torus"
        return True, f"{name}(q): even centralizer for {lab}"
    if f == "PSL4":
        if jordan == (3, 1) and a % 2 == 1:
            return False, "PSL4(3^a), a odd: Jordan form J3+J1"
        return True, "PSL4: even centralizer"
    if f == "PSU4":
        if jordan == (3, 1):
            return False, "PSU4(3^a): Jordan form J3+J1"
        return True, "PSU4: even centralizer"
    if f == "Sp4":
        return True, "Sp4: every order-3 class has an even centralizer"
    if f == "G2":
        if p == 3 and lab == "A1t3":
            return False, "G2(3^f): class A1t3"
        return True, "G2: even centralizer"
    if f == "2G2":
        if lab == "A1t3":
            return False, "2G2(3^(2f+1)): class A1t3"
        return True, "2G2: even centralizer"
    raise InadmissibleDescriptor(str(d))


def _normalizes(d: ClassDescriptor, pk, centralizes: bool) -> tuple[bool, str]:
    if centralizes:
        return True, "normalizes the group of order 2 it centralizes"
    f, lab = d.family, d.label
    if f in ("PSL2", "PGammaL2") and lab != "field":
        p, a = pk
        if p == 2 and a % 2 == 1:
            return False, "PSL2(2^a), a odd: unique class"
    if f == "PGL3" and lab == "irreducible":
        p, a = pk
        if p == 2 and a % 2 == 0:
            return False, "PGL3(2^a), a even: irreducible torus"
    if f == "PGU3" and lab == "irreducible":
        p, a = pk
        if p == 2 and a % 2 == 1 and a >= 3:
            return False, "PGU3(2^a), a odd: irreducible torus"
    if f == "2G2" and lab == "A1t3":
        return False, "2G2(3^(2f+1)): class A1t3"
    return True, "normalizes a nontrivial 2-subgroup"


def _flag(d: ClassDescriptor) -> str | None:
    if d.family in ("J3", "J3:2", "E6"):
        return NOT_DESK_VERIFIABLE
    if d.family == "2G2":
        return NOT_DESK_VERIFIABLE
    if d.family == "G2" and d.param >= 9:
        return NOT_DESK_VERIFIABLE
    return None


def descriptor(family: str, param: int, label: str) -> ClassDescriptor:
    return ClassDescriptor(family, int(param), normalize_label(label))


def _prepare(d: ClassDescriptor):
    d = ClassDescriptor(d.family, d.param, normalize_label(d.label))
    ex = exclusion(d)
    if ex is not None:
        return d, None, Verdict(None, None, "excluded group", excluded=ex)
    if d.family in ("Alt", "Sym"):
        return d, None, alt_class_verdict(d.param, d.label, d.family)
    return d, _admissible(d), None


def theorem3_verdict(d: ClassDescriptor) -> Verdict:
    """Whether the class centralizes an involution (the normalizer column is left empty)."""
    d, pk, early = _prepare(d)
    if early is not None:
        return Verdict(early.centralizes_involution, None, early.provenance, early.excluded)
    cen, prov = _centralizes(d, pk)
    return Verdict(cen, None, prov, flag=_flag(d))


def theorem1_verdict(d: ClassDescriptor) -> Verdict:
    """Both properties: centralizing an involution, normalizing a nontrivial 2-subgroup."""
    d, pk, early = _prepare(d)
    if early is not None:
        return early
    cen, p1 = _centralizes(d, pk)
    nor, p2 = _normalizes(d, pk, cen)
    return Verdict(cen, nor, p1 if p1 == p2 else f"{p1}; {p2}", flag=_flag(d))


E6_RULE = Verdict(True, True, "adjoint E6 / 2E6 diagonal elements: even centralizers")


# -- exception tables -------------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    family: str
    parameter: int
    label: str
    centralizes: bool
    normalizes: bool
    provenance: str
    flag: str = ""


def _prime_powers(limit: int):
    for q in range(2, limit + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        yield q


def _labels(family: str, q: int) -> list[str]:
    p = _char(q)
    if family == "PSL2":
        return ["J2"] if p == 3 else ["split" if q % 3 == 1 else "irreducible"]
    if family in ("PSL3", "PSU3"):
        if p == 3:
            return ["J2J1", "J3"]
        return [t for t in ("split", "partially-split") if torus_has_order3(family, t, q)] + ["nonregular"]
    if family in ("PGL3", "PGU3"):
        eps = 1 if family == "PGL3" else -1
        if p == 3:
            return []
        outer = ["irreducible"] if (q - eps) % 3 == 0 else []
        return outer
    if family in ("PSL4", "PSU4"):
        return ["J2J1J1", "J2J2", "J3J1"] if p == 3 else []
    if family in ("G2",):
        return ["A1t3"] if p == 3 else []
    if family == "2G2":
        return ["A1t3"] if p == 3 and (prime_power(q)[1] % 2 == 1) else []
    return []


def class_labels(family: str, param: int) -> list[str]:
    """Labels of the order-3 classes (up to the symbolic granularity) for a family."""
    if family in ("Alt", "Sym"):
        return [alt_label(c) for c in range(1, param // 3 + 1)]
    if family == "J3":
        return ["3A", "3B"]
    if family == "J3:2":
        return ["3A", "3B"]
    if family == "E6":
        raise InadmissibleDescriptor("E6 is a constant rule with no parameters")
    p, _ = _check_q(ClassDescriptor(family, param, ""))
    if family == "PSL2":
        return ["J2"] if p == 3 else ["split" if param % 3 == 1 else "irreducible"]
    if family in ("PSL3", "PSU3"):
        if p == 3:
            return ["J2J1", "J3"]
        return [t for t in ("split", "partially-split") if torus_has_order3(family, t, param)] + ["nonregular"]
    if family in ("PGL3", "PGU3"):
        if p == 3:
            return ["J2J1", "J3"]
        base = "PSL3" if family == "PGL3" else "PSU3"
        eps = 1 if family == "PGL3" else -1
        labels = [t for t in ("split", "partially-split") if torus_has_order3(base, t, param)]
        if (param - eps) % 3 == 0:
            labels.append("irreducible")
        return labels + ["nonregular"]
    if family in ("PSL4", "PSU4"):
        if p != 3:
            raise InadmissibleDescriptor(f"{family} labels are only tabulated in characteristic 3")
        return ["J2J1J1", "J2J2", "J3J1"]
    if family == "Sp4":
        if p != 3:
            raise InadmissibleDescriptor("Sp4 labels are only tabulated in characteristic 3")
        return ["J2J1J1", "J2J2"]
    if family in ("G2", "2G2"):
        return ["A1t3", "other"] if p == 3 else ["other"]
    if family == "PGammaL2":
        field = ["field"] if prime_power(param)[1] % 3 == 0 else []
        return class_labels("PSL2", param) + field
    raise InadmissibleDescriptor(f"unknown family {family!r}")


def emit_exception_tables(q_max: int) -> list[TableRow]:
    """Every (family, parameter, label) up to q_max with a false verdict, in a stable order."""
    if q_max > 2**10:
        raise ValueError("q_max is limited to 2^10")
    rows = []
    for fam in ("PSL2", "PSL3", "PSU3", "PGL3", "PGU3", "PSL4", "PSU4", "G2", "2G2"):
        for q in _prime_powers(q_max):
            for lab in _labels(fam, q):
                d = ClassDescriptor(fam, q, lab)
                if exclusion(d):
                    continue
                v = theorem1_verdict(d)
                if v.excluded or (v.centralizes_involution and v.normalizes_2subgroup):
                    continue
                rows.append(TableRow(fam, q, lab, v.centralizes_involution, v.normalizes_2subgroup,
                                     v.provenance, v.flag or ""))
    for n in range(5, ALT_TABLE_LIMIT + 1):
        for c in range(1, n // 3 + 1):
            d = ClassDescriptor("Alt", n, alt_label(c))
            v = theorem1_verdict(d)
            if not v.centralizes_involution:
                rows.append(TableRow("Alt", n, d.label, False, True, v.provenance))
    rows.append(TableRow("J3", 0, "3B", False, True, "J3 class 3B", NOT_DESK_VERIFIABLE))
    return rows


FIELDS = ("family", "parameter", "label", "centralizes", "normalizes", "provenance", "flag")


def _text(v) -> str:
    return ("true" if v else "false") if isinstance(v, bool) else str(v)


def render_table(rows: list[TableRow], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=1, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(FIELDS)
        for r in rows:
            w.writerow([_text(getattr(r, f)) for f in FIELDS])
        return buf.getvalue()
    if fmt == "md":
        out = ["| " + " | ".join(FIELDS) + " |", "|" + "---|" * len(FIELDS)]
        for r in rows:
            out.append("| " + " | ".join(_text(getattr(r, f)) for f in FIELDS) + " |")
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_table_json(text: str) -> list[TableRow]:
    return [TableRow(**row) for row in json.loads(text)]
