"""order3 command line: construct, check, predict, crosscheck and the fixed reports.

Exit codes: 0 everything passed, 1 a verdict mismatch or failed check,
2 usage errors, inadmissible input or resource limits.  Reports go to stdout
and are byte-stable; timings go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, field

from . import groupfactory as gf
from . import lieformulas as lf
from .classify import ClassRecord, ExcludedGroup, order3_class_records
from .crosscheck import centralizer_orders_for, crosscheck
from .permcore.search import EnumerationRefused, check_cap, default_threads
from .robinson import BoundMismatch, BoundViolated, DegreeDataError, check_bound, load_degrees

log = logging.getLogger("order3")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
REPORT_SCHEMA = gf.CACHE_VERSION


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    group: dict = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"schema": REPORT_SCHEMA, "command": self.command, "group": self.group,
                "rows": self.rows, "checks": self.checks, "notes": self.notes,
                "passed": self.passed}

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        return cls(d["command"], d["group"], d["rows"], d["checks"], d["notes"])

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=1, ensure_ascii=False) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            cols = _columns(self.rows)
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for r in self.rows:
                w.writerow([_cell(r.get(c)) for c in cols])
            return buf.getvalue()
        out = [f"command: {self.command}"]
        out += [f"{k}: {_cell(v)}" for k, v in self.group.items()]
        if self.rows:
            cols = _columns(self.rows)
            out.append("")
            out.append("| " + " | ".join(cols) + " |")
            out.append("|" + "---|" * len(cols))
            out += ["| " + " | ".join(_cell(r.get(c)) for c in cols) + " |" for r in self.rows]
        if self.notes:
            out.append("")
            out += [f"note: {n}" for n in self.notes]
        if self.checks:
            out.append("")
            out += [f"check {k}: {'pass' if v else 'FAIL'}" for k, v in self.checks.items()]
            out.append(f"result: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(out) + "\n"


def _columns(rows):
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    return cols


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


# -- shared plumbing ----------------------------------------------------------------------------------

def _load(args) -> gf.GroupHandle:
    return gf.cache_load(args.name, cache_dir=args.cache_dir)


def _group_meta(h: gf.GroupHandle) -> dict:
    meta = {"name": h.name, "degree": h.degree, "order": h.order}
    if h.excluded:
        meta["excluded"] = h.excluded
    return meta


def _records(h: gf.GroupHandle, args) -> list[ClassRecord]:
    if h.excluded:
        raise ExcludedGroup(f"{h.name} is excluded: {h.excluded}")
    check_cap(h.chain, args.cap)
    cached = gf.cache_load_classes(h.name, cache_dir=args.cache_dir)
    if cached is not None:
        return [ClassRecord.from_json(c) for c in cached]
    recs = order3_class_records(h, cap=args.cap, threads=args.threads)
    gf.cache_store(h, classes=[r.to_json() for r in recs], cache_dir=args.cache_dir)
    return recs


def _record_row(r: ClassRecord) -> dict:
    return {"representative": str(r.representative), "class_size": r.class_size,
            "centralizer_order": r.centralizer_order,
            "centralizes_involution": r.centralizes_involution,
            "normalizes_2subgroup": r.normalizes_2subgroup,
            "centralizer_witness": None if r.centralizer_witness is None else str(r.centralizer_witness),
            "normalizer_witness": None if r.normalizer_witness is None else str(r.normalizer_witness),
            "witness_group_order": r.witness_group_order, "inner": r.inner}


# -- commands -----------------------------------------------------------------------------------------

def cmd_construct(args) -> Report:
    h = _load(args)
    return Report(f"construct {args.name}", _group_meta(h))


def cmd_check(args) -> Report:
    h = _load(args)
    recs = _records(h, args)
    return Report(f"check {args.name}", _group_meta(h), [_record_row(r) for r in recs])


def _descriptor_args(args):
    fam = args.family
    if fam in ("Alt", "Sym"):
        if args.n is None:
            raise UsageError(f"--n is required for {fam}")
        param = args.n
    elif fam in ("J3", "J3:2", "E6"):
        param = 0
    elif fam == "2G2":
        if args.qsq is None:
            raise UsageError("--qsq is required for 2G2")
        param = args.qsq
    else:
        if args.q is None:
            raise UsageError(f"--q is required for {fam}")
        param = args.q
    label = args.cls if args.cls is not None else args.type
    return fam, param, label


def cmd_predict(args) -> Report:
    fam, param, label = _descriptor_args(args)
    if fam == "E6":
        v = lf.E6_RULE
        return Report("predict --family E6", {"family": "E6"},
                      [_verdict_row("E6", 0, "diagonal", v)])
    labels = [label] if label is not None else lf.class_labels(fam, param)
    rows = []
    for lab in labels:
        d = lf.descriptor(fam, param, lab)
        v = lf.theorem1_verdict(d)
        if v.excluded:
            raise lf.InadmissibleDescriptor(f"{fam}({param}) is excluded: {v.excluded}")
        rows.append(_verdict_row(fam, param, d.label, v))
    return Report(f"predict {fam}({param})" + (f" {label}" if label else ""),
                  {"family": fam, "parameter": param}, rows)


def _verdict_row(fam, param, label, v: lf.Verdict) -> dict:
    return {"family": fam, "parameter": param, "label": label,
            "centralizes": v.centralizes_involution, "normalizes": v.normalizes_2subgroup,
            "provenance": v.provenance, "flag": v.flag}


def cmd_crosscheck(args) -> Report:
    h = _load(args)
    recs = _records(h, args)
    res = crosscheck(h, records=recs)
    rows, notes = [], []
    for i, c in enumerate(res.comparisons, 1):
        d, v, r = c.descriptor, c.verdict, c.record
        rows.append({"representative": str(r.representative), "label": None if d is None else d.label,
                     "class_size": r.class_size, "centralizer_order": r.centralizer_order,
                     "centralizes": r.centralizes_involution, "normalizes": r.normalizes_2subgroup,
                     "predicted_centralizes": None if v is None else v.centralizes_involution,
                     "predicted_normalizes": None if v is None else v.normalizes_2subgroup,
                     "match": c.matches})
        notes += [f"class {i} ({rows[-1]['label']}): {msg}" for msg in c.diagnostics]
    rep = Report(f"crosscheck {args.name}", _group_meta(h), rows, {"all classes match": res.passed}, notes)
    if args.unipotent:
        lab = lf.normalize_label(args.unipotent)
        got = centralizer_orders_for(res, lab)
        rep.group[f"{lab} centralizer orders"] = got
        if args.centralizer_orders:
            case = f"{h.family}-{lab}"
            want = sorted(lf.quoted_centralizer_orders(case, h.q), reverse=True)
            rep.group[f"{lab} quoted orders"] = want
            rep.checks[f"{lab} centralizer orders"] = got == want
    return rep


def cmd_gamma_l28(args) -> Report:
    from .special import gamma_l28_report
    r = gamma_l28_report()
    meta = {"name": "PGammaL2(8)", "order": r.order, "involutions": r.involutions,
            "involution classes": r.involution_classes, "four-groups": r.four_groups,
            "four-group classes": r.four_group_classes, "|N(<y>)|": r.normalizer_y,
            "|N(K)|": r.normalizer_k, "|N(P)|": r.normalizer_p,
            "order-3 classes": r.order3_classes,
            "order-3 classes normalizing a 2-group": r.order3_classes_normalizing}
    return Report("gamma-l28", meta, checks=r.checks)


def cmd_counterexamples(args) -> Report:
    from .special import counterexamples_report
    r = counterexamples_report()
    meta = {"FrobA4 order": r.frob_order, "FrobA4 order-3 classes": r.frob_order3_classes,
            "FrobA4 classes up to inversion": r.frob_classes_up_to_inversion,
            "FrobA4 witness 2-group orders": r.frob_witness_orders,
            "wreath order": r.wreath_order, "diagonal element order": r.wreath_diagonal_order}
    return Report("counterexamples", meta, checks=r.checks)


def cmd_robinson(args) -> Report:
    data = load_degrees(args.degrees)
    h = _load(args)
    recs = _records(h, args)
    rep = check_bound(h, data, records=recs)
    return Report(f"robinson {args.name} {args.degrees}", _group_meta(h) | {
        "lower bound": rep.lower_bound, "defect-zero 2-blocks": rep.blocks},
        checks={f"{rep.lower_bound} <= {rep.blocks}": rep.passed})


def cmd_table1(args) -> str:
    return lf.render_table(lf.emit_exception_tables(args.qmax), args.format)


# -- argument parsing -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None, help=f"cache directory (env {gf.CACHE_ENV})")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    common.add_argument("--cap", type=int, default=None, help="largest group order to enumerate")
    common.add_argument("--format", choices=("md", "csv", "json"), default="md")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="order3", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("construct", "check", "crosscheck"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("name")
        if name == "crosscheck":
            s.add_argument("--unipotent", default=None, help="report centralizer orders of this Jordan class")
            s.add_argument("--centralizer-orders", action="store_true",
                           help="compare them with the quoted closed forms")
    s = sub.add_parser("predict", parents=[common])
    s.add_argument("--family", required=True, choices=lf.FAMILIES)
    s.add_argument("--q", type=int)
    s.add_argument("--qsq", type=int, help="q^2 for 2G2")
    s.add_argument("--n", type=int)
    s.add_argument("--class", dest="cls")
    s.add_argument("--type")
    sub.add_parser("gamma-l28", parents=[common])
    sub.add_parser("counterexamples", parents=[common])
    s = sub.add_parser("robinson", parents=[common])
    s.add_argument("name")
    s.add_argument("degrees")
    s = sub.add_parser("table1", parents=[common])
    s.add_argument("--qmax", type=int, default=32)
    return p


COMMANDS = {"construct": cmd_construct, "check": cmd_check, "predict": cmd_predict,
            "crosscheck": cmd_crosscheck, "gamma-l28": cmd_gamma_l28,
            "counterexamples": cmd_counterexamples, "robinson": cmd_robinson, "table1": cmd_table1}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads is None:
        args.threads = default_threads()
    if args.threads < 1:
        err.write("error: --threads must be positive\n")
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        result = COMMANDS[args.command](args)
    except EnumerationRefused as e:
        err.write(f"error: {e}; use `order3 predict` for the symbolic verdicts\n")
        return EXIT_USAGE
    except (gf.UnknownGroup, gf.GroupTooLarge, gf.BundleError, gf.CacheIntegrityError,
            lf.InadmissibleDescriptor, ExcludedGroup, DegreeDataError, BoundMismatch, UsageError,
            ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except BoundViolated as e:
        err.write(f"bound violated: {e}\n")
        return EXIT_FAIL
    if isinstance(result, str):
        out.write(result)
        code = EXIT_OK
    else:
        out.write(result.render(args.format))
        code = EXIT_OK if result.passed else EXIT_FAIL
    err.write(f"[{args.command}: {time.perf_counter() - t0:.2f}s]\n")
    return code


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
