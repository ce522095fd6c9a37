"""Named permutation groups, generator bundles and the on-disk cache."""

from __future__ import annotations

import hashlib
import json
import os
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from filelock import FileLock

from . import matrixgroups as mg
from .finitefield import field_of_order, prime_power
from .permcore import (DEGREE_CAP, Permutation, StabilizerChain, build_chain, perm_order)
from .permcore.chain import INDEX, make_level

CACHE_VERSION = 1
CACHE_ENV = "ORDER3_CACHE_DIR"


class UnknownGroup(ValueError):
    pass


class GroupTooLarge(RuntimeError):
    pass


class BundleError(ValueError):
    pass


class OrderMismatch(BundleError):
    def __init__(self, computed: int, claimed: int):
        super().__init__(f"chain order {computed} != claimed order {claimed}")
        self.computed = computed
        self.claimed = claimed


class CacheIntegrityError(RuntimeError):
    pass


# -- names ----------------------------------------------------------------------

@dataclass(frozen=True)
class GroupName:
    family: str                 # Alt Sym PSL PGL PSU PGU Sp4 PGammaL2 FrobA4 Wreath Bundle
    n: int | None = None
    q: int | None = None
    path: str | None = None

    def __str__(self):
        f = self.family
        if f in ("Alt", "Sym"):
            return f"{f}({self.n})"
        if f in ("PSL", "PGL", "PSU", "PGU"):
            return f"{f}({self.n},{self.q})"
        if f in ("Sp4", "PGammaL2"):
            return f"{f}({self.q})"
        if f == "Wreath":
            return "Wreath(PSL2(16),Sym2)"
        if f == "Bundle":
            return f"Bundle({self.path})"
        return f

    @property
    def key(self) -> str:
        return re.sub(r"[^A-Za-z0-9]+", "_", str(self)).strip("_")


_PATTERNS = [
    (r"(Alt|Sym)\((\d+)\)", lambda m: GroupName(m[1], n=int(m[2]))),
    (r"(PSL|PGL|PSU|PGU)\((\d+),(\d+)\)", lambda m: GroupName(m[1], n=int(m[2]), q=int(m[3]))),
    (r"Sp4\((\d+)\)", lambda m: GroupName("Sp4", n=4, q=int(m[1]))),
    (r"P(?:Gamma|Γ)L2\(8\)", lambda m: GroupName("PGammaL2", n=2, q=8)),
    (r"FrobA4", lambda m: GroupName("FrobA4")),
    (r"Wreath\(PSL2\(16\),Sym2\)", lambda m: GroupName("Wreath", n=2, q=16)),
]


def parse_name(text: str) -> GroupName:
    s = text.strip()
    m = re.fullmatch(r"Bundle\((.+)\)", s)
    if m:
        return GroupName("Bundle", path=m[1].strip())
    compact = re.sub(r"\s+", "", s)
    for pat, make in _PATTERNS:
        m = re.fullmatch(pat, compact)
        if m:
            return make(m)
    raise UnknownGroup(f"unknown group name {text!r}")


# -- handles ----------------------------------------------------------------------

@dataclass
class GroupHandle:
    name: str
    generators: list[Permutation]
    degree: int
    chain: StabilizerChain
    family: str | None = None           # symbolic family tag, e.g. "PSL3"
    q: int | None = None
    n: int | None = None
    excluded: str | None = None
    action: mg.PointAction | None = None
    unitary_q: int | None = None        # set when the action is over GF(q^2)
    socle: StabilizerChain | None = None
    extras: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.chain.order

    def matrix_of(self, x) -> mg.Matrix:
        if self.action is None:
            raise ValueError(f"{self.name} carries no matrix action")
        return self.action.matrix_of(x)

    def is_inner(self, x) -> bool:
        """Membership in the socle (the whole group when none is recorded)."""
        return True if self.socle is None else self.socle.contains(x)


def _check_generators(h: GroupHandle):
    for g in h.generators:
        if not h.chain.contains(g):
            raise AssertionError(f"generator of {h.name} fails the membership test")


def _perm(images) -> Permutation:
    return Permutation([int(i) for i in images])


def _cyc(degree, *cycles) -> Permutation:
    return Permutation.from_cycles(cycles, degree)


# -- classical order formulas -----------------------------------------------------

def _prod(it):
    out = 1
    for v in it:
        out *= v
    return out


def sl_order(n, q):
    return q ** (n * (n - 1) // 2) * _prod(q**i - 1 for i in range(2, n + 1))


def su_order(n, q):
    return q ** (n * (n - 1) // 2) * _prod(q**i - (-1) ** i for i in range(2, n + 1))


def sp4_order(q):
    return q**4 * (q**2 - 1) * (q**4 - 1)


def _gcd(a, b):
    import math
    return math.gcd(a, b)


def expected_order(name: GroupName) -> int | None:
    n, q = name.n, name.q
    f = name.family
    if f == "Alt":
        return max(1, _prod(range(1, n + 1)) // 2)
    if f == "Sym":
        return _prod(range(1, n + 1))
    if f == "PSL":
        return sl_order(n, q) // _gcd(n, q - 1)
    if f == "PGL":
        return sl_order(n, q)
    if f == "PSU":
        return su_order(n, q) // _gcd(n, q + 1)
    if f == "PGU":
        return su_order(n, q)
    if f == "Sp4":
        return sp4_order(q)
    if f == "PGammaL2":
        return 3 * sl_order(2, 8)
    if f == "FrobA4":
        return 300
    if f == "Wreath":
        return 2 * (sl_order(2, 16)) ** 2
    return None


EXCLUDED_SOLVABLE = "solvable"
EXCLUDED_DERIVED = "derived subgroup simple"


def exclusion(name: GroupName) -> str | None:
    f, n, q = name.family, name.n, name.q
    if f in ("Alt", "Sym") and n < 5:
        return EXCLUDED_SOLVABLE
    if f in ("PSL", "PGL") and n == 2 and q in (2, 3):
        return EXCLUDED_SOLVABLE
    if f in ("PSU", "PGU") and n == 3 and q == 2:
        return EXCLUDED_SOLVABLE
    if f == "Sp4" and q == 2:
        return EXCLUDED_DERIVED
    return None


def _family_tag(name: GroupName) -> str | None:
    f, n = name.family, name.n
    if f in ("Alt", "Sym"):
        return f
    if f in ("PSL", "PGL", "PSU", "PGU"):
        return f"{f}{n}"
    if f == "Sp4":
        return "Sp4"
    if f == "PGammaL2":
        return "PGammaL2"
    return None


# -- constructors -------------------------------------------------------------------

def _alt_sym(name: GroupName) -> list[Permutation]:
    n = name.n
    if n < 1:
        raise UnknownGroup("degree must be positive")
    if n > DEGREE_CAP:
        raise GroupTooLarge(f"degree {n} exceeds {DEGREE_CAP}")
    if name.family == "Sym":
        if n == 1:
            return []
        return [_cyc(n, (0, 1)), _cyc(n, tuple(range(n)))] if n > 2 else [_cyc(n, (0, 1))]
    if n < 3:
        return []
    if n == 3:
        return [_cyc(n, (0, 1, 2))]
    if n % 2:
        return [_cyc(n, (0, 1, 2)), _cyc(n, tuple(range(n)))]
    return [_cyc(n, (0, 1, 2)), _cyc(n, tuple(range(1, n)))]


VECTOR_CAP = 1 << 24


def _require_small(name, degree, vectors):
    if degree > DEGREE_CAP or vectors > VECTOR_CAP:
        raise GroupTooLarge(f"{name} needs degree {degree}, beyond the desk caps; "
                            "supply a generator bundle or use the symbolic tier")


def _classical(name: GroupName):
    f, n, q = name.family, name.n, name.q
    try:
        prime_power(q)
    except ValueError as e:
        raise UnknownGroup(str(e)) from None
    unitary = f in ("PSU", "PGU")
    if f == "Sp4":
        F = field_of_order(q)
        _require_small(name, q**4 - 1, q**4)
        action = mg.vector_action(F, 4)
        gens = mg.sp_generators(4, q)
        return gens, action, None, mg.sp_generators(4, q)
    if unitary:
        _require_small(name, (q**3 + 1) * (q**2 + 1 if n == 4 else 1), (q * q) ** n)
        F = mg._ext_field(q)
        action = mg.projective_action(F, n, hermitian_q=q)
        inner = mg.su_generators(n, q)
        gens = inner + ([mg.gu_generators(n, q)[-1]] if f == "PGU" else [])
        return gens, action, q, inner
    _require_small(name, (q**n - 1) // (q - 1), q**n)
    F = field_of_order(q)
    action = mg.projective_action(F, n)
    inner = mg.sl_generators(n, q)
    gens = inner + (mg.gl_generators(n, q)[len(inner):] if f == "PGL" else [])
    return gens, action, None, inner


def _kernel(name: GroupName, mats) -> int:
    form = {"PSU": "hermitian", "PGU": "hermitian", "Sp4": "alternating"}.get(name.family)
    return mg.scalar_kernel_order(mats, form, name.q)


def _construct_classical(name: GroupName) -> GroupHandle:
    gens, action, uq, inner = _classical(name)
    if action.degree > DEGREE_CAP:
        raise GroupTooLarge(f"{name}: degree {action.degree} exceeds {DEGREE_CAP}")
    perms = mg.projectivize(gens, action)
    chain = build_chain(perms, action.degree)
    if name.family == "Sp4":
        # faithful action on vectors: the matrix group itself
        expected = sp4_order(name.q)
    else:
        expected = expected_order(name)
        # matrix group order / scalars must equal the permutation order
        matrix_order = (sl_order if name.family in ("PSL", "PGL") else su_order)(name.n, name.q)
        if name.family in ("PGL", "PGU"):
            matrix_order *= (name.q - 1) if name.family == "PGL" else (name.q + 1)
        kern = _kernel(name, gens)
        if matrix_order != kern * chain.order:
            raise AssertionError(f"{name}: {matrix_order} != {kern} * {chain.order}")
    if chain.order != expected:
        raise AssertionError(f"{name}: chain order {chain.order} != formula {expected}")
    socle = None
    if name.family in ("PGL", "PGU") and len(gens) > len(inner):
        socle = build_chain(mg.projectivize(inner, action), action.degree)
    return GroupHandle(str(name), perms, action.degree, chain, family=_family_tag(name),
                       q=name.q, n=name.n, action=action, unitary_q=uq, socle=socle)


def _construct_gamma() -> GroupHandle:
    name = GroupName("PGammaL2", n=2, q=8)
    F = field_of_order(8)
    action = mg.projective_action(F, 2)
    inner = mg.projectivize(mg.sl_generators(2, 8), action)
    twist = mg.frobenius_twist_perm(8)
    socle = build_chain(inner, action.degree)
    for g in inner:
        if not socle.contains(g ** twist):
            raise AssertionError("the twist does not normalize PSL2(8)")
    chain = build_chain(inner + [twist], action.degree)
    if chain.order != expected_order(name):
        raise AssertionError(f"PGammaL2(8) order {chain.order}")
    return GroupHandle(str(name), inner + [twist], action.degree, chain, family="PGammaL2",
                       q=8, n=2, action=action, socle=socle, extras={"twist": twist})


def _construct_frob_a4() -> GroupHandle:
    """Z5^2 on 25 points (v = a + 5b), extended by Alt4 on 4 extra points.

    Alt4 acts on Z5^2 through its quotient of order 3, the 3-cycle acting by
    [[0, -1], [1, -1]] on row vectors; the four-group acts trivially there, so
    the extra points make the action faithful.
    """
    d = 29
    vecs = [(a, b) for b in range(5) for a in range(5)]
    idx = {v: i for i, v in enumerate(vecs)}

    def affine(f, alt):
        img = [idx[f(v)] for v in vecs] + [25 + alt[i] for i in range(4)]
        return _perm(img)

    ident4 = [0, 1, 2, 3]
    t1 = affine(lambda v: ((v[0] + 1) % 5, v[1]), ident4)
    t2 = affine(lambda v: (v[0], (v[1] + 1) % 5), ident4)
    # (a, b) @ [[0, -1], [1, -1]] = (b, -a - b)
    c = affine(lambda v: (v[1] % 5, (-v[0] - v[1]) % 5), [1, 2, 0, 3])
    k = affine(lambda v: v, [1, 0, 3, 2])
    gens = [t1, t2, c, k]
    chain = build_chain(gens, d)
    if chain.order != 300:
        raise AssertionError(f"FrobA4 order {chain.order}")
    return GroupHandle("FrobA4", gens, d, chain, family="FrobA4")


def _construct_wreath() -> GroupHandle:
    base = construct("PSL(2,16)")
    m = base.degree
    d = 2 * m

    def left(g):
        return _perm(list(g.images) + [m + i for i in range(m)])

    def right(g):
        return _perm(list(range(m)) + [m + i for i in g.images])

    swap = _perm([m + i for i in range(m)] + list(range(m)))
    gens = [left(g) for g in base.generators] + [swap]
    chain = build_chain(gens, d)
    if chain.order != expected_order(GroupName("Wreath")):
        raise AssertionError(f"wreath order {chain.order}")
    from .permcore.search import OrderIs, element_search
    x = element_search(base.chain, OrderIs(3), "first")
    y = _perm(list(x.images) + [m + i for i in x.images])
    if not (swap * y == y * swap):
        raise AssertionError("the diagonal element does not commute with the swap")
    if not chain.contains(y) or perm_order(y) != 3:
        raise AssertionError("diagonal element malformed")
    return GroupHandle("Wreath(PSL2(16),Sym2)", gens, d, chain, family="Wreath", q=16, n=2,
                       extras={"swap": swap, "diagonal": y, "component": x,
                               "right": [right(g) for g in base.generators]})


def construct(name) -> GroupHandle:
    """Build (deterministically) the named group with a verified chain."""
    gname = name if isinstance(name, GroupName) else parse_name(str(name))
    f = gname.family
    if f == "Bundle":
        return ingest_bundle(gname.path)
    if f in ("Alt", "Sym"):
        gens = _alt_sym(gname)
        chain = build_chain(gens, gname.n)
        if chain.order != expected_order(gname):
            raise AssertionError(f"{gname}: order {chain.order}")
        h = GroupHandle(str(gname), gens, gname.n, chain, family=f, n=gname.n)
        if f == "Sym":
            h.socle = construct(f"Alt({gname.n})").chain
    elif f in ("PSL", "PGL", "PSU", "PGU", "Sp4"):
        if f in ("PSL", "PGL") and gname.n not in (2, 3, 4):
            raise UnknownGroup(f"unsupported dimension in {gname}")
        if f in ("PSU", "PGU") and gname.n not in (3, 4):
            raise UnknownGroup(f"unsupported dimension in {gname}")
        h = _construct_classical(gname)
    elif f == "PGammaL2":
        h = _construct_gamma()
    elif f == "FrobA4":
        h = _construct_frob_a4()
    elif f == "Wreath":
        h = _construct_wreath()
    else:
        raise UnknownGroup(str(gname))
    h.excluded = exclusion(gname)
    _check_generators(h)
    return h


# -- bundles ------------------------------------------------------------------------

@dataclass
class GeneratorBundle:
    name: str
    degree: int
    generators: list[list[int]]
    order: int | None = None
    labels: list[tuple[str, list[int]]] = field(default_factory=list)


def parse_bundle(text: str) -> GeneratorBundle:
    """Line format: ``name``, ``degree``, optional ``order``, ``gen`` lines and
    optional ``label <class-label> <images>`` lines; ``#`` starts a comment."""
    name = degree = order = None
    gens, labels = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "name":
                name = rest
            elif head == "degree":
                degree = int(rest)
            elif head == "order":
                order = int(rest)
            elif head == "gen":
                gens.append([int(t) for t in rest.split()])
            elif head == "label":
                lab, _, imgs = rest.partition(" ")
                labels.append((lab, [int(t) for t in imgs.split()]))
            else:
                raise BundleError(f"line {lineno}: unknown keyword {head!r}")
        except ValueError as e:
            if isinstance(e, BundleError):
                raise
            raise BundleError(f"line {lineno}: {e}") from None
    if name is None or degree is None:
        raise BundleError("bundle needs 'name' and 'degree' lines")
    if degree < 1 or degree > DEGREE_CAP:
        raise BundleError(f"degree {degree} outside 1..{DEGREE_CAP}")
    for imgs in gens + [im for _, im in labels]:
        if len(imgs) != degree or sorted(imgs) != list(range(degree)):
            raise BundleError("generator images do not form a bijection of the declared degree")
    return GeneratorBundle(name, degree, gens, order, labels)


_BUNDLE_FAMILIES = [
    (r"G2\((\d+)\)", "G2"),
    (r"2G2\((\d+)\)", "2G2"),
    (r"J3", "J3"),
    (r"J3:2", "J3:2"),
]


def ingest_bundle(path) -> GroupHandle:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise BundleError(f"cannot read {path}: {e}") from None
    b = parse_bundle(text)
    gens = [Permutation(g) for g in b.generators]
    chain = build_chain(gens, b.degree)
    if b.order is not None and chain.order != b.order:
        raise OrderMismatch(chain.order, b.order)
    family = q = None
    for pat, fam in _BUNDLE_FAMILIES:
        m = re.fullmatch(pat, b.name.replace(" ", ""))
        if m:
            family = fam
            q = int(m[1]) if m.groups() else None
    labels = {}
    for lab, imgs in b.labels:
        x = Permutation(imgs)
        if not chain.contains(x):
            raise BundleError(f"labelled element {lab} is not in the group")
        labels[lab] = x
    h = GroupHandle(f"Bundle({path})", gens, b.degree, chain, family=family, q=q,
                    extras={"declared_name": b.name, "labels": labels,
                            "sha256": hashlib.sha256(text.encode()).hexdigest()})
    _check_generators(h)
    return h


def write_bundle(path, name: str, generators, order: int | None = None, labels=None):
    gens = list(generators)
    lines = [f"name {name}", f"degree {gens[0].degree}"]
    if order is not None:
        lines.append(f"order {order}")
    lines += ["gen " + " ".join(map(str, g.images)) for g in gens]
    for lab, x in (labels or {}).items():
        lines.append(f"label {lab} " + " ".join(map(str, x.images)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- cache --------------------------------------------------------------------------

_MAGIC = b"O3CH"
_HEADER = struct.Struct("<4sII32s")    # magic, version, payload length, sha256


def cache_root(cache_dir=None) -> Path:
    """Flag beats environment variable beats the default location."""
    if cache_dir:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "order3"


def _cache_key(h_or_name) -> str:
    if isinstance(h_or_name, GroupHandle):
        name = h_or_name.name
        sha = h_or_name.extras.get("sha256")
    else:
        name, sha = str(h_or_name), None
    gname = parse_name(name)
    key = gname.key
    if gname.family == "Bundle":
        if sha is None:
            sha = hashlib.sha256(Path(gname.path).read_bytes()).hexdigest()
        key = "Bundle_" + sha[:16]
    return key


def _group_dir(root: Path, key: str, version: int = CACHE_VERSION) -> Path:
    return root / str(version) / key


def _encode_chain(chain: StabilizerChain) -> bytes:
    base = np.array(chain.base, dtype=np.int32)
    strong = chain.strong_generators
    S = np.stack(strong).astype(np.int32) if strong else np.zeros((0, chain.degree), np.int32)
    meta = struct.pack("<III", chain.degree, len(base), len(S))
    return meta + base.tobytes() + S.tobytes()


def _decode_chain(payload: bytes) -> StabilizerChain:
    degree, nb, ns = struct.unpack_from("<III", payload)
    off = 12
    base = np.frombuffer(payload, dtype=np.int32, count=nb, offset=off)
    off += 4 * nb
    S = np.frombuffer(payload, dtype=np.int32, count=ns * degree, offset=off).reshape(ns, degree)
    S = S.astype(INDEX)
    levels = []
    for i, b in enumerate(base.tolist()):
        keep = [s for s in S if all(s[c] == c for c in base[:i])]
        gens = np.stack(keep) if keep else np.empty((0, degree), dtype=INDEX)
        levels.append(make_level(int(b), gens, degree))
    return StabilizerChain(degree, levels)


def cache_store(handle: GroupHandle, classes=None, cache_dir=None) -> Path:
    root = cache_root(cache_dir)
    d = _group_dir(root, _cache_key(handle))
    d.mkdir(parents=True, exist_ok=True)
    with FileLock(str(d / ".lock")):
        payload = _encode_chain(handle.chain)
        header = _HEADER.pack(_MAGIC, CACHE_VERSION, len(payload), hashlib.sha256(payload).digest())
        tmp = d / "chain.bin.tmp"
        tmp.write_bytes(header + payload)
        tmp.replace(d / "chain.bin")
        if classes is not None:
            body = json.dumps({"version": CACHE_VERSION, "name": handle.name,
                               "order": handle.order, "classes": classes},
                              sort_keys=True, indent=1)
            tmpc = d / "classes.json.tmp"
            tmpc.write_text(body, encoding="utf-8")
            tmpc.replace(d / "classes.json")
    return d


def cache_load_chain(name, cache_dir=None) -> StabilizerChain | None:
    """The cached chain, None on a miss; raises CacheIntegrityError on corruption."""
    d = _group_dir(cache_root(cache_dir), _cache_key(name))
    f = d / "chain.bin"
    if not f.exists():
        return None
    raw = f.read_bytes()
    if len(raw) < _HEADER.size:
        raise CacheIntegrityError(f"{f}: truncated header")
    magic, version, length, digest = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise CacheIntegrityError(f"{f}: bad magic")
    if version != CACHE_VERSION:
        return None
    payload = raw[_HEADER.size:]
    if len(payload) != length or hashlib.sha256(payload).digest() != digest:
        raise CacheIntegrityError(f"{f}: checksum mismatch")
    return _decode_chain(payload)


def cache_load_classes(name, cache_dir=None):
    d = _group_dir(cache_root(cache_dir), _cache_key(name))
    f = d / "classes.json"
    if not f.exists():
        return None
    try:
        data = json.loads(f.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CacheIntegrityError(f"{f}: {e}") from None
    if data.get("version") != CACHE_VERSION:
        return None
    return data["classes"]


def cache_load(name, cache_dir=None) -> GroupHandle:
    """Construct the group's metadata, reusing a cached chain when valid.

    A cached chain must contain every generator and have the formula order;
    otherwise it is an integrity failure.
    """
    chain = cache_load_chain(name, cache_dir)
    h = construct(name)
    if chain is None:
        cache_store(h, cache_dir=cache_dir)
        return h
    if chain.order != h.order or chain.degree != h.degree or not all(chain.contains(g) for g in h.generators):
        raise CacheIntegrityError(f"cached chain for {name} does not match the group")
    h.chain = chain
    return h
