import json

import numpy as np
import pytest

from order3 import groupfactory as gf
from order3.permcore import Permutation

from conftest import group
from oracles import CLASS_DATA, ORDERS


@pytest.mark.parametrize("text,family,n,q", [
    ("Alt(7)", "Alt", 7, None), ("Sym(6)", "Sym", 6, None), ("PSL(3, 4)", "PSL", 3, 4),
    ("PGU(3,8)", "PGU", 3, 8), ("Sp4(3)", "Sp4", 4, 3), ("PΓL2(8)", "PGammaL2", 2, 8),
    ("PGammaL2(8)", "PGammaL2", 2, 8), ("FrobA4", "FrobA4", None, None),
])
def test_parse_name(text, family, n, q):
    g = gf.parse_name(text)
    assert (g.family, g.n, g.q) == (family, n, q)
    assert gf.parse_name(str(g)) == g


@pytest.mark.parametrize("text", ["PSL(3)", "Foo(2)", "PSL(2,6)", "Sp6(2)", ""])
def test_unknown_names(text):
    with pytest.raises((gf.UnknownGroup, ValueError)):
        gf.construct(text)


@pytest.mark.parametrize("name", ["PSL(2,4)", "PSL(2,9)", "PSL(2,25)", "PSL(2,27)", "PSL(3,3)",
                                  "PSL(3,4)", "PGL(3,4)", "Sp4(2)", "Sp4(3)"])
def test_orders_against_formula_table(name):
    assert group(name).order == ORDERS[name]
    assert gf.expected_order(gf.parse_name(name)) == ORDERS[name]


@pytest.mark.parametrize("name", sorted(CLASS_DATA))
def test_orders_against_class_data(name):
    assert group(name).order == CLASS_DATA[name][0]


def test_construction_is_deterministic():
    a, b = gf.construct("PSU(3,3)"), gf.construct("PSU(3,3)")
    assert [g.images for g in a.generators] == [g.images for g in b.generators]
    assert a.chain.base == b.chain.base


@pytest.mark.parametrize("name,why", [("Sp4(2)", gf.EXCLUDED_DERIVED), ("PSU(3,2)", gf.EXCLUDED_SOLVABLE),
                                      ("PSL(2,3)", gf.EXCLUDED_SOLVABLE), ("PSL(2,2)", gf.EXCLUDED_SOLVABLE),
                                      ("PSL(3,4)", None), ("Alt(5)", None)])
def test_exclusions(name, why):
    assert gf.construct(name).excluded == why


def test_wreath():
    w = gf.construct("Wreath(PSL2(16),Sym2)")
    assert w.order == ORDERS["Wreath(PSL2(16),Sym2)"]
    y, swap = w.extras["diagonal"], w.extras["swap"]
    assert swap * y == y * swap


def _a5_gens():
    return [Permutation.parse("(0 1 2 3 4)", 5), Permutation.parse("(0 1 2)", 5)]


def test_bundle_round_trip(tmp_path):
    p = tmp_path / "a5.txt"
    gf.write_bundle(p, "A5", _a5_gens(), order=60, labels={"3A": Permutation.parse("(0 1 2)", 5)})
    h = gf.construct(f"Bundle({p})")
    assert h.order == 60 and h.extras["declared_name"] == "A5"
    assert "3A" in h.extras["labels"]


def test_bundle_wrong_order(tmp_path):
    p = tmp_path / "a5.txt"
    gf.write_bundle(p, "A5", _a5_gens(), order=61)
    with pytest.raises(gf.OrderMismatch) as e:
        gf.ingest_bundle(p)
    assert (e.value.computed, e.value.claimed) == (60, 61)


@pytest.mark.parametrize("body", [
    "degree 3\ngen 1 2 0\n",                          # no name
    "name X\ndegree 3\ngen 1 1 0\n",                  # not a bijection
    "name X\ndegree 3\ngen 1 2\n",                    # wrong length
    "name X\ndegree 3\nfrob 1 2 0\n",                 # unknown keyword
    "name X\ndegree three\n",
    "name X\ndegree 3\ngen 1 2 0\nlabel 3A 0 2 1\n",  # label outside the group
])
def test_bundle_malformed(tmp_path, body):
    p = tmp_path / "b.txt"
    p.write_text(body)
    with pytest.raises(gf.BundleError):
        gf.ingest_bundle(p)


def test_bundle_missing_file(tmp_path):
    with pytest.raises(gf.BundleError):
        gf.ingest_bundle(tmp_path / "nope.txt")


def test_cache_round_trip(tmp_path):
    h = gf.construct("PSL(2,8)")
    gf.cache_store(h, classes=[{"rank": 1}], cache_dir=tmp_path)
    chain = gf.cache_load_chain("PSL(2,8)", tmp_path)
    assert chain.order == 504 and chain.base == h.chain.base
    assert gf.cache_load_classes("PSL(2,8)", tmp_path) == [{"rank": 1}]
    again = gf.cache_load("PSL(2,8)", tmp_path)
    assert again.order == 504
    X = again.chain.elements_at(np.arange(10))
    assert (X == h.chain.elements_at(np.arange(10))).all()


def test_cache_miss_and_precedence(tmp_path, monkeypatch):
    assert gf.cache_load_chain("Alt(6)", tmp_path) is None
    assert gf.cache_load_classes("Alt(6)", tmp_path) is None
    monkeypatch.setenv(gf.CACHE_ENV, str(tmp_path / "env"))
    assert gf.cache_root() == tmp_path / "env"
    assert gf.cache_root(tmp_path / "flag") == tmp_path / "flag"


def _chain_file(tmp_path, name):
    h = gf.construct(name)
    d = gf.cache_store(h, classes=[], cache_dir=tmp_path)
    return d


def test_cache_stale_version_is_a_miss(tmp_path):
    d = _chain_file(tmp_path, "Alt(5)")
    raw = bytearray((d / "chain.bin").read_bytes())
    raw[4:8] = (gf.CACHE_VERSION + 7).to_bytes(4, "little")
    (d / "chain.bin").write_bytes(bytes(raw))
    assert gf.cache_load_chain("Alt(5)", tmp_path) is None
    (d / "classes.json").write_text(json.dumps({"version": 0, "classes": []}))
    assert gf.cache_load_classes("Alt(5)", tmp_path) is None


def test_cache_corruption_detected(tmp_path):
    d = _chain_file(tmp_path, "Alt(5)")
    raw = bytearray((d / "chain.bin").read_bytes())
    raw[-1] ^= 0xFF
    (d / "chain.bin").write_bytes(bytes(raw))
    with pytest.raises(gf.CacheIntegrityError):
        gf.cache_load_chain("Alt(5)", tmp_path)
    (d / "chain.bin").write_bytes(b"XX")
    with pytest.raises(gf.CacheIntegrityError):
        gf.cache_load_chain("Alt(5)", tmp_path)
    (d / "classes.json").write_text("{not json")
    with pytest.raises(gf.CacheIntegrityError):
        gf.cache_load_classes("Alt(5)", tmp_path)


def test_cache_wrong_group_detected(tmp_path):
    # a valid chain for Alt(5) placed under the Sym(5) key
    a = gf.cache_store(gf.construct("Alt(5)"), cache_dir=tmp_path)
    s = a.parent / gf.parse_name("Sym(5)").key
    s.mkdir()
    (s / "chain.bin").write_bytes((a / "chain.bin").read_bytes())
    with pytest.raises(gf.CacheIntegrityError):
        gf.cache_load("Sym(5)", tmp_path)
