import json
import random
from pathlib import Path

import pytest

from fuzzysp import io
from fuzzysp import predicate as P
from fuzzysp import transformer as T
from fuzzysp.errors import FuzzyError, NotAntitone
from fuzzysp.lattice import (build_chain, build_downset_lattice, builtin_godel, builtin_lukasiewicz,
                             quantale_product, square_with_bounds_quantale, tabulated_nilpotent_chain4)
from fuzzysp.poset import antichain_poset, chain_poset, random_poset

BUNDLES = Path(__file__).resolve().parent.parent / "bundles"

QUANTALES = [builtin_lukasiewicz(5), builtin_godel(build_chain(3)), tabulated_nilpotent_chain4(),
             square_with_bounds_quantale(), quantale_product(builtin_lukasiewicz(2), builtin_godel(build_chain(2))),
             builtin_godel(build_downset_lattice(random_poset(4, 3, 0.4)))]


def again(doc, kind=None, **ctx):
    return io.loads(json.loads(io.dumps(doc)), kind, **ctx)


@pytest.mark.parametrize("q", QUANTALES, ids=lambda q: q.name)
def test_quantale_round_trip(q):
    back = again(io.dump_quantale(q))
    assert back.lattice.elements == q.lattice.elements
    assert back.lattice.leq == q.lattice.leq
    assert back.star_table == q.star_table and back.unit == q.unit
    assert io.dump_quantale(back) == io.dump_quantale(q)
    L = again(io.dump_lattice(q.lattice))
    assert L.leq == q.lattice.leq


@pytest.mark.parametrize("seed", range(10))
def test_bundle_round_trip(seed):
    rng = random.Random(seed)
    q = rng.choice(QUANTALES)
    src = random_poset(seed, rng.randint(1, 5), rng.random(), with_bottom=seed % 2 == 0)
    tgt = random_poset(seed + 100, rng.randint(1, 5), rng.random())
    phi = T.random_transformer(src, tgt, q, rng)
    m = P.random_predicate(src, q, rng, normalized=src.bottom is not None)
    doc = io.dump_bundle(q, src, tgt, phi, m)
    back = again(doc)
    assert back["source"].leq == src.leq and back["source"].bottom == src.bottom
    assert back["target"].leq == tgt.leq
    assert back["predicate"] == m
    assert all(back["transformer"].image(a) == phi.image(a) for a in src)
    assert io.dump_bundle(back["quantale"], back["source"], back["target"], back["transformer"],
                          back["predicate"]) == doc


def test_predicate_with_context_round_trip():
    m = P.eta(chain_poset(3), builtin_lukasiewicz(5), "1")
    back = again(io.dump_predicate(m, context=True))
    assert back == m
    t = T.random_transformer(chain_poset(2), chain_poset(2), builtin_lukasiewicz(5), random.Random(1))
    back = again(io.dump_transformer(t, context=True))
    assert all(back.image(a) == t.image(a) for a in t.source)


def test_shipped_bundles_load():
    b = io.load(BUNDLES / "lukasiewicz-chain2.json")
    assert T.usp(b["transformer"], b["predicate"]).as_list() == ["4", "2"]
    b = io.load(BUNDLES / "boolean-chain2.json")
    assert T.usp(b["transformer"], b["predicate"]).as_list() == ["1", "1"]


def test_path_references_resolve_relative_to_file(tmp_path):
    (tmp_path / "sub").mkdir()
    io.save(io.dump_domain(antichain_poset(["a", "b"])), tmp_path / "sub" / "ab.json")
    io.save({"kind": "predicate", "domain": "ab.json", "quantale": {"kind": "quantale", "builtin": "lukasiewicz", "m": 2},
             "values": {"a": "2", "b": "1"}}, tmp_path / "sub" / "m.json")
    m = io.load(tmp_path / "sub" / "m.json")
    assert m.as_dict() == {"a": "2", "b": "1"}


def test_default_image(tmp_path):
    doc = {"kind": "bundle", "quantale": {"kind": "quantale", "builtin": "lukasiewicz", "m": 3},
           "source": {"kind": "domain", "elements": ["x", "y"], "covers": [["x", "y"]], "bottom": "x"},
           "transformer": {"kind": "transformer", "images": {"y": {"x": "3", "y": "1"}},
                           "default": {"x": "2", "y": "0"}},
           "predicate": {"kind": "predicate", "values": {"x": "3", "y": "3"}}}
    b = io.loads(doc)
    assert b["transformer"].image("x").as_list() == ["2", "0"]
    assert T.usp(b["transformer"], b["predicate"]).as_list() == ["3", "1"]


@pytest.mark.parametrize("doc, fragment", [
    ({"kind": "widget"}, "unknown document kind"),
    ({"kind": "quantale", "builtin": "tropical"}, "unknown builtin quantale"),
    ({"kind": "lattice", "elements": ["a", "b", "c", "d"],
      "covers": [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]}, "join-exists"),
    ({"kind": "lattice", "elements": ["a", "b"], "leq": [["a", "a"]]}, "not a lattice (reflexive)"),
    ({"kind": "domain", "elements": ["a", "b"], "covers": [["a", "b"]], "bottom": "b"}, "not below every"),
    ({"kind": "domain", "elements": ["a", "b"], "leq": [["a", "a"], ["b", "b"], ["a", "b"]], "bottom": "b"},
     "not the least element"),
    ({"kind": "domain", "elements": ["a", "b"], "leq": [["a", "a"], ["b", "b"], ["a", "b"], ["b", "a"]]},
     "antisymmetric"),
    ({"kind": "predicate", "values": {}}, "needs a domain and a quantale"),
    ({"kind": "bundle", "source": "nowhere.json"}, "missing 'quantale'"),
    ({"kind": "bundle", "quantale": "nowhere.json", "source": {}}, "nowhere.json"),
    ({"kind": "bundle", "quantale": 7, "source": {}}, "expected a quantale object"),
])
def test_format_errors(doc, fragment, tmp_path):
    with pytest.raises(FuzzyError) as err:
        io.loads(doc, base=tmp_path)
    assert fragment in str(err.value)


def test_unreadable_files(tmp_path):
    with pytest.raises(io.FormatError):
        io.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(io.FormatError):
        io.load(bad)


def test_domain_errors_surface():
    with pytest.raises(NotAntitone) as err:
        io.load(BUNDLES / "not-antitone.json")
    assert err.value.pair is not None
