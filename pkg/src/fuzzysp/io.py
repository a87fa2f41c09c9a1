"""JSON instance files.

Every document is an object with a ``kind`` field.  Elements are referred to
by name.  Wherever a document needs another one (a predicate needs its
domain, a transformer its quantale) the value is either an inline object or
a path string, resolved relative to the referring file.

lattice
    ``elements`` plus ``covers`` (closure taken on load) or ``leq`` (the full
    relation, checked as given); or ``builtin: "chain"`` with ``size``.
quantale
    ``lattice``, ``star`` (rows in element order), ``unit``; or ``builtin``
    one of ``lukasiewicz`` (with ``m``), ``godel`` (with ``lattice``),
    ``product`` (with ``factors``).
domain
    ``elements``, ``covers`` and an optional ``bottom`` marker.
predicate
    ``values`` mapping domain names to lattice names, ``normalized`` flag,
    optional ``domain`` and ``quantale``.
transformer
    ``source``, ``target``, ``quantale``; ``images`` mapping source names to
    value maps, optional ``default`` value map for unlisted states.
bundle
    ``quantale``, ``source``, ``target`` (defaults to ``source``),
    ``transformer`` and ``predicate``; nested documents inherit the bundle's
    domains and quantale.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import FuzzyError
from .lattice import (FiniteLattice, Quantale, build_chain, builtin_godel, builtin_lukasiewicz,
                      make_quantale, quantale_product, verify_lattice)
from .poset import DomainPoset, verify_domain
from .predicate import Predicate
from .transformer import StateTransformer

FORMAT_VERSION = 1


class FormatError(FuzzyError, ValueError):
    pass


class _Loader:
    def __init__(self, base: Path):
        self.base = base

    def resolve(self, ref: Any, kind: str) -> tuple[dict, "_Loader"]:
        if isinstance(ref, str):
            path = (self.base / ref).resolve()
            try:
                doc = json.loads(path.read_text())
            except FileNotFoundError:
                raise FormatError(f"unresolved reference {ref!r}") from None
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: {exc}") from None
            loader = _Loader(path.parent)
        elif isinstance(ref, dict):
            doc, loader = ref, self
        else:
            raise FormatError(f"expected a {kind} object or path, got {type(ref).__name__}")
        got = doc.get("kind", kind)
        if got != kind:
            raise FormatError(f"expected a {kind} document, found {got!r}")
        return doc, loader

    def lattice(self, ref) -> FiniteLattice:
        doc, ld = self.resolve(ref, "lattice")
        if "builtin" in doc:
            if doc["builtin"] != "chain":
                raise FormatError(f"unknown builtin lattice {doc['builtin']!r}")
            return build_chain(int(doc["size"]))
        elements = [str(e) for e in _need(doc, "elements")]
        if "leq" in doc:
            rep = verify_lattice(elements, [tuple(p) for p in doc["leq"]])
            if not rep.ok:
                law, w = rep.failures[0]
                raise FormatError(f"not a lattice ({law}): {w}")
            return rep.lattice
        return FiniteLattice.from_pairs(elements, [tuple(p) for p in doc.get("covers", [])])

    def quantale(self, ref) -> Quantale:
        doc, ld = self.resolve(ref, "quantale")
        b = doc.get("builtin")
        if b == "lukasiewicz":
            return builtin_lukasiewicz(int(_need(doc, "m")))
        if b == "godel":
            return builtin_godel(ld.lattice(_need(doc, "lattice")))
        if b == "product":
            factors = [ld.quantale(f) for f in _need(doc, "factors")]
            if len(factors) < 2:
                raise FormatError("a product needs at least two factors")
            q = factors[0]
            for f in factors[1:]:
                q = quantale_product(q, f)
            return q
        if b is not None:
            raise FormatError(f"unknown builtin quantale {b!r}")
        L = ld.lattice(_need(doc, "lattice"))
        return make_quantale(L, _need(doc, "star"), str(_need(doc, "unit")), doc.get("name", "tabulated"))

    def domain(self, ref) -> DomainPoset:
        doc, ld = self.resolve(ref, "domain")
        elements = [str(e) for e in _need(doc, "elements")]
        if "leq" in doc:
            rep = verify_domain(elements, [tuple(p) for p in doc["leq"]])
            if not rep.ok:
                law, w = rep.failures[0]
                raise FormatError(f"not a partial order ({law}): {w}")
            p = rep.poset
            if doc.get("bottom") is not None and p.bottom != p.index(str(doc["bottom"])):
                raise FormatError(f"{doc['bottom']!r} is not the least element")
            return p
        return DomainPoset.from_pairs(elements, [tuple(p) for p in doc.get("covers", [])],
                                      bottom=doc.get("bottom"))

    def predicate(self, ref, domain=None, quantale=None) -> Predicate:
        doc, ld = self.resolve(ref, "predicate")
        if "domain" in doc:
            domain = ld.domain(doc["domain"])
        if "quantale" in doc:
            quantale = ld.quantale(doc["quantale"])
        if domain is None or quantale is None:
            raise FormatError("predicate needs a domain and a quantale")
        return Predicate.from_mapping(domain, quantale, _need(doc, "values"),
                                      normalized=bool(doc.get("normalized", False)))

    def transformer(self, ref, source=None, target=None, quantale=None) -> StateTransformer:
        doc, ld = self.resolve(ref, "transformer")
        if "source" in doc:
            source = ld.domain(doc["source"])
        if "target" in doc:
            target = ld.domain(doc["target"])
        elif target is None:
            target = source
        if "quantale" in doc:
            quantale = ld.quantale(doc["quantale"])
        if source is None or target is None or quantale is None:
            raise FormatError("transformer needs source, target and quantale")
        images = {}
        for a, vals in _need(doc, "images").items():
            source.index(str(a))
            images[str(a)] = Predicate.from_mapping(target, quantale, vals)
        default = doc.get("default")
        if default is not None:
            default = Predicate.from_mapping(target, quantale, default)
        return StateTransformer(source, target, quantale, images, default)

    def bundle(self, ref) -> dict:
        doc, ld = self.resolve(ref, "bundle")
        q = ld.quantale(_need(doc, "quantale"))
        src = ld.domain(_need(doc, "source"))
        tgt = ld.domain(doc["target"]) if "target" in doc else src
        out = {"quantale": q, "source": src, "target": tgt}
        if "transformer" in doc:
            out["transformer"] = ld.transformer(doc["transformer"], src, tgt, q)
        if "predicate" in doc:
            out["predicate"] = ld.predicate(doc["predicate"], src, q)
        return out


def _need(doc: dict, key: str):
    try:
        return doc[key]
    except KeyError:
        raise FormatError(f"{doc.get('kind', 'document')} is missing {key!r}") from None


LOADERS = ("lattice", "quantale", "domain", "predicate", "transformer", "bundle")


def load(path: str | Path, kind: str | None = None, **context):
    """Load a document from disk; ``kind`` defaults to the file's own ``kind`` field."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise FormatError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return loads(doc, kind, base=path.parent, **context)


def loads(doc: dict, kind: str | None = None, base: str | Path = ".", **context):
    kind = kind or doc.get("kind")
    if kind not in LOADERS:
        raise FormatError(f"unknown document kind {kind!r}")
    return getattr(_Loader(Path(base)), kind)(doc, **context)


# -- writers ------------------------------------------------------------------

def dump_lattice(L: FiniteLattice) -> dict:
    return {"kind": "lattice", "elements": list(L.elements),
            "covers": [[L.name(a), L.name(b)] for a, b in L.covers()]}


def dump_quantale(q: Quantale) -> dict:
    L = q.lattice
    return {"kind": "quantale", "name": q.name, "lattice": dump_lattice(L),
            "star": [[L.name(x) for x in row] for row in q.star_table], "unit": L.name(q.unit)}


def dump_domain(p: DomainPoset) -> dict:
    doc = {"kind": "domain", "elements": list(p.elements),
           "covers": [[p.name(a), p.name(b)] for a, b in p.covers()]}
    if p.bottom is not None:
        doc["bottom"] = p.name(p.bottom)
    return doc


def dump_predicate(m: Predicate, context: bool = False) -> dict:
    doc = {"kind": "predicate", "normalized": m.normalized, "values": m.as_dict()}
    if context:
        doc["domain"] = dump_domain(m.domain)
        doc["quantale"] = dump_quantale(m.quantale)
    return doc


def dump_transformer(phi: StateTransformer, context: bool = False) -> dict:
    doc: dict = {"kind": "transformer"}
    if context:
        doc.update(source=dump_domain(phi.source), target=dump_domain(phi.target),
                   quantale=dump_quantale(phi.quantale))
    doc["images"] = {phi.source.name(a): img.as_dict() for a, img in sorted(phi.images.items())}
    if phi.default is not None:
        doc["default"] = phi.default.as_dict()
    return doc


def dump_bundle(quantale: Quantale, source: DomainPoset, target: DomainPoset | None = None,
                transformer: StateTransformer | None = None, predicate: Predicate | None = None) -> dict:
    doc: dict = {"kind": "bundle", "format": FORMAT_VERSION, "quantale": dump_quantale(quantale),
                 "source": dump_domain(source)}
    if target is not None and target != source:
        doc["target"] = dump_domain(target)
    if transformer is not None:
        doc["transformer"] = dump_transformer(transformer)
    if predicate is not None:
        doc["predicate"] = dump_predicate(predicate)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save(doc: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc))
    return path
