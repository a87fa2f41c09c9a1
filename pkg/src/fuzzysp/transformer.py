"""State transformers and the strongest-postcondition transformers they induce.

A state transformer sends every source state ``a`` to a predicate over the
target domain: ``phi(a)(b)`` is the truth of ``b`` guaranteed once ``a``
holds.  The strongest postcondition of ``m`` is the least target predicate
``m'`` with ``m'(b) >= m(a) * phi(a)(b)`` for all ``a`` and ``b``.

Two formulas are implemented.  The general one takes, for each ``b``, the
meet over ``b' << b`` of ``sup_a m(a) * phi(a)(b')``; the simple one drops
the outer meet.  They agree on finite domains; :func:`usp` evaluates both and
compares them while ``predicate.CHECK`` is on.
"""
from __future__ import annotations

import random
from functools import cached_property
from typing import Callable, Mapping

from . import predicate as P
from .errors import HypothesisNotMet, Mismatch, NoBottom, NotNormalized, SizeCapExceeded
from .lattice import Quantale, is_inf_distributive
from .poset import DomainPoset, way_below_sets
from .predicate import Predicate
from .report import LawReport, Verdict


class StateTransformer:
    """Map from source states to predicates over the target.

    Images are stored per source index; states without an explicit image take
    ``default`` (when given).  ``isotone`` and ``normalized_valued`` are
    computed on first access and only recorded, never required.
    """

    def __init__(self, source: DomainPoset, target: DomainPoset, quantale: Quantale,
                 images: Mapping, default: Predicate | None = None):
        self.source = source
        self.target = target
        self.quantale = quantale
        self.images: dict[int, Predicate] = {}
        for k, img in images.items():
            self.images[source.index(k)] = self._own(img)
        self.default = self._own(default) if default is not None else None
        if self.default is None and len(self.images) != len(source):
            missing = [source.name(a) for a in source if a not in self.images]
            raise Mismatch(f"no image for source states {missing[:5]}")

    def _own(self, img: Predicate) -> Predicate:
        if not isinstance(img, Predicate):
            raise Mismatch("transformer images must be predicates")
        if img.domain != self.target:
            raise Mismatch("image lives on the wrong domain")
        if img.quantale is not self.quantale and img.quantale != self.quantale:
            raise Mismatch("image uses a different quantale")
        return img

    @classmethod
    def from_function(cls, source, target, quantale, fn: Callable[[int], Predicate]) -> "StateTransformer":
        return cls(source, target, quantale, {a: fn(a) for a in source})

    def image(self, a) -> Predicate:
        i = self.source.index(a)
        img = self.images.get(i)
        return img if img is not None else self.default

    __call__ = image

    def restrict_target(self, target: DomainPoset) -> "StateTransformer":
        """Same transformer with every image restricted to a sub-poset of the target."""
        pos = [self.target.index(target.name(b)) for b in target]
        keep_norm = (target.bottom is not None and self.target.bottom is not None
                     and target.name(target.bottom) == self.target.name(self.target.bottom))

        def cut(img):
            return Predicate(target, self.quantale, [img.values[i] for i in pos],
                             img.normalized and keep_norm)

        imgs = {a: cut(img) for a, img in self.images.items()}
        default = cut(self.default) if self.default is not None else None
        return StateTransformer(self.source, target, self.quantale, imgs, default)

    @cached_property
    def isotone(self) -> bool:
        return self.isotone_witness() is None

    def isotone_witness(self):
        """First pair ``a <= a'`` with ``phi(a)`` not below ``phi(a')``."""
        leq = self.quantale.lattice.leq
        for a in self.source:
            ia = self.image(a)
            for a2 in self.source.above(a):
                ib = self.image(a2)
                if ia is ib:
                    continue
                if not all(leq[x][y] for x, y in zip(ia.values, ib.values)):
                    return (self.source.name(a), self.source.name(a2))
        return None

    @cached_property
    def normalized_valued(self) -> bool:
        b = self.target.bottom
        if b is None:
            return False
        top = self.quantale.lattice.top
        imgs = list(self.images.values()) + ([self.default] if self.default is not None else [])
        return all(img.values[b] == top for img in imgs)

    def __repr__(self) -> str:
        return (f"StateTransformer({len(self.source)} -> {len(self.target)}, "
                f"{self.quantale.name}, explicit images={len(self.images)})")


def _check_input(phi: StateTransformer, m: Predicate) -> None:
    if m.domain != phi.source:
        raise Mismatch("predicate is not over the transformer's source domain")
    if m.quantale is not phi.quantale and m.quantale != phi.quantale:
        raise Mismatch("predicate and transformer use different quantales")


def _pointwise_modus_ponens(phi: StateTransformer, m: Predicate) -> list[int]:
    """``b -> sup over a of m(a) * phi(a)(b)`` for every target ``b``."""
    L = phi.quantale.lattice
    S, J = phi.quantale.star_table, L.join_table
    g = [L.bottom] * len(phi.target)
    for a in phi.source:
        row = S[m.values[a]]
        img = phi.image(a).values
        for b, v in enumerate(img):
            g[b] = J[g[b]][row[v]]
    return g


def usp_general(phi: StateTransformer, m: Predicate) -> Predicate:
    """Strongest postcondition by the general formula (meet over ``b' << b``)."""
    _check_input(phi, m)
    T = phi.target
    L = phi.quantale.lattice
    g = _pointwise_modus_ponens(phi, m)
    out = [L.meet_all(g[b2] for b2 in wb) for wb in way_below_sets(T)]
    return Predicate(T, phi.quantale, out)


def usp_simple(phi: StateTransformer, m: Predicate) -> Predicate:
    """Strongest postcondition by the simple formula ``sup_a m(a) * phi(a)(b)``."""
    _check_input(phi, m)
    return Predicate(phi.target, phi.quantale, _pointwise_modus_ponens(phi, m))


def usp(phi: StateTransformer, m: Predicate) -> Predicate:
    if P.CHECK:
        general = usp_general(phi, m)
        assert general == usp_simple(phi, m), "general and simple formulas disagree"
        return general
    return usp_simple(phi, m)


def sp(phi: StateTransformer, m: Predicate, strict: bool = True) -> Predicate:
    """Normalized strongest postcondition: ``usp`` with top forced at the target bottom.

    With ``strict`` the input must be normalized and every image of ``phi``
    normalized-valued.
    """
    b = phi.target.bottom
    if b is None:
        raise NoBottom("target domain")
    if strict:
        if not m.normalized:
            raise NotNormalized("sp needs a normalized input predicate")
        if not phi.normalized_valued:
            raise NotNormalized("sp needs a transformer with normalized images")
    vals = list(usp(phi, m).values)
    vals[b] = phi.quantale.lattice.top
    return Predicate(phi.target, phi.quantale, vals, True)


def is_postcondition(phi: StateTransformer, m: Predicate, m_prime: Predicate) -> Verdict:
    """``m'(b) >= m(a) * phi(a)(b)`` for every source ``a`` and target ``b``."""
    leq = phi.quantale.lattice.leq
    S = phi.quantale.star_table
    for a in phi.source:
        row = S[m.values[a]]
        img = phi.image(a).values
        for b in phi.target:
            if not leq[row[img[b]]][m_prime.values[b]]:
                return Verdict(False, (phi.source.name(a), phi.target.name(b)))
    return Verdict(True)


def oracle_least_postcondition(phi: StateTransformer, m: Predicate,
                               cap: int = P.ENUMERATION_CAP) -> Predicate:
    """Least postcondition found by enumerating every antitone target predicate.

    Keeps the candidates that are postconditions and returns their pointwise
    meet.  Independent of either ``usp`` formula; refuses above ``cap``.
    """
    _check_input(phi, m)
    L = phi.quantale.lattice
    T = phi.target
    if len(L) ** len(T) > cap:
        raise SizeCapExceeded(f"oracle needs |L|^|D'| <= {cap}, got {len(L)}^{len(T)}")
    S, leq = phi.quantale.star_table, L.leq
    required = [set() for _ in T]
    for a in phi.source:
        row = S[m.values[a]]
        img = phi.image(a).values
        for b in T:
            required[b].add(row[img[b]])
    best = None
    for cand in P.enumerate_predicates(T, phi.quantale, cap=cap):
        cv = cand.values
        if all(leq[r][cv[b]] for b in T for r in required[b]):
            best = cv if best is None else tuple(L.meet(x, y) for x, y in zip(best, cv))
    result = Predicate(T, phi.quantale, best)
    assert is_postcondition(phi, m, result), "meet of postconditions must be a postcondition"
    return result


# -- random instances ---------------------------------------------------------

def random_transformer(source: DomainPoset, target: DomainPoset, quantale: Quantale,
                       rng: random.Random, isotone: bool = False,
                       normalized: bool = False) -> StateTransformer:
    """Random images; with ``isotone`` each image also dominates those below it."""
    images: dict[int, Predicate] = {}
    for a in source.linear_extension():
        img = P.random_predicate(target, quantale, rng, normalized)
        if isotone:
            for a2 in source.below(a):
                if a2 != a:
                    img = P.join(img, images[a2])
        images[a] = img
    return StateTransformer(source, target, quantale, images)


# -- theorem checkers ---------------------------------------------------------

def _names(m: Predicate):
    return m.as_list()


def check_join_preservation(phi: StateTransformer, cases: int = 100, seed: int = 0) -> LawReport:
    """``usp(m1 | m2) == usp(m1) | usp(m2)`` for any transformer, plus the empty join."""
    rep = LawReport("join preservation")
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    rep.record("empty join", usp(phi, P.zero(src, q)) == P.zero(tgt, q), "zero")
    for _ in range(cases):
        m1 = P.random_predicate(src, q, rng)
        m2 = m1 if rng.random() < 0.1 else P.random_predicate(src, q, rng)
        rep.record("binary join", usp(phi, m1 | m2) == usp(phi, m1) | usp(phi, m2),
                   (_names(m1), _names(m2)))
    return rep


def check_sup_preservation(phi: StateTransformer, cases: int = 100, seed: int = 0,
                           max_family: int = 5) -> LawReport:
    """Suprema of finite families (sizes 0..``max_family``) for isotone transformers."""
    if not phi.isotone:
        raise HypothesisNotMet("sup preservation is only claimed for isotone transformers")
    rep = LawReport("sup preservation")
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    for i in range(cases):
        k = i if i <= max_family < cases else rng.randint(0, max_family)
        fam = [P.random_predicate(src, q, rng) for _ in range(k)]
        lhs = usp(phi, P.sup_family(fam, src, q))
        rhs = P.sup_family([usp(phi, m) for m in fam], tgt, q)
        rep.record("family sup", lhs == rhs, [_names(m) for m in fam])
    return rep


def linearity_hypothesis(phi: StateTransformer, hypothesis: str | None) -> str:
    """Resolve which hypothesis licenses linearity: ``'a'`` (isotone) or ``'b'`` (inf-distributive)."""
    a_ok = phi.isotone
    b_ok = bool(is_inf_distributive(phi.quantale))
    if hypothesis is None:
        if a_ok:
            return "a"
        if b_ok:
            return "b"
        raise HypothesisNotMet("transformer is not isotone and the product does not distribute over meets")
    if hypothesis == "a" and not a_ok:
        raise HypothesisNotMet(f"hypothesis (a) needs an isotone transformer; witness {phi.isotone_witness()}")
    if hypothesis == "b" and not b_ok:
        raise HypothesisNotMet(f"hypothesis (b) needs an inf-distributive quantale; "
                               f"witness {is_inf_distributive(phi.quantale).witness}")
    if hypothesis not in ("a", "b"):
        raise ValueError("hypothesis must be 'a', 'b' or None")
    return hypothesis


def _combination(terms, smul, domain, q, normalized):
    return P.sup_family([smul(alpha, m) for alpha, m in terms], domain, q, normalized)


def check_linearity(phi: StateTransformer, hypothesis: str | None = None, cases: int = 100,
                    seed: int = 0, max_terms: int = 4) -> LawReport:
    """``usp`` of a scaled join equals the scaled join of the ``usp`` images.

    Raises :class:`HypothesisNotMet` rather than asserting when the chosen
    hypothesis does not hold.  When more than two cases are run the first two use 0 and 1 terms.
    """
    hyp = linearity_hypothesis(phi, hypothesis)
    rep = LawReport(f"linearity under hypothesis ({hyp})")
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    n_l = len(q.lattice)
    for i in range(cases):
        n = i if i < 2 < cases else rng.randint(0, max_terms)
        terms = [(rng.randrange(n_l), P.random_predicate(src, q, rng)) for _ in range(n)]
        lhs = usp(phi, _combination(terms, P.scalar_u, src, q, False))
        rhs = _combination([(a, usp(phi, m)) for a, m in terms], P.scalar_u, tgt, q, False)
        rep.record(f"linear ({hyp})", lhs == rhs,
                   [(q.lattice.name(a), _names(m)) for a, m in terms])
    rep.results[f"linear ({hyp})"].note = f"licensed by hypothesis ({hyp})"
    return rep


def _affine_scalars(q: Quantale, n: int, rng: random.Random) -> list[int]:
    L = q.lattice
    alphas = [rng.randrange(len(L)) for _ in range(n)]
    if L.join_all(alphas) != L.top:
        alphas[rng.randrange(n)] = L.top
    return alphas


def check_affinity(phi: StateTransformer, hypothesis: str | None = None, cases: int = 100,
                   seed: int = 0, max_terms: int = 4) -> LawReport:
    """``sp`` preserves normalized combinations whose scalars join to top."""
    if phi.source.bottom is None or phi.target.bottom is None:
        raise NoBottom("affinity needs source and target")
    if not phi.normalized_valued:
        raise HypothesisNotMet("affinity of sp needs normalized transformer images")
    hyp = linearity_hypothesis(phi, hypothesis)
    rep = LawReport(f"affinity of sp under hypothesis ({hyp})")
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    for i in range(cases):
        n = 1 if i == 0 < cases - 1 else rng.randint(1, max_terms)
        alphas = _affine_scalars(q, n, rng)
        terms = [(a, P.random_predicate(src, q, rng, normalized=True)) for a in alphas]
        lhs = sp(phi, _combination(terms, P.scalar_n, src, q, True))
        rhs = _combination([(a, sp(phi, m)) for a, m in terms], P.scalar_n, tgt, q, True)
        rep.record(f"affine ({hyp})", lhs == rhs,
                   [(q.lattice.name(a), _names(m)) for a, m in terms])
    return rep


def check_extension(phi: StateTransformer) -> LawReport:
    """``usp(eta_u(d)) == phi(d)``, and ``sp(eta(d)) == phi(d)`` for normalized images."""
    if not phi.isotone:
        raise HypothesisNotMet("the extension property is claimed for isotone transformers")
    rep = LawReport("extension")
    src, q = phi.source, phi.quantale
    normalized = phi.normalized_valued and src.bottom is not None
    for d in src:
        img = phi.image(d)
        rep.record("usp extends phi", usp(phi, P.eta_u(src, q, d)) == img, src.name(d))
        if normalized:
            rep.record("sp extends phi", sp(phi, P.eta(src, q, d)) == img, src.name(d))
    return rep


def check_least_linear_extension(phi: StateTransformer, cases: int = 100, seed: int = 0) -> LawReport:
    """``usp(m) == join over a of m(a) scaled onto phi(a)``.

    Any linear map agreeing with ``phi`` on point predicates must send ``m``
    (the join of its point decomposition) to the right-hand side, so this
    equality gives both the extension and its minimality.
    """
    if not phi.isotone:
        raise HypothesisNotMet("least linear extension is claimed for isotone transformers")
    rep = LawReport("least linear extension")
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    samples = [P.zero(src, q)] + [P.eta_u(src, q, d) for d in src]
    samples += [P.random_predicate(src, q, rng) for _ in range(cases)]
    for m in samples:
        rhs = P.sup_family([P.scalar_u(alpha, phi.image(a)) for alpha, a in P.decompose(m)], tgt, q)
        rep.record("usp = join of m(a) . phi(a)", usp(phi, m) == rhs, _names(m))
    return rep


def check_simple_formula(phi: StateTransformer, cases: int = 100, seed: int = 0) -> LawReport:
    rep = LawReport("simple formula")
    rng = random.Random(seed)
    for _ in range(cases):
        m = P.random_predicate(phi.source, phi.quantale, rng)
        rep.record("general = simple", usp_general(phi, m) == usp_simple(phi, m), _names(m))
    return rep


def check_oracle(phi: StateTransformer, cases: int = 10, seed: int = 0,
                 cap: int = P.ENUMERATION_CAP) -> LawReport:
    rep = LawReport("oracle equivalence")
    rng = random.Random(seed)
    for _ in range(cases):
        m = P.random_predicate(phi.source, phi.quantale, rng)
        rep.record("usp = least postcondition",
                   usp(phi, m) == oracle_least_postcondition(phi, m, cap), _names(m))
    return rep


def check_postcondition_closure(phi: StateTransformer, cases: int = 50, seed: int = 0) -> LawReport:
    """Postconditions of an antitone ``m`` and of its u-closure coincide (isotone ``phi``)."""
    if not phi.isotone:
        raise HypothesisNotMet("the closure lemma is stated for isotone transformers")
    rep = LawReport("postcondition of closure")
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    for _ in range(cases):
        m = P.random_predicate(src, q, rng)
        mu = P.u_closure(m.raw())
        for m2 in (P.random_predicate(tgt, q, rng), usp(phi, m)):
            ok = bool(is_postcondition(phi, m, m2)) == bool(is_postcondition(phi, mu, m2))
            rep.record("post(m) <=> post(m^u)", ok, (_names(m), _names(m2)))
    return rep


def search_linearity_counterexample(phi: StateTransformer, cases: int = 100, seed: int = 0,
                                    max_terms: int = 4) -> LawReport:
    """Look for a linearity failure without assuming either hypothesis.

    The report is informational: no claim is made either way when neither
    hypothesis holds.
    """
    rep = LawReport("linearity search (informational)", informational=True)
    rng = random.Random(seed)
    src, tgt, q = phi.source, phi.target, phi.quantale
    n_l = len(q.lattice)
    for _ in range(cases):
        n = rng.randint(0, max_terms)
        terms = [(rng.randrange(n_l), P.random_predicate(src, q, rng)) for _ in range(n)]
        lhs = usp(phi, _combination(terms, P.scalar_u, src, q, False))
        rhs = _combination([(a, usp(phi, m)) for a, m in terms], P.scalar_u, tgt, q, False)
        rep.record("linear (no hypothesis)", lhs == rhs,
                   [(q.lattice.name(a), _names(m)) for a, m in terms])
    return rep
