"""Seeded property suites over random instances.

Each suite draws one instance per case from ``random.Random(f"{seed}/{suite}/{case}")``
so any single case can be rerun on its own from ``(seed, suite, case)``.
A suite stops at its first failing case and keeps that instance as a
reproducer bundle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import io
from . import predicate as P
from . import transformer as T
from .errors import HypothesisNotMet
from .lattice import (Quantale, build_chain, build_downset_lattice, builtin_godel, builtin_lukasiewicz,
                      is_inf_distributive, quantale_failures, quantale_product, square_lattice,
                      square_with_bounds_quantale, tabulated_nilpotent_chain4, unchecked_quantale,
                      verify_distributive, verify_lattice)
from .poset import DomainPoset, random_poset
from .report import LawReport


@dataclass(frozen=True)
class Limits:
    max_lattice: int = 12
    max_domain: int = 6
    oracle_cap: int = P.ENUMERATION_CAP


FAULTS = ("lukasiewicz-table",)


def corrupted_lukasiewicz(m: int = 3) -> Quantale:
    """Lukasiewicz table with one product raised, so the quantale laws fail."""
    good = builtin_lukasiewicz(m)
    rows = [list(r) for r in good.star_table]
    rows[1][1] = 1
    return unchecked_quantale(good.lattice, rows, good.unit, f"corrupted-lukasiewicz({m})")


def standard_pool(fault: str | None = None) -> list[Quantale]:
    """Quantales the random suites draw from, smallest first."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    luk3 = corrupted_lukasiewicz(3) if fault else builtin_lukasiewicz(3)
    pool = [builtin_godel(build_chain(2)), builtin_godel(build_chain(3)), builtin_lukasiewicz(2),
            luk3, builtin_godel(build_chain(4)), builtin_godel(square_lattice()),
            tabulated_nilpotent_chain4(), builtin_lukasiewicz(5),
            quantale_product(builtin_lukasiewicz(2), builtin_godel(build_chain(2))),
            square_with_bounds_quantale(),
            quantale_product(builtin_lukasiewicz(3), builtin_lukasiewicz(2))]
    for s in range(3):
        L = build_downset_lattice(random_poset(s, 3, 0.4))
        pool.append(builtin_godel(L))
    return sorted(pool, key=len)


def oracle_pool() -> list[Quantale]:
    """Boolean, three-element chains, the Goedel square and a tabulated chain."""
    return [builtin_godel(build_chain(2)), builtin_godel(build_chain(3)), builtin_lukasiewicz(2),
            builtin_godel(square_lattice()), tabulated_nilpotent_chain4()]


def draw_quantale(rng: random.Random, pool: list[Quantale], limits: Limits,
                  need: Callable[[Quantale], bool] | None = None) -> Quantale:
    choices = [q for q in pool if len(q.lattice) <= limits.max_lattice and (need is None or need(q))]
    if not choices:
        raise HypothesisNotMet("no quantale in the pool fits the limits")
    return rng.choice(choices)


def draw_domain(rng: random.Random, max_size: int, bottom: bool = False) -> DomainPoset:
    hi = max(1, max_size - 1) if bottom else max_size
    size = rng.randint(1, hi)
    density = rng.choice((0.0, 0.3, 0.6, 1.0))
    return random_poset(rng.randrange(2 ** 32), size, density, with_bottom=bottom)


@dataclass
class Instance:
    quantale: Quantale
    source: DomainPoset | None = None
    target: DomainPoset | None = None
    transformer: T.StateTransformer | None = None

    def bundle(self) -> dict:
        if self.source is None:
            return {"kind": "quantale-case", "quantale": io.dump_quantale(self.quantale)}
        return io.dump_bundle(self.quantale, self.source, self.target, self.transformer)


@dataclass
class Context:
    limits: Limits
    pool: list[Quantale]


# -- suites -------------------------------------------------------------------

def _lattice(rng, ctx):
    q = draw_quantale(rng, ctx.pool, ctx.limits)
    L = q.lattice
    rep = LawReport()
    pairs = [(L.name(a), L.name(b)) for a in L for b in L if L.le(a, b)]
    brute = verify_lattice(list(L.elements), pairs)
    rep.record("tables match brute-force bounds", brute.ok and brute.lattice.join_table == L.join_table
               and brute.lattice.meet_table == L.meet_table, q.name)
    rep.record("distributive", bool(verify_distributive(L)), q.name)
    bad = quantale_failures(q)
    rep.record("quantale laws", not bad, bad[:1])
    other = draw_quantale(rng, ctx.pool, Limits(max_lattice=max(2, ctx.limits.max_lattice // len(L))))
    if not bad and not quantale_failures(other):
        try:
            quantale_product(q, other)
            ok = True
        except Exception as exc:  # product validation failure is the finding
            ok, bad = False, [(type(exc).__name__, str(exc))]
        rep.record("product of quantales is a quantale", ok, (q.name, other.name, bad[:1]))
    p = random_poset(rng.randrange(2 ** 32), rng.randint(1, 4), rng.random())
    D = build_downset_lattice(p)
    rep.record("down-set lattice is distributive", bool(verify_distributive(D)), list(p.elements))
    return rep, Instance(q)


def _semimodule(rng, ctx):
    q = draw_quantale(rng, ctx.pool, ctx.limits)
    normalized = rng.random() < 0.5
    p = draw_domain(rng, ctx.limits.max_domain, bottom=normalized)
    rep = P.check_semimodule_axioms(q, p, normalized, cases=1, seed=rng.randrange(2 ** 32))
    return rep, Instance(q, p)


def _closure(rng, ctx):
    q = draw_quantale(rng, ctx.pool, ctx.limits)
    p = draw_domain(rng, ctx.limits.max_domain, bottom=rng.random() < 0.5)
    return P.check_closure_lemmas(q, p, cases=1, seed=rng.randrange(2 ** 32)), Instance(q, p)


def _transformer_instance(rng, ctx, q, isotone=False, normalized=False, max_target=None):
    src = draw_domain(rng, ctx.limits.max_domain, bottom=normalized)
    tgt = draw_domain(rng, max_target or ctx.limits.max_domain, bottom=normalized)
    phi = T.random_transformer(src, tgt, q, rng, isotone=isotone, normalized=normalized)
    return phi, Instance(q, src, tgt, phi)


def _oracle(rng, ctx):
    q = draw_quantale(rng, ctx.pool, ctx.limits)
    # largest target size whose predicate space stays within the enumeration cap
    max_t = 1
    while max_t < ctx.limits.max_domain and len(q.lattice) ** (max_t + 1) <= ctx.limits.oracle_cap:
        max_t += 1
    phi, inst = _transformer_instance(rng, ctx, q, isotone=rng.random() < 0.5, max_target=max_t)
    return T.check_oracle(phi, cases=1, seed=rng.randrange(2 ** 32), cap=ctx.limits.oracle_cap), inst


def _join(rng, ctx):
    phi, inst = _transformer_instance(rng, ctx, draw_quantale(rng, ctx.pool, ctx.limits))
    return T.check_join_preservation(phi, cases=1, seed=rng.randrange(2 ** 32)), inst


def _sup(rng, ctx):
    phi, inst = _transformer_instance(rng, ctx, draw_quantale(rng, ctx.pool, ctx.limits), isotone=True)
    return T.check_sup_preservation(phi, cases=1, seed=rng.randrange(2 ** 32)), inst


def _linearity_a(rng, ctx):
    phi, inst = _transformer_instance(rng, ctx, draw_quantale(rng, ctx.pool, ctx.limits), isotone=True)
    return T.check_linearity(phi, "a", cases=1, seed=rng.randrange(2 ** 32)), inst


def _inf_distributive(q):
    return bool(is_inf_distributive(q))


def _linearity_b(rng, ctx):
    q = draw_quantale(rng, ctx.pool, ctx.limits, _inf_distributive)
    phi, inst = _transformer_instance(rng, ctx, q)
    return T.check_linearity(phi, "b", cases=1, seed=rng.randrange(2 ** 32)), inst


def _affinity(rng, ctx):
    if rng.random() < 0.5:
        q = draw_quantale(rng, ctx.pool, ctx.limits)
        phi, inst = _transformer_instance(rng, ctx, q, isotone=True, normalized=True)
        hyp = "a"
    else:
        q = draw_quantale(rng, ctx.pool, ctx.limits, _inf_distributive)
        phi, inst = _transformer_instance(rng, ctx, q, normalized=True)
        hyp = "b"
    return T.check_affinity(phi, hyp, cases=1, seed=rng.randrange(2 ** 32)), inst


def _extension(rng, ctx):
    q = draw_quantale(rng, ctx.pool, ctx.limits)
    phi, inst = _transformer_instance(rng, ctx, q, isotone=True, normalized=rng.random() < 0.5)
    return T.check_extension(phi), inst


def _least_linear(rng, ctx):
    phi, inst = _transformer_instance(rng, ctx, draw_quantale(rng, ctx.pool, ctx.limits), isotone=True)
    return T.check_least_linear_extension(phi, cases=1, seed=rng.randrange(2 ** 32)), inst


def _simple_formula(rng, ctx):
    phi, inst = _transformer_instance(rng, ctx, draw_quantale(rng, ctx.pool, ctx.limits))
    rep = T.check_simple_formula(phi, cases=1, seed=rng.randrange(2 ** 32))
    return rep, inst


def _postcondition_closure(rng, ctx):
    phi, inst = _transformer_instance(rng, ctx, draw_quantale(rng, ctx.pool, ctx.limits), isotone=True)
    return T.check_postcondition_closure(phi, cases=1, seed=rng.randrange(2 ** 32)), inst


def _linearity_search(rng, ctx):
    q = square_with_bounds_quantale()
    phi, inst = _transformer_instance(rng, ctx, q)
    return T.search_linearity_counterexample(phi, cases=1, seed=rng.randrange(2 ** 32)), inst


SUITES: dict[str, Callable] = {
    "lattice": _lattice,
    "semimodule": _semimodule,
    "closure": _closure,
    "oracle": _oracle,
    "join": _join,
    "sup": _sup,
    "linearity-a": _linearity_a,
    "linearity-b": _linearity_b,
    "affinity": _affinity,
    "extension": _extension,
    "least-linear": _least_linear,
    "simple-formula": _simple_formula,
    "postcondition-closure": _postcondition_closure,
    "linearity-search": _linearity_search,
}

# Suites whose failures are findings, not errors: no claim is made there.
INFORMATIONAL = frozenset({"linearity-search"})


@dataclass
class SuiteOutcome:
    suite: str
    seed: int
    report: LawReport
    cases_run: int = 0
    failing_case: int | None = None
    instance: Instance | None = None
    limits: Limits = field(default_factory=Limits)
    fault: str | None = None

    @property
    def informational(self) -> bool:
        return self.suite in INFORMATIONAL

    @property
    def passed(self) -> bool:
        return self.informational or self.report.passed

    def rerun_command(self) -> str:
        """Command line that replays the failing case, with any non-default flags."""
        parts = ["fuzzysp", "verify", "--suite", self.suite, "--seed", str(self.seed),
                 "--case", str(self.failing_case)]
        default = Limits()
        if self.limits.max_lattice != default.max_lattice:
            parts += ["--max-lattice-size", str(self.limits.max_lattice)]
        if self.limits.max_domain != default.max_domain:
            parts += ["--max-domain-size", str(self.limits.max_domain)]
        if self.fault is not None:
            parts += ["--inject-fault", self.fault]
        return " ".join(parts)

    def reproducer(self) -> dict:
        first = self.report.first_failure()
        return {"kind": "reproducer", "suite": self.suite, "seed": self.seed, "case": self.failing_case,
                "law": first.law if first else None,
                "witness": first.witness if first else None,
                "rerun": self.rerun_command(),
                "bundle": self.instance.bundle() if self.instance else None}


def case_rng(seed: int, suite: str, case: int) -> random.Random:
    return random.Random(f"{seed}/{suite}/{case}")


def run_suite(name: str, seed: int = 0, cases: int = 100, limits: Limits = Limits(),
              fault: str | None = None, pool: list[Quantale] | None = None,
              only_case: int | None = None) -> SuiteOutcome:
    if name not in SUITES:
        raise KeyError(name)
    ctx = Context(limits, pool if pool is not None else standard_pool(fault))
    fn = SUITES[name]
    out = SuiteOutcome(name, seed, LawReport(name, informational=name in INFORMATIONAL),
                       limits=limits, fault=fault)
    indices = [only_case] if only_case is not None else range(cases)
    for i in indices:
        rep, inst = fn(case_rng(seed, name, i), ctx)
        out.report.merge(rep)
        out.cases_run += 1
        if not rep.passed and out.failing_case is None:
            out.failing_case, out.instance = i, inst
            if name not in INFORMATIONAL:
                break
    return out


def run_suites(names=None, **kwargs) -> list[SuiteOutcome]:
    return [run_suite(n, **kwargs) for n in (names or list(SUITES))]
