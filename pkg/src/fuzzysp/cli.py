"""Command-line entry point: ``fuzzysp verify | sp | demo-frames | gen``.

Exit codes: 0 success, 1 a law failed (or the two usp formulas disagreed),
2 bad flags or an invalid input file.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import io
from . import predicate as P
from . import scenarios as S
from . import suites
from . import transformer as T
from .errors import FuzzyError
from .lattice import (build_chain, build_downset_lattice, builtin_godel, builtin_lukasiewicz, make_quantale,
                      quantale_product)
from .poset import random_poset

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _suite_list(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [n for n in names if n not in suites.SUITES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown suite {', '.join(bad) or text!r}; choose from {', '.join(suites.SUITES)}")
    return names


def _emit(text: str, out: Path | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


# -- verify -------------------------------------------------------------------

def cmd_verify(args) -> int:
    names = args.suite or list(suites.SUITES)
    limits = suites.Limits(max_lattice=args.max_lattice_size, max_domain=args.max_domain_size)
    pool = suites.standard_pool(args.inject_fault)
    outcomes = []
    for name in names:
        t0 = time.perf_counter()
        o = suites.run_suite(name, seed=args.seed, cases=args.cases, limits=limits, pool=pool,
                             fault=args.inject_fault, only_case=args.case)
        outcomes.append(o)
        if args.timings:
            print(f"# {name}: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    failed = [o for o in outcomes if not o.passed]

    if args.format == "json":
        doc = {"seed": args.seed, "cases": args.cases, "passed": not failed,
               "suites": [{"suite": o.suite, "cases": o.cases_run, "passed": o.passed,
                           "informational": o.informational,
                           "laws": [{"law": r.law, "checked": r.checked, "failures": r.failures}
                                    for r in o.report.results.values()]} for o in outcomes]}
        print(json.dumps(doc, indent=2))
    else:
        for o in outcomes:
            tag = "INFO" if o.informational else ("PASS" if o.passed else "FAIL")
            print(f"{tag} {o.suite} cases={o.cases_run}")
            for line in o.report.lines():
                print(f"  {line}")
        print(f"{'all suites passed' if not failed else f'{len(failed)} suite(s) failed'} (seed {args.seed})")

    if failed:
        first = failed[0]
        path = _save_reproducer(first, args.reproducer)
        print(f"reproducer written to {path}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _save_reproducer(outcome: suites.SuiteOutcome, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(outcome.reproducer(), indent=2, default=str) + "\n")
    return path


# -- sp -----------------------------------------------------------------------

def _table(rows: list[tuple], header: tuple) -> str:
    cols = list(zip(header, *rows))
    widths = [max(len(str(x)) for x in col) for col in cols]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header).rstrip(), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*map(str, r)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def cmd_sp(args) -> int:
    if args.out is not None and len(args.bundle) > 1:
        raise UsageError("--out needs exactly one bundle")
    status = EXIT_OK
    for path in args.bundle:
        b = io.load(path, "bundle")
        phi, m = b.get("transformer"), b.get("predicate")
        if phi is None or m is None:
            raise io.FormatError(f"{path}: bundle needs a transformer and a predicate")
        general, simple = T.usp_general(phi, m), T.usp_simple(phi, m)
        agree = general == simple
        if args.normalized:
            if not m.normalized:
                m = m.as_normalized()
                m.validate()
            result = T.sp(phi, m, strict=not args.allow_unnormalized_images)
        else:
            result = general if agree else simple
        names = [phi.target.name(t) for t in phi.target]
        label = "sp" if args.normalized else "usp"
        if args.format == "json":
            text = io.dumps(io.dump_predicate(result, context=True))
        else:
            L = phi.quantale.lattice
            if args.show_both_formulas:
                rows = [(n, L.name(general.values[i]), L.name(simple.values[i]), L.name(result.values[i]))
                        for i, n in enumerate(names)]
                text = _table(rows, ("state", "general", "simple", label))
            else:
                rows = [(n, L.name(result.values[i])) for i, n in enumerate(names)]
                text = _table(rows, ("state", label))
            if len(args.bundle) > 1:
                text = f"# {path}\n{text}"
        if args.out is not None and args.format == "table":
            io.save(io.dump_predicate(result, context=True), args.out)
            sys.stdout.write(text)
        else:
            _emit(text, args.out)
        if not agree:
            print(f"{path}: general and simple formulas disagree", file=sys.stderr)
            status = EXIT_FAIL
    return status


# -- demo-frames ----------------------------------------------------------------

def _vec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_demo_frames(args) -> int:
    scale = S.QualityScale(args.m, args.n)
    phi = S.frame_transformer(scale)
    D = scale.domain
    if args.predicate is not None:
        m = io.load(args.predicate, "predicate", domain=D, quantale=scale.quantale)
        source = f"predicate file {args.predicate}"
    else:
        state = args.state if args.state is not None else (args.m,) * args.n
        m = S.truth_predicate(scale, state)
        source = f"state {','.join(map(str, state))}"
    out = T.usp(phi, m)

    lines = [f"frames n={args.n}, quality 0..{args.m}, {scale.quantale.name}", f"input: {source}", "",
             "key states of phi (every other state maps to constant 0):"]
    for s, q in S.frame_key_states(scale):
        lines.append(f"  phi({','.join(map(str, s))}) = truth of target {','.join(map(str, q))}")
    lines.append("")
    targets = list(D) if args.sample is None else list(D)[::max(1, len(D) // args.sample)][:args.sample]
    rows = [(D.name(b), out.values[b]) for b in targets]
    text = "\n".join(lines) + "\n" + _table(rows, ("b", "usp(phi)(m)(b)"))
    if args.format == "json":
        text = io.dumps({"n": args.n, "m": args.m, "input": source,
                         "key_states": [{"state": list(s), "target": list(q)}
                                        for s, q in S.frame_key_states(scale)],
                         "usp": {D.name(b): out.values[b] for b in targets}})
    _emit(text, args.out)
    return EXIT_OK


# -- gen ------------------------------------------------------------------------

def _gen_lattice(rng, args):
    for _ in range(100):
        p = random_poset(rng.randrange(2 ** 32), rng.randint(1, args.poset_size), rng.random())
        L = build_downset_lattice(p)
        if len(L) <= args.max_lattice_size:
            return L
    return build_chain(2)


def _perturb(q, rng, tries: int):
    """Try random single-cell changes of the table, keeping each that still validates."""
    L = q.lattice
    rows = [list(r) for r in q.star_table]
    name = f"perturbed-{q.name}"
    for _ in range(tries):
        a, b, v = rng.randrange(len(L)), rng.randrange(len(L)), rng.randrange(len(L))
        old = rows[a][b]
        rows[a][b] = v
        try:
            q = make_quantale(L, rows, L.top, name)
        except FuzzyError:
            rows[a][b] = old
    return q


def _gen_quantale(rng, args):
    kind = rng.choice(["godel", "lukasiewicz", "product"])
    if kind == "godel":
        q = builtin_godel(_gen_lattice(rng, args))
    elif kind == "lukasiewicz":
        q = builtin_lukasiewicz(rng.randint(1, max(1, args.max_lattice_size - 1)))
    else:
        q = quantale_product(builtin_lukasiewicz(rng.randint(1, 2)), builtin_godel(build_chain(2)))
    return _perturb(q, rng, args.perturb) if args.perturb else q


def _gen_domain(rng, args, bottom=None):
    bottom = args.bottom if bottom is None else bottom
    return suites.draw_domain(rng, args.domain_size, bottom=bottom)


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "lattice":
        doc = io.dump_lattice(_gen_lattice(rng, args))
    elif args.kind == "quantale":
        doc = io.dump_quantale(_gen_quantale(rng, args))
    elif args.kind == "domain":
        doc = io.dump_domain(_gen_domain(rng, args))
    else:
        q = _gen_quantale(rng, args)
        normalized = args.bottom
        src, tgt = _gen_domain(rng, args, normalized), _gen_domain(rng, args, normalized)
        phi = T.random_transformer(src, tgt, q, rng, isotone=args.isotone, normalized=normalized)
        m = P.random_predicate(src, q, rng, normalized)
        doc = io.dump_bundle(q, src, tgt, phi, m)
    out = Path(args.out) if args.out is not None else None
    if out is not None and (out.is_dir() or args.out.endswith(("/", "\\"))):
        out = out / f"{args.kind}-{args.seed}.json"
    _emit(io.dumps(doc), out)
    if out is not None:
        print(out, file=sys.stderr)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzysp",
                                     description="Fuzzy monotonic predicates and strongest postconditions.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the seeded property suites")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=_positive, default=100, help="instances per suite")
    v.add_argument("--max-lattice-size", type=_positive, default=12)
    v.add_argument("--max-domain-size", type=_positive, default=6)
    v.add_argument("--suite", type=_suite_list, default=None,
                   help="comma-separated suites: " + ", ".join(suites.SUITES))
    v.add_argument("--case", type=int, default=None, help="rerun a single case index")
    v.add_argument("--reproducer", type=Path, default=Path("fuzzysp-reproducer.json"))
    v.add_argument("--format", choices=["table", "json"], default="table")
    v.add_argument("--timings", action="store_true", help="print per-suite wall time to stderr")
    v.add_argument("--inject-fault", choices=suites.FAULTS, default=None, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sp", help="strongest postcondition of a bundle's predicate")
    s.add_argument("bundle", nargs="+", type=Path)
    s.add_argument("--normalized", action="store_true", help="compute sp instead of usp")
    s.add_argument("--allow-unnormalized-images", action="store_true",
                   help="with --normalized, accept transformers whose images are not normalized")
    s.add_argument("--show-both-formulas", action="store_true")
    s.add_argument("--out", type=Path, default=None)
    s.add_argument("--format", choices=["table", "json"], default="table")
    s.set_defaults(func=cmd_sp)

    d = sub.add_parser("demo-frames", help="the frame-smoothing example")
    d.add_argument("--n", type=_positive, default=3, help="number of frames")
    d.add_argument("--m", type=_positive, default=5, help="top quality level")
    src = d.add_mutually_exclusive_group()
    src.add_argument("--state", type=_vec, default=None, help='actual quality vector, e.g. "5,5,5"')
    src.add_argument("--predicate", type=Path, default=None, help="input predicate file")
    d.add_argument("--sample", type=_positive, default=None, help="print only this many target states")
    d.add_argument("--out", type=Path, default=None)
    d.add_argument("--format", choices=["table", "json"], default="table")
    d.set_defaults(func=cmd_demo_frames)

    g = sub.add_parser("gen", help="emit a random valid instance file")
    g.add_argument("--kind", choices=["lattice", "quantale", "domain", "bundle"], required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--poset-size", type=_positive, default=3, help="poset size for down-set lattices")
    g.add_argument("--max-lattice-size", type=_positive, default=12)
    g.add_argument("--domain-size", type=_positive, default=4)
    g.add_argument("--bottom", action="store_true", help="domains get a least element; bundles are normalized")
    g.add_argument("--isotone", action="store_true", help="bundle transformer is isotone")
    g.add_argument("--perturb", type=int, default=0, help="random table perturbation attempts")
    g.add_argument("--out", default=None, help="file, or directory ending in /")
    g.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (FuzzyError, KeyError, ValueError, OSError) as exc:
        print(f"fuzzysp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
