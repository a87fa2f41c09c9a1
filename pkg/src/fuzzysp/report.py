from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with an optional counterexample.

    Truthiness follows ``ok`` so a verdict can be used directly in ``if``.
    """

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class LawResult:
    law: str
    checked: int = 0
    failures: int = 0
    witness: Any = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class LawReport:
    """Per-law tallies collected by the checkers.

    ``record`` is called once per checked instance; only the first failing
    instance of each law is kept as its witness.  A callable witness is only
    evaluated when it is kept.
    """

    title: str = ""
    results: dict[str, LawResult] = field(default_factory=dict)
    informational: bool = False
    note: str = ""
    payload: Any = None

    def record(self, law: str, ok: bool, witness: Any = None) -> bool:
        res = self.results.get(law)
        if res is None:
            res = self.results[law] = LawResult(law)
        res.checked += 1
        if not ok:
            res.failures += 1
            if res.witness is None:
                res.witness = witness() if callable(witness) else witness
        return ok

    def merge(self, other: "LawReport") -> "LawReport":
        for law, res in other.results.items():
            mine = self.results.get(law)
            if mine is None:
                self.results[law] = LawResult(law, res.checked, res.failures, res.witness, res.note)
                continue
            mine.checked += res.checked
            mine.failures += res.failures
            if mine.witness is None:
                mine.witness = res.witness
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.results.values())

    def first_failure(self) -> LawResult | None:
        for r in self.results.values():
            if not r.passed:
                return r
        return None

    def lines(self) -> list[str]:
        out = []
        for r in self.results.values():
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {r.law} checked={r.checked}"
            if not r.passed:
                line += f" failures={r.failures} witness={r.witness!r}"
            if r.note:
                line += f" ({r.note})"
            out.append(line)
        return out

    def __str__(self) -> str:
        head = [self.title] if self.title else []
        return "\n".join(head + self.lines())
