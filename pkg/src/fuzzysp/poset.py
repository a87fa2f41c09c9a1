"""Finite pointed posets standing in for domains of computation.

Elements are named by strings; everything else works on their indices.
On a finite poset every directed subset contains its own supremum, so the
way-below relation coincides with the order.  :func:`way_below` still keeps
its own name so that formulas elsewhere read like their definitions, and
:func:`way_below_by_definition` evaluates the relation from scratch for
small posets.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, UnknownElement
from .report import Verdict


def transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> list[list[bool]]:
    """Reflexive-transitive closure of a relation on ``range(n)`` (Warshall)."""
    rel = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        rel[a][b] = True
    for k in range(n):
        rk = rel[k]
        for i in range(n):
            if rel[i][k]:
                ri = rel[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return rel


def order_failures(n: int, leq: Sequence[Sequence[bool]]) -> list[tuple[str, tuple]]:
    """Return (law, witness) for each partial-order axiom that fails."""
    out = []
    for a in range(n):
        if not leq[a][a]:
            out.append(("reflexive", (a,)))
            break
    for a, b in itertools.combinations(range(n), 2):
        if leq[a][b] and leq[b][a]:
            out.append(("antisymmetric", (a, b)))
            break
    done = False
    for a in range(n):
        for b in range(n):
            if not leq[a][b] or a == b:
                continue
            for c in range(n):
                if leq[b][c] and not leq[a][c]:
                    out.append(("transitive", (a, b, c)))
                    done = True
                    break
            if done:
                break
        if done:
            break
    return out


class DomainPoset:
    """An immutable finite poset with optional least element."""

    __slots__ = ("elements", "leq", "_index", "bottom", "_order", "_below", "_above", "_hash")

    def __init__(self, elements: Sequence[str], leq: Sequence[Sequence[bool]]):
        self.elements = tuple(str(e) for e in elements)
        if len(set(self.elements)) != len(self.elements):
            raise DomainError("duplicate element names")
        n = len(self.elements)
        self.leq = tuple(tuple(bool(x) for x in row) for row in leq)
        if len(self.leq) != n or any(len(r) != n for r in self.leq):
            raise DomainError("order matrix has the wrong shape")
        bad = order_failures(n, self.leq)
        if bad:
            law, w = bad[0]
            raise DomainError(f"order is not {law}: {tuple(self.elements[i] for i in w)}")
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.bottom = next((i for i in range(n) if all(self.leq[i])), None)
        self._below = tuple(tuple(a for a in range(n) if self.leq[a][b]) for b in range(n))
        self._above = tuple(tuple(b for b in range(n) if self.leq[a][b]) for a in range(n))
        # a linear extension: sort by number of strict predecessors
        self._order = tuple(sorted(range(n), key=lambda i: (len(self._below[i]), i)))
        self._hash = hash((self.elements, self.leq))

    # -- construction -------------------------------------------------
    @classmethod
    def from_pairs(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]],
                   bottom: str | None = None) -> "DomainPoset":
        """Build from cover or order pairs ``(a, b)`` meaning ``a <= b``.

        The reflexive-transitive closure is taken, so cover pairs suffice.
        ``bottom`` is an optional marker that must name the least element.
        """
        elements = [str(e) for e in elements]
        idx = {e: i for i, e in enumerate(elements)}
        try:
            ipairs = [(idx[str(a)], idx[str(b)]) for a, b in pairs]
        except KeyError as exc:
            raise UnknownElement(f"unknown element {exc.args[0]!r} in order pairs") from None
        p = cls(elements, transitive_closure(len(elements), ipairs))
        if bottom is not None:
            if str(bottom) not in idx:
                raise UnknownElement(f"unknown bottom marker {bottom!r}")
            if p.bottom != idx[str(bottom)]:
                raise DomainError(f"{bottom!r} is not below every element")
        return p

    # -- basic queries ------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(range(len(self.elements)))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, DomainPoset):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"DomainPoset({len(self)} elements, bottom={self.name(self.bottom) if self.bottom is not None else None})"

    def index(self, x: str | int) -> int:
        if isinstance(x, str):
            try:
                return self._index[x]
            except KeyError:
                raise UnknownElement(f"unknown domain element {x!r}") from None
        if not 0 <= x < len(self.elements):
            raise UnknownElement(f"domain index {x} out of range")
        return int(x)

    def name(self, i: int) -> str:
        return self.elements[i]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def below(self, b: int) -> tuple[int, ...]:
        """Indices ``a`` with ``a <= b``."""
        return self._below[b]

    def above(self, a: int) -> tuple[int, ...]:
        return self._above[a]

    def linear_extension(self) -> tuple[int, ...]:
        """Element indices ordered so that ``a < b`` implies ``a`` comes first."""
        return self._order

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(a, b)`` with ``a < b`` and nothing between."""
        n = len(self)
        out = []
        for a in range(n):
            for b in range(n):
                if a != b and self.leq[a][b]:
                    if not any(c not in (a, b) and self.leq[a][c] and self.leq[c][b] for c in range(n)):
                        out.append((a, b))
        return out

    def pairs(self) -> list[tuple[int, int]]:
        n = len(self)
        return [(a, b) for a in range(n) for b in range(n) if self.leq[a][b]]

    def is_meet_semilattice(self) -> bool:
        n = len(self)
        for a, b in itertools.combinations(range(n), 2):
            lower = [c for c in range(n) if self.leq[c][a] and self.leq[c][b]]
            if not any(all(self.leq[c][g] for c in lower) for g in lower):
                return False
        return True


def has_bottom(p: DomainPoset) -> bool:
    return p.bottom is not None


def principal_upset(p: DomainPoset, a: str | int) -> frozenset[str]:
    """The names of all ``x`` with ``a <= x``."""
    return frozenset(p.name(x) for x in p.above(p.index(a)))


def way_below(p: DomainPoset, a: str | int, b: str | int) -> bool:
    # finite posets: every directed set holds its supremum, so << is <=
    if __debug__ and len(p) <= DEFINITION_CHECK_SIZE:
        assert _definition_agrees(p), "way-below differs from <= on a finite poset"
    return p.leq[p.index(a)][p.index(b)]


@functools.lru_cache(maxsize=4096)
def way_below_sets(p: DomainPoset) -> tuple[tuple[int, ...], ...]:
    """For every ``b`` the indices ``a`` with ``a << b``, computed once per poset."""
    return tuple(tuple(a for a in p if way_below(p, a, b)) for b in p)


# posets up to this size get a one-off definition-level scan in debug runs
DEFINITION_CHECK_SIZE = 6


@functools.lru_cache(maxsize=1024)
def _definition_agrees(p: DomainPoset) -> bool:
    return all(way_below_by_definition(p, a, b) == p.leq[a][b] for a in p for b in p)


def _directed(p: DomainPoset, subset: Sequence[int]) -> int | None:
    """Return the greatest element of ``subset`` if it is directed, else None.

    A finite non-empty set is directed exactly when it has a greatest element.
    """
    for g in subset:
        if all(p.leq[c][g] for c in subset):
            return g
    return None


def way_below_by_definition(p: DomainPoset, a: str | int, b: str | int, max_size: int = 12) -> bool:
    """Evaluate ``a << b`` by scanning every directed subset of ``p``."""
    if len(p) > max_size:
        raise DomainError(f"definition-level scan limited to {max_size} elements")
    a, b = p.index(a), p.index(b)
    n = len(p)
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            top = _directed(p, subset)
            if top is None or not p.leq[b][top]:
                continue
            if not any(p.leq[a][c] for c in subset):
                return False
    return True


@dataclass
class DomainReport:
    ok: bool
    failures: list[tuple[str, tuple]] = field(default_factory=list)
    poset: DomainPoset | None = None
    bottom: str | None = None
    meet_semilattice: bool | None = None


def verify_domain(elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> DomainReport:
    """Check that ``pairs`` (taken as the full relation) is a partial order.

    Unlike :meth:`DomainPoset.from_pairs` no closure is taken, so missing
    reflexive or transitive pairs are reported.
    """
    elements = [str(e) for e in elements]
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    leq = [[False] * n for _ in range(n)]
    for x, y in pairs:
        if str(x) not in idx or str(y) not in idx:
            return DomainReport(False, [("known-elements", (x, y))])
        leq[idx[str(x)]][idx[str(y)]] = True
    bad = order_failures(n, leq)
    if bad:
        named = [(law, tuple(elements[i] for i in w)) for law, w in bad]
        return DomainReport(False, named)
    p = DomainPoset(elements, leq)
    return DomainReport(True, [], p, p.name(p.bottom) if p.bottom is not None else None,
                        p.is_meet_semilattice())


def is_isotone(p: DomainPoset, q: DomainPoset, f) -> Verdict:
    """Check ``a <= b  =>  f(a) <= f(b)``; ``f`` maps names of ``p`` to names of ``q``.

    ``f`` may be a mapping or a callable.  The witness is the first offending
    pair of ``p``-names.
    """
    get = f.__getitem__ if hasattr(f, "__getitem__") else f
    image = [q.index(get(p.name(a))) for a in p]
    for a in p:
        for b in p.above(a):
            if not q.leq[image[a]][image[b]]:
                return Verdict(False, (p.name(a), p.name(b)))
    return Verdict(True)


# -- standard shapes ---------------------------------------------------

def chain_poset(n: int, names: Sequence[str] | None = None) -> DomainPoset:
    names = list(names) if names is not None else [str(i) for i in range(n)]
    return DomainPoset(names, [[i <= j for j in range(n)] for i in range(n)])


def antichain_poset(names: Sequence[str]) -> DomainPoset:
    n = len(names)
    return DomainPoset(names, [[i == j for j in range(n)] for i in range(n)])


def product_poset(*factors: DomainPoset, sep: str = ",") -> DomainPoset:
    """Componentwise order on the Cartesian product; names are joined by ``sep``."""
    combos = list(itertools.product(*(range(len(f)) for f in factors)))
    names = [sep.join(f.name(i) for f, i in zip(factors, c)) for c in combos]
    leq = [[all(f.leq[x][y] for f, x, y in zip(factors, a, b)) for b in combos] for a in combos]
    return DomainPoset(names, leq)


def subposet(p: DomainPoset, keep: Iterable[str | int]) -> DomainPoset:
    idx = sorted({p.index(k) for k in keep})
    return DomainPoset([p.name(i) for i in idx], [[p.leq[a][b] for b in idx] for a in idx])


def powerset_reverse(states: Sequence[str]) -> DomainPoset:
    """All subsets of ``states`` ordered by reverse inclusion (the full set is least)."""
    n = len(states)
    masks = list(range(1 << n))
    masks.sort(key=lambda m: (-bin(m).count("1"), m))

    def name(m):
        return "{" + ",".join(states[i] for i in range(n) if m >> i & 1) + "}"

    return DomainPoset([name(m) for m in masks],
                       [[(a & b) == b for b in masks] for a in masks])


def random_poset(seed: int, size: int, edge_density: float = 0.3,
                 with_bottom: bool = False) -> DomainPoset:
    """Seeded random poset: closure of a random DAG on ``size`` elements.

    With ``with_bottom`` a fresh least element named ``"bot"`` is adjoined
    (unless the poset already has a least element).
    """
    if size < 1:
        raise DomainError("size must be at least 1")
    rng = random.Random(seed)
    perm = list(range(size))
    rng.shuffle(perm)
    edges = [(perm[i], perm[j]) for i in range(size) for j in range(i + 1, size)
             if rng.random() < edge_density]
    names = [f"p{i}" for i in range(size)]
    leq = transitive_closure(size, edges)
    p = DomainPoset(names, leq)
    if with_bottom and p.bottom is None:
        names = ["bot"] + names
        leq = [[True] * (size + 1)] + [[False] + row for row in leq]
        p = DomainPoset(names, leq)
    return p
