"""Finite lattices and unital quantales.

Every lattice here is finite, so complete distributivity is plain
distributivity and every law can be checked by an exhaustive scan.  Join,
meet and multiplication are tabulated once at construction; afterwards all
arithmetic is a table lookup on element indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (LatticeError, NotDistributive, QuantaleLawViolation, SizeCapExceeded,
                     UnitNotTop, UnknownElement)
from .poset import DomainPoset, order_failures, transitive_closure
from .report import Verdict

Table = tuple[tuple[int, ...], ...]


def _least_upper_bound(n, leq, a, b):
    ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
    least = [c for c in ubs if all(leq[c][u] for u in ubs)]
    return least[0] if len(least) == 1 else None


def _greatest_lower_bound(n, leq, a, b):
    lbs = [c for c in range(n) if leq[c][a] and leq[c][b]]
    great = [c for c in lbs if all(leq[l][c] for l in lbs)]
    return great[0] if len(great) == 1 else None


class FiniteLattice:
    """A finite lattice with tabulated join and meet.

    Use :func:`verify_lattice`, :meth:`from_pairs` or one of the builders
    rather than calling the constructor with hand-made tables.
    """

    __slots__ = ("elements", "leq", "join_table", "meet_table", "top", "bottom",
                 "_index", "_hash", "_down")

    def __init__(self, elements: Sequence[str], leq, join_table: Table, meet_table: Table):
        self.elements = tuple(elements)
        self.leq = tuple(tuple(r) for r in leq)
        self.join_table = tuple(tuple(r) for r in join_table)
        self.meet_table = tuple(tuple(r) for r in meet_table)
        n = len(self.elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.bottom = next(i for i in range(n) if all(self.leq[i]))
        self.top = next(i for i in range(n) if all(self.leq[j][i] for j in range(n)))
        self._down = tuple(tuple(a for a in range(n) if self.leq[a][b]) for b in range(n))
        self._hash = hash((self.elements, self.leq))

    @classmethod
    def from_pairs(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "FiniteLattice":
        """Build from cover (or order) pairs; raises :class:`LatticeError` if not a lattice."""
        elements = [str(e) for e in elements]
        idx = {e: i for i, e in enumerate(elements)}
        try:
            ip = [(idx[str(a)], idx[str(b)]) for a, b in pairs]
        except KeyError as exc:
            raise UnknownElement(f"unknown lattice element {exc.args[0]!r}") from None
        closed = transitive_closure(len(elements), ip)
        rep = verify_lattice(elements, [(elements[a], elements[b])
                                        for a in range(len(elements))
                                        for b in range(len(elements)) if closed[a][b]])
        if not rep.ok:
            law, w = rep.failures[0]
            raise LatticeError(f"not a lattice ({law}): witness {w}")
        return rep.lattice

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(range(len(self.elements)))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteLattice({len(self)} elements)"

    def index(self, x: str | int) -> int:
        if isinstance(x, str):
            try:
                return self._index[x]
            except KeyError:
                raise UnknownElement(f"unknown lattice element {x!r}") from None
        if not 0 <= x < len(self.elements):
            raise UnknownElement(f"lattice index {x} out of range")
        return int(x)

    def name(self, i: int) -> str:
        return self.elements[i]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        jt = self.join_table
        for x in xs:
            acc = jt[acc][x]
        return acc

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        mt = self.meet_table
        for x in xs:
            acc = mt[acc][x]
        return acc

    def down(self, b: int) -> tuple[int, ...]:
        """All elements below ``b``."""
        return self._down[b]

    def covers(self) -> list[tuple[int, int]]:
        n = len(self)
        return [(a, b) for a in range(n) for b in range(n)
                if a != b and self.leq[a][b]
                and not any(c not in (a, b) and self.leq[a][c] and self.leq[c][b] for c in range(n))]

    def as_poset(self) -> DomainPoset:
        return DomainPoset(self.elements, self.leq)


@dataclass
class LatticeReport:
    ok: bool
    failures: list[tuple[str, tuple]] = field(default_factory=list)
    lattice: FiniteLattice | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_lattice(elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> LatticeReport:
    """Check the order axioms and the existence of all binary joins and meets.

    ``pairs`` is the full order relation (no closure is taken).  Joins and
    meets are found by brute-force bound search; absorption is checked on the
    resulting tables.  On success the report carries the lattice.
    """
    elements = [str(e) for e in elements]
    n = len(elements)
    if n == 0:
        return LatticeReport(False, [("non-empty", ())])
    idx = {e: i for i, e in enumerate(elements)}
    leq = [[False] * n for _ in range(n)]
    for a, b in pairs:
        if str(a) not in idx or str(b) not in idx:
            return LatticeReport(False, [("known-elements", (a, b))])
        leq[idx[str(a)]][idx[str(b)]] = True
    bad = order_failures(n, leq)
    if bad:
        return LatticeReport(False, [(law, tuple(elements[i] for i in w)) for law, w in bad])
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    failures = []
    for a in range(n):
        for b in range(a, n):
            j = _least_upper_bound(n, leq, a, b)
            if j is None:
                failures.append(("join-exists", (elements[a], elements[b])))
                return LatticeReport(False, failures)
            m = _greatest_lower_bound(n, leq, a, b)
            if m is None:
                failures.append(("meet-exists", (elements[a], elements[b])))
                return LatticeReport(False, failures)
            join[a][b] = join[b][a] = j
            meet[a][b] = meet[b][a] = m
    for a in range(n):
        for b in range(n):
            if join[a][meet[a][b]] != a or meet[a][join[a][b]] != a:
                return LatticeReport(False, [("absorption", (elements[a], elements[b]))])
    return LatticeReport(True, [], FiniteLattice(elements, leq, join, meet))


def verify_distributive(l: FiniteLattice) -> Verdict:
    """``a meet (b join c) == (a meet b) join (a meet c)`` over all triples."""
    J, M = l.join_table, l.meet_table
    for a in l:
        Ma = M[a]
        for b in l:
            for c in l:
                if Ma[J[b][c]] != J[Ma[b]][Ma[c]]:
                    return Verdict(False, (l.name(a), l.name(b), l.name(c)))
    return Verdict(True)


# -- builders ------------------------------------------------------------

def build_chain(n: int) -> FiniteLattice:
    """The chain ``0 < 1 < ... < n-1`` with names ``"0"`` .. ``"n-1"``."""
    if n < 1:
        raise LatticeError("a chain needs at least one element")
    r = range(n)
    return FiniteLattice([str(i) for i in r], [[i <= j for j in r] for i in r],
                         [[max(i, j) for j in r] for i in r],
                         [[min(i, j) for j in r] for i in r])


def build_product(l1: FiniteLattice, l2: FiniteLattice) -> FiniteLattice:
    """Componentwise order on ``l1 x l2``; elements are named ``"(a,b)"``."""
    combos = [(a, b) for a in l1 for b in l2]
    pos = {c: i for i, c in enumerate(combos)}
    names = [f"({l1.name(a)},{l2.name(b)})" for a, b in combos]
    leq = [[l1.leq[a][c] and l2.leq[b][d] for c, d in combos] for a, b in combos]
    join = [[pos[(l1.join(a, c), l2.join(b, d))] for c, d in combos] for a, b in combos]
    meet = [[pos[(l1.meet(a, c), l2.meet(b, d))] for c, d in combos] for a, b in combos]
    return FiniteLattice(names, leq, join, meet)


def build_downset_lattice(p: DomainPoset, cap: int = 4096) -> FiniteLattice:
    """Down-closed subsets of ``p`` ordered by inclusion.

    Such lattices are always distributive, which makes this the random
    generator of choice for distributive lattices.
    """
    order = p.linear_extension()
    n = len(p)
    strict_below = [[a for a in p.below(b) if a != b] for b in range(n)]
    sets: list[int] = []

    def walk(k: int, mask: int):
        if k == n:
            sets.append(mask)
            if len(sets) > cap:
                raise SizeCapExceeded(f"more than {cap} down-sets")
            return
        x = order[k]
        walk(k + 1, mask)
        if all(mask >> a & 1 for a in strict_below[x]):
            walk(k + 1, mask | (1 << x))

    walk(0, 0)
    sets.sort(key=lambda m: (bin(m).count("1"), [p.linear_extension().index(i) for i in range(n) if m >> i & 1]))
    pos = {m: i for i, m in enumerate(sets)}

    def name(m):
        return "{" + ",".join(p.name(i) for i in order if m >> i & 1) + "}"

    return FiniteLattice([name(m) for m in sets],
                         [[(a & b) == a for b in sets] for a in sets],
                         [[pos[a | b] for b in sets] for a in sets],
                         [[pos[a & b] for b in sets] for a in sets])


# -- quantales -----------------------------------------------------------

class Quantale:
    """A finite lattice with an associative, join-preserving product whose unit is top."""

    __slots__ = ("lattice", "star_table", "unit", "name", "_hash")

    def __init__(self, lattice: FiniteLattice, star_table: Table, unit: int, name: str = "tabulated"):
        self.lattice = lattice
        self.star_table = tuple(tuple(r) for r in star_table)
        self.unit = unit
        self.name = name
        self._hash = hash((lattice, self.star_table))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Quantale):
            return NotImplemented
        return self.lattice == other.lattice and self.star_table == other.star_table and self.unit == other.unit

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Quantale({self.name}, {len(self.lattice)} elements)"

    def __len__(self) -> int:
        return len(self.lattice)

    def star(self, a: int, b: int) -> int:
        return self.star_table[a][b]

    def star_names(self, a: str, b: str) -> str:
        L = self.lattice
        return L.name(self.star_table[L.index(a)][L.index(b)])


def quantale_failures(q: Quantale, first_only: bool = True) -> list[tuple[str, tuple]]:
    """Scan every quantale law; returns ``(law, witness)`` pairs (names)."""
    L, S = q.lattice, q.star_table
    J = L.join_table
    nm = L.name
    out: list[tuple[str, tuple]] = []

    def fail(law, *w):
        out.append((law, tuple(nm(x) for x in w)))
        return first_only

    n = len(L)
    if any(len(r) != n for r in S) or len(S) != n or any(not 0 <= x < n for r in S for x in r):
        return [("table-shape", ())]
    if q.unit != L.top:
        return [("unit-is-top", (nm(q.unit), nm(L.top)))]
    for a in L:
        if S[q.unit][a] != a or S[a][q.unit] != a:
            if fail("unit", a):
                return out
    for a in L:
        if S[a][L.bottom] != L.bottom or S[L.bottom][a] != L.bottom:
            if fail("annihilation", a):
                return out
    for a in L:
        Sa = S[a]
        for b in L:
            ab = Sa[b]
            for c in L:
                if S[ab][c] != Sa[S[b][c]]:
                    if fail("associativity", a, b, c):
                        return out
                if Sa[J[b][c]] != J[ab][Sa[c]]:
                    if fail("left-join-distributivity", a, b, c):
                        return out
                if S[J[b][c]][a] != J[S[b][a]][S[c][a]]:
                    if fail("right-join-distributivity", a, b, c):
                        return out
    leq = L.leq
    for a in L:
        for a2 in (x for x in L if leq[a][x]):
            for b in L:
                if not leq[S[a][b]][S[a2][b]] or not leq[S[b][a]][S[b][a2]]:
                    if fail("isotone", a, a2, b):
                        return out
    return out


def make_quantale(l: FiniteLattice, star_table, unit: str | int, name: str = "tabulated") -> Quantale:
    """Validate and wrap a multiplication table.

    ``star_table`` rows follow ``l.elements``; entries may be element names or
    indices.  Raises :class:`UnitNotTop` or :class:`QuantaleLawViolation`.
    """
    ok = verify_distributive(l)
    if not ok:
        raise NotDistributive(ok.witness)
    table = tuple(tuple(l.index(x) for x in row) for row in star_table)
    if len(table) != len(l) or any(len(r) != len(l) for r in table):
        raise QuantaleLawViolation("table-shape", (len(table),))
    u = l.index(unit)
    if u != l.top:
        raise UnitNotTop(l.name(u), l.name(l.top))
    q = Quantale(l, table, u, name)
    bad = quantale_failures(q)
    if bad:
        raise QuantaleLawViolation(*bad[0])
    return q


def unchecked_quantale(l: FiniteLattice, star_table, unit: int, name: str = "unchecked") -> Quantale:
    """Wrap a table without any law check (used to inject faults in tests)."""
    return Quantale(l, tuple(tuple(r) for r in star_table), unit, name)


def builtin_lukasiewicz(m: int) -> Quantale:
    """Chain ``0..m`` with ``i * j = max(i + j - m, 0)``."""
    l = build_chain(m + 1)
    r = range(m + 1)
    return make_quantale(l, [[max(i + j - m, 0) for j in r] for i in r], m, f"lukasiewicz({m})")


def builtin_godel(l: FiniteLattice) -> Quantale:
    """The lattice itself with meet as multiplication."""
    return make_quantale(l, l.meet_table, l.top, f"godel({len(l)})")


def quantale_product(q1: Quantale, q2: Quantale) -> Quantale:
    L = build_product(q1.lattice, q2.lattice)
    n2 = len(q2.lattice)

    def star(i, j):
        a, b = divmod(i, n2)
        c, d = divmod(j, n2)
        return q1.star(a, c) * n2 + q2.star(b, d)

    r = range(len(L))
    return make_quantale(L, [[star(i, j) for j in r] for i in r], L.top,
                         f"{q1.name}x{q2.name}")


def is_inf_distributive(q: Quantale) -> Verdict:
    """Does multiplication distribute over binary meets on both sides?

    Together with ``a * 1 = a`` (the empty meet) this is distributivity over
    all meets of a finite lattice.
    """
    L, S, M = q.lattice, q.star_table, q.lattice.meet_table
    for a in L:
        Sa = S[a]
        for b in L:
            for c in L:
                if Sa[M[b][c]] != M[Sa[b]][Sa[c]]:
                    return Verdict(False, ("left", L.name(a), L.name(b), L.name(c)))
                if S[M[b][c]][a] != M[S[b][a]][S[c][a]]:
                    return Verdict(False, ("right", L.name(a), L.name(b), L.name(c)))
    return Verdict(True)


def tabulated_nilpotent_chain4() -> Quantale:
    """A hand-tabulated quantale on ``0 < a < b < 1`` with ``b * b = a``."""
    l = FiniteLattice.from_pairs(["0", "a", "b", "1"], [("0", "a"), ("a", "b"), ("b", "1")])
    rows = [["0", "0", "0", "0"],
            ["0", "0", "0", "a"],
            ["0", "0", "a", "b"],
            ["0", "a", "b", "1"]]
    return make_quantale(l, rows, "1", "nilpotent-chain4")


def square_with_bounds_quantale() -> Quantale:
    """A quantale that does not distribute over meets.

    The lattice is ``0 < p < x, y < q < 1`` (a square with a new top and
    bottom).  Products below ``q`` collapse: ``q * (x meet y) = q * p = 0``
    while ``(q * x) meet (q * y) = p``.
    """
    l = FiniteLattice.from_pairs(["0", "p", "x", "y", "q", "1"],
                                 [("0", "p"), ("p", "x"), ("p", "y"), ("x", "q"), ("y", "q"), ("q", "1")])
    rows = [["0", "0", "0", "0", "0", "0"],
            ["0", "0", "0", "0", "0", "p"],
            ["0", "0", "0", "p", "p", "x"],
            ["0", "0", "p", "0", "p", "y"],
            ["0", "0", "p", "p", "p", "q"],
            ["0", "p", "x", "y", "q", "1"]]
    return make_quantale(l, rows, "1", "square-with-bounds")


def square_lattice() -> FiniteLattice:
    return build_product(build_chain(2), build_chain(2))


def m3_lattice() -> FiniteLattice:
    """The five-element diamond, the smallest non-distributive modular lattice."""
    return FiniteLattice.from_pairs(["0", "a", "b", "c", "1"],
                                    [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])
