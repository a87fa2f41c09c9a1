"""Worked examples: quality-rated images and frames, and guaranteed probabilities.

Quality scales
--------------
Parts (or frames) are rated on ``0..m`` and a domain element ``d`` reads
"part ``i`` has quality at least ``d_i``".  The three comparison formulas
:func:`pred_mq`, :func:`pred_mq_prime` and :func:`pred_mq_dprime` are
evaluated exactly as written, by a downward search over ``k``.  As written
they grow with ``d`` (a better guaranteed input meets the target more), so
they are returned as :class:`RawValuation` objects, not predicates.

:func:`truth_predicate` is the antitone truth value of ``d`` in a known
state ``s``; it equals ``pred_mq`` with the two arguments swapped, i.e.
``truth_predicate(s)(d) == pred_mq(q=d)(s)``.  The frame transformer uses it
for its images.

Guaranteed probabilities
------------------------
Events are subsets of a finite state set ordered by reverse inclusion, so the
full set is the least element.  Several candidate lower-bound distributions
aggregate into the worst-case guaranteed probability, quantized downwards
onto a chain of resolution ``k``.

Knowing only ``P({s1, s2}) >= 1/2`` is a predicate that no per-state bound
can express; every singleton gets zero:

>>> from fuzzysp.lattice import builtin_godel, build_chain
>>> from fuzzysp.poset import powerset_reverse
>>> from fuzzysp.predicate import Predicate
>>> D = powerset_reverse(["s1", "s2"])
>>> q = builtin_godel(build_chain(3))      # 0, 1/2, 1
>>> m = Predicate.from_mapping(D, q, {"{s1,s2}": "1", "{s1}": "0", "{s2}": "0", "{}": "0"})
>>> [m["{s1}"], m["{s2}"]]
[0, 0]
>>> m["{s1,s2}"] > 0
True
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DomainError, Mismatch, SizeCapExceeded
from .lattice import Quantale, build_chain, builtin_godel, builtin_lukasiewicz
from .poset import DomainPoset, chain_poset, powerset_reverse, product_poset
from .predicate import Predicate, RawValuation
from .transformer import StateTransformer


@dataclass(frozen=True)
class QualityScale:
    """``n`` parts rated on the chain ``0..m``; the domain is ``chain(m+1) ** n``."""

    m: int
    n: int
    kind: str = "lukasiewicz"
    quantale: Quantale = field(init=False, repr=False, compare=False)
    domain: DomainPoset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError("scale needs m >= 1 and n >= 1")
        if self.kind == "lukasiewicz":
            q = builtin_lukasiewicz(self.m)
        elif self.kind == "godel":
            q = builtin_godel(build_chain(self.m + 1))
        else:
            raise ValueError(f"unknown quantale kind {self.kind!r}")
        c = chain_poset(self.m + 1)
        object.__setattr__(self, "quantale", q)
        object.__setattr__(self, "domain", product_poset(*([c] * self.n)))

    def state(self, vec: Sequence[int]) -> int:
        """Domain index of a quality vector."""
        if len(vec) != self.n or any(not 0 <= v <= self.m for v in vec):
            raise Mismatch(f"{tuple(vec)} is not a vector in 0..{self.m} of length {self.n}")
        return self.domain.index(",".join(str(v) for v in vec))

    def vector(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.domain.name(i).split(","))

    def vectors(self):
        return [self.vector(i) for i in self.domain]


def _max_k(m: int, ok) -> int:
    # the satisfying k form a down-set, so the first hit scanning down is the maximum
    for k in range(m, -1, -1):
        if ok(k):
            return k
    raise AssertionError("k = 0 always qualifies")


def _check_vec(scale: QualityScale, q: Sequence[int]) -> tuple[int, ...]:
    scale.state(q)
    return tuple(q)


def mq_value(m: int, q: Sequence[int], d: Sequence[int]) -> int:
    return _max_k(m, lambda k: all(di >= qi - (m - k) for di, qi in zip(d, q)))


def mq_prime_value(m: int, q: Sequence[int], d: Sequence[int]) -> int:
    return _max_k(m, lambda k: all(di >= min(k, qi) for di, qi in zip(d, q)))


def mq_dprime_value(m: int, q: Sequence[int], d: Sequence[int]) -> int:
    return _max_k(m, lambda k: all(max(di, m - k) >= qi for di, qi in zip(d, q)))


def _valuation(scale: QualityScale, q, fn) -> RawValuation:
    q = _check_vec(scale, q)
    return RawValuation(scale.domain, scale.quantale,
                        [fn(scale.m, q, scale.vector(i)) for i in scale.domain])


def pred_mq(scale: QualityScale, q: Sequence[int]) -> RawValuation:
    """Worst relative loss of quality of ``d`` against the target ``q``."""
    return _valuation(scale, q, mq_value)


def pred_mq_prime(scale: QualityScale, q: Sequence[int]) -> RawValuation:
    """Degree below which the quality of ``d`` is not worse than ``q``."""
    return _valuation(scale, q, mq_prime_value)


def pred_mq_dprime(scale: QualityScale, q: Sequence[int]) -> RawValuation:
    """Degree above which the quality of ``d`` is not worse than ``q``."""
    return _valuation(scale, q, mq_dprime_value)


def truth_value(scale: QualityScale, s: Sequence[int], d: Sequence[int]) -> int:
    """``max{k : s_i >= d_i * k for all i}`` with the scale's multiplication."""
    S = scale.quantale.star_table
    return _max_k(scale.m, lambda k: all(si >= S[di][k] for si, di in zip(s, d)))


def truth_predicate(scale: QualityScale, s: Sequence[int]) -> Predicate:
    """Truth of every ``d`` when the actual quality vector is ``s``."""
    s = _check_vec(scale, s)
    return Predicate(scale.domain, scale.quantale,
                     [truth_value(scale, s, scale.vector(i)) for i in scale.domain])


def frame_key_states(scale: QualityScale) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """``(state, target)`` pairs for every interior frame.

    The state has frame ``i`` at ``m - 1`` between two neighbours at ``m``;
    the target is ``m`` at frame ``i`` and ``0`` elsewhere.
    """
    m, n = scale.m, scale.n
    out = []
    for i in range(1, n - 1):
        s = [0] * n
        s[i - 1], s[i], s[i + 1] = m, m - 1, m
        q = [0] * n
        q[i] = m
        out.append((tuple(s), tuple(q)))
    return out


def frame_transformer(scale: QualityScale) -> StateTransformer:
    """Frame-smoothing program: each key state guarantees its middle frame is perfect.

    Every other state maps to the constant zero predicate (stored once as the
    default image).
    """
    if scale.n < 3:
        raise DomainError("the frame example needs n >= 3")
    if scale.kind != "lukasiewicz":
        raise DomainError("the frame example uses the Lukasiewicz product")
    D, Q = scale.domain, scale.quantale
    images = {scale.state(s): truth_predicate(scale, q) for s, q in frame_key_states(scale)}
    zero = Predicate(D, Q, [Q.lattice.bottom] * len(D))
    return StateTransformer(D, D, Q, images, default=zero)


# -- guaranteed probabilities -------------------------------------------------

@dataclass(frozen=True)
class SubDistribution:
    """Lower bounds on the probability of each state (exact rationals)."""

    states: tuple[str, ...]
    weights: Mapping[str, Fraction]

    def __init__(self, states: Sequence[str], weights: Mapping[str, object]):
        states = tuple(str(s) for s in states)
        w = {s: Fraction(0) for s in states}
        for k, v in weights.items():
            if str(k) not in w:
                raise Mismatch(f"unknown state {k!r}")
            w[str(k)] = Fraction(v)
        if any(v < 0 for v in w.values()):
            raise ValueError("negative weight")
        if sum(w.values()) > 1:
            raise ValueError("total mass exceeds 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "weights", w)

    def mass(self, event) -> Fraction:
        return sum((self.weights[s] for s in event), Fraction(0))

    @property
    def is_full(self) -> bool:
        return sum(self.weights.values()) == 1


def guaranteed_probability(dists: Sequence[SubDistribution], event) -> Fraction:
    """Exact worst case over the candidates of the mass they put on ``event``."""
    return min(d.mass(event) for d in dists)


def _event_of(name: str) -> list[str]:
    inner = name[1:-1]
    return inner.split(",") if inner else []


def prob_predicate(dists: Sequence[SubDistribution], resolution: int,
                   kind: str = "godel", max_states: int = 12) -> Predicate:
    """Guaranteed probability of every event, rounded down to a multiple of ``1/resolution``.

    Values live on the chain ``0..resolution`` (read as ``i/resolution``).
    Rounding down keeps every value a sound lower bound.  The predicate is
    normalized exactly when the full state set gets value 1.
    """
    if not dists:
        raise ValueError("need at least one distribution")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    states = dists[0].states
    if any(d.states != states for d in dists):
        raise Mismatch("distributions must share one state set")
    if len(states) > max_states:
        raise SizeCapExceeded(f"{2 ** len(states)} events exceed the cap")
    D = powerset_reverse(list(states))
    if kind == "godel":
        Q = builtin_godel(build_chain(resolution + 1))
    else:
        Q = builtin_lukasiewicz(resolution)
    vals = [math.floor(guaranteed_probability(dists, _event_of(D.name(i))) * resolution) for i in D]
    normalized = vals[D.bottom] == Q.lattice.top
    return Predicate(D, Q, vals, normalized)


def all_vectors(m: int, n: int):
    return itertools.product(range(m + 1), repeat=n)
