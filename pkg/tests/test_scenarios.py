import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fuzzysp import predicate as P
from fuzzysp import scenarios as S
from fuzzysp import transformer as T
from fuzzysp.errors import DomainError, Mismatch
from fuzzysp.predicate import RawValuation

from oracles import max_k

SCALE = S.QualityScale(5, 2)


def at(v, scale, d):
    return v.values[scale.state(d)]


def luk(m, a, b):
    return max(a + b - m, 0)


def test_quality_values_at_the_worked_point():
    q, d, m = (5, 3), (4, 2), 5
    want = [
        max_k(m, lambda k: all(di >= qi - (m - k) for di, qi in zip(d, q))),
        max_k(m, lambda k: all(di >= min(k, qi) for di, qi in zip(d, q))),
        max_k(m, lambda k: all(max(di, m - k) >= qi for di, qi in zip(d, q))),
    ]
    got = [at(S.pred_mq(SCALE, q), SCALE, d), at(S.pred_mq_prime(SCALE, q), SCALE, d),
           at(S.pred_mq_dprime(SCALE, q), SCALE, d)]
    assert got == want == [4, 2, 0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_quality_constructors_match_search(m, data):
    n = data.draw(st.integers(1, 2))
    scale = S.QualityScale(m, n)
    q = tuple(data.draw(st.lists(st.integers(0, m), min_size=n, max_size=n)))
    preds = [S.pred_mq(scale, q), S.pred_mq_prime(scale, q), S.pred_mq_dprime(scale, q)]
    for d in itertools.product(range(m + 1), repeat=n):
        want = [
            max_k(m, lambda k: all(di >= qi - (m - k) for di, qi in zip(d, q))),
            max_k(m, lambda k: all(di >= min(k, qi) for di, qi in zip(d, q))),
            max_k(m, lambda k: all(max(di, m - k) >= qi for di, qi in zip(d, q))),
        ]
        assert [at(p, scale, d) for p in preds] == want


def test_quality_valuations_are_raw_and_isotone():
    v = S.pred_mq(SCALE, (5, 3))
    assert isinstance(v, RawValuation)
    assert not v.is_antitone()
    D = SCALE.domain
    assert all(v.values[a] <= v.values[b] for a, b in D.pairs())


def test_mq_at_own_target_is_top():
    for q in S.all_vectors(5, 2):
        assert at(S.pred_mq(SCALE, q), SCALE, q) == 5
        assert at(S.pred_mq_prime(SCALE, q), SCALE, q) == 5


def test_truth_predicate_swaps_roles():
    for s in S.all_vectors(5, 2):
        t = S.truth_predicate(SCALE, s)
        assert P.is_antitone(t)
        for d in S.all_vectors(5, 2):
            assert at(t, SCALE, d) == S.mq_value(5, d, s)
            assert at(t, SCALE, d) == max_k(5, lambda k: all(si >= luk(5, di, k) for si, di in zip(s, d)))


def test_scale_rejects_bad_vectors():
    with pytest.raises(Mismatch):
        S.pred_mq(SCALE, (6, 0))
    with pytest.raises(Mismatch):
        SCALE.state((1, 2, 3))
    with pytest.raises(DomainError):
        S.QualityScale(0, 2)


# -- frames -----------------------------------------------------------------------

FRAMES = S.QualityScale(5, 3)


def test_frame_key_states():
    assert S.frame_key_states(FRAMES) == [((5, 4, 5), (0, 5, 0))]
    five = S.QualityScale(1, 5)
    assert len(S.frame_key_states(five)) == 3
    with pytest.raises(DomainError):
        S.frame_transformer(S.QualityScale(5, 2))


def test_frame_demo_shape():
    phi = S.frame_transformer(FRAMES)
    out = T.usp(phi, P.eta(FRAMES.domain, FRAMES.quantale, "5,5,5"))
    for b in S.all_vectors(5, 3):
        assert at(out, FRAMES, b) == min(5 - b[0], 5 - b[2])
    zero = T.usp(phi, P.eta(FRAMES.domain, FRAMES.quantale, "0,0,0"))
    assert set(zero.values) == {0}


def test_frame_demo_against_oracle_on_truncated_target():
    from fuzzysp.poset import subposet
    phi = S.frame_transformer(FRAMES)
    keep = ["0,0,0", "1,0,0", "0,0,1", "2,0,0", "5,5,5"]
    r = phi.restrict_target(subposet(FRAMES.domain, keep))
    m = P.eta(FRAMES.domain, FRAMES.quantale, "5,5,5")
    assert T.usp(r, m) == T.oracle_least_postcondition(r, m)


# -- probabilities ----------------------------------------------------------------

def test_uniform_two_state_example():
    u = S.SubDistribution(["s1", "s2"], {"s1": Fraction(1, 2), "s2": Fraction(1, 2)})
    m = S.prob_predicate([u], 2)
    assert m.as_dict() == {"{s1,s2}": "2", "{s1}": "1", "{s2}": "1", "{}": "0"}
    assert m.normalized


def test_prob_predicate_is_a_floor_of_the_worst_case():
    rng = random.Random(3)
    states = ["a", "b", "c"]
    for _ in range(40):
        dists = []
        for _ in range(rng.randint(1, 3)):
            raw = [rng.randint(0, 6) for _ in states]
            total = max(sum(raw), 6)
            dists.append(S.SubDistribution(states, {s: Fraction(w, total) for s, w in zip(states, raw)}))
        k = rng.randint(1, 5)
        m = S.prob_predicate(dists, k)
        assert P.is_antitone(m)
        for name, v in m.as_dict().items():
            inner = name[1:-1]
            event = inner.split(",") if inner else []
            exact = min(sum((d.weights[s] for s in event), Fraction(0)) for d in dists)
            assert Fraction(int(v), k) <= exact < Fraction(int(v) + 1, k)


def test_subdistribution_validation():
    with pytest.raises(ValueError):
        S.SubDistribution(["a"], {"a": Fraction(3, 2)})
    with pytest.raises(ValueError):
        S.SubDistribution(["a"], {"a": -1})
    with pytest.raises(Mismatch):
        S.SubDistribution(["a"], {"z": 0})
