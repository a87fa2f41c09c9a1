import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fuzzysp.errors import DomainError, UnknownElement
from fuzzysp.poset import (DomainPoset, antichain_poset, chain_poset, has_bottom, is_isotone,
                           powerset_reverse, principal_upset, product_poset, random_poset, subposet,
                           transitive_closure, verify_domain, way_below, way_below_by_definition)

from oracles import partial_orders


def test_way_below_examples():
    c = chain_poset(3)
    assert way_below(c, "1", "2")
    assert not way_below(c, "2", "1")
    ab = antichain_poset(["a", "b"])
    assert not way_below(ab, "a", "b")


@pytest.mark.parametrize("n", range(1, 5))
def test_way_below_matches_definition_on_all_small_posets(n):
    names = [f"e{i}" for i in range(n)]
    for leq in partial_orders(n):
        p = DomainPoset(names, leq)
        for a, b in itertools.product(range(n), repeat=2):
            assert way_below_by_definition(p, a, b) == leq[a][b]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(5, 6), st.floats(0, 1))
def test_way_below_matches_definition_on_random_posets(seed, size, density):
    p = random_poset(seed, size, density)
    for a in p:
        for b in p:
            assert way_below(p, a, b) == way_below_by_definition(p, a, b)


def test_reflexive_way_below():
    p = random_poset(11, 5, 0.5)
    assert all(way_below_by_definition(p, a, a) for a in p)


def test_verify_domain_examples():
    rep = verify_domain(["0", "1", "2"], [(a, b) for a in "012" for b in "012" if a <= b])
    assert rep.ok and rep.bottom == "0"
    rep = verify_domain(["a", "b"], [("a", "a"), ("b", "b")])
    assert rep.ok and rep.bottom is None
    assert not has_bottom(rep.poset)


def test_verify_domain_reports_missing_laws():
    assert verify_domain(["a", "b"], [("a", "a")]).failures[0][0] == "reflexive"
    rep = verify_domain(["a", "b", "c"], [(x, x) for x in "abc"] + [("a", "b"), ("b", "c")])
    assert rep.failures[0] == ("transitive", ("a", "b", "c"))
    rep = verify_domain(["a", "b"], [("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")])
    assert rep.failures[0][0] == "antisymmetric"


@pytest.mark.parametrize("n", range(1, 4))
def test_verify_domain_accepts_exactly_partial_orders(n):
    names = [str(i) for i in range(n)]
    good = {tuple(map(tuple, leq)) for leq in partial_orders(n)}
    cells = [(a, b) for a in range(n) for b in range(n)]
    for bits in itertools.product((False, True), repeat=len(cells)):
        pairs = [(names[a], names[b]) for (a, b), on in zip(cells, bits) if on]
        mat = tuple(tuple(bits[a * n + b] for b in range(n)) for a in range(n))
        assert verify_domain(names, pairs).ok == (mat in good)


def test_is_isotone_witness():
    c = chain_poset(3)
    v = is_isotone(c, c, {"0": "2", "1": "0", "2": "2"})
    assert not v.ok and v.witness == ("0", "1")
    assert is_isotone(c, c, lambda x: x)


def test_principal_upset():
    c = chain_poset(3)
    assert principal_upset(c, "1") == {"1", "2"}


def test_random_poset_contract():
    assert random_poset(7, 5).leq == random_poset(7, 5).leq
    one = random_poset(3, 1)
    assert one.bottom == 0
    with pytest.raises(DomainError):
        random_poset(0, 0)
    with_bot = random_poset(5, 4, 0.0, with_bottom=True)
    assert with_bot.name(with_bot.bottom) == "bot"


@pytest.mark.parametrize("seed", range(200))
def test_random_posets_validate(seed):
    p = random_poset(seed, 1 + seed % 7, (seed % 5) / 4)
    pairs = [(p.name(a), p.name(b)) for a, b in p.pairs()]
    assert verify_domain(p.elements, pairs).ok


def test_from_pairs_takes_closure_and_checks_bottom():
    p = DomainPoset.from_pairs(["x", "y", "z"], [("x", "y"), ("y", "z")], bottom="x")
    assert p.le(p.index("x"), p.index("z"))
    with pytest.raises(DomainError):
        DomainPoset.from_pairs(["x", "y"], [], bottom="x")
    with pytest.raises(UnknownElement):
        DomainPoset.from_pairs(["x"], [("x", "w")])
    with pytest.raises(DomainError):
        DomainPoset.from_pairs(["x", "y"], [("x", "y"), ("y", "x")])


def test_transitive_closure_small():
    leq = transitive_closure(3, [(0, 1), (1, 2)])
    assert leq[0][2] and not leq[2][0]


def test_shapes():
    sq = product_poset(chain_poset(2), chain_poset(2))
    assert sq.elements == ("0,0", "0,1", "1,0", "1,1")
    assert sq.bottom == 0
    ps = powerset_reverse(["s1", "s2"])
    assert ps.name(ps.bottom) == "{s1,s2}"
    sub = subposet(sq, ["0,0", "1,1"])
    assert len(sub) == 2 and sub.le(0, 1)


def test_linear_extension_respects_order():
    for seed in range(30):
        p = random_poset(seed, 6, 0.4)
        pos = {x: i for i, x in enumerate(p.linear_extension())}
        assert all(pos[a] <= pos[b] for a, b in p.pairs())
