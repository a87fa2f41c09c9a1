import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fuzzysp.errors import LatticeError, NotDistributive, QuantaleLawViolation, UnitNotTop
from fuzzysp.lattice import (FiniteLattice, build_chain, build_downset_lattice, build_product, builtin_godel,
                             builtin_lukasiewicz, is_inf_distributive, m3_lattice, make_quantale,
                             quantale_failures, quantale_product, square_lattice, square_with_bounds_quantale,
                             tabulated_nilpotent_chain4, unchecked_quantale, verify_distributive,
                             verify_lattice)
from fuzzysp.poset import antichain_poset, chain_poset, random_poset

from oracles import glb, lub


def tables_match_brute_force(L: FiniteLattice) -> bool:
    return all(L.join(a, b) == lub(L.leq, a, b) and L.meet(a, b) == glb(L.leq, a, b) for a in L for b in L)


# -- builders ---------------------------------------------------------------

def test_chain_basics():
    b = build_chain(2)
    assert b.elements == ("0", "1")
    assert (b.bottom, b.top) == (0, 1)
    c6 = build_chain(6)
    assert c6.join(3, 4) == 4
    assert c6.meet(3, 4) == 3
    one = build_chain(1)
    assert one.top == one.bottom == 0


def test_chain_rejects_zero():
    with pytest.raises(LatticeError):
        build_chain(0)


def test_product_square():
    sq = build_product(build_chain(2), build_chain(2))
    a, b = sq.index("(0,1)"), sq.index("(1,0)")
    assert not sq.le(a, b) and not sq.le(b, a)
    assert sq.name(sq.join(a, b)) == "(1,1)"
    p = build_product(build_chain(2), build_chain(3))
    assert len(p) == 6
    assert verify_distributive(p)


def test_downset_examples():
    sq = build_downset_lattice(antichain_poset(["a", "b"]))
    # brute force: the down-closed subsets of an antichain are all four subsets
    assert sorted(sq.elements) == sorted(["{}", "{a}", "{b}", "{a,b}"])
    a, b = sq.index("{a}"), sq.index("{b}")
    assert not sq.le(a, b) and not sq.le(b, a)

    ch = build_downset_lattice(chain_poset(3))
    assert len(ch) == 4
    assert all(ch.le(i, j) or ch.le(j, i) for i in ch for j in ch)

    from fuzzysp.poset import DomainPoset
    assert len(build_downset_lattice(DomainPoset([], []))) == 1


@pytest.mark.parametrize("seed", range(20))
def test_downset_lattice_is_distributive_and_tabulated_correctly(seed):
    L = build_downset_lattice(random_poset(seed, 4, 0.3))
    assert verify_distributive(L)
    assert tables_match_brute_force(L)


@pytest.mark.parametrize("L", [build_chain(1), build_chain(4), square_lattice(), m3_lattice(),
                               build_product(build_chain(3), build_chain(3))])
def test_builder_tables_agree_with_bound_search(L):
    assert tables_match_brute_force(L)
    pairs = [(L.name(a), L.name(b)) for a in L for b in L if L.le(a, b)]
    assert verify_lattice(L.elements, pairs).ok


# -- verification -------------------------------------------------------------

def test_verify_lattice_chain():
    els = ["0", "1", "2", "3"]
    rep = verify_lattice(els, [(a, b) for a in els for b in els if a <= b])
    assert rep.ok and rep.lattice.name(rep.lattice.top) == "3"


def test_verify_lattice_bowtie_has_no_join():
    els = ["a", "b", "c", "d"]
    pairs = [(x, x) for x in els] + [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
    rep = verify_lattice(els, pairs)
    assert not rep.ok
    law, witness = rep.failures[0]
    assert law == "join-exists"
    assert witness == ("a", "b")


def test_verify_lattice_antisymmetry():
    rep = verify_lattice(["a", "b"], [("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")])
    assert not rep.ok
    assert rep.failures[0][0] == "antisymmetric"


def test_distributivity():
    assert verify_distributive(build_chain(6))
    v = verify_distributive(m3_lattice())
    assert not v.ok
    a, b, c = (m3_lattice().index(x) for x in v.witness)
    L = m3_lattice()
    assert L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c))
    assert verify_distributive(build_product(build_chain(3), build_chain(4)))


# -- quantales ----------------------------------------------------------------

def test_lukasiewicz_and_godel_tables_on_chain6():
    c = build_chain(6)
    r = range(6)
    luk = make_quantale(c, [[max(i + j - 5, 0) for j in r] for i in r], "5")
    god = make_quantale(c, [[min(i, j) for j in r] for i in r], "5")
    assert luk.star(3, 4) == 2
    assert god.star(3, 4) == 3
    assert builtin_lukasiewicz(5).star(3, 4) == 2
    assert builtin_godel(build_chain(6)).star(3, 4) == 3


def test_constant_table_has_no_unit():
    c = build_chain(3)
    with pytest.raises(QuantaleLawViolation) as err:
        make_quantale(c, [[1] * 3 for _ in range(3)], "2")
    assert err.value.law in ("unit", "annihilation")


def test_unit_must_be_top():
    c = build_chain(3)
    with pytest.raises(UnitNotTop):
        make_quantale(c, c.meet_table, "1")


def test_non_distributive_lattice_rejected():
    M3 = m3_lattice()
    with pytest.raises(NotDistributive):
        make_quantale(M3, M3.meet_table, "1")


def test_product_quantale_example():
    q = quantale_product(builtin_lukasiewicz(5), builtin_godel(build_chain(2)))
    L = q.lattice
    assert q.star_names("(3,1)", "(4,0)") == "(2,0)"
    assert L.name(q.unit) == "(5,1)"
    assert not quantale_failures(q)


@pytest.mark.parametrize("q", [builtin_lukasiewicz(4), builtin_godel(square_lattice()),
                               tabulated_nilpotent_chain4(), square_with_bounds_quantale(),
                               quantale_product(builtin_lukasiewicz(2), builtin_lukasiewicz(1))])
def test_multiplication_is_isotone(q):
    L, S = q.lattice, q.star_table
    for a, a2, b in itertools.product(L, repeat=3):
        if L.le(a, a2):
            assert L.le(S[a][b], S[a2][b]) and L.le(S[b][a], S[b][a2])


def test_inf_distributivity():
    for n in range(1, 6):
        assert is_inf_distributive(builtin_godel(build_chain(n)))
    assert is_inf_distributive(builtin_lukasiewicz(5))
    q = square_with_bounds_quantale()
    v = is_inf_distributive(q)
    assert not v.ok
    side, a, b, c = v.witness
    assert (side, a, b, c) == ("left", "q", "x", "y")
    L = q.lattice
    qi, xi, yi = L.index("q"), L.index("x"), L.index("y")
    assert q.star(qi, L.meet(xi, yi)) != L.meet(q.star(qi, xi), q.star(qi, yi))


def test_square_admits_only_meet():
    # every law-abiding table on the four-element square is its meet,
    # so a non-inf-distributive example has to live on a larger lattice
    sq = square_lattice()
    bot, top = sq.bottom, sq.top
    mid = [x for x in sq if x not in (bot, top)]
    found = []
    for vals in itertools.product(range(4), repeat=4):
        rows = [list(r) for r in sq.meet_table]
        for (a, b), v in zip(itertools.product(mid, repeat=2), vals):
            rows[a][b] = v
        q = unchecked_quantale(sq, rows, top)
        if not quantale_failures(q):
            found.append(rows)
    assert found == [[list(r) for r in sq.meet_table]]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3))
def test_products_of_valid_quantales_validate(m, n):
    q = quantale_product(builtin_lukasiewicz(m), builtin_godel(build_chain(n + 1)))
    assert not quantale_failures(q)
    assert len(q.lattice) == (m + 1) * (n + 1)


def test_corrupted_table_is_reported():
    good = builtin_lukasiewicz(3)
    rows = [list(r) for r in good.star_table]
    rows[1][1] = 1
    bad = quantale_failures(unchecked_quantale(good.lattice, rows, good.unit))
    assert bad
