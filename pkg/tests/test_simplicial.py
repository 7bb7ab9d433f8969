from fractions import Fraction

from hypothesis import given, settings, strategies as st

from hqft.chain import DegreeWindow, homology
from hqft.orthcat import conjugation_groupoid, cyclic_group, discrete_groupoid, group_groupoid, point_category, \
    poset_category, perm_inv, perm_mul, symmetric_group_elements
from hqft.simplicial import (ProductView, aw, aw_map, boundary_simplex, cochain, cochain_values, cup, discrete_set,
                             ez_map, groupoid_cohomology, nerve, normalized_chains, normalized_cochains, point,
                             standard_simplex)


def ranks(H):
    return {n: r for n, r in H.trusted_items()}


def test_nerve_of_terminal_category_is_a_point():
    N = nerve(point_category())
    assert len(N.nondegenerate(0)) == 1
    assert all(not N.nondegenerate(d) for d in (1, 2, 3))


@given(st.integers(1, 5), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_nerve_of_cyclic_group_counts(n, d):
    assert len(nerve(cyclic_group(n)).nondegenerate(d)) == (n - 1) ** d


def test_nerve_of_interval_poset():
    N = nerve(poset_category([0, 1], lambda a, b: a <= b))
    assert [len(N.nondegenerate(d)) for d in range(4)] == [2, 1, 0, 0]


def test_simplicial_identities_hold():
    assert nerve(cyclic_group(3)).check_identities(3) == []
    assert nerve(conjugation_groupoid(3)).check_identities(2) == []


def test_chains_of_point_z2_and_interval():
    assert normalized_chains(point(), DegreeWindow(0, 3)).dims() == {0: 1}
    win = DegreeWindow(0, 4)
    N = normalized_chains(nerve(cyclic_group(2)), win)
    assert all(N.dim(d) == 1 for d in range(5))
    assert ranks(homology(N, win)) == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}
    I = normalized_chains(nerve(poset_category([0, 1], lambda a, b: a <= b)), win)
    assert I.dims() == {0: 2, 1: 1}
    assert homology(I, win)[0] == 1 and homology(I, win)[1] == 0


def test_cochains_of_three_points_are_functions():
    X = discrete_set(["p", "q", "r"])
    C = normalized_cochains(X, DegreeWindow(-2, 0))
    assert C.dims() == {0: 3}
    ep = cochain({("p",): 1})
    eq = cochain({("q",): 1})
    assert cup(X, ep, ep) == ep
    assert cup(X, ep, eq) == {}
    one = cochain({("p",): 1, ("q",): 1, ("r",): 1})
    assert cup(X, one, eq) == eq


def test_cochains_of_point_are_unit():
    C = normalized_cochains(point(), DegreeWindow(-2, 0))
    assert C.dims() == {0: 1}


def test_cup_is_leibniz_up_to_sign_on_circle():
    # on the boundary of the 2-simplex (a circle) the cup of two 1-cochains vanishes
    X = boundary_simplex(2)
    a = cochain({(0, 1): 1})
    b = cochain({(1, 2): 1})
    assert cup(X, a, b) == {}
    assert cochain_values(a) == {(0, 1): Fraction(1)}


def orbit_count(n):
    G = symmetric_group_elements(n)
    seen, orbits = set(), 0
    for x in G:
        if x in seen:
            continue
        orbits += 1
        seen |= {perm_mul(perm_mul(g, x), perm_inv(g)) for g in G}
    return orbits


def test_groupoid_cohomology_examples():
    win = DegreeWindow(-4, 0)
    triv = group_groupoid([0], lambda a, b: 0, 0)
    assert ranks(groupoid_cohomology(triv, win))[0] == 1
    assert ranks(groupoid_cohomology(cyclic_group(2), win)) == {-3: 0, -2: 0, -1: 0, 0: 1}
    assert ranks(groupoid_cohomology(discrete_groupoid(["p", "q", "r"]), win))[0] == 3
    assert ranks(groupoid_cohomology(conjugation_groupoid(3), DegreeWindow(-2, 0)))[0] == orbit_count(3) == 3


def test_aw_with_point_factor_is_unit_iso():
    X = normalized_chains(standard_simplex(1), DegreeWindow(0, 2))
    f = aw_map(point(), standard_simplex(1), DegreeWindow(0, 2))
    assert f.source.dims() == X.dims() == f.target.dims()
    for n, labs in f.source.basis.items():
        for s in labs:
            assert f.apply({s: Fraction(1)}) == {(("*",), s[1]): 1}


def test_aw_of_square_diagonal_has_two_terms():
    D1 = standard_simplex(1)
    terms = aw(D1, D1, ((0, 1), (0, 1)))
    assert terms == {((0,), (0, 1)): 1, ((0, 1), (1,)): 1}


def test_aw_after_ez_is_identity_on_bz2_squared():
    X = nerve(cyclic_group(2))
    win = DegreeWindow(0, 3)
    a, e = aw_map(X, X, win), ez_map(X, X, win)
    assert a.is_chain_map() and e.is_chain_map()
    for n in range(0, 4):
        for lab in e.source.basis.get(n, ()):
            assert a.apply(e.apply({lab: Fraction(1)})) == {lab: 1}


def test_product_view_is_simplicial():
    P = ProductView(standard_simplex(1), standard_simplex(1))
    assert len(P.nondegenerate(2)) == 2
    assert P.check_identities(2) == []
