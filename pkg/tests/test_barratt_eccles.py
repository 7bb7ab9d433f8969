import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hqft import barratt_eccles as be
from hqft.chain import DegreeWindow, is_quasi_iso
from hqft.operads import EinftyOperad, check_operad_axioms
from hqft.orthcat import cyclic_group, perm_inv
from hqft.simplicial import aw, nerve, standard_simplex

ONE = Fraction(1)


def brute_basis(n, d):
    P = list(itertools.permutations(range(1, n + 1)))
    return [t for t in itertools.product(P, repeat=d + 1) if all(a != b for a, b in zip(t, t[1:]))]


def marked_compose(sigma, taus):
    """Flatten the product word of sigma, replacing each input by the word of its block."""
    word = [i + 1 for i in sorted(range(len(sigma)), key=lambda i: sigma[i])]
    flat = []
    for i in word:
        tau = taus[i - 1]
        flat.extend((i, j + 1) for j in sorted(range(len(tau)), key=lambda j: tau[j]))
    inputs = [(i + 1, j + 1) for i, t in enumerate(taus) for j in range(len(t))]
    return tuple(flat.index(mark) + 1 for mark in inputs)


def perms(n):
    return st.permutations(list(range(1, n + 1))).map(tuple)


@pytest.mark.parametrize("n,d", [(1, 0), (2, 0), (2, 3), (3, 1), (3, 2), (4, 1)])
def test_basis_matches_enumeration(n, d):
    assert sorted(be.be_basis(n, d)) == sorted(brute_basis(n, d))
    assert be.be_dim(n, d) == len(brute_basis(n, d))


def test_arity_two_has_two_cells_per_degree():
    assert [be.be_dim(2, d) for d in range(6)] == [2] * 6


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    perms(n), st.tuples(*[st.integers(1, 3).flatmap(perms) for _ in range(n)]))))
@settings(max_examples=80, deadline=None)
def test_degree_zero_composition_is_block_composition(data):
    sigma, taus = data
    got = be.be_compose({(sigma,): ONE}, [{(t,): ONE} for t in taus])
    assert got == {(marked_compose(sigma, taus),): 1}


def _d(x):
    return be.be_differential(x)


def _sc(x, c):
    return {k: c * v for k, v in x.items()}


def _add(*xs):
    out = {}
    for x in xs:
        for k, v in x.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def leibniz_defect(x, ys):
    lhs = _d(be.be_compose(x, ys))
    terms = [be.be_compose(_d(x), ys)]
    deg = be.elem_degree(x)
    for i in range(len(ys)):
        s = -1 if deg % 2 else 1
        new = list(ys)
        new[i] = _d(ys[i])
        terms.append(_sc(be.be_compose(x, new), s))
        deg += be.elem_degree(ys[i])
    return _add(lhs, _sc(_add(*terms), -1))


def test_leibniz_degree_one_with_arity_one_inputs():
    x = {((1, 2), (2, 1)): ONE}
    assert leibniz_defect(x, [be.unit_element(), be.unit_element()]) == {}


def test_leibniz_on_random_higher_composites():
    rng = random.Random(3)
    for _ in range(25):
        x = {rng.choice(be.be_basis(2, rng.randint(0, 2))): ONE}
        ys = []
        for _ in range(2):
            k = rng.randint(1, 2)
            ys.append({rng.choice(be.be_basis(k, rng.randint(0, 2) if k > 1 else 0)): ONE})
        assert leibniz_defect(x, ys) == {}


def test_d_squared_vanishes():
    for n in range(1, 4):
        for d in range(2, 4):
            for t in be.be_basis(n, d):
                assert _d(_d({t: ONE})) == {}
    for n in range(1, 5):
        for d in range(0, 7):
            ok, _ = be.d_squared_certificate(n, d)
            assert ok


def test_augmentation_of_arity_two_is_quasi_iso():
    assert is_quasi_iso(be.augmentation(2, 7), DegreeWindow(0, 6)).ok


def test_contraction_certificate():
    ok, count = be.contraction_certificate(3, 3)
    assert ok and count > 0


def test_inclusion_and_augmentation_compose_to_as_to_com():
    inc = be.as_inclusion(3)
    aug = be.augmentation(3, 1)
    for p, t in inc.items():
        assert t == (p,)
        assert aug.apply({t: ONE}) == {"1": 1}


def test_table_reduction_supports_in_arity_two():
    for t in be.be_basis(2, 1):
        assert set(be.table_reduction({t: ONE})) <= {(1, 2, 1), (2, 1, 2)}
        assert be.table_reduction({t: ONE})


@pytest.mark.parametrize("n,dmax", [(2, 4), (3, 2)])
def test_table_reduction_is_a_chain_map(n, dmax):
    for d in range(dmax + 1):
        for t in be.be_basis(n, d):
            x = {t: ONE}
            assert be.table_reduction(_d(x)) == be.surjection_differential(be.table_reduction(x))


def test_coaction_unit_and_aw():
    X = nerve(cyclic_group(2))
    s = X.nondegenerate(2)[0]
    assert be.coaction(X, be.unit_element(), {s: ONE}) == {(s,): 1}
    D1 = standard_simplex(1)
    got = be.coaction(D1, {((1, 2),): ONE}, {(0, 1): ONE})
    assert got == {((0,), (0, 1)): 1, ((0, 1), (1,)): 1}
    assert got == aw(D1, D1, ((0, 1), (0, 1)))


@pytest.mark.parametrize("n", [2, 3])
def test_degree_zero_coaction_is_iterated_aw(n):
    X = nerve(cyclic_group(2))
    for d in range(4):
        for s in X.nondegenerate(d):
            assert be.coaction(X, {(be.identity_perm(n),): ONE}, {s: ONE}) == be.iterated_aw(X, n, s)


def test_coaction_leibniz_on_bz2():
    X = nerve(cyclic_group(2))
    for d in range(0, 4):
        for t in be.be_basis(2, d):
            x = {t: ONE}
            for k in range(0, 4 - d):
                for s in X.nondegenerate(k):
                    c = {s: ONE}
                    lhs = be.tensor_boundary(X, be.coaction(X, x, c))
                    sign = -1 if d % 2 else 1
                    rhs = _add(be.coaction(X, _d(x), c), _sc(be.coaction(X, x, be.chain_boundary(X, c)), sign))
                    assert lhs == rhs


def test_einfty_operad_axioms_exhaustive_small():
    rep = check_operad_axioms(EinftyOperad(), max_arity=2, degrees=(0, 1), max_total=3)
    assert rep.ok and rep.checked == 61056


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_einfty_operad_axioms_sampled_to_arity_three(seed):
    rep = check_operad_axioms(EinftyOperad(), max_arity=3, degrees=(0, 1, 2), samples=15, seed=seed)
    assert rep.ok and rep.checked > 200


def test_right_action_reorders_inputs():
    x = {((1, 2), (2, 1)): ONE}
    assert be.be_right_action(x, (2, 1)) == {((2, 1), (1, 2)): 1}
    assert perm_inv((2, 3, 1)) == (3, 1, 2)
