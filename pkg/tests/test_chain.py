from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hqft.chain import (ChainComplex, DegreeWindow, braiding, direct_sum, evaluation, from_dims, homology,
                        identity_map, internal_hom, is_fibration, is_quasi_iso, map_from_images, shift, tensor,
                        unit_complex, zero_complex)
from hqft.linalg import Mat
from hqft.orthcat import cyclic_group
from hqft.simplicial import nerve, normalized_chains


def two_term(rows):
    """V_1 -> V_0 with the given matrix."""
    r = len(rows)
    c = len(rows[0]) if rows else 0
    return from_dims({0: r, 1: c}, {1: rows})


def ranks(V, win=None):
    return {n: r for n, r, _ in homology(V, win).as_rows()}


two_terms = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(-2, 2), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_tensor_with_unit_keeps_dims():
    W = from_dims({0: 1, 1: 2, 2: 1}, {1: [[1, 0]], 2: [[0], [1]]})
    assert tensor(unit_complex(), W).dims() == W.dims()


def test_tensor_dims_convolve():
    V = from_dims({0: 1, 1: 1})
    assert tensor(V, V).dims() == {0: 1, 1: 2, 2: 1}


def test_tensor_of_acyclic_pieces_squares_to_zero():
    V = two_term([[1]])
    T = tensor(V, V)
    assert T.check() == []
    assert (T.d(1) @ T.d(2)).is_zero()


@given(two_terms, two_terms)
@settings(max_examples=60, deadline=None)
def test_kunneth_over_q(a, b):
    V, W = two_term(a), two_term(b)
    hv, hw, ht = ranks(V), ranks(W), ranks(tensor(V, W))
    for n in range(3):
        expect = sum(hv.get(i, 0) * hw.get(n - i, 0) for i in range(n + 1))
        assert ht.get(n, 0) == expect


@given(two_terms)
@settings(max_examples=60, deadline=None)
def test_euler_characteristic_of_homology(a):
    V = two_term(a)
    h = ranks(V)
    assert h.get(0, 0) - h.get(1, 0) == V.euler_characteristic()


def test_homology_small_cases():
    assert ranks(two_term([[1]])) == {0: 0, 1: 0}
    assert ranks(two_term([[0]])) == {0: 1, 1: 1}
    V = from_dims({0: 1, 1: 2}, {1: [[1, 1]]})
    assert ranks(V) == {0: 0, 1: 1}


def test_internal_hom_out_of_unit():
    W = from_dims({0: 1, 1: 2, 2: 1}, {1: [[1, 0]], 2: [[0], [1]]})
    H = internal_hom(unit_complex(), W, DegreeWindow(-1, 3))
    assert H.dims() == W.dims()


def test_cochains_of_bz2_have_one_cell_per_nonpositive_degree():
    N = normalized_chains(nerve(cyclic_group(2)), DegreeWindow(5, 5))
    H = internal_hom(N, unit_complex(), DegreeWindow(-4, 2))
    assert H.dims() == {-4: 1, -3: 1, -2: 1, -1: 1, 0: 1}
    assert not H.basis.get(1) and not H.basis.get(2)


def test_internal_hom_of_shift_is_shifted():
    V = from_dims({0: 1, 1: 2}, {1: [[1, 1]]})
    W = from_dims({0: 2, 1: 1}, {1: [[1], [0]]})
    win = DegreeWindow(-3, 3)
    H = internal_hom(V, W, win)
    Hs = internal_hom(shift(V, 1), W, DegreeWindow(-4, 2))
    assert {n - (-1): d for n, d in Hs.dims().items()} == H.dims()


def test_internal_hom_differential_squares_to_zero():
    V = from_dims({0: 1, 1: 2, 2: 1}, {1: [[1, -1]], 2: [[1], [1]]})
    W = from_dims({0: 1, 1: 1}, {1: [[1]]})
    assert internal_hom(V, W, DegreeWindow(-3, 2)).check() == []


def test_quasi_iso_decisions():
    A = two_term([[1]])
    assert is_quasi_iso(identity_map(A), DegreeWindow(0, 1)).ok
    assert is_quasi_iso(map_from_images(zero_complex(), A, {}), DegreeWindow(0, 1)).ok
    k = unit_complex()
    assert not is_quasi_iso(map_from_images(zero_complex(), k, {}), DegreeWindow(0, 0)).ok


def test_fibration_is_degreewise_surjection():
    k = unit_complex()
    assert is_fibration(identity_map(k)).ok
    assert not is_fibration(map_from_images(zero_complex(), k, {})).ok
    Q2 = ChainComplex({0: ["x", "y"]})
    assert is_fibration(map_from_images(Q2, k, {"x": {"1": 1}, "y": {"1": 1}})).ok


def test_braiding_signs_and_involution():
    V = ChainComplex({0: ["v0"], 1: ["v1"]}, {1: Mat.from_dense([[1]])})
    W = ChainComplex({0: ["w0"], 1: ["w1"]}, {1: Mat.from_dense([[2]])})
    b = braiding(V, W)
    assert b.apply({("v0", "w0"): Fraction(1)}) == {("w0", "v0"): 1}
    assert b.apply({("v1", "w1"): Fraction(1)}) == {("w1", "v1"): -1}
    assert b.is_chain_map()
    back = braiding(W, V).compose(b)
    for n, labs in tensor(V, W).basis.items():
        for lab in labs:
            assert back.apply({lab: Fraction(1)}) == {lab: 1}


def test_direct_sum_adds_homology():
    A, B = two_term([[0]]), two_term([[1, 1]])
    assert ranks(direct_sum(A, B)) == {0: 1, 1: 2}


def test_evaluation_on_identity_and_chain_map():
    V = unit_complex("v")
    ev = evaluation(V, V, DegreeWindow(0, 0))
    assert ev.apply({(("v", "v"), "v"): Fraction(1)}) == {"v": 1}
    # brutal truncation N_{<=3}: a genuine finite subcomplex
    N = normalized_chains(nerve(cyclic_group(2)), DegreeWindow(3, 3))
    Nt = ChainComplex({n: N.basis[n] for n in range(4)}, {n: N.d(n) for n in range(1, 4)})
    ev2 = evaluation(Nt, unit_complex(), DegreeWindow(-3, 0))
    assert ev2.is_chain_map()
    assert ev2.apply({((N.basis[2][0], "1"), N.basis[2][0]): Fraction(1)}) == {"1": 1}


def test_window_trust_flags():
    N = normalized_chains(nerve(cyclic_group(2)), DegreeWindow(0, 3))
    h = homology(N, DegreeWindow(0, 3))
    assert h.trusted[0] and h.trusted[3]
    assert h[0] == 1 and all(h[n] == 0 for n in (1, 2, 3))


def test_bad_shapes_are_rejected():
    with pytest.raises(ValueError):
        ChainComplex({0: ["a"], 1: ["b"]}, {1: Mat.from_dense([[1, 1]])})
