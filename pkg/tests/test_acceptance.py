"""The nine acceptance criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` to see the verdicts next to
the test names; the lines are written past pytest's capture.
"""
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from hqft import barratt_eccles as be
from hqft.algebras import (IllDefinedAction, algebra_to_functor, check_algebra_axioms, check_perp_commutativity,
                           constant_diagram, free_einfty, functor_to_algebra, homology_obstruction, pointwise_lan,
                           same_theory, tensoring_free)
from hqft.chain import DegreeWindow, homology, is_quasi_iso
from hqft.hoinv import horan_object, verify_horan_axioms
from hqft.operads import QftOperad, is_weak_equivalence_operads, profiles_up_to, resolution_map
from hqft.orthcat import cyclic_group, max_orthogonality, min_orthogonality, point_category
from hqft.simplicial import boundary_simplex, groupoid_cohomology, nerve
from hqft.workspace import bundled_names, load

sys.path.insert(0, str(Path(__file__).parent))
from golden_runner import manifest, run  # noqa: E402

ONE = Fraction(1)


@pytest.fixture
def verdict(capsys):
    """A dict the test fills in; its PASS/FAIL line is printed whatever happens.

    Tests set ``number`` first and ``ok``/``detail`` as their last step, so an
    assertion failure leaves ``ok`` unset and prints FAIL.
    """
    v = {"number": "?", "ok": False, "detail": ""}
    t0 = time.perf_counter()
    yield v
    with capsys.disabled():
        print(f"\ncriterion {v['number']}: {'PASS' if v['ok'] else 'FAIL'} "
              f"({time.perf_counter() - t0:.1f} s) {v['detail']}")


def passed(v, detail):
    v["ok"], v["detail"] = True, detail


def elapsed(start):
    return time.perf_counter() - start


def trusted_ranks(H):
    return {n: r for n, r, trusted in H.as_rows() if trusted}


# 1 ---------------------------------------------------------------- limiting cases

def test_criterion_1_limiting_case_dimensions(verdict):
    verdict["number"] = 1
    start = time.perf_counter()
    Com = QftOperad(max_orthogonality(point_category()))
    As = QftOperad(min_orthogonality(point_category()))
    for n in range(7):
        prof = (("*",) * n, "*")
        assert Com.dim(prof) == 1
        assert As.dim(prof) == math.factorial(n)
    t = elapsed(start)
    assert t < 1.0, t
    passed(verdict, "max: 1 in every arity, empty relation: n! for n <= 6")


# 2 ---------------------------------------------------------------- resolution

def test_criterion_2_resolution_is_componentwise_quasi_iso(verdict):
    verdict["number"] = 2
    start = time.perf_counter()
    win = DegreeWindow(0, 5)
    exact = certified = 0
    for name in ("pair", "chain3"):
        ws = load(f"@{name}")
        if name == "chain3":
            C = ws.category
            assert any(not C.is_identity(C.compose(g, f)) for g, f in C.composable()
                       if not (C.is_identity(f) or C.is_identity(g)))
        w = resolution_map(ws.orth)
        dec = is_weak_equivalence_operads(w, profiles_up_to(ws.category.objects, 4), win)
        assert dec.ok, dec.witness
        kinds = [n.split("'): ", 1)[1].split(" ", 1)[0] for n in dec.notes if n.startswith("((")]
        exact += kinds.count("exact")
        certified += kinds.count("certificate")
    t = elapsed(start)
    assert t < 60, t
    passed(verdict, f"{exact} profiles by exact ranks, {certified} by contraction certificate")


# 3 ---------------------------------------------------------------- dictionary

def test_criterion_3_dictionary_roundtrip_and_axioms(verdict):
    verdict["number"] = 3
    start = time.perf_counter()
    checks = {}
    for name in ("commutative", "triangular"):
        ws = load(f"@{name}")
        A = functor_to_algebra(ws.theory, ws.orth)
        assert same_theory(algebra_to_functor(A, ws.orth), ws.theory)
        rep = check_algebra_axioms(A, max_arity=3)
        assert rep.ok, rep.failures[:3]
        assert rep.skipped == 0
        checks[name] = rep.checked
    assert not load("@triangular").orth.rel
    t = elapsed(start)
    assert t < 30, t
    passed(verdict, f"exhaustive checks {checks}")


# 4 ---------------------------------------------------------------- perp-commutativity

def test_criterion_4_violation_fails_twice(verdict):
    verdict["number"] = 4
    ws = load("@matrix_violation")
    assert ws.orth.rel
    dec = check_perp_commutativity(ws.theory, ws.orth)
    assert not dec.ok
    assert any(dec.witness["commutator"].values())
    with pytest.raises(IllDefinedAction) as err:
        functor_to_algebra(ws.theory, ws.orth)
    assert set(err.value.witness["pair"]) == {"f1", "f2"}
    passed(verdict, f"commutator witness on {dec.witness['pair']}, ill-definedness witness raised")


# 5 ---------------------------------------------------------------- orbifold

def test_criterion_5_orbifold_z2(verdict):
    verdict["number"] = 5
    start = time.perf_counter()
    ws = load("@orbifold_z2")
    win = DegreeWindow(-4, 1)
    E = horan_object(ws.total, ws.total_theory, "c", win)
    H = trusted_ranks(E.homology())
    assert H[0] == 1
    for n in (-1, -2, -3):
        assert H[n] == 0
    rep = verify_horan_axioms(ws.total, ws.total_theory, win, max_arity=2, e_degrees=(0, 1))
    assert rep.ok, rep.failures[:3]
    assert rep.checked > 0
    t = elapsed(start)
    assert t < 120, t
    passed(verdict, f"H_0 = 1, H_-1..H_-3 = 0, {rep.checked} axiom checks")


# 6 ---------------------------------------------------------------- groupoid cohomology

def test_criterion_6_groupoid_cohomology(verdict):
    verdict["number"] = 6
    ws = load("@groupoids")
    G = ws.groupoids
    assert trusted_ranks(groupoid_cohomology(G["points3"], DegreeWindow(-3, 0)))[0] == 3
    assert trusted_ranks(groupoid_cohomology(G["S3conj"], DegreeWindow(-2, 0)))[0] == 3
    z2 = trusted_ranks(groupoid_cohomology(G["Z2"], DegreeWindow(-4, 0)))
    assert [z2[n] for n in sorted(z2, reverse=True)] == [1, 0, 0, 0]
    passed(verdict, "3 points: 3, S3 conjugation: 3, Z/2: (1,0,0,0)")


# 7 ---------------------------------------------------------------- sphere versus Lan

def test_criterion_7_tensoring_versus_pointwise_extension(verdict):
    verdict["number"] = 7
    ws = load("@boundary_extend")
    V = ws.complexes["Q1"]
    win = DegreeWindow(0, 4)
    F = tensoring_free(boundary_simplex(3), free_einfty(V), win)
    hf = [(n, r) for n, r, _ in homology(F.generators, win).as_rows() if r]
    assert hf == [(1, 1), (3, 1)]
    sub = list(ws.extension["subcategory"])
    values, maps = constant_diagram(ws.category, sub, V)
    L = pointwise_lan(ws.category, sub, values, maps, "t")
    hl = [(n, r) for n, r, _ in homology(L, win).as_rows() if r]
    assert hl == [(1, 1)]
    dec = homology_obstruction(L, F.generators, win)
    assert not dec.ok and dec.witness["degree"] == 3
    passed(verdict, f"tensoring {hf}, extension {hl}, obstruction in degree 3")


# 8 ---------------------------------------------------------------- E-infinity

def _d(x):
    return be.be_differential(x)


def _combine(x, y, s):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def test_criterion_8_einfty_consistency(verdict):
    verdict["number"] = 8
    start = time.perf_counter()
    for n in range(1, 5):
        for d in range(7):
            ok, _ = be.d_squared_certificate(n, d)
            assert ok, (n, d)
    for n in range(1, 4):
        for d in range(5 if n < 3 else 4):
            for t in be.be_basis(n, d):
                assert _d(_d({t: ONE})) == {}
    for n in range(1, 4):
        assert is_quasi_iso(be.augmentation(n, 6), DegreeWindow(0, 5)).ok, n
    for n, dmax in ((2, 4), (3, 2)):
        for d in range(dmax + 1):
            for t in be.be_basis(n, d):
                x = {t: ONE}
                assert be.table_reduction(_d(x)) == be.surjection_differential(be.table_reduction(x))
    X = nerve(cyclic_group(2))
    for d in range(4):
        for t in be.be_basis(2, d):
            x = {t: ONE}
            for k in range(4 - d):
                for s in X.nondegenerate(k):
                    c = {s: ONE}
                    lhs = be.tensor_boundary(X, be.coaction(X, x, c))
                    rhs = _combine(be.coaction(X, _d(x), c), be.coaction(X, x, be.chain_boundary(X, c)),
                                   -1 if d % 2 else 1)
                    assert lhs == rhs
    for n in (2, 3):
        for d in range(4):
            for s in X.nondegenerate(d):
                assert be.coaction(X, {(be.identity_perm(n),): ONE}, {s: ONE}) == be.iterated_aw(X, n, s)
    t = elapsed(start)
    assert t < 120, t
    passed(verdict, "d^2, augmentation, table reduction, coaction Leibniz, degree-0 coaction")


# 9 ---------------------------------------------------------------- determinism

def test_criterion_9_thread_count_determinism(verdict):
    verdict["number"] = 9
    entries = manifest()
    assert {e["args"][1].lstrip("@") for e in entries} == set(bundled_names())
    assert {e["args"][0] for e in entries} == {"validate", "operad", "check-qft", "resolve-check", "horan",
                                               "groupoid-cohomology", "homology", "extend"}
    for e in entries:
        assert run(e["args"], threads=1) == run(e["args"], threads=4), e["id"]
    passed(verdict, f"{len(entries)} runs identical at 1 and 4 threads")
