import itertools

from hypothesis import given, settings, strategies as st

from hqft.orthcat import (FiniteFunctor, OrthogonalCategory, OrthogonalFunctor, PresheafOfGroupoids,
                          category_from_generators, common_target_pairs, conjugation_groupoid, constant_presheaf,
                          cyclic_group, discrete_groupoid, fiber_morphism, grothendieck, group_groupoid,
                          identity_functor, is_orthogonal_functor, lift, max_orthogonality, min_orthogonality,
                          orthogonal_closure, over_category, point_category, poset_category, validate)


def naive_closure(C, gens):
    """Fixpoint of the three rules, scanning every pair of morphisms each round."""
    R = set(gens)
    while True:
        new = set(R)
        for f, g in R:
            new.add((g, f))
        for f, g in R:
            for h in C.morphisms:
                if C.src(h) == C.tgt(f):
                    new.add((C.compose(h, f), C.compose(h, g)))
            for k1, k2 in itertools.product(C.morphisms, C.morphisms):
                if C.tgt(k1) == C.src(f) and C.tgt(k2) == C.src(g):
                    new.add((C.compose(f, k1), C.compose(g, k2)))
        if new == R:
            return R
        R = new


def chain3():
    return category_from_generators(["a", "b", "c"], {"g": ("a", "b"), "h": ("b", "c"), "k": ("a", "c")})


def test_pair_relation_is_valid(pair):
    OC = OrthogonalCategory(pair, [("f1", "f2"), ("f2", "f1")])
    assert validate(OC) == []


def test_missing_symmetric_pair_is_reported(pair):
    bad = validate(OrthogonalCategory(pair, [("f1", "f2")]))
    assert {"kind": "symmetry", "pair": ("f1", "f2")} in bad


def test_distinct_targets_rejected(pair):
    bad = validate(OrthogonalCategory(pair, [("f1", ("id", "a")), (("id", "a"), "f1")]))
    assert bad and bad[0]["kind"] == "distinct targets"


def test_closure_extremes(pair):
    assert orthogonal_closure(pair, []).rel == set()
    assert orthogonal_closure(pair, list(common_target_pairs(pair))).rel == max_orthogonality(pair).rel


def test_pair_closure_adds_only_the_swap(pair):
    assert orthogonal_closure(pair, [("f1", "f2")]).rel == {("f1", "f2"), ("f2", "f1")}


@given(st.lists(st.sampled_from(sorted(common_target_pairs(chain3()), key=repr)), max_size=3))
@settings(max_examples=40, deadline=None)
def test_closure_matches_naive_fixpoint(gens):
    C = chain3()
    OC = orthogonal_closure(C, gens)
    assert OC.rel == naive_closure(C, gens)
    assert validate(OC) == []


def test_max_and_min(pair):
    mx = max_orthogonality(pair).rel
    assert ("f1", "f2") in mx and (("id", "t"), "f1") in mx and (("id", "t"), ("id", "t")) in mx
    assert min_orthogonality(pair).rel == set()


def test_orthogonal_functor_checks(pair):
    mx, mn = max_orthogonality(pair), min_orthogonality(pair)
    idf = identity_functor(pair)
    assert is_orthogonal_functor(OrthogonalFunctor(mx, mx, idf)).ok
    assert is_orthogonal_functor(OrthogonalFunctor(mn, mx, idf)).ok
    dec = is_orthogonal_functor(OrthogonalFunctor(mx, mn, idf))
    assert not dec.ok and dec.witness["pair"] in mx.rel


def test_category_axioms_catch_a_corrupted_table(pair):
    assert pair.validate() == []
    pair.comp[(("id", "t"), "f1")] = "f2"
    kinds = {v["kind"] for v in pair.validate()}
    assert kinds & {"unit", "composite endpoints"}


def test_poset_and_groups():
    P = poset_category([0, 1, 2], lambda a, b: a <= b)
    assert len(P.morphisms) == 6 and P.validate() == []
    S3 = conjugation_groupoid(3)
    assert len(S3.objects) == 6 and len(S3.morphisms) == 36 and S3.is_groupoid()
    assert cyclic_group(4).validate() == []


def test_grothendieck_of_trivial_presheaf_is_base(pair_oc):
    one = group_groupoid([0], lambda a, b: 0, 0)
    G = grothendieck(constant_presheaf(pair_oc, one))
    assert len(G.total.cat.objects) == 3 and len(G.total.cat.morphisms) == len(pair_oc.cat.morphisms)
    assert len(G.total.rel) == len(pair_oc.rel)


def test_grothendieck_of_a_group(point_max, z2):
    G = grothendieck(constant_presheaf(point_max, z2))
    assert len(G.total.cat.objects) == 1 and len(G.total.cat.morphisms) == 2
    assert G.total.cat.validate() == []


def _collapse_onto_t(pair_oc, top):
    one = group_groupoid([0], lambda a, b: 0, 0)
    fibers = {"a": one, "b": one, "t": top}
    C = pair_oc.cat
    to_one = FiniteFunctor(top, one, {x: "*" for x in top.objects}, {h: 0 for h in top.morphisms})
    restrict = {f: identity_functor(fibers[s]) if s == t else to_one for f, (s, t) in C.morphisms.items()}
    F = PresheafOfGroupoids(pair_oc, fibers, restrict)
    assert F.validate() == []
    return F


def _formula_count(F):
    # sum over f : c -> c', x in F(c), x' in F(c'), h in F(c)(x, f^* x')
    C = F.base.cat
    total = 0
    for f, (c, c2) in C.morphisms.items():
        for x in F.fibers[c].objects:
            for x2 in F.fibers[c2].objects:
                total += len(F.fibers[c].hom(x, F.restrict[f].obj_map[x2]))
    return total


def test_grothendieck_pair_with_z2_set_on_top(pair_oc):
    F = _collapse_onto_t(pair_oc, discrete_groupoid([0, 1]))
    G = grothendieck(F)
    T = G.total.cat
    assert len(T.objects) == 4
    assert len(T.morphisms) == _formula_count(F) == 8
    assert T.validate() == []
    for f, (c, c2) in pair_oc.cat.morphisms.items():
        for y in F.fibers[c2].objects:
            assert lift(G, f, y) in T.morphisms


def test_grothendieck_pair_with_z2_group_on_top(pair_oc, z2):
    F = _collapse_onto_t(pair_oc, z2)
    T = grothendieck(F).total.cat
    assert len(T.objects) == 3
    assert len(T.morphisms) == _formula_count(F) == 6
    assert fiber_morphism(grothendieck(F), "t", 1) in T.morphisms


def test_over_categories(z2):
    one = group_groupoid([0], lambda a, b: 0, 0)
    assert len(over_category(one, "*").objects) == 1
    O = over_category(z2, "*")
    assert len(O.objects) == 2
    for a in O.objects:
        for b in O.objects:
            assert len(O.hom(a, b)) == 1
    assert point_category().validate() == []
