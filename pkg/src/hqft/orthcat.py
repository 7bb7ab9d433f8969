"""Finite categories, orthogonality relations, groupoids and the Grothendieck construction.

Categories are explicit: every morphism has a name, a source and a target,
and ``comp[(g, f)]`` is the name of g o f (f first).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Tuple

Obj = Hashable
Mor = Hashable
Pair = Tuple[Mor, Mor]


class FiniteCategory:
    def __init__(self, objects: Iterable[Obj], morphisms: Mapping[Mor, Tuple[Obj, Obj]],
                 identities: Mapping[Obj, Mor], comp: Mapping[Tuple[Mor, Mor], Mor], name: str = ""):
        self.objects: Tuple[Obj, ...] = tuple(objects)
        self.morphisms: Dict[Mor, Tuple[Obj, Obj]] = dict(morphisms)
        self.identities: Dict[Obj, Mor] = dict(identities)
        self.comp: Dict[Tuple[Mor, Mor], Mor] = dict(comp)
        self.name = name
        self._hom: Dict[Tuple[Obj, Obj], List[Mor]] = {}
        for f, (s, t) in self.morphisms.items():
            self._hom.setdefault((s, t), []).append(f)
        self._into: Dict[Obj, List[Mor]] = {}
        for f, (s, t) in self.morphisms.items():
            self._into.setdefault(t, []).append(f)

    def src(self, f):
        return self.morphisms[f][0]

    def tgt(self, f):
        return self.morphisms[f][1]

    def hom(self, a, b) -> List[Mor]:
        return self._hom.get((a, b), [])

    def into(self, t) -> List[Mor]:
        return self._into.get(t, [])

    def id(self, a):
        return self.identities[a]

    def compose(self, g, f):
        """g o f."""
        return self.comp[(g, f)]

    def is_identity(self, f) -> bool:
        return self.identities.get(self.src(f)) == f

    def composable(self):
        for f, (s, t) in self.morphisms.items():
            for g in self.morphisms:
                if self.src(g) == t:
                    yield g, f

    def validate(self) -> List[dict]:
        """Category axioms; returns a list of violations."""
        bad = []
        for a in self.objects:
            i = self.identities.get(a)
            if i is None or self.morphisms.get(i) != (a, a):
                bad.append({"kind": "identity", "object": a})
        for f, (s, t) in self.morphisms.items():
            if s not in self.objects or t not in self.objects:
                bad.append({"kind": "endpoint", "morphism": f})
        if bad:
            return bad
        for g, f in self.composable():
            h = self.comp.get((g, f))
            if h is None:
                bad.append({"kind": "missing composite", "pair": (g, f)})
            elif self.morphisms.get(h) != (self.src(f), self.tgt(g)):
                bad.append({"kind": "composite endpoints", "pair": (g, f), "value": h})
        if bad:
            return bad
        for f, (s, t) in self.morphisms.items():
            if self.comp[(self.id(t), f)] != f or self.comp[(f, self.id(s))] != f:
                bad.append({"kind": "unit", "morphism": f})
        for g, f in self.composable():
            for h in self.into(self.src(f)):
                if self.comp[(self.comp[(g, f)], h)] != self.comp[(g, self.comp[(f, h)])]:
                    bad.append({"kind": "associativity", "triple": (g, f, h)})
        return bad

    def inverse(self, f) -> Optional[Mor]:
        s, t = self.morphisms[f]
        for g in self.hom(t, s):
            if self.comp[(g, f)] == self.id(s) and self.comp[(f, g)] == self.id(t):
                return g
        return None

    def is_groupoid(self) -> bool:
        return all(self.inverse(f) is not None for f in self.morphisms)

    def __repr__(self):
        return f"FiniteCategory({self.name}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


# ---------------------------------------------------------------- builders

def point_category(obj="*") -> FiniteCategory:
    i = ("id", obj)
    return FiniteCategory([obj], {i: (obj, obj)}, {obj: i}, {(i, i): i}, name="pt")


def category_from_generators(objects, generators: Mapping[Mor, Tuple[Obj, Obj]],
                             relations: Mapping[Tuple[Mor, ...], Mor] | None = None, name="") -> FiniteCategory:
    """Free category on an acyclic generator graph, with optional extra relations.

    Composites are named by tuples of generators (applied right to left, as
    written); a relation maps such a tuple to another morphism name.  Only
    meant for small acyclic examples.
    """
    morph = {("id", a): (a, a) for a in objects}
    ids = {a: ("id", a) for a in objects}
    morph.update(generators)
    paths = {g: (g,) for g in generators}
    rel = dict(relations or {})
    # grow composites of length >= 2
    frontier = list(generators)
    names = {(g,): g for g in generators}
    while frontier:
        new = []
        for f in frontier:
            for g in generators:
                if generators[g][0] == morph[f][1]:
                    path = (g,) + paths[f]
                    if path in rel:
                        continue
                    if path in names:
                        continue
                    nm = "*".join(map(str, path))
                    names[path] = nm
                    paths[nm] = path
                    morph[nm] = (morph[f][0], generators[g][1])
                    new.append(nm)
        frontier = new
        if len(morph) > 10000:
            raise ValueError("generator graph is not acyclic")

    def resolve(path):
        # rewrite with relations until stable
        changed = True
        while changed:
            changed = False
            for k in range(len(path)):
                for l in range(k + 2, len(path) + 1):
                    sub = path[k:l]
                    if sub in rel:
                        tgt = rel[sub]
                        path = path[:k] + paths.get(tgt, (tgt,)) + path[l:]
                        changed = True
                        break
                if changed:
                    break
        return names.get(path, path[0] if len(path) == 1 else None)

    comp = {}
    for f, (s, t) in morph.items():
        comp[(ids[t], f)] = f
        comp[(f, ids[s])] = f
    for f in paths:
        for g in paths:
            if morph[g][0] == morph[f][1]:
                comp[(g, f)] = resolve(paths[g] + paths[f])
    return FiniteCategory(objects, morph, ids, comp, name=name)


def poset_category(elements, leq, name="") -> FiniteCategory:
    """Thin category of a finite poset; the morphism a -> b is named (a, b)."""
    els = list(elements)
    morph = {(a, b): (a, b) for a in els for b in els if leq(a, b)}
    ids = {a: (a, a) for a in els}
    comp = {}
    for (b, c) in morph:
        for (a, b2) in morph:
            if b2 == b:
                comp[((b, c), (a, b))] = (a, c)
    return FiniteCategory(els, morph, ids, comp, name=name)


def group_groupoid(elements, mult, unit, obj="*", name="") -> FiniteCategory:
    """One-object groupoid; morphism g composes as comp[(h, g)] = mult(h, g)."""
    els = list(elements)
    morph = {g: (obj, obj) for g in els}
    comp = {(h, g): mult(h, g) for h in els for g in els}
    return FiniteCategory([obj], morph, {obj: unit}, comp, name=name)


def cyclic_group(n: int, name=None) -> FiniteCategory:
    return group_groupoid(range(n), lambda a, b: (a + b) % n, 0, name=name or f"Z/{n}")


def symmetric_group_elements(n: int):
    return [p for p in itertools.permutations(range(1, n + 1))]


def perm_mul(a, b):
    """(a b)(i) = a(b(i)), one-line tuples on 1..n."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def perm_inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x - 1] = i + 1
    return tuple(out)


def action_groupoid(group, mult, points, act, name="") -> FiniteCategory:
    """X//G: objects are points, morphisms (g, x): x -> g.x."""
    group = list(group)
    pts = list(points)
    morph = {(g, x): (x, act(g, x)) for g in group for x in pts}
    e = [g for g in group if all(mult(g, h) == h for h in group)][0]
    ids = {x: (e, x) for x in pts}
    comp = {}
    for (g, x) in morph:
        y = act(g, x)
        for h in group:
            comp[((h, y), (g, x))] = (mult(h, g), x)
    return FiniteCategory(pts, morph, ids, comp, name=name)


def conjugation_groupoid(n: int) -> FiniteCategory:
    """S_n acting on itself by conjugation."""
    G = symmetric_group_elements(n)
    return action_groupoid(G, perm_mul, G, lambda g, x: perm_mul(perm_mul(g, x), perm_inv(g)), name=f"S{n}//S{n}")


def discrete_groupoid(points, name="") -> FiniteCategory:
    pts = list(points)
    morph = {("id", p): (p, p) for p in pts}
    return FiniteCategory(pts, morph, {p: ("id", p) for p in pts},
                          {(("id", p), ("id", p)): ("id", p) for p in pts}, name=name)


def chaotic_category(objects, name="") -> FiniteCategory:
    """Exactly one morphism between any two objects, named (a, b)."""
    return poset_category(objects, lambda a, b: True, name=name)


# ================================================================ orthogonality

class OrthogonalCategory:
    def __init__(self, category: FiniteCategory, rel: Iterable[Pair], name: str = ""):
        self.cat = category
        self.rel: FrozenSet[Pair] = frozenset(tuple(p) for p in rel)
        self.name = name or category.name

    def orth(self, f, g) -> bool:
        return (f, g) in self.rel

    def __repr__(self):
        return f"OrthogonalCategory({self.name}, |rel|={len(self.rel)})"


def common_target_pairs(C: FiniteCategory):
    for t in C.objects:
        for f in C.into(t):
            for g in C.into(t):
                yield (f, g)


def validate(OC: OrthogonalCategory) -> List[dict]:
    """All violations of the category axioms and the three closure conditions."""
    C = OC.cat
    bad = list(C.validate())
    if bad:
        return bad
    R = OC.rel
    for (f, g) in sorted(R, key=repr):
        if f not in C.morphisms or g not in C.morphisms:
            bad.append({"kind": "unknown morphism", "pair": (f, g)})
            continue
        if C.tgt(f) != C.tgt(g):
            bad.append({"kind": "distinct targets", "pair": (f, g)})
    if bad:
        return bad
    for (f, g) in sorted(R, key=repr):
        if (g, f) not in R:
            bad.append({"kind": "symmetry", "pair": (f, g)})
        t = C.tgt(f)
        for h in C.morphisms:
            if C.src(h) == t:
                p = (C.compose(h, f), C.compose(h, g))
                if p not in R:
                    bad.append({"kind": "post-composition", "pair": (f, g), "by": h, "missing": p})
        for k1 in C.into(C.src(f)):
            for k2 in C.into(C.src(g)):
                p = (C.compose(f, k1), C.compose(g, k2))
                if p not in R:
                    bad.append({"kind": "pre-composition", "pair": (f, g), "by": (k1, k2), "missing": p})
    return bad


def orthogonal_closure(C: FiniteCategory, generators: Iterable[Pair]) -> OrthogonalCategory:
    gens = [tuple(p) for p in generators]
    for f, g in gens:
        if C.tgt(f) != C.tgt(g):
            raise ValueError(f"generator {(f, g)!r} has distinct targets")
    R = set(gens)
    frontier = list(R)
    while frontier:
        new = []
        for (f, g) in frontier:
            cand = [(g, f)]
            for h in C.morphisms:
                if C.src(h) == C.tgt(f):
                    cand.append((C.compose(h, f), C.compose(h, g)))
            for k1 in C.into(C.src(f)):
                for k2 in C.into(C.src(g)):
                    cand.append((C.compose(f, k1), C.compose(g, k2)))
            for p in cand:
                if p not in R:
                    R.add(p)
                    new.append(p)
        frontier = new
    return OrthogonalCategory(C, R)


def max_orthogonality(C: FiniteCategory) -> OrthogonalCategory:
    return OrthogonalCategory(C, common_target_pairs(C), name=f"{C.name}^max")


def min_orthogonality(C: FiniteCategory) -> OrthogonalCategory:
    return OrthogonalCategory(C, (), name=f"{C.name}^min")


# ================================================================ functors

@dataclass
class FiniteFunctor:
    source: FiniteCategory
    target: FiniteCategory
    obj_map: Dict
    mor_map: Dict
    name: str = ""

    def __call__(self, f):
        return self.mor_map[f]

    def validate(self) -> List[dict]:
        S, T = self.source, self.target
        bad = []
        for a in S.objects:
            if self.obj_map.get(a) not in T.objects:
                bad.append({"kind": "object map", "object": a})
        for f, (s, t) in S.morphisms.items():
            g = self.mor_map.get(f)
            if g is None or T.morphisms.get(g) != (self.obj_map.get(s), self.obj_map.get(t)):
                bad.append({"kind": "morphism map", "morphism": f})
        if bad:
            return bad
        for a in S.objects:
            if self.mor_map[S.id(a)] != T.id(self.obj_map[a]):
                bad.append({"kind": "identity", "object": a})
        for g, f in S.composable():
            if self.mor_map[S.compose(g, f)] != T.compose(self.mor_map[g], self.mor_map[f]):
                bad.append({"kind": "composite", "pair": (g, f)})
        return bad


def identity_functor(C: FiniteCategory) -> FiniteFunctor:
    return FiniteFunctor(C, C, {a: a for a in C.objects}, {f: f for f in C.morphisms}, name="id")


def compose_functors(G: FiniteFunctor, F: FiniteFunctor) -> FiniteFunctor:
    return FiniteFunctor(F.source, G.target, {a: G.obj_map[F.obj_map[a]] for a in F.source.objects},
                         {f: G.mor_map[F.mor_map[f]] for f in F.source.morphisms})


@dataclass
class OrthogonalFunctor:
    source: OrthogonalCategory
    target: OrthogonalCategory
    functor: FiniteFunctor

    @property
    def obj_map(self):
        return self.functor.obj_map

    @property
    def mor_map(self):
        return self.functor.mor_map


def is_orthogonal_functor(F: OrthogonalFunctor):
    from .chain import Decision
    bad = F.functor.validate()
    if bad:
        raise ValueError(f"not a functor: {bad[0]}")
    for (f, g) in sorted(F.source.rel, key=repr):
        p = (F.mor_map[f], F.mor_map[g])
        if p not in F.target.rel:
            return Decision(False, {"pair": (f, g), "image": p})
    return Decision(True)


# ================================================================ presheaves of groupoids

@dataclass
class PresheafOfGroupoids:
    """F : C^op -> Grpd.  ``restrict[f]`` is the functor F(c') -> F(c) for f : c -> c'."""
    base: OrthogonalCategory
    fibers: Dict[Obj, FiniteCategory]
    restrict: Dict[Mor, FiniteFunctor]

    def validate(self) -> List[dict]:
        C = self.base.cat
        bad = []
        for c in C.objects:
            G = self.fibers[c]
            if G.validate() or not G.is_groupoid():
                bad.append({"kind": "fiber not a groupoid", "object": c})
        for f, (s, t) in C.morphisms.items():
            R = self.restrict.get(f)
            if R is None or R.source is not self.fibers[t] or R.target is not self.fibers[s]:
                bad.append({"kind": "restriction endpoints", "morphism": f})
                continue
            for v in R.validate():
                bad.append({"kind": "restriction not a functor", "morphism": f, "detail": v})
        if bad:
            return bad
        for c in C.objects:
            R = self.restrict[C.id(c)]
            G = self.fibers[c]
            if any(R.obj_map[x] != x for x in G.objects) or any(R.mor_map[h] != h for h in G.morphisms):
                bad.append({"kind": "strict identity", "object": c})
        for g, f in C.composable():
            Rgf = self.restrict[C.compose(g, f)]
            Rg, Rf = self.restrict[g], self.restrict[f]
            G = self.fibers[C.tgt(g)]
            for x in G.objects:
                if Rgf.obj_map[x] != Rf.obj_map[Rg.obj_map[x]]:
                    bad.append({"kind": "strict composite", "pair": (g, f), "object": x})
            for h in G.morphisms:
                if Rgf.mor_map[h] != Rf.mor_map[Rg.mor_map[h]]:
                    bad.append({"kind": "strict composite", "pair": (g, f), "morphism": h})
        return bad


def constant_presheaf(base: OrthogonalCategory, G: FiniteCategory) -> PresheafOfGroupoids:
    fibers = {c: G for c in base.cat.objects}
    idf = identity_functor(G)
    return PresheafOfGroupoids(base, fibers, {f: idf for f in base.cat.morphisms})


@dataclass
class GrothendieckTotal:
    total: OrthogonalCategory
    projection: OrthogonalFunctor
    presheaf: PresheafOfGroupoids


def grothendieck(F: PresheafOfGroupoids) -> GrothendieckTotal:
    bad = F.validate()
    if bad:
        raise ValueError(f"presheaf is not strict: {bad[0]}")
    C = F.base.cat
    objects = [(c, x) for c in C.objects for x in F.fibers[c].objects]
    morph = {}
    for f, (c, c2) in C.morphisms.items():
        R = F.restrict[f]
        Gc = F.fibers[c]
        for x in Gc.objects:
            for x2 in F.fibers[c2].objects:
                for h in Gc.hom(x, R.obj_map[x2]):
                    morph[(f, h, x2)] = ((c, x), (c2, x2))
    # (f', h') o (f, h) = (f' f, f^*(h') h)
    comp = {}
    for (f2, h2, x3), ((c2, x2), _) in morph.items():
        for (f, h, x2b), ((c, x), _) in morph.items():
            if x2b == x2 and C.tgt(f) == c2:
                R = F.restrict[f]
                comp[((f2, h2, x3), (f, h, x2b))] = (C.compose(f2, f), F.fibers[c].compose(R.mor_map[h2], h), x3)
    ids = {(c, x): (C.id(c), F.fibers[c].id(x), x) for (c, x) in objects}
    total = FiniteCategory(objects, morph, ids, comp, name=f"int({C.name})")
    rel = [(g1, g2) for (g1, g2) in common_target_pairs(total) if (g1[0], g2[0]) in F.base.rel]
    OT = OrthogonalCategory(total, rel, name=total.name)
    proj = FiniteFunctor(total, C, {o: o[0] for o in objects}, {m: m[0] for m in morph})
    return GrothendieckTotal(OT, OrthogonalFunctor(OT, F.base, proj), F)


def lift(G: GrothendieckTotal, f, y):
    """The cartesian lift (f, id_{f^*y}) : (c, f^*y) -> (c', y)."""
    C = G.presheaf.base.cat
    c = C.src(f)
    R = G.presheaf.restrict[f]
    return (f, G.presheaf.fibers[c].id(R.obj_map[y]), y)


def fiber_morphism(G: GrothendieckTotal, c, h):
    """(id_c, h) : (c, x) -> (c, x') for h : x -> x' in F(c)."""
    C = G.presheaf.base.cat
    Gc = G.presheaf.fibers[c]
    return (C.id(c), h, Gc.tgt(h))


def over_category(G: FiniteCategory, x) -> FiniteCategory:
    """G/x: objects are morphisms g : y -> x, morphisms k with g' k = g.

    For a groupoid every hom-set here has at most one element; the morphism
    from g to g' is named (g, g').
    """
    objs = list(G.into(x))
    morph = {}
    for g in objs:
        for g2 in objs:
            for k in G.hom(G.src(g), G.src(g2)):
                if G.compose(g2, k) == g:
                    morph[(g, g2, k)] = (g, g2)
    ids = {g: (g, g, G.id(G.src(g))) for g in objs}
    comp = {}
    for (a, b, k) in morph:
        for (b2, c, k2) in morph:
            if b2 == b:
                comp[((b, c, k2), (a, b, k))] = (a, c, G.compose(k2, k))
    return FiniteCategory(objs, morph, ids, comp, name=f"{G.name}/{x}")
