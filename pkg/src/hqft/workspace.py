"""Workspace files: one YAML document per scenario.

Top-level keys (all optional except ``name``)::

    name: pair
    category:        {objects, generators, relations} | {poset: {elements, covers}}
    orthogonality:   {generate: [[f, g], ...]} | {pairs: [...]} | {preset: max|min}
    complexes:       {V: {basis: {deg: [labels]}, differential: {label: {label: "p/q"}}}}
    algebras:        {A: {basis, unit, products: [[a, b, {c: "p/q"}]], differential}}
    theory:          {objects: {obj: algebra}, maps: {morphism: {label: {label: "p/q"}}}}
    groupoids:       {G: {cyclic: n} | {conjugation: n} | {discrete: [...]} | {group: ...}}
    presheaf:        {constant: G} | {fibers: {obj: G}, restrictions: {gen: {objects, morphisms}}}
    total_theory:    {algebra: A, objects: {"obj/x": A}, fiber_action: {h: matrix}}
    extension:       {subcategory: [...], complex: V, compare_with: {boundary_simplex: n, generators: V}}

Identity morphisms are written ``id_<object>``.  Rationals are integers or
strings "p/q"; floats are rejected.
"""
from __future__ import annotations

from fractions import Fraction
from importlib import resources
from typing import Any, Dict, List

import yaml

from .algebras import DgAlgebra, TheoryFunctor, algebra_from_table
from .chain import ChainComplex, identity_map, map_from_images
from .linalg import Mat
from .orthcat import (FiniteCategory, FiniteFunctor, OrthogonalCategory, PresheafOfGroupoids,
                      category_from_generators, conjugation_groupoid, constant_presheaf, cyclic_group,
                      discrete_groupoid, grothendieck, identity_functor, max_orthogonality,
                      min_orthogonality, orthogonal_closure, poset_category)


class WorkspaceError(Exception):
    """Schema or reference error; ``field`` is a dotted path into the document."""

    def __init__(self, field: str, msg: str):
        super().__init__(f"field {field}: {msg}" if field else msg)
        self.field = field


def rational(x, field: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise WorkspaceError(field, f"expected an integer or a 'p/q' string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise WorkspaceError(field, f"cannot parse rational {x!r}") from None
    raise WorkspaceError(field, f"expected a rational, got {type(x).__name__}")


def _need(d: Dict, key: str, field: str, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise WorkspaceError(f"{field}.{key}" if field else key, "missing")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise WorkspaceError(f"{field}.{key}", f"expected {kind.__name__}")
    return v


def _str(x) -> str:
    return str(x)


def morphism_name(C: FiniteCategory, name: str, field: str):
    """Resolve a workspace morphism name (``id_<obj>`` for identities)."""
    if name in C.morphisms:
        return name
    if isinstance(name, str) and name.startswith("id_"):
        obj = name[3:]
        if obj in C.objects:
            return C.id(obj)
    for m in C.morphisms:
        if show_morphism(m) == name:
            return m
    raise WorkspaceError(field, f"unknown morphism {name!r}")


def show_morphism(m) -> str:
    if isinstance(m, tuple) and len(m) == 2 and m[0] == "id":
        return f"id_{m[1]}"
    if isinstance(m, tuple):
        return "(" + ",".join(show_morphism(x) for x in m) + ")"
    return str(m)


# ---------------------------------------------------------------- sections

def parse_category(d, field="category") -> FiniteCategory:
    if "poset" in d:
        p = d["poset"]
        els = [_str(e) for e in _need(p, "elements", f"{field}.poset", list)]
        covers = _need(p, "covers", f"{field}.poset", list)
        below = {e: {e} for e in els}
        for i, c in enumerate(covers):
            if not (isinstance(c, list) and len(c) == 2):
                raise WorkspaceError(f"{field}.poset.covers[{i}]", "expected [lower, upper]")
            a, b = _str(c[0]), _str(c[1])
            for e in (a, b):
                if e not in below:
                    raise WorkspaceError(f"{field}.poset.covers[{i}]", f"unknown element {e!r}")
            below[b].add(a)
        changed = True
        while changed:
            changed = False
            for e in els:
                new = set().union(*(below[x] for x in below[e]))
                if new != below[e]:
                    below[e] = new
                    changed = True
        return poset_category(els, lambda a, b: a in below[b], name=d.get("name", "poset"))
    objs = [_str(o) for o in _need(d, "objects", field, list)]
    gens = {}
    for g, st in (d.get("generators") or {}).items():
        if not (isinstance(st, list) and len(st) == 2):
            raise WorkspaceError(f"{field}.generators.{g}", "expected [source, target]")
        s, t = _str(st[0]), _str(st[1])
        for o in (s, t):
            if o not in objs:
                raise WorkspaceError(f"{field}.generators.{g}", f"unknown object {o!r}")
        gens[_str(g)] = (s, t)
    rels = {}
    for i, r in enumerate(d.get("relations") or []):
        path = tuple(_str(x) for x in _need(r, "path", f"{field}.relations[{i}]", list))
        rels[path] = _str(_need(r, "equals", f"{field}.relations[{i}]"))
    return category_from_generators(objs, gens, rels, name=d.get("name", ""))


def parse_orthogonality(C: FiniteCategory, d, field="orthogonality") -> OrthogonalCategory:
    if "preset" in d:
        p = d["preset"]
        if p == "max":
            return max_orthogonality(C)
        if p == "min":
            return min_orthogonality(C)
        raise WorkspaceError(f"{field}.preset", f"unknown preset {p!r}")
    key = "generate" if "generate" in d else "pairs"
    pairs = []
    for i, pr in enumerate(_need(d, key, field, list)):
        if not (isinstance(pr, list) and len(pr) == 2):
            raise WorkspaceError(f"{field}.{key}[{i}]", "expected a pair")
        pairs.append(tuple(morphism_name(C, _str(x), f"{field}.{key}[{i}]") for x in pr))
    if key == "generate":
        return orthogonal_closure(C, pairs)
    return OrthogonalCategory(C, pairs, name=C.name)


def parse_complex(d, field) -> ChainComplex:
    basis = {}
    for n, labs in _need(d, "basis", field, dict).items():
        if not isinstance(n, int):
            raise WorkspaceError(f"{field}.basis", f"degree {n!r} is not an integer")
        basis[n] = [_str(l) for l in labs]
    C0 = ChainComplex(basis, {})
    ent: Dict[int, List] = {}
    for l, img in (d.get("differential") or {}).items():
        l = _str(l)
        if l not in C0:
            raise WorkspaceError(f"{field}.differential", f"unknown label {l!r}")
        n, j = C0.index(l)
        for t, v in (img or {}).items():
            t = _str(t)
            if t not in C0:
                raise WorkspaceError(f"{field}.differential.{l}", f"unknown label {t!r}")
            m, i = C0.index(t)
            if m != n - 1:
                raise WorkspaceError(f"{field}.differential.{l}", f"{t!r} is not in degree {n - 1}")
            ent.setdefault(n, []).append((i, j, rational(v, f"{field}.differential.{l}.{t}")))
    mats = {n: Mat.from_entries(C0.dim(n - 1), C0.dim(n), e) for n, e in ent.items()}
    V = ChainComplex(basis, mats, name=field.split(".")[-1])
    bad = V.check()
    if bad:
        raise WorkspaceError(f"{field}.differential", f"not a differential ({bad[0]})")
    return V


def _elem(d, field) -> Dict:
    if not isinstance(d, dict):
        raise WorkspaceError(field, "expected a mapping label -> rational")
    return {_str(k): rational(v, f"{field}.{k}") for k, v in d.items()}


def parse_algebra(d, field) -> DgAlgebra:
    V = parse_complex(d, field)
    basis = {n: list(b) for n, b in V.basis.items()}
    unit = d.get("unit")
    if unit is None:
        raise WorkspaceError(f"{field}.unit", "missing")
    table = {}
    if isinstance(unit, (str, int)):
        u = _str(unit)
        if u not in V:
            raise WorkspaceError(f"{field}.unit", f"unknown label {u!r}")
        for n in basis:
            for l in basis[n]:
                table[(u, l)] = {l: 1}
                table[(l, u)] = {l: 1}
        unit_elem = {u: 1}
    else:
        unit_elem = _elem(unit, f"{field}.unit")
    for i, p in enumerate(d.get("products") or []):
        f = f"{field}.products[{i}]"
        if not (isinstance(p, list) and len(p) == 3):
            raise WorkspaceError(f, "expected [a, b, {c: coefficient}]")
        a, b = _str(p[0]), _str(p[1])
        for l in (a, b):
            if l not in V:
                raise WorkspaceError(f, f"unknown label {l!r}")
        img = _elem(p[2] or {}, f)
        for l in img:
            if l not in V:
                raise WorkspaceError(f, f"unknown label {l!r}")
        table[(a, b)] = img
    diff = {}
    for l, img in (d.get("differential") or {}).items():
        diff[_str(l)] = _elem(img or {}, f"{field}.differential.{l}")
    try:
        return algebra_from_table(basis, table, unit_elem, diff, name=field.split(".")[-1])
    except ValueError as e:
        raise WorkspaceError(field, str(e)) from None


def parse_groupoid(d, field) -> FiniteCategory:
    name = field.split(".")[-1]
    if "cyclic" in d:
        return cyclic_group(int(d["cyclic"]), name=name)
    if "conjugation" in d:
        return conjugation_groupoid(int(d["conjugation"]))
    if "discrete" in d:
        return discrete_groupoid([_str(p) for p in d["discrete"]], name=name)
    raise WorkspaceError(field, "expected one of cyclic, conjugation, discrete")


# ---------------------------------------------------------------- workspace

class Workspace:
    def __init__(self, doc: Dict[str, Any], path: str = ""):
        if not isinstance(doc, dict):
            raise WorkspaceError("", "the document must be a mapping")
        self.doc = doc
        self.path = path
        self.name = _str(_need(doc, "name", ""))
        self.category = parse_category(doc["category"]) if "category" in doc else None
        if self.category is not None and not self.category.name:
            self.category.name = self.name
        self.orth = None
        if "orthogonality" in doc:
            if self.category is None:
                raise WorkspaceError("orthogonality", "needs a category")
            self.orth = parse_orthogonality(self.category, doc["orthogonality"])
        self.complexes = {_str(k): parse_complex(v, f"complexes.{k}") for k, v in (doc.get("complexes") or {}).items()}
        self.algebras = {_str(k): parse_algebra(v, f"algebras.{k}") for k, v in (doc.get("algebras") or {}).items()}
        self.groupoids = {_str(k): parse_groupoid(v, f"groupoids.{k}") for k, v in (doc.get("groupoids") or {}).items()}
        self.theory = self._theory(doc["theory"]) if "theory" in doc else None
        self.presheaf = self._presheaf(doc["presheaf"]) if "presheaf" in doc else None
        self.total = None
        self.total_theory = None
        if "total_theory" in doc:
            if self.presheaf is None:
                raise WorkspaceError("total_theory", "needs a presheaf")
            try:
                self.total = grothendieck(self.presheaf)
            except ValueError as e:
                raise WorkspaceError("presheaf", str(e)) from None
            self.total_theory = self._total_theory(doc["total_theory"])
        self.extension = doc.get("extension")

    def _algebra(self, name, field) -> DgAlgebra:
        if _str(name) not in self.algebras:
            raise WorkspaceError(field, f"unknown algebra {name!r}")
        return self.algebras[_str(name)]

    def _theory(self, d) -> TheoryFunctor:
        C = self.category
        if C is None:
            raise WorkspaceError("theory", "needs a category")
        objs = _need(d, "objects", "theory", dict)
        algs = {}
        for o in C.objects:
            if o not in objs:
                raise WorkspaceError(f"theory.objects.{o}", "missing")
            algs[o] = self._algebra(objs[o], f"theory.objects.{o}")
        maps = {}
        for f, img in (d.get("maps") or {}).items():
            m = morphism_name(C, _str(f), f"theory.maps.{f}")
            src, tgt = algs[C.src(m)].complex, algs[C.tgt(m)].complex
            imgs = {}
            for l, v in (img or {}).items():
                if _str(l) not in src:
                    raise WorkspaceError(f"theory.maps.{f}", f"unknown source label {l!r}")
                e = _elem(v or {}, f"theory.maps.{f}.{l}")
                for t in e:
                    if t not in tgt:
                        raise WorkspaceError(f"theory.maps.{f}.{l}", f"unknown target label {t!r}")
                imgs[_str(l)] = e
            try:
                maps[m] = map_from_images(src, tgt, imgs, name=_str(f))
            except ValueError as e:
                raise WorkspaceError(f"theory.maps.{f}", str(e)) from None
        try:
            return TheoryFunctor(C, algs, maps, name=self.name)
        except ValueError as e:
            raise WorkspaceError("theory.maps", str(e)) from None

    def _presheaf(self, d) -> PresheafOfGroupoids:
        if self.orth is None:
            raise WorkspaceError("presheaf", "needs a category with orthogonality")
        C = self.category
        if "constant" in d:
            g = _str(d["constant"])
            if g not in self.groupoids:
                raise WorkspaceError("presheaf.constant", f"unknown groupoid {g!r}")
            return constant_presheaf(self.orth, self.groupoids[g])
        fib_names = _need(d, "fibers", "presheaf", dict)
        fibers = {}
        for o in C.objects:
            g = _str(fib_names.get(o, ""))
            if g not in self.groupoids:
                raise WorkspaceError(f"presheaf.fibers.{o}", f"unknown groupoid {g!r}")
            fibers[o] = self.groupoids[g]
        restr = {}
        given = d.get("restrictions") or {}
        for f, (s, t) in C.morphisms.items():
            if C.is_identity(f):
                restr[f] = identity_functor(fibers[s])
                continue
            spec = given.get(show_morphism(f))
            if spec is None:
                if fibers[s] is fibers[t]:
                    restr[f] = identity_functor(fibers[s])
                    continue
                raise WorkspaceError(f"presheaf.restrictions.{show_morphism(f)}", "missing")
            fld = f"presheaf.restrictions.{show_morphism(f)}"
            src, tgt = fibers[t], fibers[s]
            om = {self._fib_obj(src, k, fld): self._fib_obj(tgt, v, fld)
                  for k, v in (spec.get("objects") or {}).items()}
            mm = {self._fib_mor(src, k, fld): self._fib_mor(tgt, v, fld)
                  for k, v in (spec.get("morphisms") or {}).items()}
            restr[f] = FiniteFunctor(src, tgt, om, mm)
        return PresheafOfGroupoids(self.orth, fibers, restr)

    @staticmethod
    def _fib_obj(G, k, field):
        for o in G.objects:
            if _str(o) == _str(k):
                return o
        raise WorkspaceError(field, f"unknown fiber object {k!r}")

    @staticmethod
    def _fib_mor(G, k, field):
        for m in G.morphisms:
            if _str(m) == _str(k) or show_morphism(m) == _str(k):
                return m
        raise WorkspaceError(field, f"unknown fiber morphism {k!r}")

    def _total_theory(self, d) -> TheoryFunctor:
        T = self.total.total.cat
        default = d.get("algebra")
        per = d.get("objects") or {}
        algs = {}
        for (c, x) in T.objects:
            key = f"{c}/{x}"
            name = per.get(key, default)
            if name is None:
                raise WorkspaceError(f"total_theory.objects.{key}", "missing")
            algs[(c, x)] = self._algebra(name, f"total_theory.objects.{key}")
        action = {_str(k): v for k, v in (d.get("fiber_action") or {}).items()}
        maps = {}
        for m, ((c, x), (c2, x2)) in T.morphisms.items():
            if T.is_identity(m):
                continue
            f, h, _ = m
            A, B = algs[(c, x)], algs[(c2, x2)]
            spec = action.get(_str(h))
            if spec is None:
                if A is not B:
                    raise WorkspaceError(f"total_theory.fiber_action.{h}", "missing")
                maps[m] = identity_map(A.complex)
                continue
            imgs = {_str(l): _elem(v or {}, f"total_theory.fiber_action.{h}.{l}") for l, v in spec.items()}
            maps[m] = map_from_images(A.complex, B.complex, imgs)
        return TheoryFunctor(T, algs, maps, name=f"{self.name}-total")


def bundled_path(name: str) -> str:
    """Filesystem path of a workspace shipped with the package."""
    return str(resources.files("hqft").joinpath("workspaces", f"{name}.yaml"))


def bundled_names() -> List[str]:
    d = resources.files("hqft").joinpath("workspaces")
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".yaml"))


def load(path: str) -> Workspace:
    """Read a workspace file; ``@name`` refers to a bundled workspace."""
    if path.startswith("@"):
        path = bundled_path(path[1:])
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as e:
        raise WorkspaceError("", f"cannot read {path}: {e.strerror}") from None
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "document"
        raise WorkspaceError(where, f"YAML syntax error: {getattr(e, 'problem', e)}") from None
    return Workspace(doc, path)
