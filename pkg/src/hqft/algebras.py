"""Dg-algebras, theory functors on orthogonal categories, operad algebras,
and the passage between QFT functors and algebras over the QFT operad.

Elements everywhere are sparse dicts label -> Fraction.  Algebras are given
by structure constants on basis labels of a finite chain complex.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import barratt_eccles as be
from .chain import (ChainComplex, ChainMap, Decision, DegreeWindow, add_to, homology, identity_map,
                    is_quasi_iso, map_from_images, tensor, unit_complex)
from .linalg import Mat, rref
from .operads import (Operad, OperadMorphism, QftOperad, Report, _budgeted, _pick, koszul_sign,
                      profiles_up_to)
from .orthcat import FiniteCategory, OrthogonalCategory, perm_inv
from .simplicial import SimplicialView, normalized_chains

ONE = Fraction(1)
Elem = Dict


def _scaled(x: Mapping, c) -> Dict:
    return {k: c * v for k, v in x.items() if c * v}


def _sum(*xs: Mapping) -> Dict:
    out: Dict = {}
    for x in xs:
        for k, v in x.items():
            add_to(out, k, v)
    return out


def _degree(V: ChainComplex, x: Mapping) -> Optional[int]:
    """Degree of a homogeneous element (None for zero)."""
    ds = {V.degree_of(k) for k in x}
    if len(ds) > 1:
        raise ValueError("inhomogeneous element")
    return ds.pop() if ds else None


# ================================================================ dg-algebras

class DgAlgebra:
    """Finite dg-algebra from structure constants.

    ``products[(a, b)]`` is the element a*b for basis labels a, b; missing
    pairs multiply to zero.  ``unit`` is an element of degree 0.
    """

    def __init__(self, complex: ChainComplex, products: Mapping[Tuple, Mapping], unit: Mapping, name: str = ""):
        self.complex = complex
        self.name = name or complex.name
        self.products: Dict[Tuple, Dict] = {}
        for (a, b), v in products.items():
            if a not in complex or b not in complex:
                raise ValueError(f"product of unknown labels {(a, b)!r}")
            v = {k: Fraction(c) for k, c in v.items() if c}
            want = complex.degree_of(a) + complex.degree_of(b)
            for k in v:
                if k not in complex:
                    raise ValueError(f"product {a!r}*{b!r} has unknown label {k!r}")
                if complex.degree_of(k) != want:
                    raise ValueError(f"product {a!r}*{b!r} is not of degree {want}")
            if v:
                self.products[(a, b)] = v
        self.unit = {k: Fraction(c) for k, c in unit.items() if c}

    def basis(self) -> List:
        return [l for n in sorted(self.complex.basis) for l in self.complex.basis[n]]

    def degree(self, label) -> int:
        return self.complex.degree_of(label)

    def mul(self, x: Mapping, y: Mapping) -> Dict:
        out: Dict = {}
        for a, u in x.items():
            for b, v in y.items():
                for k, w in self.products.get((a, b), {}).items():
                    add_to(out, k, u * v * w)
        return out

    def prod(self, xs: Sequence[Mapping]) -> Dict:
        out = dict(self.unit)
        for x in xs:
            out = self.mul(out, x)
        return out

    def d(self, x: Mapping) -> Dict:
        return self.complex.apply_d(x)

    def mu(self) -> ChainMap:
        """Multiplication as a chain map A (x) A -> A."""
        AA = tensor(self.complex, self.complex)
        imgs = {(a, b): self.products.get((a, b), {}) for a in self.basis() for b in self.basis()}
        return map_from_images(AA, self.complex, imgs, name="mu")

    def __repr__(self):
        return f"DgAlgebra({self.name}, dims={self.complex.dims()})"


def trivial_algebra(label="1") -> DgAlgebra:
    """The ground field k in degree 0."""
    return DgAlgebra(unit_complex(label), {(label, label): {label: 1}}, {label: 1}, name="k")


def algebra_from_table(dims_labels: Mapping[int, Sequence], table: Mapping[Tuple, Mapping], unit,
                       diff: Mapping[Tuple, Mapping] | None = None, name: str = "") -> DgAlgebra:
    """Build a DgAlgebra from labelled degrees, a product table and d on labels."""
    basis = {n: list(ls) for n, ls in dims_labels.items()}
    C0 = ChainComplex(basis, {})
    imgs = {l: {} for n in basis for l in basis[n]}
    for l, v in (diff or {}).items():
        imgs[l] = v
    mats = {}
    for n in basis:
        ent = []
        for j, l in enumerate(basis[n]):
            for t, v in imgs[l].items():
                m, i = C0.index(t)
                if m != n - 1:
                    raise ValueError(f"d({l!r}) has a term in degree {m}")
                ent.append((i, j, v))
        if ent:
            mats[n] = Mat.from_entries(C0.dim(n - 1), C0.dim(n), ent)
    C = ChainComplex(basis, mats, name=name)
    return DgAlgebra(C, table, unit if isinstance(unit, Mapping) else {unit: 1}, name=name)


def matrix_algebra(n: int = 2, prefix: str = "E") -> DgAlgebra:
    """Matrix units E_ij in degree 0."""
    labels = [f"{prefix}{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    table = {}
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        if j == k:
            table[(f"{prefix}{i}{j}", f"{prefix}{k}{l}")] = {f"{prefix}{i}{l}": 1}
    return algebra_from_table({0: labels}, table, {f"{prefix}{i}{i}": 1 for i in range(1, n + 1)},
                              name=f"M{n}")


def check_dga(A: DgAlgebra) -> Report:
    """Associativity, unit and graded Leibniz on all basis elements."""
    rep = Report()
    for msg in A.complex.check():
        rep.fail(kind="d^2", detail=msg)
    B = A.basis()
    if A.unit and _degree(A.complex, A.unit) != 0:
        rep.fail(kind="unit degree")
    if A.d(A.unit):
        rep.fail(kind="unit not closed")
    for a in B:
        ea = {a: ONE}
        rep.checked += 1
        if A.mul(A.unit, ea) != ea or A.mul(ea, A.unit) != ea:
            rep.fail(kind="unit", x=a)
        for b in B:
            eb = {b: ONE}
            ab = A.mul(ea, eb)
            s = -1 if A.degree(a) % 2 else 1
            rep.checked += 1
            if A.d(ab) != _sum(A.mul(A.d(ea), eb), _scaled(A.mul(ea, A.d(eb)), s)):
                rep.fail(kind="leibniz", x=a, y=b)
            for c in B:
                ec = {c: ONE}
                rep.checked += 1
                if A.mul(ab, ec) != A.mul(ea, A.mul(eb, ec)):
                    rep.fail(kind="associativity", x=a, y=b, z=c)
    return rep


# ================================================================ theory functors

class TheoryFunctor:
    """Functor C -> dgAlg: an algebra per object and a map per morphism.

    Maps may be given on generating morphisms only; identities and composites
    are filled in from the category's composition table.
    """

    def __init__(self, cat: FiniteCategory, algebras: Mapping, maps: Mapping, name: str = ""):
        self.cat = cat
        self.algebras: Dict = dict(algebras)
        self.name = name
        self.maps: Dict = {}
        for f, m in maps.items():
            self.maps[f] = m if isinstance(m, ChainMap) else map_from_images(
                self.algebras[cat.src(f)].complex, self.algebras[cat.tgt(f)].complex, m, name=str(f))
        for c in cat.objects:
            self.maps.setdefault(cat.id(c), identity_map(self.algebras[c].complex))
        changed = True
        while changed:
            changed = False
            for (g, f), h in cat.comp.items():
                if h not in self.maps and g in self.maps and f in self.maps:
                    self.maps[h] = self.maps[g].compose(self.maps[f])
                    changed = True
        missing = [f for f in cat.morphisms if f not in self.maps]
        if missing:
            raise ValueError(f"no map for morphisms {missing!r}")

    def apply(self, f, x: Mapping) -> Dict:
        return self.maps[f].apply(x)

    def __repr__(self):
        return f"TheoryFunctor({self.name}: {len(self.cat.objects)} objects)"


def check_theory_functor(T: TheoryFunctor) -> Report:
    """Each value a dg-algebra, each map an algebra chain map, functoriality."""
    rep = Report()
    C = T.cat
    for c in C.objects:
        r = check_dga(T.algebras[c])
        rep.checked += r.checked
        for f in r.failures:
            rep.fail(object=c, **f)
    for f in sorted(C.morphisms, key=repr):
        A, B = T.algebras[C.src(f)], T.algebras[C.tgt(f)]
        m = T.maps[f]
        rep.checked += 1
        if not m.is_chain_map():
            rep.fail(kind="not a chain map", morphism=f)
        if m.apply(A.unit) != B.unit:
            rep.fail(kind="unit not preserved", morphism=f)
        for a in A.basis():
            for b in A.basis():
                rep.checked += 1
                lhs = m.apply(A.mul({a: ONE}, {b: ONE}))
                rhs = B.mul(m.apply({a: ONE}), m.apply({b: ONE}))
                if lhs != rhs:
                    rep.fail(kind="multiplication not preserved", morphism=f, x=a, y=b)
    for c in C.objects:
        A = T.algebras[c]
        for a in A.basis():
            if T.apply(C.id(c), {a: ONE}) != {a: ONE}:
                rep.fail(kind="identity", object=c, x=a)
    for (g, f), h in sorted(C.comp.items(), key=repr):
        for a in T.algebras[C.src(f)].basis():
            rep.checked += 1
            if T.apply(g, T.apply(f, {a: ONE})) != T.apply(h, {a: ONE}):
                rep.fail(kind="composition", pair=(g, f), x=a)
    return rep


def check_perp_commutativity(T: TheoryFunctor, OC: OrthogonalCategory) -> Decision:
    """For every (f1, f2) in the relation: images of f1 and f2 graded-commute."""
    C = T.cat
    checked = 0
    for f1, f2 in sorted(OC.rel, key=repr):
        t = C.tgt(f1)
        A1, A2, B = T.algebras[C.src(f1)], T.algebras[C.src(f2)], T.algebras[t]
        for a in A1.basis():
            fa = T.apply(f1, {a: ONE})
            for b in A2.basis():
                fb = T.apply(f2, {b: ONE})
                s = -1 if A1.degree(a) % 2 and A2.degree(b) % 2 else 1
                lhs = B.mul(fa, fb)
                rhs = _scaled(B.mul(fb, fa), s)
                checked += 1
                if lhs != rhs:
                    return Decision(False, {"pair": (f1, f2), "x": a, "y": b,
                                            "commutator": _sum(lhs, _scaled(rhs, -1))},
                                    [f"{checked} products compared"])
    return Decision(True, None, [f"{checked} products compared"])


# ================================================================ operad algebras

def _intify(x: Mapping) -> Dict:
    """Integral coefficients as ints (cheaper arithmetic, equal under ==)."""
    return {k: (v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v) for k, v in x.items()}


class OperadAlgebraHandle:
    """An algebra over a basis-labelled operad.

    ``action(label, inputs)`` takes an operation label and a list of basis
    input elements (one per input color) and returns an element of the
    target; it is extended multilinearly and memoized on basis labels.
    """

    def __init__(self, operad: Operad, complexes: Mapping, action: Callable, name: str = ""):
        self.operad = operad
        self.complexes: Dict = dict(complexes)
        self._action = action
        self.name = name
        self._cache: Dict = {}

    def act_labels(self, label, labs: Tuple) -> Dict:
        key = (label, labs)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = _intify(self._action(label, [{l: ONE} for l in labs]))
        return out

    def act_basis(self, label, inputs: Sequence[Mapping]) -> Dict:
        out: Dict = {}
        for combo in itertools.product(*[list(z.items()) for z in inputs]):
            c = 1
            for _, v in combo:
                c *= v
            for k, v in self.act_labels(label, tuple(l for l, _ in combo)).items():
                add_to(out, k, c * v)
        return out

    def act(self, x: Mapping, inputs: Sequence[Mapping]) -> Dict:
        """Multilinear extension of the action in the operation and the inputs."""
        out: Dict = {}
        for lab, c in x.items():
            for k, v in self.act_basis(lab, inputs).items():
                add_to(out, k, c * v)
        return out

    def act_on_labels(self, x: Mapping, labs: Tuple) -> Dict:
        out: Dict = {}
        for lab, c in x.items():
            for k, v in self.act_labels(lab, labs).items():
                add_to(out, k, c * v)
        return out

    def action_map(self, profile, win: DegreeWindow) -> ChainMap:
        """alpha: O(profile) (x) A_c1 (x) ... (x) A_cn -> A_t as a chain map."""
        ins, t = profile
        S = self.operad.component(profile, win)
        for c in ins:
            S = tensor(S, self.complexes[c])
        imgs = {}
        for n, labs in S.basis.items():
            for lab in labs:
                parts = []
                x = lab
                for _ in ins:
                    x, a = x
                    parts.append(a)
                parts.reverse()
                imgs[lab] = self.act_basis(x, [{a: ONE} for a in parts])
        return map_from_images(S, self.complexes[t], imgs, name="alpha")


def _in_degree(V: ChainComplex, x: Mapping) -> int:
    d = _degree(V, x)
    return 0 if d is None else d


def _order_action(T: TheoryFunctor, sigma, fs, t, inputs: Sequence[Mapping]) -> Dict:
    """Ordered product of the images, in the product order given by sigma."""
    C = T.cat
    B = T.algebras[t]
    order = [i - 1 for i in perm_inv(tuple(sigma))] if sigma else []
    degs = [_in_degree(T.algebras[C.src(f)].complex, x) for f, x in zip(fs, inputs)]
    s = koszul_sign(degs, order)
    out = B.prod([T.apply(fs[i], inputs[i]) for i in order])
    return _scaled(out, s)


class WindowExhausted(Exception):
    """An action would leave the degrees where its target is computed."""


class IllDefinedAction(Exception):
    def __init__(self, witness):
        super().__init__(f"action not well defined on classes: {witness!r}")
        self.witness = witness


def action_well_defined(T: TheoryFunctor, OC: OrthogonalCategory) -> Decision:
    """Check that every member of every arity-2 class acts the same way.

    Classes are generated by swaps of orthogonal neighbours, so arity 2
    decides well-definedness.  The witness names the failing pair.
    """
    C = T.cat
    checked = 0
    for f1, f2 in sorted(OC.rel, key=repr):
        t = C.tgt(f1)
        A1, A2 = T.algebras[C.src(f1)], T.algebras[C.src(f2)]
        for a in A1.basis():
            for b in A2.basis():
                ins = [{a: ONE}, {b: ONE}]
                v1 = _order_action(T, (1, 2), (f1, f2), t, ins)
                v2 = _order_action(T, (2, 1), (f1, f2), t, ins)
                checked += 1
                if v1 != v2:
                    return Decision(False, {"pair": (f1, f2), "x": a, "y": b,
                                            "values": {(1, 2): v1, (2, 1): v2}},
                                    [f"{checked} representative pairs compared"])
    return Decision(True, None, [f"{checked} representative pairs compared"])


def functor_to_algebra(T: TheoryFunctor, OC: OrthogonalCategory, qft: QftOperad | None = None) -> OperadAlgebraHandle:
    """The O_C-algebra of a theory functor.

    [sigma, f] acts by mapping each input along f_i and multiplying in the
    order sigma^{-1}(1), ..., sigma^{-1}(n), with the Koszul sign of that
    reordering.  Raises IllDefinedAction when the result depends on the
    representative of a class.
    """
    Q = qft or QftOperad(OC)
    dec = action_well_defined(T, OC)
    if not dec.ok:
        raise IllDefinedAction(dec.witness)

    def action(label, inputs):
        sigma, fs, t = label
        return _order_action(T, sigma, fs, t, inputs)

    return OperadAlgebraHandle(Q, {c: T.algebras[c].complex for c in T.cat.objects}, action,
                               name=f"alg({T.name})")


def algebra_to_functor(A: OperadAlgebraHandle, OC: OrthogonalCategory) -> TheoryFunctor:
    """Recover the theory: mu_c from [e,(id,id)], units from arity 0, maps from arity 1."""
    Q: QftOperad = A.operad
    C = OC.cat
    algs = {}
    for c in C.objects:
        V = A.complexes[c]
        idc = C.id(c)
        mlab = Q.canonical((1, 2), (idc, idc), c)
        labels = [l for n in sorted(V.basis) for l in V.basis[n]]
        table = {}
        for a in labels:
            for b in labels:
                v = A.act_basis(mlab, [{a: ONE}, {b: ONE}])
                if v:
                    table[(a, b)] = v
        unit = A.act_basis(((), (), c), [])
        algs[c] = DgAlgebra(V, table, unit, name=str(c))
    maps = {}
    for f in C.morphisms:
        s, t = C.src(f), C.tgt(f)
        lab = ((1,), (f,), t)
        imgs = {a: A.act_basis(lab, [{a: ONE}]) for n in A.complexes[s].basis for a in A.complexes[s].basis[n]}
        maps[f] = map_from_images(A.complexes[s], A.complexes[t], imgs, name=str(f))
    return TheoryFunctor(C, algs, maps, name=A.name)


def same_theory(T1: TheoryFunctor, T2: TheoryFunctor) -> bool:
    """Equality on the nose: same complexes, structure constants, units and matrices."""
    if set(T1.algebras) != set(T2.algebras):
        return False
    for c in T1.algebras:
        A, B = T1.algebras[c], T2.algebras[c]
        if A.complex.basis != B.complex.basis or A.products != B.products or A.unit != B.unit:
            return False
        if any(A.complex.d(n) != B.complex.d(n) for n in set(A.complex.basis) | set(B.complex.basis)):
            return False
    for f in T1.cat.morphisms:
        m1, m2 = T1.maps[f], T2.maps[f]
        if any(m1.at(n) != m2.at(n) for n in set(m1.degrees()) | set(m2.degrees())):
            return False
    return True


def _basis_elems(V: ChainComplex) -> List[Dict]:
    return [{l: ONE} for n in sorted(V.basis) for l in V.basis[n]]


def check_algebra_axioms(A: OperadAlgebraHandle, max_arity: int = 2, degrees=(0,), samples: int | None = None,
                         seed: int = 0, max_total: int | None = None, profiles=None) -> Report:
    """Equivariance (alg1), composition (alg2), unit (alg3) and the chain-map
    property of each action, on basis elements.

    Exhaustive when ``samples`` is None; otherwise at most ``samples`` draws
    per enumeration slot, reproducible from ``seed``.
    """
    O = A.operad
    rng = random.Random(seed)
    max_total = max_arity if max_total is None else max_total
    rep = Report()
    profs = list(profiles) if profiles is not None else list(profiles_up_to(O.colors, max_arity))
    # inputs only where the differential is known, so the chain-map test is meaningful
    inputs = {c: [l for n in sorted(A.complexes[c].basis) if A.complexes[c].d_known(n)
                  for l in A.complexes[c].basis[n]] for c in O.colors}
    deg = {c: {l: A.complexes[c].degree_of(l) for l in inputs[c]} for c in O.colors}
    labels_by_target: Dict = {}
    arity: Dict = {}
    for prof in profiles_up_to(O.colors, max_total):
        for d in degrees:
            for l in O.basis(prof, d):
                labels_by_target.setdefault(prof[1], []).append(l)
                arity[l] = len(prof[0])

    for c in O.colors:
        for z in inputs[c]:
            rep.checked += 1
            if A.act_labels(O.unit(c), (z,)) != {z: ONE}:
                rep.fail(kind="alg3", color=c, z=z)

    for prof in profs:
        ins, t = prof
        n = len(ins)
        perms = be.all_perms(n)
        for d in degrees:
            for x in _pick(rng, O.basis(prof, d), samples):
                xd = O.degree(x)
                dx = O.differential_basis(x)
                acted = {sigma: O.act_basis(x, sigma) for sigma in perms}
                for zs in _pick(rng, list(itertools.product(*[inputs[c] for c in ins])), samples):
                    try:
                        _check_instance(A, O, rep, rng, samples, x, xd, dx, acted, perms, ins, t, n, zs, deg)
                    except WindowExhausted:
                        rep.skipped += 1
                # alg2
                choices = [_pick(rng, labels_by_target.get(c, []), samples) for c in ins]
                for ys in _budgeted(choices, arity.__getitem__, max_total):
                    g = O.compose_basis(x, list(ys))
                    ydeg = [O.degree(y) for y in ys]
                    ks = [arity[y] for y in ys]
                    flat_ins = [c for y in ys for c in O.profile(y)[0]]
                    for flat in _pick(rng, list(itertools.product(*[inputs[c] for c in flat_ins])), samples):
                        try:
                            lhs = A.act_on_labels(g, flat)
                            inner, gdegs, pos = [], [], 0
                            for y, k in zip(ys, ks):
                                grp = flat[pos:pos + k]
                                gdegs.append(sum(deg[c][z] for c, z in zip(flat_ins[pos:pos + k], grp)))
                                inner.append(A.act_labels(y, grp))
                                pos += k
                            s = 0
                            for i in range(n):
                                for j in range(i + 1, n):
                                    s += gdegs[i] * ydeg[j]
                            rhs = A.act_basis(x, inner)
                        except WindowExhausted:
                            rep.skipped += 1
                            continue
                        rep.checked += 1
                        if lhs != (rhs if s % 2 == 0 else _scaled(rhs, -1)):
                            rep.fail(kind="alg2", x=x, ys=ys, zs=flat)
    return rep


def _check_instance(A, O, rep, rng, samples, x, xd, dx, acted, perms, ins, t, n, zs, deg):
    """alg1 and the chain-map identity for one operation and one input tuple."""
    zdeg = [deg[c][z] for c, z in zip(ins, zs)]
    base = A.act_labels(x, zs)
    for sigma in _pick(rng, perms, samples):
        lhs = A.act_on_labels(acted[sigma], tuple(zs[i - 1] for i in sigma))
        s = koszul_sign(zdeg, [i - 1 for i in sigma])
        rep.checked += 1
        if lhs != (base if s == 1 else _scaled(base, -1)):
            rep.fail(kind="alg1", x=x, sigma=sigma, zs=zs)
    if not A.complexes[t].d_known(xd + sum(zdeg)):
        return
    lhs = A.complexes[t].apply_d(base)
    rhs = A.act_on_labels(dx, zs) if dx else {}
    acc = xd
    for i in range(n):
        dz = A.complexes[ins[i]].apply_d({zs[i]: ONE})
        if dz:
            term = A.act_basis(x, [{z: ONE} for z in zs[:i]] + [dz] + [{z: ONE} for z in zs[i + 1:]])
            rhs = _sum(rhs, _scaled(term, -1 if acc % 2 else 1))
        acc += zdeg[i]
    rep.checked += 1
    if lhs != rhs:
        rep.fail(kind="chain map", x=x, zs=zs)


def trivial_operad_algebra(O: Operad, label="1") -> OperadAlgebraHandle:
    """Every color goes to k and every operation acts by its augmentation."""
    k = unit_complex(label)

    def action(x, inputs):
        if O.degree(x):
            return {}
        c = ONE
        for z in inputs:
            c *= z.get(label, 0)
        return {label: c} if c else {}
    return OperadAlgebraHandle(O, {col: k for col in O.colors}, action, name="trivial")


def pullback_algebra(m: OperadMorphism, A: OperadAlgebraHandle) -> OperadAlgebraHandle:
    """(f, phi)^* A: color c goes to A_{f(c)}, x acts as phi(x)."""
    def action(x, inputs):
        return A.act(m.apply({x: ONE}), inputs)
    return OperadAlgebraHandle(m.source, {c: A.complexes[m.color_map[c]] for c in m.source.colors}, action,
                               name=f"{m.name}^*{A.name}")


# ================================================================ free E-infinity algebras

@dataclass
class FreeEinftyAlgebra:
    """The free E-infinity algebra on a complex, kept as its generators."""
    generators: ChainComplex

    def generator_homology(self, win: DegreeWindow | None = None):
        return homology(self.generators, win)


def free_einfty(V: ChainComplex) -> FreeEinftyAlgebra:
    bad = V.check()
    if bad:
        raise ValueError(f"generators are not a complex: {bad}")
    return FreeEinftyAlgebra(V)


def tensoring_free(K: SimplicialView, F: FreeEinftyAlgebra, win: DegreeWindow) -> FreeEinftyAlgebra:
    """K (x) E(V) = E(N_*(K) (x) V), computed on generators."""
    N = normalized_chains(K, win)
    if not N.is_exact():
        raise ValueError(f"{K!r} is not finite inside the window; enlarge the window")
    return FreeEinftyAlgebra(tensor(N, F.generators))


def free_equal(F: FreeEinftyAlgebra, G: FreeEinftyAlgebra) -> bool:
    """Equal generators up to relabelling that keeps the basis order."""
    V, W = F.generators, G.generators
    if V.dims() != W.dims():
        return False
    return all(V.d(n) == W.d(n) for n in V.basis)


def free_weak_equivalence(f: ChainMap, win: DegreeWindow) -> Decision:
    """E(f) is a weak equivalence iff f is a quasi-isomorphism (characteristic 0)."""
    return is_quasi_iso(f, win)


def homology_obstruction(V: ChainComplex, W: ChainComplex, win: DegreeWindow) -> Decision:
    """ok=True when trusted homology ranks agree; otherwise a degree where they
    differ, which rules out any quasi-isomorphism V -> W."""
    hv, hw = homology(V, win), homology(W, win)
    for n, r in hv.trusted_items():
        if n in hw.trusted and hw[n] != r:
            return Decision(False, {"degree": n, "rank_source": r, "rank_target": hw[n]})
    return Decision(True, notes=["homology ranks agree in trusted degrees"])


# ================================================================ pointwise left Kan extension

def comma_category(C: FiniteCategory, D_objects, t):
    """Objects (d, g: d -> t), morphisms (h, (d,g), (d',g')) with g' h = g."""
    objs = [(d, g) for d in D_objects for g in C.hom(d, t)]
    mors = []
    for (d, g) in objs:
        for (d2, g2) in objs:
            for h in C.hom(d, d2):
                if C.compose(g2, h) == g:
                    mors.append((h, (d, g), (d2, g2)))
    return objs, mors


def cokernel_complex(S: ChainComplex, rels: Mapping[int, List[Dict]], name: str = "") -> ChainComplex:
    """S modulo the span of the given elements per degree (assumed a subcomplex)."""
    basis, proj = {}, {}
    for n, labs in S.basis.items():
        R = Mat.from_entries(len(rels.get(n, [])), len(labs),
                             ((i, S.index(l)[1], v) for i, r in enumerate(rels.get(n, [])) for l, v in r.items()))
        piv, cols = rref(R)
        keep = [j for j in range(len(labs)) if j not in piv]
        pos = {j: k for k, j in enumerate(keep)}
        pr = {}
        for j in range(len(labs)):
            if j in pos:
                pr[j] = {pos[j]: ONE}
            else:
                pr[j] = {pos[k]: -v for k, v in piv[j].items() if k != j}
        basis[n] = [labs[j] for j in keep]
        proj[n] = pr
    diff = {}
    for n in basis:
        if n - 1 not in basis:
            continue
        ent = []
        dn = S.d(n)
        cols = dn.columns()
        for k, j in enumerate(S.index(l)[1] for l in basis[n]):
            for i, v in cols.get(j, {}).items():
                for r, w in proj[n - 1][i].items():
                    ent.append((r, k, v * w))
        diff[n] = Mat.from_entries(len(basis[n - 1]), len(basis[n]), ent)
    return ChainComplex(basis, diff, known=S.known, name=name)


def pointwise_lan(C: FiniteCategory, D_objects, values: Mapping, maps: Mapping, t) -> ChainComplex:
    """Colimit over the comma category j/t of d |-> values[d].

    ``maps[h]`` is the ChainMap values[src h] -> values[tgt h] for morphisms
    of the full subcategory on D_objects (identities may be omitted).
    """
    objs, mors = comma_category(C, D_objects, t)
    basis: Dict[int, List] = {}
    for k, (d, g) in enumerate(objs):
        for n, labs in values[d].basis.items():
            basis.setdefault(n, []).extend((k, l) for l in labs)
    idx = {o: k for k, o in enumerate(objs)}
    S = ChainComplex(basis, {}, name="sum")
    diffs = {}
    for n in basis:
        ent = []
        for k, (d, g) in enumerate(objs):
            V = values[d]
            dn = V.d(n)
            for i, r in dn.rows.items():
                for j, v in r.items():
                    ent.append((S.index((k, V.basis[n - 1][i]))[1], S.index((k, V.basis[n][j]))[1], v))
        if ent:
            diffs[n] = Mat.from_entries(S.dim(n - 1), S.dim(n), ent)
    S = ChainComplex(basis, diffs, name="sum")
    rels: Dict[int, List[Dict]] = {}
    for h, a, b in mors:
        if C.is_identity(h):
            continue
        d = a[0]
        fmap = maps[h]
        for n, labs in values[d].basis.items():
            for l in labs:
                r = {(idx[b], k): v for k, v in fmap.apply({l: ONE}).items()}
                add_to(r, (idx[a], l), -ONE)
                if r:
                    rels.setdefault(n, []).append(r)
    return cokernel_complex(S, rels, name=f"Lan({t})")


def constant_diagram(C: FiniteCategory, D_objects, V: ChainComplex):
    """The constant functor at V on the full subcategory on D_objects."""
    values = {d: V for d in D_objects}
    maps = {}
    for a in D_objects:
        for b in D_objects:
            for h in C.hom(a, b):
                maps[h] = identity_map(V)
    return values, maps
