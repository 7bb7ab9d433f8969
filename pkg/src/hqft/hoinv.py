"""Homotopy invariants of QFTs on categories fibered in groupoids.

For a presheaf of groupoids F on an orthogonal category and a theory on its
Grothendieck total category, the value at c is the end over x in F(c) of
[N_*(B(F(c)/x)), A(c,x)], computed degreewise as a kernel.  The algebra
structure over O_C (x) E-infinity is realized by the composite

    coaction -> push along f_i^* -> interleave -> evaluate -> act with the lift.

Over-categories of a groupoid are chaotic (one arrow between any two
objects), so their nerves are modelled by chaotic nerves on the set of
arrows into x.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from . import barratt_eccles as be
from .algebras import (OperadAlgebraHandle, TheoryFunctor, WindowExhausted, _degree, check_algebra_axioms,
                       functor_to_algebra)
from .chain import ChainComplex, ChainMap, DegreeWindow, GradedDims, add_to, homology, internal_hom, map_from_images
from .linalg import Mat, block_diag, kernel_basis, rref
from .operads import EinftyOperad, QftOperad, Report, TensorOperad
from .orthcat import GrothendieckTotal, fiber_morphism, lift
from .simplicial import chaotic_nerve, normalized_chains

ONE = Fraction(1)


def _arrows_into(G, x) -> List:
    return sorted(G.into(x), key=repr)


@dataclass
class EndComplex:
    """The end at one base object, with its ambient product.

    ``ambient`` is the direct sum over x of the hom complexes ``homs[x]``;
    its labels are (x, (simplex, a)).  ``complex`` has labels (c, n, i) and
    ``vectors[n][i]`` is the ambient element of basis vector i.  Coordinates
    of an end element are read off at ``free[n]``.
    """
    obj: object
    window: DegreeWindow
    complex: ChainComplex
    ambient: ChainComplex
    homs: Dict
    nerves: Dict
    vectors: Dict[int, List[Dict]]
    free: Dict[int, List[int]]
    phi: Dict[int, Mat] = field(repr=False)

    def to_ambient(self, elem: Mapping) -> Dict:
        out: Dict = {}
        for lab, c in elem.items():
            _, n, i = lab
            for k, v in self.vectors[n][i].items():
                add_to(out, k, c * v)
        return out

    def from_ambient(self, amb: Mapping) -> Dict:
        """End coordinates of an ambient element; raises if it is not in the end."""
        n = _degree(self.ambient, amb)
        if n is None:
            return {}
        if n not in self.free:
            raise WindowExhausted(f"degree {n} is outside the computed end")
        vec = self.ambient.vec(amb, n)
        elem = {(self.obj, n, k): vec[j] for k, j in enumerate(self.free[n]) if vec.get(j)}
        if self.to_ambient(elem) != {k: v for k, v in amb.items() if v}:
            raise ValueError("element does not satisfy the end condition")
        return elem

    def satisfies_end_condition(self, amb: Mapping) -> bool:
        n = _degree(self.ambient, amb)
        if n is None:
            return True
        v = self.ambient.vec(amb, n)
        return not self.phi[n].apply(v)

    def homology(self) -> GradedDims:
        return homology(self.complex, self.window)

    def inclusion(self) -> ChainMap:
        imgs = {lab: self.to_ambient({lab: ONE}) for n in self.complex.basis for lab in self.complex.basis[n]}
        return map_from_images(self.complex, self.ambient, imgs, name="incl")


def _chains_top(T: TheoryFunctor, G: GrothendieckTotal, c, win: DegreeWindow) -> int:
    tops = [0]
    for x in G.presheaf.fibers[c].objects:
        sup = T.algebras[(c, x)].complex.support()
        if sup:
            tops.append(sup[-1])
    return max(tops) - win.lo


def horan_object(G: GrothendieckTotal, T: TheoryFunctor, c, win: DegreeWindow) -> EndComplex:
    """The end over F(c) of [N_*(B(F(c)/x)), A(c, x)] in the degrees of win."""
    Fc = G.presheaf.fibers[c]
    xs = sorted(Fc.objects, key=repr)
    top = _chains_top(T, G, c, win)
    nerves, chains, homs = {}, {}, {}
    for x in xs:
        nerves[x] = chaotic_nerve(_arrows_into(Fc, x), name=f"N({c},{x})")
        chains[x] = normalized_chains(nerves[x], DegreeWindow(top - 1, top - 1))
        homs[x] = internal_hom(chains[x], T.algebras[(c, x)].complex, win)
    # a side left open by every hom complex is zero beyond the window
    los = [h.known[0] for h in homs.values()]
    his = [h.known[1] for h in homs.values()]
    lo = max(win.lo if k is None else k for k in los)
    hi = min(win.hi if k is None else k for k in his)
    known = (None if all(k is None for k in los) else lo, None if all(k is None for k in his) else hi)
    if lo > hi:
        raise WindowExhausted("window too small for the end condition")
    basis, diff = {}, {}
    for n in range(lo, hi + 1):
        basis[n] = [(x, l) for x in xs for l in homs[x].basis.get(n, ())]
        blocks = [homs[x].d(n) for x in xs]
        if n > lo and any(not b.is_zero() for b in blocks):
            diff[n] = block_diag(blocks)
    P = ChainComplex(basis, diff, known=known, name=f"P({c})")

    # comparison map Phi: P_n -> prod over non-identity h: x -> x' of [N_x, A(c,x')]_n
    morphs = sorted((h for h in Fc.morphisms if not Fc.is_identity(h)), key=repr)
    out_of = {x: [h for h in morphs if Fc.src(h) == x] for x in xs}
    into = {x: [h for h in morphs if Fc.tgt(h) == x] for x in xs}
    amaps = {h: T.maps[fiber_morphism(G, c, h)] for h in morphs}
    phi: Dict[int, Mat] = {}
    for n in range(lo, hi + 1):
        rows: Dict = {}
        ent = []
        for j, (x, (s, a)) in enumerate(P.basis.get(n, ())):
            for h in out_of[x]:
                for a2, v in amaps[h].apply({a: ONE}).items():
                    key = (h, s, a2)
                    ent.append((rows.setdefault(key, len(rows)), j, v))
            for h in into[x]:
                hinv = Fc.inverse(h)
                s0 = tuple(Fc.compose(hinv, g) for g in s)
                key = (h, s0, a)
                ent.append((rows.setdefault(key, len(rows)), j, -ONE))
        phi[n] = Mat.from_entries(len(rows), P.dim(n), ent)

    vectors, free = {}, {}
    ebasis = {}
    for n in range(lo, hi + 1):
        ker = kernel_basis(phi[n])
        piv, cols = rref(phi[n])
        pivs = set(cols)
        free[n] = [j for j in range(P.dim(n)) if j not in pivs]
        vectors[n] = [P.elem(k, n) for k in ker]
        ebasis[n] = [(c, n, i) for i in range(len(ker))]
    E0 = ChainComplex(ebasis, {}, known=(lo, hi))
    ediff = {}
    for n in range(lo + 1, hi + 1):
        if not E0.dim(n) or not E0.dim(n - 1):
            continue
        ent = []
        for i, vec in enumerate(vectors[n]):
            dv = P.vec(P.apply_d(vec), n - 1)
            for k, j in enumerate(free[n - 1]):
                if dv.get(j):
                    ent.append((k, i, dv[j]))
        ediff[n] = Mat.from_entries(E0.dim(n - 1), E0.dim(n), ent)
    E = ChainComplex(ebasis, ediff, known=known, name=f"hoRan({c})")
    return EndComplex(c, win, E, P, homs, nerves, vectors, free, phi)


# ================================================================ the action

@dataclass
class HoActionWitness:
    """Intermediate values of the action composite for one output simplex."""
    profile: Tuple
    operation: Tuple
    inputs: List
    y: object
    simplex: Tuple
    coaction: Dict
    pushed: Dict
    evaluated: Dict
    output: Dict


class HoranAlgebra:
    """The O_C (x) E-infinity algebra of homotopy invariants within a window."""

    def __init__(self, G: GrothendieckTotal, T: TheoryFunctor, win: DegreeWindow, sign_twist: bool = False):
        self.G = G
        self.T = T
        self.win = win
        self.F = G.presheaf
        self.base = QftOperad(self.F.base)
        self.operad = TensorOperad(self.base, EinftyOperad())
        self.total = functor_to_algebra(T, G.total)
        self.ends: Dict = {}
        self._sign_twist = sign_twist  # fault injection for tests only

    def end(self, c) -> EndComplex:
        if c not in self.ends:
            self.ends[c] = horan_object(self.G, self.T, c, self.win)
        return self.ends[c]

    def handle(self) -> OperadAlgebraHandle:
        comps = {c: self.end(c).complex for c in self.F.base.cat.objects}

        def action(label, inputs):
            p, q = label
            return self.act(p, q, inputs)
        return OperadAlgebraHandle(self.operad, comps, action, name="hoRan")

    def act(self, p, e, inputs: Sequence[Mapping], trace: List | None = None) -> Dict:
        """Action of the class p and the Barratt-Eccles cell e on end elements."""
        sigma, fs, t = p
        C = self.F.base.cat
        cs = [C.src(f) for f in fs]
        Ein = [self.end(ci) for ci in cs]
        amb = [E.to_ambient(z) for E, z in zip(Ein, inputs)]
        ndeg = [(_degree(E.ambient, a) or 0) for E, a in zip(Ein, amb)]
        if any(not a for a in amb):
            return {}
        edeg = len(e) - 1
        m = edeg + sum(ndeg)
        Et = self.end(t)
        if m not in Et.free:
            raise WindowExhausted(f"output degree {m} outside the computed end at {t!r}")
        Ft = self.F.fibers[t]
        restr = [self.F.restrict[f] for f in fs]
        s_e = -1 if (edeg * sum(ndeg)) % 2 else 1
        out: Dict = {}
        for y in sorted(Ft.objects, key=repr):
            Ay = self.T.algebras[(t, y)].complex
            Ny = Et.nerves[y]
            ys = [R.obj_map[y] for R in restr]
            lifted = self.total.operad.canonical(sigma, tuple(lift(self.G, f, y) for f in fs), (t, y))
            for adeg in Ay.support():
                pdim = adeg - m
                if pdim < 0:
                    continue
                for s in Ny.nondegenerate(pdim):
                    # (1) coaction
                    if fs:
                        co = be.coaction(Ny, {e: ONE}, {s: ONE})
                    else:
                        co = {(): ONE} if pdim == 0 and edeg == 0 else {}
                    pushed: Dict = {}
                    evaluated: Dict = {}
                    for pieces, cv in co.items():
                        # (2) push each piece along the restriction functor
                        new = []
                        for R, piece in zip(restr, pieces):
                            q = tuple(R.mor_map[g] for g in piece)
                            if not be.nondegenerate(q):
                                break
                            new.append(q)
                        else:
                            add_to(pushed, tuple(new), cv)
                    for pieces, cv in pushed.items():
                        # (3) interleave inputs and pieces; (4) evaluate
                        sgn = s_e
                        for i in range(len(pieces)):
                            for j in range(i):
                                if (ndeg[i] * (len(pieces[j]) - 1)) % 2:
                                    sgn = -sgn
                        if self._sign_twist and len(pieces) > 1 and (len(pieces[0]) - 1) % 2:
                            sgn = -sgn
                        vals = []
                        for i, piece in enumerate(pieces):
                            v: Dict = {}
                            for (x, (s2, a)), c in amb[i].items():
                                if x == ys[i] and s2 == piece:
                                    add_to(v, a, c)
                            vals.append(v)
                        if any(not v for v in vals):
                            continue
                        # (5) act with the lifted class on the evaluated values
                        res = self.total.act_basis(lifted, vals)
                        for a, v in res.items():
                            add_to(evaluated, a, sgn * cv * v)
                    for a, v in evaluated.items():
                        add_to(out, (y, (s, a)), v)
                    if trace is not None:
                        trace.append(HoActionWitness(((tuple(cs), t)), (p, e), list(inputs), y, s, co, pushed,
                                                     evaluated, {k: v for k, v in out.items() if k[0] == y}))
        if not Et.satisfies_end_condition(out):
            raise ValueError("action output violates the end condition")
        return Et.from_ambient(out)


def horan_action(G: GrothendieckTotal, T: TheoryFunctor, p, e, inputs: Sequence[Mapping], win: DegreeWindow,
                 trace: List | None = None) -> Dict:
    return HoranAlgebra(G, T, win).act(p, e, inputs, trace)


def verify_horan_axioms(G: GrothendieckTotal, T: TheoryFunctor, win: DegreeWindow, max_arity: int = 2,
                        e_degrees=(0, 1), samples: int | None = None, seed: int = 0,
                        algebra: HoranAlgebra | None = None) -> Report:
    """alg1-alg3 and the chain-map identity for the constructed action.

    Instances whose intermediate degrees leave the window are skipped and
    counted in ``Report.skipped``.
    """
    H = algebra or HoranAlgebra(G, T, win)
    rep = check_algebra_axioms(H.handle(), max_arity, degrees=e_degrees, samples=samples, seed=seed)
    for c, E in sorted(H.ends.items(), key=lambda kv: repr(kv[0])):
        bad = E.inclusion().check()
        if bad:
            rep.fail(kind="end not a subcomplex", object=c, degrees=bad)
    return rep
