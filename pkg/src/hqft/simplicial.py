"""Simplicial sets given lazily, normalized chains and cochains, AW and EZ maps.

A view produces the d-simplices of a simplicial set on demand.  Every view
implements faces, degeneracies, restriction to a vertex subset and the
"staircase" operator used by shuffle maps.  Nerves are unbounded, so chain
complexes built from them carry a known range (see ``chain``).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .chain import (ChainComplex, ChainMap, DegreeWindow, GradedDims, add_to, homology, internal_hom,
                    map_from_images, tensor, unit_complex)
from .linalg import Mat
from .orthcat import FiniteCategory

ONE = Fraction(1)


class SimplicialView:
    max_dim: Optional[int] = None  # None: possibly nonzero in every degree

    def simplices(self, d: int) -> List:
        raise NotImplementedError

    def dim_of(self, s) -> int:
        raise NotImplementedError

    def face(self, i: int, s):
        raise NotImplementedError

    def degen(self, j: int, s):
        raise NotImplementedError

    def degeneracy_indices(self, s) -> frozenset:
        raise NotImplementedError

    def sub(self, s, idx: Sequence[int]):
        """Simplex spanned by the given (weakly increasing) vertex indices of s."""
        raise NotImplementedError

    def staircase(self, s, steps: Sequence[bool]):
        """Degenerate s along a lattice path: advance one vertex on True, stay on False."""
        idx = [0]
        for st in steps:
            idx.append(idx[-1] + (1 if st else 0))
        return self.sub(s, idx)

    def is_degenerate(self, s) -> bool:
        return bool(self.degeneracy_indices(s))

    def nondegenerate(self, d: int) -> List:
        return [s for s in self.simplices(d) if not self.is_degenerate(s)]

    def boundary(self, s) -> Dict:
        """Alternating face sum in normalized chains."""
        out: Dict = {}
        d = self.dim_of(s)
        if d == 0:
            return out
        for i in range(d + 1):
            f = self.face(i, s)
            if not self.is_degenerate(f):
                add_to(out, f, ONE if i % 2 == 0 else -ONE)
        return out

    def check_identities(self, d: int) -> List:
        """Simplicial identities d_i d_j = d_{j-1} d_i (i < j) on d-simplices."""
        bad = []
        for s in self.simplices(d):
            for j in range(d + 1):
                for i in range(j):
                    if self.face(i, self.face(j, s)) != self.face(j - 1, self.face(i, s)):
                        bad.append((s, i, j))
        return bad


class NerveView(SimplicialView):
    """Nerve of a finite category; a d-simplex is (x0, (f1, ..., fd)) with f_k : x_{k-1} -> x_k."""

    def __init__(self, C: FiniteCategory):
        self.C = C
        self._cache: Dict[int, List] = {}

    def simplices(self, d):
        if d in self._cache:
            return self._cache[d]
        C = self.C
        if d == 0:
            out = [(a, ()) for a in C.objects]
        else:
            out = []
            for (x0, fs) in self.simplices(d - 1):
                last = C.tgt(fs[-1]) if fs else x0
                for f, (s, t) in C.morphisms.items():
                    if s == last:
                        out.append((x0, fs + (f,)))
        self._cache[d] = out
        return out

    def dim_of(self, s):
        return len(s[1])

    def vertex(self, s, k):
        x0, fs = s
        return x0 if k == 0 else self.C.tgt(fs[k - 1])

    def face(self, i, s):
        x0, fs = s
        d = len(fs)
        if i == 0:
            return (self.C.tgt(fs[0]), fs[1:])
        if i == d:
            return (x0, fs[:-1])
        return (x0, fs[:i - 1] + (self.C.compose(fs[i], fs[i - 1]),) + fs[i + 1:])

    def degen(self, j, s):
        x0, fs = s
        return (x0, fs[:j] + (self.C.id(self.vertex(s, j)),) + fs[j:])

    def degeneracy_indices(self, s):
        return frozenset(j for j, f in enumerate(s[1]) if self.C.is_identity(f))

    def sub(self, s, idx):
        C = self.C
        x0, fs = s
        out = []
        for a, b in zip(idx, idx[1:]):
            if a == b:
                out.append(C.id(self.vertex(s, a)))
            else:
                g = fs[a]
                for f in fs[a + 1:b]:
                    g = C.compose(f, g)
                out.append(g)
        return (self.vertex(s, idx[0]), tuple(out))


class VertexView(SimplicialView):
    """Simplices are vertex tuples; ``allowed`` says which vertex tuples exist.

    With all tuples allowed this is the nerve of a chaotic category.  With
    only weakly increasing tuples spanning a face it is an ordered
    simplicial complex.
    """

    def __init__(self, vertices, faces=None, max_dim=None, name=""):
        self.vertices = list(vertices)
        self.order = {v: i for i, v in enumerate(self.vertices)}
        self.faces = None if faces is None else {frozenset(f) for f in faces}
        self.max_dim = max_dim
        self.name = name
        self._cache: Dict[int, List] = {}

    def _ok(self, t):
        if self.faces is None:
            return True
        if any(self.order[a] > self.order[b] for a, b in zip(t, t[1:])):
            return False
        return frozenset(t) in self.faces

    def simplices(self, d):
        if d in self._cache:
            return self._cache[d]
        if self.faces is None:
            out = list(itertools.product(self.vertices, repeat=d + 1))
        else:
            out = []
            for f in sorted(self.faces, key=lambda f: sorted(self.order[v] for v in f)):
                vs = sorted(f, key=self.order.get)
                for t in itertools.combinations_with_replacement(vs, d + 1):
                    if set(t) == set(f):
                        out.append(tuple(t))
            out.sort(key=lambda t: [self.order[v] for v in t])
        self._cache[d] = out
        return out

    def nondegenerate(self, d):
        if self.faces is not None:
            return [tuple(sorted(f, key=self.order.get)) for f in
                    sorted(self.faces, key=lambda f: sorted(self.order[v] for v in f)) if len(f) == d + 1]
        out = [(v,) for v in self.vertices]
        for _ in range(d):
            out = [t + (v,) for t in out for v in self.vertices if v != t[-1]]
        return out

    def dim_of(self, s):
        return len(s) - 1

    def face(self, i, s):
        return s[:i] + s[i + 1:]

    def degen(self, j, s):
        return s[:j + 1] + s[j:]

    def degeneracy_indices(self, s):
        return frozenset(j for j in range(len(s) - 1) if s[j] == s[j + 1])

    def sub(self, s, idx):
        return tuple(s[i] for i in idx)


def chaotic_nerve(objects, name="") -> VertexView:
    return VertexView(objects, None, None, name=name)


def ordered_complex(vertices, facets, name="") -> VertexView:
    """Ordered simplicial complex generated by the given facets."""
    faces = set()
    for F in facets:
        F = list(F)
        for k in range(1, len(F) + 1):
            for sub in itertools.combinations(F, k):
                faces.add(frozenset(sub))
    return VertexView(vertices, faces, max(len(f) for f in faces) - 1 if faces else 0, name=name)


def standard_simplex(n: int) -> VertexView:
    return ordered_complex(range(n + 1), [range(n + 1)], name=f"D{n}")


def boundary_simplex(n: int) -> VertexView:
    """The boundary of the standard n-simplex (a model of the (n-1)-sphere)."""
    V = list(range(n + 1))
    return ordered_complex(V, [[v for v in V if v != k] for k in V], name=f"dD{n}")


def discrete_set(points) -> VertexView:
    return ordered_complex(points, [[p] for p in points], name="discrete")


def point() -> VertexView:
    return discrete_set(["*"])


class ProductView(SimplicialView):
    def __init__(self, X: SimplicialView, Y: SimplicialView):
        self.X, self.Y = X, Y
        mx, my = X.max_dim, Y.max_dim
        self.max_dim = None if mx is None or my is None else mx + my

    def simplices(self, d):
        return [(s, t) for s in self.X.simplices(d) for t in self.Y.simplices(d)]

    def nondegenerate(self, d):
        out = []
        for s in self.X.simplices(d):
            ds = self.X.degeneracy_indices(s)
            for t in self.Y.simplices(d):
                if not (ds & self.Y.degeneracy_indices(t)):
                    out.append((s, t))
        return out

    def dim_of(self, s):
        return self.X.dim_of(s[0])

    def face(self, i, s):
        return (self.X.face(i, s[0]), self.Y.face(i, s[1]))

    def degen(self, j, s):
        return (self.X.degen(j, s[0]), self.Y.degen(j, s[1]))

    def degeneracy_indices(self, s):
        return self.X.degeneracy_indices(s[0]) & self.Y.degeneracy_indices(s[1])

    def sub(self, s, idx):
        return (self.X.sub(s[0], idx), self.Y.sub(s[1], idx))


def nerve(C: FiniteCategory, max_degree: int | None = None) -> NerveView:
    v = NerveView(C)
    if max_degree is not None:
        v.simplices(max_degree)
    return v


# ---------------------------------------------------------------- chains

def _top(X: SimplicialView, win: DegreeWindow) -> Tuple[int, bool]:
    """Highest degree to build and whether that covers all of X."""
    want = win.hi + 1
    if X.max_dim is not None and X.max_dim <= want:
        return X.max_dim, True
    return max(want, 0), False


def normalized_chains(X: SimplicialView, win: DegreeWindow) -> ChainComplex:
    top, exact = _top(X, win)
    basis = {d: X.nondegenerate(d) for d in range(top + 1)}
    basis = {d: b for d, b in basis.items() if b}
    C = ChainComplex(basis, {}, known=(None, None) if exact else (None, top))
    diff = {}
    for d in range(1, top + 1):
        if not C.dim(d):
            continue
        ent = []
        for j, s in enumerate(basis[d]):
            for f, c in X.boundary(s).items():
                ent.append((C.index(f)[1], j, c))
        diff[d] = Mat.from_entries(C.dim(d - 1), C.dim(d), ent)
    return ChainComplex(basis, diff, known=C.known, name="N")


KLABEL = "1"


def normalized_cochains(X: SimplicialView, win: DegreeWindow) -> ChainComplex:
    """[N_*(X), k] in homological degrees (cochains of degree p sit in degree -p)."""
    need = max(0, -win.lo)
    N = normalized_chains(X, DegreeWindow(need - 1, need - 1))
    return internal_hom(N, unit_complex(KLABEL), win)


def cochain(values: Dict) -> Dict:
    """Cochain as a hom-complex element from {simplex: value}."""
    return {(s, KLABEL): Fraction(v) for s, v in values.items() if v}


def cochain_values(a: Dict) -> Dict:
    return {s: v for (s, _), v in a.items()}


def groupoid_cohomology(G: FiniteCategory, win: DegreeWindow) -> GradedDims:
    if not G.is_groupoid():
        raise ValueError("groupoid_cohomology expects a groupoid")
    return homology(normalized_cochains(nerve(G), win), win)


# ---------------------------------------------------------------- AW / EZ

def aw(X: SimplicialView, Y: SimplicialView, s) -> Dict:
    """Alexander-Whitney on a product simplex, as {(x_face, y_face): coeff}."""
    x, y = s
    d = X.dim_of(x)
    out: Dict = {}
    for p in range(d + 1):
        a = X.sub(x, list(range(p + 1)))
        b = Y.sub(y, list(range(p, d + 1)))
        if X.is_degenerate(a) or Y.is_degenerate(b):
            continue
        add_to(out, (a, b), ONE)
    return out


def shuffle_words(degrees: Sequence[int]):
    """All words with letter i repeated degrees[i] times, with the shuffle sign."""
    total = sum(degrees)
    letters = [i for i, k in enumerate(degrees) for _ in range(k)]
    seen = set()
    for perm in _multiset_perms(letters):
        if perm in seen:
            continue
        seen.add(perm)
        inv = 0
        for a in range(total):
            for b in range(a + 1, total):
                if perm[a] > perm[b]:
                    inv += 1
        yield perm, (-1) ** inv


def _multiset_perms(letters):
    if not letters:
        yield ()
        return
    counts = {}
    for l in letters:
        counts[l] = counts.get(l, 0) + 1
    keys = sorted(counts)
    n = len(letters)

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1
    yield from rec([])


def ez(X: SimplicialView, Y: SimplicialView, x, y) -> Dict:
    """Eilenberg-Zilber shuffle map on x (x) y."""
    p, q = X.dim_of(x), Y.dim_of(y)
    out: Dict = {}
    for word, sign in shuffle_words([p, q]):
        a = X.staircase(x, [w == 0 for w in word])
        b = Y.staircase(y, [w == 1 for w in word])
        if X.degeneracy_indices(a) & Y.degeneracy_indices(b):
            continue
        add_to(out, (a, b), Fraction(sign))
    return out


def aw_map(X: SimplicialView, Y: SimplicialView, win: DegreeWindow) -> ChainMap:
    P = ProductView(X, Y)
    NP = normalized_chains(P, win)
    T = tensor(normalized_chains(X, win), normalized_chains(Y, win))
    images = {}
    top = T.known[1]
    for d, b in NP.basis.items():
        if top is not None and d > top:
            continue
        for s in b:
            images[s] = aw(X, Y, s)
    return map_from_images(NP, T, images, name="AW")


def ez_map(X: SimplicialView, Y: SimplicialView, win: DegreeWindow) -> ChainMap:
    P = ProductView(X, Y)
    NP = normalized_chains(P, win)
    T = tensor(normalized_chains(X, win), normalized_chains(Y, win))
    images = {}
    top = NP.known[1]
    for d, b in T.basis.items():
        if top is not None and d > top:
            continue
        for (x, y) in b:
            images[(x, y)] = ez(X, Y, x, y)
    return map_from_images(T, NP, images, name="EZ")


# ---------------------------------------------------------------- cup product

def cup(X: SimplicialView, a: Dict, b: Dict) -> Dict:
    """Cup product of hom-complex cochains via the Alexander-Whitney diagonal.

    (a u b)(x) = (-1)^{|a||b|} a(front) b(back), the sign coming from moving b
    past the front face (whose degree is -|a|).
    """
    av, bv = cochain_values(a), cochain_values(b)
    if not av or not bv:
        return {}
    pa = X.dim_of(next(iter(av)))
    pb = X.dim_of(next(iter(bv)))
    sign = -1 if (pa * pb) % 2 else 1
    out: Dict = {}
    for x in X.nondegenerate(pa + pb):
        v = 0
        front = X.sub(x, list(range(pa + 1)))
        back = X.sub(x, list(range(pa, pa + pb + 1)))
        if front in av and back in bv:
            v = av[front] * bv[back]
        if v:
            out[(x, KLABEL)] = sign * v
    return out
