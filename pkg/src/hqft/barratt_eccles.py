"""The chain Barratt-Eccles operad and its coaction on normalized chains.

Permutations are one-line tuples on 1..n composed as (st)(i) = s(t(i)).
A permutation s is read as "input i sits at position s(i) of the product",
so the order in which inputs are multiplied is the inverse permutation read
as a sequence.  Elements of E(n) are dicts from (d+1)-tuples of
permutations to Fractions.

Coaction signs: an interval cut is signed by the Koszul sign of moving its
symbols into factor order, where each repeated piece contributes a "join"
symbol of degree 1 placed before all edge symbols.  Table reduction carries
the sign of the permutation pairing each caesura with the next occurrence
of its value.  Both are checked against the chain-map identities in the
tests.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .chain import ChainComplex, ChainMap, DegreeWindow, add_to, map_from_images, unit_complex
from .linalg import Mat
from .orthcat import perm_inv, perm_mul
from .simplicial import SimplicialView, shuffle_words

ONE = Fraction(1)
Perm = Tuple[int, ...]
BeTuple = Tuple[Perm, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def all_perms(n: int) -> List[Perm]:
    return list(itertools.permutations(range(1, n + 1)))


def perm_sign(seq: Sequence) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def perm_compose(sigma: Perm, taus: Sequence[Perm]) -> Perm:
    """Composition in the permutation operad.

    Input j of block i lands at offset_i + taus[i](j), where offset_i sums the
    arities of the blocks placed before block i by sigma.
    """
    ks = [len(t) for t in taus]
    n = len(sigma)
    offset = [sum(ks[l] for l in range(n) if sigma[l] < sigma[i]) for i in range(n)]
    out = []
    for i, t in enumerate(taus):
        for j in range(ks[i]):
            out.append(offset[i] + t[j])
    return tuple(out)


def block_sum(taus: Sequence[Perm]) -> Perm:
    return perm_compose(identity_perm(len(taus)), taus)


def block_permutation(sigma: Perm, ks: Sequence[int]) -> Perm:
    """sigma acting on blocks of sizes ks (ks listed in the permuted order)."""
    return perm_compose(sigma, [identity_perm(k) for k in ks])


# ---------------------------------------------------------------- basis and differential

def nondegenerate(t: Sequence) -> bool:
    return all(a != b for a, b in zip(t, t[1:]))


def be_dim(n: int, d: int) -> int:
    if n == 0:
        return 1 if d == 0 else 0
    f = factorial(n)
    return f * (f - 1) ** d


@lru_cache(maxsize=None)
def be_basis(n: int, d: int) -> Tuple[BeTuple, ...]:
    if n == 0:
        return (((),),) if d == 0 else ()
    P = all_perms(n)
    out = [(p,) for p in P]
    for _ in range(d):
        out = [t + (p,) for t in out for p in P if p != t[-1]]
    return tuple(out)


def be_arity(t: BeTuple) -> int:
    return len(t[0])


def be_degree(t: BeTuple) -> int:
    return len(t) - 1


def be_boundary(t: BeTuple) -> Dict[BeTuple, Fraction]:
    out: Dict = {}
    if len(t) == 1:
        return out
    for i in range(len(t)):
        u = t[:i] + t[i + 1:]
        if nondegenerate(u):
            add_to(out, u, ONE if i % 2 == 0 else -ONE)
    return out


def be_differential(x: Dict) -> Dict:
    out: Dict = {}
    for t, c in x.items():
        for u, v in be_boundary(t).items():
            add_to(out, u, c * v)
    return out


def be_right_action(x: Dict, sigma: Perm) -> Dict:
    return {tuple(perm_mul(w, sigma) for w in t): c for t, c in x.items()}


def be_complex(n: int, top: int) -> ChainComplex:
    """E(n) through degree ``top``; higher degrees are not generated."""
    if n == 0:
        return unit_complex(((),))
    basis = {d: be_basis(n, d) for d in range(top + 1)}
    basis = {d: b for d, b in basis.items() if b}
    exact = n == 1 or top < 0
    C = ChainComplex(basis, {}, known=(None, None) if exact else (None, top))
    diff = {}
    for d in range(1, top + 1):
        if not C.dim(d):
            continue
        ent = []
        for j, t in enumerate(basis[d]):
            for u, v in be_boundary(t).items():
                ent.append((C.index(u)[1], j, v))
        diff[d] = Mat.from_entries(C.dim(d - 1), C.dim(d), ent)
    return ChainComplex(basis, diff, known=C.known, name=f"E({n})")


def augmentation(n: int, top: int) -> ChainMap:
    E = be_complex(n, top)
    k = unit_complex()
    images = {t: {"1": ONE} for t in E.basis.get(0, ())}
    return map_from_images(E, k, images, name="augmentation")


def as_inclusion(n: int) -> Dict[Perm, BeTuple]:
    """Sigma_n as the degree-0 basis of E(n)."""
    return {p: (p,) for p in all_perms(n)} if n else {(): ((),)}


def unit_element() -> Dict:
    return {((1,),): ONE}


# ---------------------------------------------------------------- composition

def _compose_basis(t: BeTuple, ss: Sequence[BeTuple]) -> Dict:
    factors = [t] + list(ss)
    degs = [len(f) - 1 for f in factors]
    out: Dict = {}
    for word, sign in shuffle_words(degs):
        pos = [0] * len(factors)
        levels = [tuple(f[0] for f in factors)]
        for letter in word:
            pos[letter] += 1
            levels.append(tuple(f[p] for f, p in zip(factors, pos)))
        res = tuple(perm_compose(lv[0], lv[1:]) for lv in levels)
        if nondegenerate(res):
            add_to(out, res, Fraction(sign))
    return out


def be_compose(x: Dict, ys: Sequence[Dict], budget: DegreeWindow | None = None) -> Dict:
    """gamma(x; y_1, ..., y_n): shuffle product followed by levelwise composition."""
    out: Dict = {}
    for t, c in x.items():
        if len(t[0]) != len(ys):
            raise ValueError("arity mismatch in composition")
        for combo in itertools.product(*[list(y.items()) for y in ys]):
            coef = c
            ss = []
            for (s, v) in combo:
                coef *= v
                ss.append(s)
            deg = len(t) - 1 + sum(len(s) - 1 for s in ss)
            if budget is not None and not (budget.lo <= deg <= budget.hi):
                raise ValueError(f"composite degree {deg} outside budget")
            for r, v in _compose_basis(t, ss).items():
                add_to(out, r, coef * v)
    return out


def elem_degree(x: Dict) -> int:
    degs = {len(t) - 1 for t in x}
    if len(degs) > 1:
        raise ValueError("inhomogeneous element")
    return degs.pop() if degs else 0


# ---------------------------------------------------------------- certificates for large arities

def equality_patterns(length: int, max_values: int, adjacent_distinct: bool = True):
    """Restricted growth strings: value patterns of tuples up to relabeling."""
    def rec(prefix, m):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for v in range(min(m + 1, max_values)):
            if adjacent_distinct and prefix and prefix[-1] == v:
                continue
            prefix.append(v)
            yield from rec(prefix, max(m, v + 1))
            prefix.pop()
    yield from rec([], 0)


def d_squared_certificate(n: int, d: int) -> Tuple[bool, int]:
    """Check d o d = 0 on every degree-d basis tuple of E(n).

    The differential only looks at which entries coincide, so it commutes
    with renaming the permutations injectively.  One representative per
    equality pattern therefore covers the whole basis.  Returns (ok, number
    of representatives checked).
    """
    P = all_perms(n)
    count = 0
    for pat in equality_patterns(d + 1, len(P)):
        t = tuple(P[v] for v in pat)
        count += 1
        if be_differential(be_boundary(t)):
            return False, count
    return True, count


def _contraction(t: BeTuple, e: Perm) -> Dict:
    if t[0] == e:
        return {}
    return {(e,) + t: ONE}


def contraction_certificate(n: int, top: int) -> Tuple[bool, int]:
    """Verify d h + h d = id - (inclusion)(augmentation) on E(n) up to degree ``top``.

    h prepends the identity permutation.  Whether a tuple meets the identity
    or repeats entries is again a matter of equality patterns, now with one
    pattern value reserved for the identity, so the check runs on one
    representative per pattern.  Success shows E(n) has the homology of k
    in degree 0 in all degrees up to ``top``.
    """
    e = identity_perm(n)
    others = [p for p in all_perms(n) if p != e]
    count = 0
    for d in range(top + 1):
        for pat in equality_patterns(d + 1, len(others) + 1):
            blocks = max(pat) + 1
            for eb in [None] + list(range(blocks)):
                if blocks - (eb is not None) > len(others):
                    continue
                vals = {}
                nxt = 0
                for v in range(blocks):
                    if v == eb:
                        vals[v] = e
                    else:
                        vals[v] = others[nxt]
                        nxt += 1
                t = [vals[v] for v in pat]
                t = tuple(t)
                count += 1
                lhs: Dict = {}
                for u, v in be_differential(_contraction(t, e)).items():
                    add_to(lhs, u, v)
                for s, c in be_boundary(t).items():
                    for u, v in _contraction(s, e).items():
                        add_to(lhs, u, c * v)
                rhs = {t: ONE}
                if d == 0:
                    add_to(rhs, (e,), -ONE)
                if lhs != rhs:
                    return False, count
    return True, count


# ---------------------------------------------------------------- surjections

def surjections(r: int, d: int) -> List[Tuple[int, ...]]:
    if r == 0:
        return [()] if d == 0 else []
    out = []
    for s in itertools.product(range(1, r + 1), repeat=r + d):
        if len(set(s)) == r and nondegenerate(s):
            out.append(s)
    return out


def surjection_boundary(u: Sequence[int]) -> Dict:
    """Differential on surjections matching the interval-cut sign convention.

    Removing entry k kills exactly one join symbol: its own when the value
    occurred before, otherwise the one of the next occurrence of that value.
    With j the rank of the killed symbol among all join symbols, the sign is
    (-1)^j for first occurrences and -(-1)^j otherwise.
    """
    u = tuple(u)
    L = len(u)
    nonfirst = [k for k in range(L) if u[k] in u[:k]]
    out: Dict = {}
    for k in range(L):
        v = u[:k] + u[k + 1:]
        if len(set(v)) != len(set(u)) or not nondegenerate(v):
            continue
        if u[k] in u[:k]:
            killed, s = k, -1
        else:
            killed, s = next(j for j in range(k + 1, L) if u[j] == u[k]), 1
        j = nonfirst.index(killed)
        add_to(out, v, Fraction(s * (-1) ** j))
    return out


def surjection_differential(x: Dict) -> Dict:
    out: Dict = {}
    for u, c in x.items():
        for v, s in surjection_boundary(u).items():
            add_to(out, v, c * s)
    return out


# ---------------------------------------------------------------- table reduction

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(1, total - parts + 2):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


@lru_cache(maxsize=None)
def table_reduction_basis(t: BeTuple) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    r = len(t[0])
    d = len(t) - 1
    if r == 0:
        return (((), 1),)
    out: Dict = {}
    for comp in _compositions(r + d, d + 1):
        used = set()
        u: List[int] = []
        ends = []
        ok = True
        for i, w in enumerate(t):
            seq = [x for x in perm_inv(w) if x not in used]
            if i < d:
                if comp[i] > len(seq) or comp[i] < 1:
                    ok = False
                    break
                row = seq[:comp[i]]
                used.update(row[:-1])
                u.extend(row)
                ends.append(len(u) - 1)
            else:
                if comp[i] != len(seq):
                    ok = False
                    break
                u.extend(seq)
        if not ok or not nondegenerate(u):
            continue
        nxt = [next(j for j in range(e + 1, len(u)) if u[j] == u[e]) for e in ends]
        add_to(out, tuple(u), Fraction(perm_sign(nxt)))
    return tuple(sorted((k, int(v)) for k, v in out.items()))


def table_reduction(x: Dict) -> Dict:
    out: Dict = {}
    for t, c in x.items():
        for u, s in table_reduction_basis(t):
            add_to(out, u, c * s)
    return out


# ---------------------------------------------------------------- interval cuts

def _cuts(L: int, m: int):
    if L == 0:
        if m == 0:
            yield (0,)
        return
    for inner in itertools.combinations_with_replacement(range(m + 1), L - 1):
        yield (0,) + inner + (m,)


def interval_cut(X: SimplicialView, u: Sequence[int], s) -> Dict:
    """Interval-cut operation of the surjection u on the simplex s.

    Returns {(face_1, ..., face_r): coeff}; degenerate faces are dropped.
    """
    m = X.dim_of(s)
    L = len(u)
    r = max(u) if u else 0
    out: Dict = {}
    if r == 0:
        if m == 0:
            out[()] = ONE
        return out
    first = {}
    for k, v in enumerate(u):
        first.setdefault(v, k)
    for n in _cuts(L, m):
        idx: Dict[int, List[int]] = {i: [] for i in range(1, r + 1)}
        ok = True
        for k in range(L):
            lo, hi = n[k], n[k + 1]
            f = idx[u[k]]
            if f and f[-1] >= lo:
                ok = False
                break
            f.extend(range(lo, hi + 1))
        if not ok:
            continue
        faces = []
        for i in range(1, r + 1):
            fc = X.sub(s, idx[i])
            if X.is_degenerate(fc):
                ok = False
                break
            faces.append(fc)
        if not ok:
            continue
        # symbols: (piece, position in piece, factor); joins first, then edges
        joins, edges = [], []
        for k in range(L):
            lo, hi = n[k], n[k + 1]
            t = 0
            if first[u[k]] != k:
                joins.append((u[k], k, t))
                t += 1
            for _ in range(lo + 1, hi + 1):
                edges.append((u[k], k, t))
                t += 1
        orig = joins + edges
        target = sorted(orig)
        pos = {sym: i for i, sym in enumerate(target)}
        add_to(out, tuple(faces), Fraction(perm_sign([pos[sym] for sym in orig])))
    return out


def surjection_action(X: SimplicialView, x: Dict, s) -> Dict:
    out: Dict = {}
    for u, c in x.items():
        for k, v in interval_cut(X, u, s).items():
            add_to(out, k, c * v)
    return out


def coaction(X: SimplicialView, x: Dict, c: Dict) -> Dict:
    """E(n) (x) N(X) -> N(X)^{(x) n}: table reduction followed by interval cuts."""
    tr = table_reduction(x)
    out: Dict = {}
    for s, a in c.items():
        for k, v in surjection_action(X, tr, s).items():
            add_to(out, k, a * v)
    return out


def tensor_boundary(X: SimplicialView, elem: Dict) -> Dict:
    """Koszul differential on N(X)^{(x) r}, elements keyed by tuples of simplices."""
    out: Dict = {}
    for key, c in elem.items():
        before = 0
        for i, f in enumerate(key):
            s = -1 if before % 2 else 1
            for g, v in X.boundary(f).items():
                add_to(out, key[:i] + (g,) + key[i + 1:], c * v * s)
            before += X.dim_of(f)
    return out


def chain_boundary(X: SimplicialView, c: Dict) -> Dict:
    out: Dict = {}
    for s, a in c.items():
        for g, v in X.boundary(s).items():
            add_to(out, g, a * v)
    return out


def iterated_aw(X: SimplicialView, n: int, s) -> Dict:
    """(AW (x) id ... ) o AW, n-fold, on a single simplex."""
    m = X.dim_of(s)
    out: Dict = {}
    for cut in _cuts(n, m):
        faces = []
        ok = True
        for k in range(n):
            f = X.sub(s, list(range(cut[k], cut[k + 1] + 1)))
            if X.is_degenerate(f):
                ok = False
                break
            faces.append(f)
        if ok:
            add_to(out, tuple(faces), ONE)
    return out
