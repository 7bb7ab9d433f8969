"""Chain complexes over Q with labeled bases, and their monoidal structure.

A complex stores, for each degree, an ordered tuple of basis labels and the
differential d_n : C_n -> C_{n-1} as a ``Mat`` of shape (dim C_{n-1}, dim C_n).
Labels are unique across all degrees, so an element can be written as a
sparse dict ``{label: Fraction}``.

Complexes coming from nerves are unbounded, so only part of them is ever
built.  ``known = (lo, hi)`` records which degrees are actually present;
``None`` means unbounded in that direction (everything there is stored, so
degrees without data really are zero).  The differential d_n is reliable
for lo < n <= hi, and homology at n is trusted when lo < n < hi.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Tuple

from .linalg import Mat, block_diag, hstack, rank

Label = Hashable
Elem = Dict[Label, Fraction]


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def interior(self, n: int) -> bool:
        return self.lo < n < self.hi


@dataclass
class GradedDims:
    """Degree -> rank, with a trust flag per degree."""
    dims: Dict[int, int] = field(default_factory=dict)
    trusted: Dict[int, bool] = field(default_factory=dict)

    def __getitem__(self, n):
        return self.dims.get(n, 0)

    def trusted_items(self):
        return [(n, self.dims[n]) for n in sorted(self.dims) if self.trusted.get(n)]

    def as_rows(self):
        return [(n, self.dims[n], bool(self.trusted.get(n))) for n in sorted(self.dims)]


def _lt(a, b):
    """a < b where None stands for -inf in the first slot."""
    return a is None or a < b


class ChainComplex:
    def __init__(self, basis: Mapping[int, Iterable[Label]], diff: Mapping[int, Mat] | None = None,
                 known: Tuple[Optional[int], Optional[int]] = (None, None), name: str = ""):
        self.basis: Dict[int, Tuple[Label, ...]] = {n: tuple(b) for n, b in basis.items() if len(tuple(b))}
        self.known = known
        self.name = name
        self._index: Dict[Label, Tuple[int, int]] = {}
        for n, b in self.basis.items():
            for i, lab in enumerate(b):
                if lab in self._index:
                    raise ValueError(f"duplicate basis label {lab!r}")
                self._index[lab] = (n, i)
        self.diff: Dict[int, Mat] = {}
        for n, m in (diff or {}).items():
            if m.shape != (self.dim(n - 1), self.dim(n)):
                raise ValueError(f"d_{n} has shape {m.shape}, expected {(self.dim(n - 1), self.dim(n))}")
            if not m.is_zero():
                self.diff[n] = m

    # ------------------------------------------------------------ queries
    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def dims(self) -> Dict[int, int]:
        return {n: len(b) for n, b in sorted(self.basis.items())}

    def support(self) -> List[int]:
        return sorted(self.basis)

    def d(self, n: int) -> Mat:
        m = self.diff.get(n)
        return m if m is not None else Mat(self.dim(n - 1), self.dim(n))

    def is_exact(self) -> bool:
        return self.known == (None, None)

    def knows(self, n: int) -> bool:
        lo, hi = self.known
        return (lo is None or n >= lo) and (hi is None or n <= hi)

    def d_known(self, n: int) -> bool:
        lo, hi = self.known
        return (lo is None or n > lo) and (hi is None or n <= hi)

    def index(self, label) -> Tuple[int, int]:
        return self._index[label]

    def degree_of(self, label) -> int:
        return self._index[label][0]

    def __contains__(self, label):
        return label in self._index

    def __repr__(self):
        return f"ChainComplex({self.name or ''} dims={self.dims()}, known={self.known})"

    # ------------------------------------------------------------ elements
    def vec(self, elem: Mapping[Label, Fraction], n: int) -> Dict[int, Fraction]:
        out = {}
        for lab, c in elem.items():
            if c:
                m, i = self._index[lab]
                if m != n:
                    raise ValueError(f"label {lab!r} lives in degree {m}, not {n}")
                out[i] = Fraction(c)
        return out

    def elem(self, vec: Mapping[int, Fraction], n: int) -> Elem:
        b = self.basis.get(n, ())
        return {b[i]: v for i, v in vec.items() if v}

    def apply_d(self, elem: Mapping[Label, Fraction]) -> Elem:
        out: Elem = {}
        for lab, c in elem.items():
            n, i = self._index[lab]
            col = self.d(n).column(i)
            tb = self.basis.get(n - 1, ())
            for j, v in col.items():
                add_to(out, tb[j], c * v)
        return out

    # ------------------------------------------------------------ checks
    def check(self) -> List[str]:
        """Return violations of d o d = 0 inside the known range."""
        bad = []
        for n in sorted(set(self.diff) | {k + 1 for k in self.diff}):
            if not (self.d_known(n) and self.d_known(n - 1)):
                continue
            if not (self.d(n - 1) @ self.d(n)).is_zero():
                bad.append(f"d_{n - 1} d_{n} != 0")
        return bad

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(b) for n, b in self.basis.items())


def add_to(acc: Dict, key, val):
    if not val:
        return
    w = acc.get(key, 0) + val
    if w:
        acc[key] = w
    else:
        acc.pop(key, None)


def combine(*terms: Tuple[Fraction, Mapping]) -> Dict:
    out: Dict = {}
    for c, e in terms:
        for k, v in e.items():
            add_to(out, k, c * v)
    return out


def unit_complex(label="1", degree: int = 0) -> ChainComplex:
    """The ground field placed in a single degree."""
    return ChainComplex({degree: [label]}, {}, name="k")


def zero_complex() -> ChainComplex:
    return ChainComplex({}, {}, name="0")


def from_dims(dims: Mapping[int, int], diffs: Mapping[int, object] | None = None, prefix="e") -> ChainComplex:
    """Small complexes from dimensions and dense differential matrices."""
    basis = {n: [(prefix, n, i) for i in range(k)] for n, k in dims.items()}
    d = {}
    for n, m in (diffs or {}).items():
        d[n] = m if isinstance(m, Mat) else Mat.from_dense(m, ncols=dims.get(n, 0))
        if d[n].nrows != dims.get(n - 1, 0):
            d[n] = Mat(dims.get(n - 1, 0), dims.get(n, 0), d[n].rows)
    return ChainComplex(basis, d)


# ================================================================ maps

class ChainMap:
    def __init__(self, source: ChainComplex, target: ChainComplex, mats: Mapping[int, Mat], degree: int = 0,
                 name: str = ""):
        self.source = source
        self.target = target
        self.degree = degree
        self.name = name
        self.mats: Dict[int, Mat] = {}
        for n, m in mats.items():
            if m.shape != (target.dim(n + degree), source.dim(n)):
                raise ValueError(f"map in degree {n} has shape {m.shape}")
            if not m.is_zero():
                self.mats[n] = m

    def at(self, n: int) -> Mat:
        m = self.mats.get(n)
        return m if m is not None else Mat(self.target.dim(n + self.degree), self.source.dim(n))

    def apply(self, elem: Mapping[Label, Fraction]) -> Elem:
        out: Elem = {}
        for lab, c in elem.items():
            n, i = self.source.index(lab)
            tb = self.target.basis.get(n + self.degree, ())
            for j, v in self.at(n).column(i).items():
                add_to(out, tb[j], c * v)
        return out

    def degrees(self):
        return sorted(set(self.source.basis) | {n - self.degree for n in self.target.basis})

    def check(self) -> List[int]:
        """Degrees where d f != (-1)^deg f d, within the known ranges."""
        bad = []
        s = (-1) ** self.degree
        for n in self.degrees():
            if not (self.source.d_known(n) and self.target.d_known(n + self.degree)):
                continue
            lhs = self.target.d(n + self.degree) @ self.at(n)
            rhs = self.at(n - 1) @ self.source.d(n)
            if not (lhs - rhs.scale(s)).is_zero():
                bad.append(n)
        return bad

    def is_chain_map(self) -> bool:
        return not self.check()

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        mats = {n: self.at(n + other.degree) @ other.at(n) for n in other.source.basis}
        return ChainMap(other.source, self.target, mats, self.degree + other.degree)


def identity_map(V: ChainComplex) -> ChainMap:
    return ChainMap(V, V, {n: Mat.identity(V.dim(n)) for n in V.basis}, name="id")


def map_from_images(source: ChainComplex, target: ChainComplex, images: Mapping[Label, Mapping], degree: int = 0,
                    name: str = "") -> ChainMap:
    """Build a map from the images of basis labels (missing labels go to 0)."""
    entries: Dict[int, List] = {}
    for lab, img in images.items():
        n, i = source.index(lab)
        for tl, v in img.items():
            m, j = target.index(tl)
            if m != n + degree:
                raise ValueError(f"image of {lab!r} has wrong degree")
            entries.setdefault(n, []).append((j, i, v))
    mats = {n: Mat.from_entries(target.dim(n + degree), source.dim(n), e) for n, e in entries.items()}
    return ChainMap(source, target, mats, degree, name=name)


# ================================================================ constructions

def _support_bounds(V: ChainComplex):
    s = V.support()
    return (s[0], s[-1]) if s else (0, -1)


def _tensor_known(V: ChainComplex, W: ChainComplex):
    if V.is_exact() and W.is_exact():
        return (None, None)
    (va, vb), (wa, wb) = _support_bounds(V), _support_bounds(W)
    his, los = [], []
    for X, (xa, xb), Y, (ya, yb) in ((V, (va, vb), W, (wa, wb)), (W, (wa, wb), V, (va, vb))):
        lo, hi = X.known
        if hi is not None:
            # need the other factor bounded below by something genuinely known
            if Y.known[0] is not None:
                raise ValueError("tensor of complexes truncated on opposite sides")
            his.append(hi + (ya if Y.dims() else 0))
        if lo is not None:
            if Y.known[1] is not None:
                raise ValueError("tensor of complexes truncated on opposite sides")
            los.append(lo + (yb if Y.dims() else 0))
    return (max(los) if los else None, min(his) if his else None)


def tensor(V: ChainComplex, W: ChainComplex) -> ChainComplex:
    """V (x) W with d(v w) = dv w + (-1)^|v| v dw; left-factor-major bases."""
    basis: Dict[int, List] = {}
    blocks: Dict[int, List[Tuple[int, int]]] = {}
    for m in V.support():
        for q in W.support():
            n = m + q
            blocks.setdefault(n, []).append((m, q))
    offsets: Dict[Tuple[int, int], int] = {}
    for n in sorted(blocks):
        off = 0
        lst = []
        for m, q in sorted(blocks[n]):
            offsets[(m, q)] = off
            for v in V.basis[m]:
                for w in W.basis[q]:
                    lst.append((v, w))
            off += V.dim(m) * W.dim(q)
        basis[n] = lst
    diff = {}
    for n in sorted(blocks):
        ent = []
        for m, q in blocks[n]:
            src_off = offsets[(m, q)]
            dw_q = W.dim(q)
            # dv (x) w
            if (m - 1, q) in offsets:
                toff = offsets[(m - 1, q)]
                for i, r in V.d(m).rows.items():
                    for j, val in r.items():
                        for k in range(dw_q):
                            ent.append((toff + i * dw_q + k, src_off + j * dw_q + k, val))
            # (-1)^m v (x) dw
            if (m, q - 1) in offsets:
                toff = offsets[(m, q - 1)]
                s = -1 if m % 2 else 1
                dwm = W.d(q)
                t_q = W.dim(q - 1)
                for vi in range(V.dim(m)):
                    for i, r in dwm.rows.items():
                        for j, val in r.items():
                            ent.append((toff + vi * t_q + i, src_off + vi * dw_q + j, s * val))
        if ent:
            diff[n] = Mat.from_entries(len(basis.get(n - 1, ())), len(basis[n]), ent)
    return ChainComplex(basis, diff, known=_tensor_known(V, W), name=f"{V.name}*{W.name}")


def tensor_labels(*labels):
    """Nested pair label for an iterated left-associated tensor product."""
    out = labels[0]
    for lab in labels[1:]:
        out = (out, lab)
    return out


def direct_sum(V: ChainComplex, W: ChainComplex) -> ChainComplex:
    basis = {}
    diff = {}
    for n in sorted(set(V.basis) | set(W.basis)):
        basis[n] = [(0, v) for v in V.basis.get(n, ())] + [(1, w) for w in W.basis.get(n, ())]
    for n in basis:
        dv, dw = V.d(n), W.d(n)
        if not (dv.is_zero() and dw.is_zero()):
            diff[n] = block_diag([dv, dw])
    lo = [k for k in (V.known[0], W.known[0]) if k is not None]
    hi = [k for k in (V.known[1], W.known[1]) if k is not None]
    return ChainComplex(basis, diff, known=(max(lo) if lo else None, min(hi) if hi else None),
                        name=f"{V.name}+{W.name}")


def shift(V: ChainComplex, p: int) -> ChainComplex:
    """V[p]_n = V_{n-p}, differential multiplied by (-1)^p."""
    s = -1 if p % 2 else 1
    basis = {n + p: b for n, b in V.basis.items()}
    diff = {n + p: m.scale(s) for n, m in V.diff.items()}
    lo, hi = V.known
    known = (None if lo is None else lo + p, None if hi is None else hi + p)
    return ChainComplex(basis, diff, known=known, name=f"{V.name}[{p}]")


def internal_hom(V: ChainComplex, W: ChainComplex, win: DegreeWindow) -> ChainComplex:
    """[V, W] restricted to the degrees of ``win``.

    Basis label (v, w) is the map sending v to w and the other basis vectors
    of V to zero; it has degree |w| - |v|.  The differential is
    d(L) = d_W L - (-1)^n L d_V on degree-n maps.
    """
    if not W.is_exact():
        raise ValueError("internal_hom needs a target with completely known finite support")
    wsup = W.support()
    if not wsup:
        return ChainComplex({}, {}, known=(win.lo, win.hi), name="0")
    a, b = wsup[0], wsup[-1]
    vlo, vhi = V.known
    lo, hi = win.lo, win.hi
    # [V,W]_n needs V_m for a-n <= m <= b-n
    if vhi is not None:
        lo = max(lo, b - vhi)
    if vlo is not None:
        hi = min(hi, a - vlo)
    if lo > hi:
        raise ValueError("window lies outside the range where the hom complex is known")
    basis: Dict[int, List] = {}
    for n in range(lo, hi + 1):
        lst = []
        for m in range(a - n, b - n + 1):
            for v in V.basis.get(m, ()):
                for w in W.basis.get(n + m, ()):
                    lst.append((v, w))
        if lst:
            basis[n] = lst
    H = ChainComplex(basis, {}, known=(lo, hi), name=f"[{V.name},{W.name}]")
    diff = {}
    for n in range(lo + 1, hi + 1):
        src = basis.get(n, ())
        if not src or not H.dim(n - 1):
            continue
        ent = []
        s = -1 if n % 2 else 1
        for j, (v, w) in enumerate(src):
            mv, iv = V.index(v)
            mw, iw = W.index(w)
            # d_W o e_{(v,w)} = sum_{w'} dW[w', w] e_{(v, w')}
            tb = W.basis.get(mw - 1, ())
            for iw2, val in W.d(mw).column(iw).items():
                ent.append((H.index((v, tb[iw2]))[1], j, val))
            # e_{(v,w)} o d_V = sum_{v'} dV[v, v'] e_{(v', w)}, where v' has degree mv+1
            row = V.d(mv + 1).rows.get(iv, {})
            vb = V.basis.get(mv + 1, ())
            for iv2, val in row.items():
                ent.append((H.index((vb[iv2], w))[1], j, -s * val))
        diff[n] = Mat.from_entries(H.dim(n - 1), H.dim(n), ent)
    # beyond the range where V can contribute, [V,W] vanishes and is known exactly
    vsup = V.support()
    klo = None if vhi is None and (not vsup or lo <= a - vsup[-1]) else lo
    khi = None if vlo is None and (not vsup or hi >= b - vsup[0]) else hi
    return ChainComplex(basis, diff, known=(klo, khi), name=H.name)


def evaluation(V: ChainComplex, W: ChainComplex, win: DegreeWindow) -> ChainMap:
    """ev : [V,W] (x) V -> W, ev(L (x) v) = L(v)."""
    H = internal_hom(V, W, win)
    T = tensor(H, V)
    images = {}
    for n, b in T.basis.items():
        for lab in b:
            (v, w), x = lab
            if v == x:
                images[lab] = {w: Fraction(1)}
    # truncate the map to degrees of W that exist
    return map_from_images(T, W, images, name="ev")


def braiding(V: ChainComplex, W: ChainComplex) -> ChainMap:
    """tau(v (x) w) = (-1)^{|v||w|} w (x) v."""
    A, B = tensor(V, W), tensor(W, V)
    images = {}
    for n, b in A.basis.items():
        for (v, w) in b:
            s = -1 if (V.degree_of(v) * W.degree_of(w)) % 2 else 1
            images[(v, w)] = {(w, v): Fraction(s)}
    return map_from_images(A, B, images, name="braiding")


# ================================================================ homology

def homology(V: ChainComplex, win: DegreeWindow | None = None) -> GradedDims:
    if win is None:
        s = V.support()
        if not s:
            return GradedDims()
        win = DegreeWindow(s[0], s[-1])
    out = GradedDims()
    for n in win.degrees():
        dn = rank(V.d(n)) if V.dim(n) and V.dim(n - 1) else 0
        dn1 = rank(V.d(n + 1)) if V.dim(n + 1) and V.dim(n) else 0
        out.dims[n] = V.dim(n) - dn - dn1
        out.trusted[n] = V.d_known(n) and V.d_known(n + 1)
    return out


def cycles_boundaries(V: ChainComplex, n: int):
    from .linalg import kernel_basis
    Z = kernel_basis(V.d(n)) if V.dim(n) else []
    if not V.dim(n - 1):
        Z = [{i: Fraction(1)} for i in range(V.dim(n))]
    B = V.d(n + 1)
    return Z, B


@dataclass
class Decision:
    ok: bool
    witness: object = None
    notes: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def induced_rank(f: ChainMap, n: int) -> int:
    """Rank of H_n(f): rank[f Z_n | B_n W] - rank B_n W."""
    from .linalg import columns_to_mat
    V, W = f.source, f.target
    Z, _ = cycles_boundaries(V, n)
    if not Z:
        return 0
    fm = f.at(n)
    imgs = [fm.apply(z) for z in Z]
    FZ = columns_to_mat(imgs, W.dim(n + f.degree))
    BW = W.d(n + f.degree + 1)
    return rank(hstack([FZ, BW])) - rank(BW)


def is_quasi_iso(f: ChainMap, win: DegreeWindow) -> Decision:
    hv = homology(f.source, win)
    hw = homology(f.target, win)
    checked = []
    for n in win.degrees():
        if not (hv.trusted[n] and hw.trusted[n]):
            continue
        checked.append(n)
        a, b = hv[n], hw[n]
        r = induced_rank(f, n) if a else 0
        if not (a == b == r):
            return Decision(False, {"degree": n, "dim_source": a, "dim_target": b, "rank": r,
                                    "defect": max(a, b) - r})
    return Decision(True, notes=[f"checked degrees {checked}"])


def is_fibration(f: ChainMap) -> Decision:
    for n in sorted(set(f.target.basis)):
        m = f.at(n - f.degree)
        if rank(m) != f.target.dim(n):
            return Decision(False, {"degree": n, "rank": rank(m), "target_dim": f.target.dim(n)})
    return Decision(True)
