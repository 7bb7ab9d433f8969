"""Exact sparse matrices over Q and rank/kernel computations.

Matrices are stored row-wise as ``{row: {col: Fraction}}``.  Ranks use
fraction-free elimination on integer rows: a dense Bareiss pass when the
matrix is dense enough, otherwise a sparse pivoting loop that keeps rows
primitive by dividing out their content.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Tuple

DENSE_THRESHOLD = 0.25

Row = Dict[int, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Mat:
    """Sparse matrix with exact rational entries; shape is (nrows, ncols)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, object]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: Dict[int, Row] = {}
        if rows:
            for i, r in rows.items():
                rr = {j: _frac(v) for j, v in r.items() if v != 0}
                if rr:
                    self.rows[i] = rr

    # construction helpers
    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, data: List[List[object]], ncols: int | None = None):
        nr = len(data)
        nc = ncols if ncols is not None else (len(data[0]) if data else 0)
        return cls(nr, nc, {i: {j: v for j, v in enumerate(r) if v != 0} for i, r in enumerate(data)})

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable[Tuple[int, int, object]]):
        """Accumulate (i, j, value) triples; repeated positions are summed."""
        rows: Dict[int, Row] = {}
        for i, j, v in entries:
            if v == 0:
                continue
            r = rows.setdefault(i, {})
            r[j] = r.get(j, Fraction(0)) + _frac(v)
        m = cls(nrows, ncols)
        for i, r in rows.items():
            r = {j: v for j, v in r.items() if v != 0}
            if r:
                m.rows[i] = r
        return m

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in self.rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    # basic queries
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def get(self, i, j) -> Fraction:
        return self.rows.get(i, {}).get(j, Fraction(0))

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def column(self, j) -> Row:
        return {i: r[j] for i, r in self.rows.items() if j in r}

    def columns(self) -> Dict[int, Row]:
        cols: Dict[int, Row] = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                cols.setdefault(j, {})[i] = v
        return cols

    # arithmetic
    def T(self) -> "Mat":
        m = Mat(self.ncols, self.nrows)
        m.rows = self.columns()
        return m

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = Mat(self.nrows, other.ncols)
        orows = other.rows
        for i, r in self.rows.items():
            acc: Row = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                out.rows[i] = acc
        return out

    def _combine(self, other: "Mat", s) -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = Mat(self.nrows, self.ncols)
        out.rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            acc = out.rows.setdefault(i, {})
            for j, v in r.items():
                w = acc.get(j, 0) + s * v
                if w:
                    acc[j] = w
                else:
                    acc.pop(j, None)
            if not acc:
                del out.rows[i]
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "Mat":
        c = _frac(c)
        if c == 0:
            return Mat(self.nrows, self.ncols)
        out = Mat(self.nrows, self.ncols)
        out.rows = {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()}
        return out

    def __neg__(self):
        return self.scale(-1)

    def apply(self, vec: Mapping[int, Fraction]) -> Row:
        """Matrix times a sparse column vector given as {index: value}."""
        out: Row = {}
        for i, r in self.rows.items():
            s = Fraction(0)
            for j, v in r.items():
                x = vec.get(j)
                if x:
                    s += v * x
            if s:
                out[i] = s
        return out

    def select_rows(self, idx: List[int]) -> "Mat":
        out = Mat(len(idx), self.ncols)
        for new, old in enumerate(idx):
            if old in self.rows:
                out.rows[new] = dict(self.rows[old])
        return out

    def select_cols(self, idx: List[int]) -> "Mat":
        pos = {old: new for new, old in enumerate(idx)}
        out = Mat(self.nrows, len(idx))
        for i, r in self.rows.items():
            rr = {pos[j]: v for j, v in r.items() if j in pos}
            if rr:
                out.rows[i] = rr
        return out


def hstack(mats: List[Mat], nrows: int | None = None) -> Mat:
    nr = mats[0].nrows if mats else (nrows or 0)
    out = Mat(nr, sum(m.ncols for m in mats))
    off = 0
    for m in mats:
        if m.nrows != nr:
            raise ValueError("hstack row mismatch")
        for i, r in m.rows.items():
            out.rows.setdefault(i, {}).update({j + off: v for j, v in r.items()})
        off += m.ncols
    return out


def vstack(mats: List[Mat], ncols: int | None = None) -> Mat:
    nc = mats[0].ncols if mats else (ncols or 0)
    out = Mat(sum(m.nrows for m in mats), nc)
    off = 0
    for m in mats:
        if m.ncols != nc:
            raise ValueError("vstack column mismatch")
        for i, r in m.rows.items():
            out.rows[i + off] = dict(r)
        off += m.nrows
    return out


def block_diag(mats: List[Mat]) -> Mat:
    out = Mat(sum(m.nrows for m in mats), sum(m.ncols for m in mats))
    ro = co = 0
    for m in mats:
        for i, r in m.rows.items():
            out.rows[i + ro] = {j + co: v for j, v in r.items()}
        ro += m.nrows
        co += m.ncols
    return out


# ---------------------------------------------------------------- ranks

def _integer_rows(m: Mat) -> List[Dict[int, int]]:
    """Scale each row to a primitive integer row."""
    out = []
    for r in m.rows.values():
        den = 1
        for v in r.values():
            den = lcm(den, v.denominator)
        ir = {j: int(v * den) for j, v in r.items()}
        g = 0
        for v in ir.values():
            g = gcd(g, v)
        if g > 1:
            ir = {j: v // g for j, v in ir.items()}
        out.append(ir)
    return out


def _bareiss_rank(rows: List[List[int]], ncols: int) -> int:
    a = [list(r) for r in rows]
    n = len(a)
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = None
        for i in range(rank, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, n):
            ai = a[i]
            f = ai[col]
            ar = a[rank]
            for j in range(col + 1, ncols):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[col] = 0
        prev = p
        rank += 1
        if rank == n:
            break
    return rank


def _sparse_rank(rows: List[Dict[int, int]]) -> int:
    """Fraction-free sparse elimination; pivots chosen by shortest row."""
    pivots: Dict[int, Dict[int, int]] = {}
    rank = 0
    for r in sorted(rows, key=len):
        r = dict(r)
        while r:
            col = min(r)
            p = pivots.get(col)
            if p is None:
                g = 0
                for v in r.values():
                    g = gcd(g, v)
                if g > 1:
                    r = {j: v // g for j, v in r.items()}
                pivots[col] = r
                rank += 1
                break
            a, b = p[col], r[col]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {j: ma * v for j, v in r.items()}
            for j, v in p.items():
                w = new.get(j, 0) - mb * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            r = new
    return rank


def rank(m: Mat, threshold: float = DENSE_THRESHOLD) -> int:
    if m.is_zero():
        return 0
    rows = _integer_rows(m)
    nr, nc = len(rows), m.ncols
    density = m.nnz() / float(nr * nc)
    if density >= threshold and nr * nc <= 250000:
        if nr > nc:
            # eliminate along the shorter side
            dense = [[0] * nr for _ in range(nc)]
            for i, r in enumerate(rows):
                for j, v in r.items():
                    dense[j][i] = v
            return _bareiss_rank(dense, nr)
        dense = [[0] * nc for _ in range(nr)]
        for i, r in enumerate(rows):
            for j, v in r.items():
                dense[i][j] = v
        return _bareiss_rank(dense, nc)
    return _sparse_rank(rows)


def rref(m: Mat) -> Tuple[Dict[int, Row], List[int]]:
    """Reduced row echelon form over Q.

    Returns (pivot_rows, pivot_cols) where pivot_rows maps a pivot column
    to its normalized row (pivot entry 1, zero in other pivot columns).
    """
    piv: Dict[int, Row] = {}
    for r in m.rows.values():
        r = dict(r)
        # reduce against existing pivots
        for c in sorted(set(r) & set(piv)):
            if c not in r:
                continue
            f = r[c]
            for j, v in piv[c].items():
                w = r.get(j, 0) - f * v
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
        # any remaining entries in pivot columns came from fill-in; loop
        while True:
            hit = [c for c in r if c in piv]
            if not hit:
                break
            c = hit[0]
            f = r[c]
            for j, v in piv[c].items():
                w = r.get(j, 0) - f * v
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
        if not r:
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {j: v * inv for j, v in r.items()}
        # back-substitute into older pivot rows
        for pc, pr in piv.items():
            f = pr.get(c)
            if f:
                for j, v in r.items():
                    w = pr.get(j, 0) - f * v
                    if w:
                        pr[j] = w
                    else:
                        pr.pop(j, None)
        piv[c] = r
    cols = sorted(piv)
    return piv, cols


def kernel_basis(m: Mat) -> List[Row]:
    """Basis of the right kernel {x : m x = 0}, one sparse vector per free column.

    The vector for free column f has entry 1 at f and zero at every other
    free column, so kernel coordinates are read off at the free columns.
    """
    piv, cols = rref(m)
    pivset = set(cols)
    free = [j for j in range(m.ncols) if j not in pivset]
    # column view of the pivot rows restricted to free columns
    by_free: Dict[int, List[Tuple[int, Fraction]]] = {}
    for pc, r in piv.items():
        for j, v in r.items():
            if j != pc:
                by_free.setdefault(j, []).append((pc, v))
    out = []
    for f in free:
        vec: Row = {f: Fraction(1)}
        for pc, v in by_free.get(f, []):
            vec[pc] = -v
        out.append(vec)
    return out


def free_columns(m: Mat) -> List[int]:
    _, cols = rref(m)
    s = set(cols)
    return [j for j in range(m.ncols) if j not in s]


def solve(m: Mat, b: Row) -> Row | None:
    """Some x with m x = b, or None when b is not in the column span."""
    aug = hstack([m, Mat(m.nrows, 1, {i: {0: v} for i, v in b.items()})])
    piv, cols = rref(aug)
    if m.ncols in cols:
        return None
    x: Row = {}
    for pc, r in piv.items():
        v = r.get(m.ncols)
        if v:
            x[pc] = v
    return x


def columns_to_mat(vectors: List[Mapping[int, Fraction]], nrows: int) -> Mat:
    """Matrix whose j-th column is vectors[j]."""
    return Mat.from_entries(nrows, len(vectors), ((i, j, v) for j, vec in enumerate(vectors) for i, v in vec.items()))
