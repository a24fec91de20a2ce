"""Sparse matrices over any exact scalar ring, plus rank/nullspace over QQ.

``SMat`` entries may be rationals, polynomials or rational functions; they only
need ``+``, ``-``, ``*`` and truthiness-as-nonzero.  Rank computations are
delegated to sympy's ``DomainMatrix`` (fraction-free over ZZ/QQ via gmpy).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


class SMat:
    __slots__ = ("rows", "shape")

    def __init__(self, shape, rows=None):
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = rows if rows is not None else {}

    # construction
    @classmethod
    def from_entries(cls, shape, entries: Iterable[tuple]):
        m = cls(shape)
        for i, j, v in entries:
            m.add_at(i, j, v)
        return m

    @classmethod
    def identity(cls, n, one=None):
        one = QQ(1) if one is None else one
        return cls((n, n), {i: {i: one} for i in range(n)})

    @classmethod
    def from_dense(cls, dense, convert=QQ.convert):
        nr = len(dense)
        nc = len(dense[0]) if nr else 0
        rows = {}
        for i, r in enumerate(dense):
            d = {j: convert(v) for j, v in enumerate(r) if v}
            if d:
                rows[i] = d
        return cls((nr, nc), rows)

    @classmethod
    def column_stack(cls, nrows, columns):
        m = cls((nrows, len(columns)))
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    m.rows.setdefault(i, {})[j] = v
        return m

    def add_at(self, i, j, v):
        if not v:
            return
        r = self.rows.setdefault(i, {})
        w = r.get(j)
        w = v if w is None else w + v
        if w:
            r[j] = w
        else:
            del r[j]
            if not r:
                del self.rows[i]

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, 0)

    def items(self):
        for i, r in self.rows.items():
            for j, v in r.items():
                yield i, j, v

    @property
    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def is_zero(self):
        return not self.rows

    def __bool__(self):
        return bool(self.rows)

    def __eq__(self, other):
        if not isinstance(other, SMat):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def __repr__(self):
        return f"SMat({self.shape[0]}x{self.shape[1]}, nnz={self.nnz})"

    def copy(self):
        return SMat(self.shape, {i: dict(r) for i, r in self.rows.items()})

    def to_dense(self, zero=0):
        out = [[zero] * self.shape[1] for _ in range(self.shape[0])]
        for i, j, v in self.items():
            out[i][j] = v
        return out

    def column(self, j):
        return [self.rows[i][j] if i in self.rows and j in self.rows[i] else 0
                for i in range(self.shape[0])]

    # algebra
    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = self.copy()
        for i, j, v in other.items():
            out.add_at(i, j, v)
        return out

    def __neg__(self):
        return SMat(self.shape, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return SMat(self.shape)
        return self.map(lambda v: c * v)

    def map(self, fn: Callable):
        rows = {}
        for i, r in self.rows.items():
            d = {}
            for j, v in r.items():
                w = fn(v)
                if w:
                    d[j] = w
            if d:
                rows[i] = d
        return SMat(self.shape, rows)

    def __matmul__(self, other):
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    w = acc.get(j)
                    acc[j] = a * b if w is None else w + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                rows[i] = acc
        return SMat((self.shape[0], other.shape[1]), rows)

    def apply(self, vec):
        if len(vec) != self.shape[1]:
            raise ValueError("vector length mismatch")
        out = [0] * self.shape[0]
        for i, r in self.rows.items():
            s = 0
            for j, a in r.items():
                x = vec[j]
                if x:
                    s = s + a * x
            out[i] = s
        return out

    @property
    def T(self):
        m = SMat((self.shape[1], self.shape[0]))
        for i, j, v in self.items():
            m.rows.setdefault(j, {})[i] = v
        return m

    def select_rows(self, keep):
        """Zero every row whose index fails ``keep``."""
        return SMat(self.shape, {i: dict(r) for i, r in self.rows.items() if keep(i)})

    def select_cols(self, keep):
        rows = {}
        for i, r in self.rows.items():
            d = {j: v for j, v in r.items() if keep(j)}
            if d:
                rows[i] = d
        return SMat(self.shape, rows)

    def submatrix(self, row_idx, col_idx):
        rpos = {r: a for a, r in enumerate(row_idx)}
        cpos = {c: a for a, c in enumerate(col_idx)}
        m = SMat((len(row_idx), len(col_idx)))
        for i, j, v in self.items():
            if i in rpos and j in cpos:
                m.rows.setdefault(rpos[i], {})[cpos[j]] = v
        return m

    def embed(self, shape, row_idx, col_idx):
        m = SMat(shape)
        for i, j, v in self.items():
            m.rows.setdefault(row_idx[i], {})[col_idx[j]] = v
        return m

    # QQ-only helpers
    def to_dm(self) -> DomainMatrix:
        dod = {i: {j: QQ.convert(v) for j, v in r.items()} for i, r in self.rows.items()}
        return DomainMatrix.from_dod(dod, self.shape, QQ)


def from_dm(dm: DomainMatrix) -> SMat:
    dm = dm.convert_to(QQ)
    rows = {i: {j: v for j, v in r.items() if v} for i, r in dm.to_dod().items()}
    return SMat(dm.shape, {i: r for i, r in rows.items() if r})


def rank(m: SMat) -> int:
    if m.is_zero():
        return 0
    return m.to_dm().rank()


def nullspace(m: SMat) -> SMat:
    """Columns form a basis of the kernel (reduced echelon normalisation)."""
    n = m.shape[1]
    if m.is_zero():
        return SMat.identity(n)
    ns = m.to_dm().to_field().nullspace()
    return from_dm(ns).T if ns.shape[0] else SMat((n, 0))


def columnspace(m: SMat) -> SMat:
    """Basis of the column space in reduced form: columns of rref(M^T)^T."""
    if m.is_zero():
        return SMat((m.shape[0], 0))
    red, pivots = m.T.to_dm().to_field().rref()
    r = len(pivots)
    return from_dm(red[:r, :]).T


def solve(a: SMat, b: SMat) -> SMat:
    """Exact X with a X = b; a must have full column rank."""
    n = a.shape[1]
    aug = SMat((a.shape[0], n + b.shape[1]))
    for i, j, v in a.items():
        aug.rows.setdefault(i, {})[j] = v
    for i, j, v in b.items():
        aug.rows.setdefault(i, {})[n + j] = v
    red, pivots = aug.to_dm().to_field().rref()
    if pivots[:n] != tuple(range(n)) or any(p >= n for p in pivots):
        raise ValueError("system is singular or inconsistent")
    return from_dm(red[:n, n:])


def inverse(a: SMat) -> SMat:
    if a.shape[0] != a.shape[1]:
        raise ValueError("not square")
    return from_dm(a.to_dm().to_field().inv())


def hstack(*ms: SMat) -> SMat:
    nr = ms[0].shape[0]
    out = SMat((nr, sum(m.shape[1] for m in ms)))
    off = 0
    for m in ms:
        for i, j, v in m.items():
            out.rows.setdefault(i, {})[off + j] = v
        off += m.shape[1]
    return out


def rational_eigenvalues(m: SMat, tol_den: int = 10_000) -> dict:
    """Eigenvalue -> multiplicity for a diagonalisable matrix with rational spectrum.

    Floating-point eigenvalues only nominate candidates; each candidate is
    accepted by an exact nullity computation and the nullities must add up
    to the full dimension.
    """
    import numpy as np

    n = m.shape[0]
    if n == 0:
        return {}
    dense = np.array([[float(v) for v in row] for row in m.to_dense()], dtype=float)
    cands = set()
    for z in np.linalg.eigvals(dense):
        cands.add(Fraction(float(z.real)).limit_denominator(tol_den))
    out = {}
    total = 0
    for c in sorted(cands):
        lam = QQ(c.numerator, c.denominator)
        shifted = m - SMat.identity(n).scale(lam)
        k = n - rank(shifted)
        if k:
            out[lam] = k
            total += k
    if total != n:
        raise ArithmeticError("spectrum is not rational or matrix not diagonalisable")
    return out
