"""Linear differential operators with coefficients in a coordinate ring.

An operator is a finite sum  sum_alpha A_alpha d^alpha  where A_alpha is an
``SMat`` of ring elements (or rationals) and alpha a multi-index.  It maps
vector-valued fields (lists of ring elements) of length ``shape[1]`` to
fields of length ``shape[0]``.
"""
from __future__ import annotations

from itertools import product
from math import comb

from .exact_arith import CoordinateRing
from .linalg import SMat


def _is_field_elem(v):
    return hasattr(v, "diff")


def deriv_entry(K: CoordinateRing, v, i):
    if _is_field_elem(v):
        return K.derivative(v, i)
    return 0


def deriv_smat(K: CoordinateRing, m: SMat, i) -> SMat:
    return m.map(lambda v: deriv_entry(K, v, i))


def deriv_field(K: CoordinateRing, f, alpha):
    out = list(f)
    for i, a in enumerate(alpha):
        for _ in range(a):
            out = [deriv_entry(K, v, i) if v else v for v in out]
    return out


def _sub_multi(alpha):
    return product(*(range(a + 1) for a in alpha))


class DiffOp:
    def __init__(self, K: CoordinateRing, shape, terms=None):
        self.K = K
        self.shape = tuple(shape)
        self.terms = {}
        for a, m in (terms or {}).items():
            if m.shape != self.shape:
                raise ValueError("coefficient shape mismatch")
            if not m.is_zero():
                self.terms[tuple(a)] = m

    @property
    def nvars(self):
        return self.K.nvars

    @classmethod
    def algebraic(cls, K, m: SMat):
        return cls(K, m.shape, {(0,) * K.nvars: m})

    @classmethod
    def identity(cls, K, n):
        return cls.algebraic(K, SMat.identity(n))

    def zero_index(self):
        return (0,) * self.nvars

    @property
    def order(self):
        return max((sum(a) for a in self.terms), default=-1)

    def order0(self) -> SMat:
        return self.terms.get(self.zero_index(), SMat(self.shape))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"DiffOp({self.shape[0]}x{self.shape[1]}, order={self.order}, terms={len(self.terms)})"

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        terms = dict(self.terms)
        for a, m in other.terms.items():
            terms[a] = terms[a] + m if a in terms else m
        return DiffOp(self.K, self.shape, terms)

    def __neg__(self):
        return DiffOp(self.K, self.shape, {a: -m for a, m in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, DiffOp) and (self - other).is_zero()

    def left(self, m: SMat) -> "DiffOp":
        """m composed after self (m constant or field-valued, no derivatives hit self)."""
        return DiffOp(self.K, (m.shape[0], self.shape[1]),
                      {a: m @ c for a, c in self.terms.items()})

    def right(self, m: SMat) -> "DiffOp":
        """self composed with multiplication by a *constant* matrix m."""
        return DiffOp(self.K, (self.shape[0], m.shape[1]),
                      {a: c @ m for a, c in self.terms.items()})

    def map_coeffs(self, fn) -> "DiffOp":
        return DiffOp(self.K, self.shape, {a: fn(c) for a, c in self.terms.items()})

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        """Composition self o other, by the Leibniz rule."""
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        K = self.K
        out = {}
        dcache = {}

        def dcoef(beta, gamma):
            key = (beta, gamma)
            if key not in dcache:
                m = other.terms[beta]
                for i, g in enumerate(gamma):
                    for _ in range(g):
                        m = deriv_smat(K, m, i)
                dcache[key] = m
            return dcache[key]

        for alpha, A in self.terms.items():
            for gamma in _sub_multi(alpha):
                c = 1
                for a, g in zip(alpha, gamma):
                    c *= comb(a, g)
                for beta in other.terms:
                    Bd = dcoef(beta, gamma)
                    if Bd.is_zero():
                        continue
                    prod = A @ Bd
                    if prod.is_zero():
                        continue
                    if c != 1:
                        prod = prod.scale(c)
                    idx = tuple(a - g + b for a, g, b in zip(alpha, gamma, beta))
                    out[idx] = out[idx] + prod if idx in out else prod
        return DiffOp(K, (self.shape[0], other.shape[1]), out)

    def apply(self, f):
        if len(f) != self.shape[1]:
            raise ValueError("field length mismatch")
        out = [0] * self.shape[0]
        for alpha, A in self.terms.items():
            g = deriv_field(self.K, f, alpha)
            if not any(g):
                continue
            for i, v in enumerate(A.apply(g)):
                if v:
                    out[i] = out[i] + v
        return [self.K.convert(v) if v else self.K.zero for v in out]

    def rows_where(self, keep) -> "DiffOp":
        return DiffOp(self.K, self.shape, {a: m.select_rows(keep) for a, m in self.terms.items()})

    def nonzero_rows(self):
        rows = set()
        for m in self.terms.values():
            rows.update(m.rows)
        return rows

    def max_coeff_degree(self):
        deg = 0
        for m in self.terms.values():
            for _, _, v in m.items():
                if hasattr(v, "numer"):
                    deg = max(deg, v.numer.degree(), v.denom.degree())
                elif hasattr(v, "degree"):
                    deg = max(deg, max((sum(e) for e in v.monoms()), default=0))
        return deg


def polynomial_test_family(K: CoordinateRing, dim: int, degree: int, components=None):
    """Fields e_i * x^beta for all monomials of total degree <= degree."""
    from itertools import combinations_with_replacement

    monos = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(K.nvars), d):
            m = K.one
            for i in combo:
                m = m * K.gens[i]
            monos.append(m)
    comps = range(dim) if components is None else components
    for i in comps:
        for mono in monos:
            f = [K.zero] * dim
            f[i] = mono
            yield f
