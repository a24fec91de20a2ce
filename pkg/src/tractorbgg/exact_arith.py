"""Exact scalars: rationals and polynomials / rational functions over QQ.

Thin layer over sympy's sparse polynomial rings (``PolyElement``) and
fraction fields (``FracElement``).  Both carry canonical forms, so equality
tests are exact and ``not f`` means ``f == 0``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.fields import FracElement, field
from sympy.polys.rings import PolyElement, ring

Rational = type(QQ(1))
Poly = PolyElement
RationalFunction = FracElement


class PoleError(ArithmeticError):
    """Evaluation of a rational function at a zero of its denominator."""


def rational(x) -> Rational:
    """Coerce ints, Fractions, mpq and "p/q" strings to an exact rational."""
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            if int(q) == 0:
                raise ZeroDivisionError(f"zero denominator in {x!r}")
            return QQ(int(p), int(q))
        return QQ(int(s))
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact mode")
    return QQ.convert(x)


def format_rational(x) -> str:
    x = QQ.convert(x)
    p, q = int(QQ.numer(x)), int(QQ.denom(x))
    return str(p) if q == 1 else f"{p}/{q}"


class CoordinateRing:
    """Coordinate functions on a patch: QQ[x_1..x_n], or its fraction field.

    All fields of one patch live in a single instance so arithmetic never
    needs cross-ring conversion.
    """

    def __init__(self, nvars: int, rational_functions: bool = False, prefix: str = "x"):
        if nvars < 1:
            raise ValueError("need at least one coordinate")
        self.nvars = nvars
        self.rational_functions = rational_functions
        names = ",".join(f"{prefix}{i + 1}" for i in range(nvars))
        self.poly_ring = ring(names, QQ)[0]
        if rational_functions:
            self.domain = field(names, QQ)[0]
        else:
            self.domain = self.poly_ring
        self.gens = tuple(self.domain.gens)
        self.zero = self.domain.zero
        self.one = self.domain.one

    def __repr__(self):
        kind = "QQ(x)" if self.rational_functions else "QQ[x]"
        return f"CoordinateRing({self.nvars}, {kind})"

    def __call__(self, x):
        return self.convert(x)

    def convert(self, x):
        if isinstance(x, (PolyElement, FracElement)):
            if self.rational_functions:
                if isinstance(x, PolyElement):
                    return self.domain.field_new(self.domain.ring.from_dict(dict(x)))
                return x if x.field == self.domain else self.domain.field_new(x)
            if isinstance(x, FracElement):
                if x.denom != 1 and not (x.denom.is_ground):
                    raise ValueError("rational function in a polynomial ring")
                return self.domain.from_dict(dict(x.numer)) * QQ.convert(1 / x.denom.LC)
            return x if x.ring == self.domain else self.domain.from_dict(dict(x))
        return self.domain(rational(x))

    def to_field(self) -> "CoordinateRing":
        if self.rational_functions:
            return self
        return CoordinateRing(self.nvars, True)

    def poly(self, terms: Iterable[tuple]) -> Poly:
        """Build a polynomial from (coeff, exponents) pairs."""
        d = {}
        for coeff, exps in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps}")
            d[exps] = d.get(exps, QQ(0)) + rational(coeff)
        return self.convert(self.poly_ring.from_dict({k: v for k, v in d.items() if v}))

    def derivative(self, f, var: int):
        if not 0 <= var < self.nvars:
            raise IndexError(var)
        if not isinstance(f, (PolyElement, FracElement)):
            return self.zero
        return f.diff(self.gens[var])

    def evaluate(self, f, point: Sequence) -> Rational:
        return rf_eval(f, point)


def _poly_eval(p: PolyElement, point) -> Rational:
    if len(point) != p.ring.ngens:
        raise ValueError("point has wrong dimension")
    return QQ.convert(p.evaluate(list(zip(p.ring.gens, [rational(c) for c in point]))))


def rf_arith(a, b, op: str):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by the zero rational function")
        if isinstance(a, PolyElement):
            a = field(a.ring.symbols, QQ)[0].field_new(a)
        return a / b
    raise ValueError(f"unknown op {op!r}")


def rf_derivative(f, var: int):
    gens = (f.field if isinstance(f, FracElement) else f.ring).gens
    if not 0 <= var < len(gens):
        raise IndexError(var)
    return f.diff(gens[var])


def rf_eval(f, point: Sequence) -> Rational:
    if isinstance(f, FracElement):
        den = _poly_eval(f.denom, point)
        if not den:
            raise PoleError(f"denominator vanishes at {list(point)}")
        return _poly_eval(f.numer, point) / den
    if isinstance(f, PolyElement):
        return _poly_eval(f, point)
    return rational(f)


def poly_to_terms(p: PolyElement) -> list:
    return [[format_rational(c), list(m)] for m, c in sorted(p.terms())]


def to_json(f):
    """Sparse JSON form: a term list, or {"num": .., "den": ..}."""
    if isinstance(f, FracElement):
        if f.denom == 1:
            return poly_to_terms(f.numer)
        return {"num": poly_to_terms(f.numer), "den": poly_to_terms(f.denom)}
    if isinstance(f, PolyElement):
        return poly_to_terms(f)
    return format_rational(f)


def from_json(K: CoordinateRing, data):
    if isinstance(data, dict):
        num = K.to_field().poly(data["num"])
        den = K.to_field().poly(data["den"])
        return K.convert(rf_arith(num, den, "div"))
    if isinstance(data, (str, int)):
        return K.convert(data)
    return K.poly(data)
