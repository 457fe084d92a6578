"""Multivariate power series truncated by total degree.

All arithmetic discards terms of total degree >= order.  The square root and
reciprocal use Newton iteration, doubling the correct degree each step.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Mapping

from .poly import Coeff, Monomial, MultiPoly, VarSet


class ConstantTermNotSquare(ArithmeticError):
    """sqrt of a series whose constant term is not a rational square."""


def _truncate(p: MultiPoly, order: int) -> MultiPoly:
    return MultiPoly(p.vars, {m: c for m, c in p.terms.items() if sum(m) < order})


def _mul_trunc(a: MultiPoly, b: MultiPoly, order: int) -> MultiPoly:
    """Product keeping only terms of total degree < order."""
    if not a.terms or not b.terms:
        return MultiPoly.zero(a.vars)
    out: dict[Monomial, Coeff] = {}
    b_items = sorted(b.terms.items(), key=lambda t: sum(t[0]))
    b_degs = [sum(m) for m, _ in b_items]
    for ma, ca in a.terms.items():
        da = sum(ma)
        room = order - da
        if room <= 0:
            continue
        for (mb, cb), db in zip(b_items, b_degs):
            if db >= room:
                break
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            elif m in out:
                del out[m]
    return MultiPoly(a.vars, out)


class TruncatedSeries:
    """A power series known modulo total degree `order`."""

    __slots__ = ("vars", "order", "coeffs")

    def __init__(self, vars: VarSet, order: int, coeffs: MultiPoly):
        if order < 1:
            raise ValueError("truncation order must be at least 1")
        self.vars = vars
        self.order = order
        self.coeffs = _truncate(coeffs, order)

    @classmethod
    def from_poly(cls, poly: MultiPoly, order: int) -> "TruncatedSeries":
        return cls(poly.vars, order, poly)

    @classmethod
    def const(cls, vars: VarSet, c: Coeff, order: int) -> "TruncatedSeries":
        return cls(vars, order, MultiPoly.const(vars, c))

    def _join(self, other) -> tuple["TruncatedSeries", int]:
        if isinstance(other, TruncatedSeries):
            if other.vars != self.vars:
                raise ValueError("mismatched variable sets")
            return other, min(self.order, other.order)
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.const(self.vars, other, self.order), self.order
        if isinstance(other, MultiPoly):
            return TruncatedSeries.from_poly(other, self.order), self.order
        return NotImplemented, 0  # type: ignore[return-value]

    def __add__(self, other) -> "TruncatedSeries":
        o, order = self._join(other)
        if o is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.vars, order, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.vars, self.order, -self.coeffs)

    def __sub__(self, other) -> "TruncatedSeries":
        o, order = self._join(other)
        if o is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.vars, order, self.coeffs - o.coeffs)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        o, order = self._join(other)
        if o is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.vars, order, _mul_trunc(self.coeffs, o.coeffs, order))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TruncatedSeries":
        o, _ = self._join(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.vars == other.vars
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def constant_term(self) -> Fraction:
        return Fraction(self.coeffs.terms.get((0,) * len(self.vars), 0))

    def coefficient(self, **exps: int) -> Fraction:
        return self.coeffs.coefficient(**exps)

    def inverse(self) -> "TruncatedSeries":
        """Reciprocal via Newton iteration y <- y(2 - s y), doubling precision."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        y = MultiPoly.const(self.vars, 1 / c0)
        prec = 1
        while prec < self.order:
            prec = min(2 * prec, self.order)
            sy = _mul_trunc(self.coeffs, y, prec)
            y = _mul_trunc(y, MultiPoly.const(self.vars, 2) - sy, prec)
        return TruncatedSeries(self.vars, self.order, y)

    def sqrt(self) -> "TruncatedSeries":
        """Square root with sqrt(s)^2 = s modulo the truncation order.

        Newton iteration on the inverse square root, y <- y(3 - s y^2)/2, is
        division-free and doubles the correct degree each step; the root is
        then s*y.  Requires the constant term to be a positive rational square.
        """
        c0 = self.constant_term()
        root = _fraction_sqrt(c0)
        if root is None:
            raise ConstantTermNotSquare(f"constant term {c0} is not a positive rational square")
        scaled = self.coeffs * (1 / c0)
        y = MultiPoly.const(self.vars, 1)
        prec = 1
        while prec < self.order:
            prec = min(2 * prec, self.order)
            y2 = _mul_trunc(y, y, prec)
            sy2 = _mul_trunc(scaled, y2, prec)
            y = _mul_trunc(y, MultiPoly.const(self.vars, 3) - sy2, prec) * Fraction(1, 2)
        result = _mul_trunc(scaled, y, self.order) * root
        return TruncatedSeries(self.vars, self.order, result)

    def substitute(self, bindings: Mapping[str, MultiPoly | Coeff]) -> "TruncatedSeries":
        return TruncatedSeries(self.vars, self.order, self.coeffs.substitute(bindings))

    def __str__(self) -> str:
        return f"{self.coeffs} + O(deg {self.order})"

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"


def series_sqrt(s: TruncatedSeries) -> TruncatedSeries:
    """Square root of a truncated series (see TruncatedSeries.sqrt)."""
    return s.sqrt()


def _fraction_sqrt(c: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if c < 0:
        return None
    pn, pd = isqrt(c.numerator), isqrt(c.denominator)
    if pn * pn != c.numerator or pd * pd != c.denominator:
        return None
    return Fraction(pn, pd)
