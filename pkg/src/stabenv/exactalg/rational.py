"""Rational functions as canonical-form quotients of MultiPoly values.

Canonical form: gcd(num, den) = 1 including rational content, and the
denominator is integer-primitive with positive leading coefficient under the
graded lex order.  Two rational functions are equal iff their canonical forms
are syntactically identical, so equality is plain structural comparison.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .poly import Coeff, MultiPoly, VarSet, exact_divide, poly_gcd


class DenominatorVanishes(ZeroDivisionError):
    """A substitution made the denominator identically zero."""


class PoleAtZero(ArithmeticError):
    """The canonical denominator vanishes at the evaluation point."""


class IndeterminateInternal(AssertionError):
    """0/0 after canonicalization; impossible unless canonical form is broken."""


class RationalFunction:
    """An exact quotient num/den of multivariate polynomials, kept canonical."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | Coeff = 1):
        if not isinstance(den, MultiPoly):
            den = MultiPoly.const(num.vars, den)
        if den.vars != num.vars:
            raise ValueError("num and den must share a variable set")
        if den.is_zero():
            raise DenominatorVanishes("zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num: MultiPoly, den: MultiPoly) -> "RationalFunction":
        """Wrap an already-canonical pair without re-reducing."""
        rf = object.__new__(cls)
        rf.num = num
        rf.den = den
        return rf

    @classmethod
    def from_const(cls, vars: VarSet, c: Coeff) -> "RationalFunction":
        return cls(MultiPoly.const(vars, c))

    @property
    def vars(self) -> VarSet:
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_const()

    def as_polynomial(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: {self}")
        return self.num * (1 / Fraction(self.den.const_value()))

    def const_value(self) -> Fraction:
        return Fraction(self.num.const_value()) / Fraction(self.den.const_value())

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction(MultiPoly.const(self.vars, other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = self._coerce(other)
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- calculus on the function ------------------------------------------

    def substitute(self, bindings: Mapping[str, MultiPoly | Coeff]) -> "RationalFunction":
        """Exact substitution followed by canonicalization."""
        den = self.den.substitute(bindings)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator vanishes under {sorted(bindings)}")
        return RationalFunction(self.num.substitute(bindings), den)

    def relabel(self, mapping: Mapping[str, str], signs: Mapping[str, int] | None = None) -> "RationalFunction":
        """Signed variable renaming; a ring automorphism, so the canonical
        form survives up to the denominator's sign normalization."""
        num = self.num.relabel(mapping, signs)
        den = self.den.relabel(mapping, signs)
        full = {name: mapping.get(name, name) for name in self.vars}
        if len(set(full.values())) != len(full):
            # not a variable permutation: cancellation may appear, re-reduce
            return RationalFunction(num, den)
        if num.is_zero():
            return RationalFunction._raw(num, MultiPoly.const(num.vars, 1))
        _, lead = den.leading()
        if lead < 0:
            num, den = -num, -den
        return RationalFunction._raw(num, den)

    def cast(self, new_vars: VarSet) -> "RationalFunction":
        """Re-home in another variable set; renormalizes the sign, since the
        leading term may change with the variable order."""
        num = self.num.cast(new_vars)
        den = self.den.cast(new_vars)
        if not num.is_zero():
            _, lead = den.leading()
            if lead < 0:
                num, den = -num, -den
        return RationalFunction._raw(num, den)

    def evaluate(self, values: Mapping[str, Coeff]) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise PoleAtZero("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / d

    def limit_at_zero(self, var: str) -> "RationalFunction":
        """The limit as var -> 0, honest because the form is canonical.

        The canonical form has no common factor, so the denominator vanishing
        at var = 0 means a genuine pole (the numerator cannot vanish too:
        both vanishing would force the common factor var).
        """
        den0 = self.den.substitute({var: 0})
        num0 = self.num.substitute({var: 0})
        if den0.is_zero():
            if num0.is_zero():
                raise IndeterminateInternal(
                    "num and den both vanish at 0 despite canonical form"
                )
            raise PoleAtZero(f"pole at {var} = 0")
        return RationalFunction(num0, den0)

    def __str__(self) -> str:
        if self.den == MultiPoly.const(self.vars, 1):
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _reduce(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Cancel the gcd and normalize signs; returns the canonical (num, den)."""
    if num.is_zero():
        return num, MultiPoly.const(den.vars, 1)
    g = poly_gcd(num, den)
    if not g.is_const():
        num = exact_divide(num, g)
        den = exact_divide(den, g)
    den_content, den_prim = den.content_and_primitive()
    return num * (1 / den_content), den_prim


# -- spec-level operation aliases ------------------------------------------


def substitute(f: RationalFunction, bindings: Mapping[str, MultiPoly | Coeff]) -> RationalFunction:
    """Substitute polynomials for variables in a rational function."""
    return f.substitute(bindings)


def rational_limit_at_zero(f: RationalFunction, var: str) -> RationalFunction:
    """The limit of f as var -> 0 (PoleAtZero if it does not exist)."""
    return f.limit_at_zero(var)
