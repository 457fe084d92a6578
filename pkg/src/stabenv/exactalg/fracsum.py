"""Exact summation of fractions whose denominators factor into linear forms.

Every denominator in this problem domain (tangent Euler classes, symmetrizer
denominators, path weights, the z-substituted factors) is a product of linear
polynomials.  Keeping denominators as factor multisets makes common
denominators a multiset max, and cancellation a sweep of exact divisions by
linear factors, so no general multivariate gcd is ever needed on the hot path.

Cancellation candidates are limited to factors appearing with equal
multiplicity on both sides of an addition (no other factor can divide the
sum), and each candidate is screened by a modular evaluation on its zero
hyperplane before the exact division is attempted.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .poly import MultiPoly, try_exact_divide
from .rational import RationalFunction

_FILTER_PRIME = (1 << 61) - 1
_rng = random.Random(0x5EED)


def _divisibility_screen(num: MultiPoly, factor: MultiPoly) -> bool:
    """Cheap necessary test for factor | num: evaluate num modulo a prime at
    a random point of the factor's zero set.  False means definitely not
    divisible; True means worth an exact division."""
    p = _FILTER_PRIME
    nvars = len(num.vars)
    items = list(factor.terms.items())
    pivot = None
    for mono, c in items:
        if any(mono):
            pivot = (mono.index(1), c)
    if pivot is None:
        return True
    v, c = pivot
    c_mod = _coeff_mod(c, p)
    if c_mod is None or c_mod == 0:
        return True
    point = [_rng.randrange(1, p) for _ in range(nvars)]
    rest = 0
    for mono, coeff in items:
        if any(mono) and mono[v]:
            continue
        cm = _coeff_mod(coeff, p)
        if cm is None:
            return True
        term = cm
        for i, e in enumerate(mono):
            if e:
                term = term * point[i] % p
        rest = (rest + term) % p
    point[v] = (-rest) * pow(c_mod, p - 2, p) % p
    # power tables: degrees are small, terms are many
    max_deg = [0] * nvars
    for mono in num.terms:
        for i, e in enumerate(mono):
            if e > max_deg[i]:
                max_deg[i] = e
    tables = []
    for i in range(nvars):
        row = [1] * (max_deg[i] + 1)
        for e in range(1, max_deg[i] + 1):
            row[e] = row[e - 1] * point[i] % p
        tables.append(row)
    total = 0
    for mono, coeff in num.terms.items():
        cm = _coeff_mod(coeff, p)
        if cm is None:
            return True
        term = cm
        for i, e in enumerate(mono):
            if e:
                term = term * tables[i][e] % p
        total = (total + term) % p
    return total == 0


def _coeff_mod(c, p: int) -> int | None:
    if isinstance(c, int):
        return c % p
    den = c.denominator % p
    if den == 0:
        return None
    return c.numerator % p * pow(den, p - 2, p) % p


class LinearFactorSum:
    """Accumulates sum of scale * num / prod(factors), canonically reduced."""

    __slots__ = ("vars", "_num", "_den")

    def __init__(self, vars):
        self.vars = vars
        self._num = MultiPoly.zero(vars)
        self._den: dict[MultiPoly, int] = {}

    def _normalize_factors(
        self, factors: Iterable[MultiPoly], scale: Fraction
    ) -> tuple[dict[MultiPoly, int], Fraction]:
        den: dict[MultiPoly, int] = {}
        for f in factors:
            content, prim = f.content_and_primitive()
            if content == 0:
                raise ZeroDivisionError("zero polynomial among denominator factors")
            scale /= content
            if prim.is_const():
                continue
            if prim.total_degree() != 1:
                raise ValueError(f"denominator factor is not linear: {f}")
            den[prim] = den.get(prim, 0) + 1
        return den, scale

    def add(
        self,
        num: MultiPoly,
        factors: Iterable[MultiPoly] = (),
        scale: Fraction | int = 1,
    ) -> None:
        """Add scale * num / prod(factors) to the running total.

        Factors must be polynomials of total degree 1 (their content and sign
        are absorbed into the scale).  A zero factor raises ZeroDivisionError.
        """
        den, scale = self._normalize_factors(factors, Fraction(scale))
        self._add_reduced(num, den, scale, reduce_against=list(den))

    def add_sum(
        self,
        other: "LinearFactorSum",
        extra_factors: Iterable[MultiPoly] = (),
        scale: Fraction | int = 1,
    ) -> None:
        """Add another accumulated sum with optional extra denominator factors.

        The other sum is already reduced, so only the extra factors need a
        divisibility sweep against the incoming numerator.
        """
        extra, scale = self._normalize_factors(extra_factors, Fraction(scale))
        den = dict(other._den)
        for f, e in extra.items():
            den[f] = den.get(f, 0) + e
        self._add_reduced(other._num, den, scale, reduce_against=list(extra))

    def _add_reduced(
        self,
        num: MultiPoly,
        den: dict[MultiPoly, int],
        scale: Fraction,
        reduce_against: list[MultiPoly],
    ) -> None:
        if scale != 1:
            num = num * scale
        if num.is_zero():
            return
        for f in reduce_against:
            while den.get(f, 0) > 0:
                if not _divisibility_screen(num, f):
                    break
                q = try_exact_divide(num, f)
                if q is None:
                    break
                num = q
                den[f] -= 1
            if den.get(f) == 0:
                del den[f]
        if self._num.is_zero():
            self._num = num
            self._den = den
            return
        # common denominator: multiset max of factor exponents.  Only factors
        # appearing with EQUAL multiplicity on both sides can cancel from the
        # sum: any other factor divides exactly one of the two cofactored
        # numerators (both sides are reduced), so it cannot divide their sum.
        both = set(self._den) | set(den)
        lcm = {f: max(self._den.get(f, 0), den.get(f, 0)) for f in both}
        candidates = [f for f in both if self._den.get(f, 0) == den.get(f, 0)]
        acc = self._num
        for f, e in lcm.items():
            for _ in range(e - self._den.get(f, 0)):
                acc = acc * f
        for f, e in lcm.items():
            for _ in range(e - den.get(f, 0)):
                num = num * f
        total = acc + num
        if total.is_zero():
            self._num = total
            self._den = {}
            return
        for f in candidates:
            while lcm[f] > 0:
                if not _divisibility_screen(total, f):
                    break
                q = try_exact_divide(total, f)
                if q is None:
                    break
                total = q
                lcm[f] -= 1
            if lcm[f] == 0:
                del lcm[f]
        self._num = total
        self._den = lcm

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def numerator(self) -> MultiPoly:
        return self._num

    def den_factors(self) -> dict[MultiPoly, int]:
        return dict(self._den)

    def value(self) -> RationalFunction:
        """The accumulated sum as a canonical RationalFunction.

        The factored bookkeeping guarantees gcd(num, den) = 1: the factors are
        irreducible linears and each has been divided out of the numerator as
        far as possible.
        """
        den = MultiPoly.const(self.vars, 1)
        for f, e in self._den.items():
            for _ in range(e):
                den = den * f
        num = self._num
        content, prim = den.content_and_primitive()
        if content != 1:
            num = num * (1 / content)
            den = prim
        return RationalFunction._raw(num, den)
