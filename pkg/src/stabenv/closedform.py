"""The closed combinatorial formula for the scaled envelope integrals.

The scaled integral of the envelope of p_I equals, up to a global sign, a
finite sum over tuples J of distinct indices lying entrywise above I.  Each
tuple contributes a product A_J * B_J built from elementary symmetric
polynomials of the difference multiset of J, factorials, and alternating
power sums indexed by weak compositions.  Everything here is exact rational
arithmetic; integrality of the result is asserted, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterator, Sequence

from .geometry import FixedPoint
from .localize import IntegralValue, NonIntegerResult


@dataclass(frozen=True)
class DeltaMultiset:
    """The multiset of pairwise differences j_m - j_l over slots l < m."""

    values: tuple[int, ...]

    @classmethod
    def of(cls, J: Sequence[int]) -> "DeltaMultiset":
        k = len(J)
        return cls(tuple(J[m] - J[l] for l in range(k) for m in range(l + 1, k)))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class WeakComposition:
    """A tuple of fixed length whose nonnegative parts sum to a given total."""

    parts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.parts)


def weak_compositions(total: int, length: int) -> Iterator[WeakComposition]:
    """All weak compositions of total into exactly `length` parts, iteratively.

    Odometer enumeration: the first length-1 parts sweep, the last part
    absorbs the remainder.
    """
    if length < 1 or total < 0:
        return
    if length == 1:
        yield WeakComposition((total,))
        return
    state = [0] * (length - 1)
    while True:
        head = sum(state)
        yield WeakComposition(tuple(state) + (total - head,))
        i = length - 2
        while i >= 0:
            if sum(state[: i + 1]) < total:
                state[i] += 1
                for j in range(i + 1, length - 1):
                    state[j] = 0
                break
            i -= 1
        else:
            return


def elementary_symmetric(m: int, values: Sequence[int]) -> int:
    """e_m of a multiset of integers; e_0 = 1."""
    if m < 0 or m > len(values):
        raise ValueError(f"e_{m} undefined for a multiset of size {len(values)}")
    # running expansion of prod (1 + v t) up to degree m
    coeffs = [1] + [0] * m
    for v in values:
        for d in range(min(m, len(coeffs) - 1), 0, -1):
            coeffs[d] += v * coeffs[d - 1]
    return coeffs[m]


def g_term(lambda_s: int, i_s: int, j_s: int) -> Fraction:
    """The asymptotic expansion coefficient G_{lambda}(j-i, j) of the ratio
    of rising factorials, as an explicit alternating sum.

    Conventions: 0^0 = 1 (needed at i_s = 1, lambda_s = 0), and the p-th
    summand carries the split factorial weight 1/((i_s-1-p)! p!).
    """
    if i_s < 1 or j_s < i_s or lambda_s < 0:
        raise ValueError(f"need i >= 1, j >= i, lambda >= 0; got {lambda_s, i_s, j_s}")
    total = Fraction(0)
    for p in range(i_s):
        base = p + j_s - i_s
        power = i_s + lambda_s - 1
        value = 1 if power == 0 else base**power
        total += Fraction((-1) ** (i_s - 1 - p) * value, factorial(i_s - 1 - p) * factorial(p))
    return Fraction((-1) ** lambda_s) * total


def _b_inner_product(I: Sequence[int], J: Sequence[int], lam: Sequence[int]) -> Fraction:
    """Product over slots of the alternating power sums inside B_J."""
    out = Fraction(1)
    for i_s, j_s, l_s in zip(I, J, lam):
        acc = Fraction(0)
        power = i_s + l_s - 1
        for p in range(i_s):
            base = p + j_s - i_s
            value = 1 if power == 0 else base**power
            acc += Fraction((-1) ** p * value, factorial(i_s - 1 - p) * factorial(p))
        if acc == 0:
            return Fraction(0)
        out *= acc
    return out


def tuples_above(n: int, k: int, I: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Tuples of distinct entries <= n, entrywise >= I, in any slot order."""
    for subset in combinations(range(1, n + 1), k):
        for J in permutations(subset):
            if all(j >= i for j, i in zip(J, I)):
                yield J


def a_coefficient(n: int, I: Sequence[int], J: Sequence[int]) -> Fraction:
    """A_J: signed top elementary symmetric of the differences over factorials."""
    k = len(J)
    top = elementary_symmetric(comb(k, 2), DeltaMultiset.of(J).values)
    out = Fraction((-1) ** sum(J) * top)
    for i_s, j_s in zip(I, J):
        out /= factorial(n - j_s) * factorial(j_s - i_s)
    return out


def b_coefficient(n: int, k: int, I: Sequence[int], J: Sequence[int]) -> Fraction:
    """B_J: the alternating sum over d and weak compositions of the G products."""
    kk2 = comb(k, 2)
    delta = DeltaMultiset.of(J).values
    absI = sum(I)
    total = Fraction(0)
    for d in range(kk2 + 1):
        comp_total = k * (n - k + 1) + d - absI
        if comp_total < 0:
            continue
        inner = Fraction(0)
        for lam in weak_compositions(comp_total, k):
            inner += _b_inner_product(I, J, lam.parts)
        total += Fraction((-1) ** d) * elementary_symmetric(kk2 - d, delta) * inner
    return total


def closed_form_value(p: FixedPoint) -> Fraction:
    """The closed-form sum as an exact rational, before the integrality assertion."""
    n, k = p.n, p.k
    I = p.indices
    total = Fraction(0)
    for J in tuples_above(n, k, I):
        a = a_coefficient(n, I, J)
        if a == 0:
            continue
        total += a * b_coefficient(n, k, I, J)
    sign = (-1) ** (k * (n - k) - sum(I))
    return sign * total


def closed_form_integral(p: FixedPoint) -> IntegralValue:
    """The scaled envelope integral from the closed formula; asserted integer."""
    value = closed_form_value(p)
    if value.denominator != 1:
        raise NonIntegerResult(f"closed form at {p} gives {value}, not an integer")
    return IntegralValue(p, int(value), method="closed")


def gr2_closed_form(i1: int, i2: int, n: int) -> Fraction:
    """The k = 2 specialization in closed form; defined for all i1, i2 >= 1,
    n >= 3, including i1 = i2 and other positions outside the standard range."""
    if n < 3 or i1 < 1 or i2 < 1:
        raise ValueError(f"need n >= 3 and i1, i2 >= 1; got ({i1}, {i2}, {n})")
    prefactor = Fraction(
        factorial(n - 2) * factorial(n - 3),
        factorial(i1 - 1) * factorial(i2 - 1) * factorial(n - i1) * factorial(n - i2),
    )
    bracket = (
        -3 * i1
        + i2
        - i1**2
        + 4 * i1 * i2
        - i2**2
        + n * (2 * (i1 - 2 * i2 + 1) + (i2 - i1) ** 2)
        + n**2 * (i2 - i1)
    )
    return prefactor * bracket


@lru_cache(maxsize=None)
def narayana(n: int, k: int) -> int:
    """The Narayana number N(n, k) = C(n,k) C(n,k-1) / n."""
    if not (1 <= k <= n):
        raise ValueError(f"Narayana N({n},{k}) needs 1 <= k <= n")
    value = Fraction(comb(n, k) * comb(n, k - 1), n)
    assert value.denominator == 1
    return int(value)


def narayana_or_zero(n: int, k: int) -> int:
    """Narayana number extended by zero outside its triangle."""
    return narayana(n, k) if 1 <= k <= n else 0
