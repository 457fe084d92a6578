"""Equivariant localization sums, their nonequivariant limits, and the
divisibility mechanism that makes those limits exist.

The scaled integral h^{k(n-k)} * integral of the envelope of p_I is computed
two independent ways:

* ``integral_via_z_limit`` substitutes a_s = s*z*h term by term, which kills
  h exactly by homogeneity and leaves univariate rational functions of z; the
  limit z -> 0 of the sum is the answer.  Fast, used up to n ~ 9.
* ``integral_full_multivariate`` canonicalizes the full multivariate sum and
  evaluates at a = 0; expensive, guarded by a cost bound, and used as a
  cross-check oracle.

``vandermonde_divisibility_check`` verifies the mechanism behind the limit's
existence: combined over a common denominator, the numerator of the sum is
divisible by the full Vandermonde determinant of the a-variables.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .exactalg import (
    LinearFactorSum,
    MultiPoly,
    PoleAtZero,
    RationalFunction,
    VarSet,
    exact_divide,
    rational_limit_at_zero,
    try_exact_divide,
)
from .geometry import (
    Chamber,
    FixedPoint,
    a_only_vars,
    chamber_leq,
    enumerate_fixed_points,
    tangent_weight_factors,
    torus_vars,
)
from .reports import THEOREM, CheckReport
from .weightfn import weight_function, restrict, restrict_h1

Z_VARS = VarSet(("z",))

DEFAULT_COST_BOUND = 360  # C(6,3) * 2*3*(6-3): the worst n = 6 case
COST_ENV_VAR = "ENVELOPE_MAX_COST"


class NonIntegerResult(ArithmeticError):
    """A scaled integral failed to be an integer; fatal internal invariant."""


class CostGuardExceeded(RuntimeError):
    """A full-multivariate computation exceeds the configured cost bound."""


@dataclass(frozen=True)
class LocalizationSum:
    """The full equivariant sum of restrictions over tangent Euler classes."""

    point: FixedPoint
    chamber: Chamber
    value: RationalFunction


@dataclass(frozen=True)
class IntegralValue:
    """The integer value of h^{k(n-k)} times the integral of one envelope."""

    point: FixedPoint
    scaled_integer: int
    method: str = "z"


def lift_h1_value(flat: LinearFactorSum, n: int, codegree: int) -> RationalFunction:
    """Rehomogenize an h = 1 factored sum into a canonical function of (a, h).

    Works for any sum that is homogeneous of total degree -codegree before
    dehomogenization: the denominator's degree is its factor count, which
    pins the numerator's degree, and each a-monomial lifts uniquely.
    """
    vars = torus_vars(n)
    den_degree = sum(flat.den_factors().values())
    num = flat.numerator()
    if num.is_zero():
        return RationalFunction.from_const(vars, 0)
    num = num.cast(vars).homogenize("h", den_degree - codegree)
    den = MultiPoly.const(vars, 1)
    for f, e in flat.den_factors().items():
        lifted = f.cast(vars).homogenize("h", 1)
        for _ in range(e):
            den = den * lifted
    content, prim = den.content_and_primitive()
    if content != 1:
        num = num * (1 / content)
        den = prim
    return RationalFunction._raw(num, den)


def _tangent_weight_factors_h1(J: FixedPoint) -> list[MultiPoly]:
    vars = a_only_vars(J.n)
    factors = []
    for s in J.indices:
        for v in J.complement():
            factors.append(MultiPoly.linear(vars, 0, {f"a{v}": 1, f"a{s}": -1}))
            factors.append(MultiPoly.linear(vars, 1, {f"a{s}": 1, f"a{v}": -1}))
    return factors


@lru_cache(maxsize=None)
def localization_sum(p: FixedPoint, c: Chamber | None = None) -> LocalizationSum:
    """Sum restriction/Euler over fixed points above p, canonically reduced.

    Points not above p in the (chamber-relabeled) componentwise order have
    vanishing restriction and are skipped; terms accumulate in lexicographic
    order with cancellation after every addition.  Everything in the sum is
    homogeneous, so the standard-chamber computation runs at h = 1 and the
    value is rehomogenized at the end.
    """
    c = c or Chamber.standard(p.n)
    if c.is_standard():
        acc = LinearFactorSum(a_only_vars(p.n))
        for J in enumerate_fixed_points(p.n, p.k):
            if not chamber_leq(p, J, c):
                continue
            num = restrict_h1(p, J)
            if num.is_zero():
                continue
            acc.add(num, _tangent_weight_factors_h1(J))
        return LocalizationSum(p, c, lift_h1_value(acc, p.n, p.k * (p.n - p.k)))
    w = weight_function(p, c)
    acc = LinearFactorSum(torus_vars(p.n))
    for J in enumerate_fixed_points(p.n, p.k):
        if not chamber_leq(p, J, c):
            continue
        num = restrict(w, J)
        if num.is_zero():
            continue
        acc.add(num, tangent_weight_factors(J))
    return LocalizationSum(p, c, acc.value())


def _above_tuples(n: int, k: int, I: tuple[int, ...]):
    """Tuples of distinct entries <= n with J[r] >= I[r] for every slot."""
    for subset in combinations(range(1, n + 1), k):
        for J in permutations(subset):
            if all(j >= i for j, i in zip(J, I)):
                yield J


def _z_term(n: int, k: int, I: tuple[int, ...], J: tuple[int, ...]) -> tuple[MultiPoly, list[MultiPoly], Fraction, int]:
    """One tuple's term after a_s = s*z*h: (num, den factors, scale, h-degree).

    Every substituted linear factor contributes exactly one power of h, so the
    h-degree of the term is a pure count returned for the homogeneity check.
    """
    scale = Fraction(1)
    num = MultiPoly.const(Z_VARS, 1)
    den: list[MultiPoly] = []
    z_num = 0
    z_den = 0
    h_deg = 0
    for r in range(k):
        i_r, j_r = I[r], J[r]
        for alpha in range(1, i_r):
            scale *= alpha - j_r
            z_num += 1
            h_deg += 1
        for beta in range(i_r + 1, n + 1):
            num = num * MultiPoly.linear(Z_VARS, 1, {"z": j_r - beta})
            h_deg += 1
    for l in range(k):
        for m in range(l + 1, k):
            scale /= J[l] - J[m]
            z_den += 1
            den.append(MultiPoly.linear(Z_VARS, 1, {"z": J[l] - J[m]}))
            h_deg -= 2
    outside = [v for v in range(1, n + 1) if v not in J]
    for p in range(k):
        for v in outside:
            scale /= v - J[p]
            z_den += 1
            den.append(MultiPoly.linear(Z_VARS, 1, {"z": J[p] - v}))
            h_deg -= 2
    z = MultiPoly.variable(Z_VARS, "z")
    if z_num > z_den:
        num = num * z ** (z_num - z_den)
    else:
        den.extend([z] * (z_den - z_num))
    return num, den, scale, h_deg


def z_substituted_sum(p: FixedPoint) -> RationalFunction:
    """The scaled localization sum after a_s = s*z*h, as a function of z alone.

    The h-powers cancel exactly: each term's h-degree plus k(n-k) is asserted
    to be zero before h is dropped.
    """
    n, k = p.n, p.k
    scale_power = k * (n - k)
    acc = LinearFactorSum(Z_VARS)
    for J in _above_tuples(n, k, p.indices):
        num, den, scale, h_deg = _z_term(n, k, p.indices, J)
        if h_deg + scale_power != 0:
            raise AssertionError(
                f"h fails to cancel for tuple {J}: degree {h_deg} + {scale_power} != 0"
            )
        acc.add(num, den, scale)
    return acc.value()


def integral_via_z_limit(p: FixedPoint) -> IntegralValue:
    """The scaled integral as the z -> 0 limit of the substituted sum."""
    value = rational_limit_at_zero(z_substituted_sum(p), "z")
    return IntegralValue(p, _as_integer(value.const_value(), p), method="z")


def _cost_bound() -> int:
    raw = os.environ.get(COST_ENV_VAR)
    if raw is None:
        return DEFAULT_COST_BOUND
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{COST_ENV_VAR} must be an integer, got {raw!r}")


def _guard_cost(n: int, k: int, what: str) -> None:
    from math import comb

    cost = comb(n, k) * 2 * k * (n - k)
    bound = _cost_bound()
    if cost > bound:
        raise CostGuardExceeded(
            f"{what} at (n={n}, k={k}) costs {cost} > bound {bound}; "
            f"raise {COST_ENV_VAR} to override"
        )


def integral_full_multivariate(p: FixedPoint) -> IntegralValue:
    """The scaled integral by canonicalizing the full sum and setting a = 0."""
    _guard_cost(p.n, p.k, "full multivariate localization")
    value = localization_sum(p).value
    scale_power = p.k * (p.n - p.k)
    zeros = {f"a{i}": 0 for i in range(1, p.n + 1)}
    try:
        at_zero = value.substitute(zeros)
    except ZeroDivisionError as exc:
        raise PoleAtZero(f"denominator vanishes at a = 0 for {p}") from exc
    h_power = MultiPoly.variable(torus_vars(p.n), "h") ** scale_power
    scaled = at_zero * h_power
    if not (scaled.is_polynomial() and scaled.num.is_const()):
        raise AssertionError(f"scaled limit is not a constant: {scaled}")
    return IntegralValue(p, _as_integer(scaled.const_value(), p), method="full")


def _as_integer(value: Fraction, p: FixedPoint) -> int:
    if value.denominator != 1:
        raise NonIntegerResult(f"scaled integral of {p} is {value}, not an integer")
    return int(value)


# -- Vandermonde divisibility -------------------------------------------------


def _sigma_numerator(vars: VarSet, n: int, I: tuple[int, ...], J: tuple[int, ...]) -> MultiPoly:
    """Restriction numerator over the full symmetrizer denominator at t = a_J.

    This is the sum over S_k of sign times the summand numerator times the
    complementary h-shifted factors, i.e. the restriction times
    V_J * prod (a_jl - a_jm + h)(a_jm - a_jl + h).
    """
    k = len(J)
    total = MultiPoly.zero(vars)
    for sigma in permutations(range(k)):
        sign = _perm_sign(sigma)
        term = MultiPoly.const(vars, sign)
        dead = False
        for r in range(k):
            j_s = J[sigma[r]]
            for alpha in range(1, I[r]):
                if alpha == j_s:
                    dead = True
                    break
                term = term * MultiPoly.linear(vars, 0, {f"a{alpha}": 1, f"a{j_s}": -1})
            if dead:
                break
            for beta in range(I[r] + 1, n + 1):
                coeffs = {"h": 1} if beta == j_s else {f"a{j_s}": 1, f"a{beta}": -1, "h": 1}
                term = term * MultiPoly.linear(vars, 0, coeffs)
        if dead:
            continue
        for l in range(k):
            for m in range(l + 1, k):
                jl, jm = J[sigma[l]], J[sigma[m]]
                term = term * MultiPoly.linear(vars, 0, {f"a{jm}": 1, f"a{jl}": -1, "h": 1})
        total = total + term
    return total


def _perm_sign(sigma: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def _vandermonde(vars: VarSet, indices: tuple[int, ...]) -> MultiPoly:
    out = MultiPoly.const(vars, 1)
    for x, y in combinations(indices, 2):
        out = out * MultiPoly.linear(vars, 0, {f"a{x}": 1, f"a{y}": -1})
    return out


def vandermonde_divisibility_check(p: FixedPoint) -> CheckReport:
    """Combined over a common denominator, the localization numerator is
    divisible by the full Vandermonde of the a-variables.

    Every per-point denominator here is a product of h-shifted linear forms,
    coprime to each a_x - a_y, so divisibility of the reduced numerator is
    equivalent to divisibility of the combined one.  Alongside the full
    division, three random pairs get the direct a_x = a_y vanishing test.
    """
    _guard_cost(p.n, p.k, "Vandermonde divisibility check")
    n, k = p.n, p.k
    vars = torus_vars(n)
    report = CheckReport(f"Vandermonde divisibility for {p}", kind=THEOREM)
    acc = LinearFactorSum(vars)
    for Jpt in enumerate_fixed_points(n, k):
        J = Jpt.indices
        numerator = _sigma_numerator(vars, n, p.indices, J)
        if numerator.is_zero():
            continue
        n_over_v = exact_divide(numerator, _vandermonde(vars, J))
        num = n_over_v * _vandermonde(vars, J) * _vandermonde(vars, Jpt.complement())
        if sum(J) % 2:
            num = -num
        den: list[MultiPoly] = []
        for l in range(k):
            for m in range(l + 1, k):
                den.append(MultiPoly.linear(vars, 0, {f"a{J[l]}": 1, f"a{J[m]}": -1, "h": 1}))
                den.append(MultiPoly.linear(vars, 0, {f"a{J[m]}": 1, f"a{J[l]}": -1, "h": 1}))
        for j in J:
            for v in Jpt.complement():
                den.append(MultiPoly.linear(vars, 0, {f"a{j}": 1, f"a{v}": -1, "h": 1}))
        acc.add(num, den)
    combined = acc.value()
    quotient = combined.num
    divides = True
    for x, y in combinations(range(1, n + 1), 2):
        factor = MultiPoly.linear(vars, 0, {f"a{x}": 1, f"a{y}": -1})
        q = try_exact_divide(quotient, factor)
        if q is None:
            divides = False
            report.add_fail(
                f"(a{x} - a{y}) divides the combined numerator",
                f"division fails; numerator {quotient}",
            )
            break
        quotient = q
    if divides:
        report.add_pass("full Vandermonde divides the combined numerator")
    rng = random.Random((n, k, p.indices).__repr__())
    pairs = list(combinations(range(1, n + 1), 2))
    for x, y in rng.sample(pairs, min(3, len(pairs))):
        collapsed = combined.num.relabel({f"a{y}": f"a{x}"})
        report.record(
            f"combined numerator vanishes at a{x} = a{y}",
            collapsed.is_zero(),
            "" if collapsed.is_zero() else f"residue {collapsed}",
        )
    return report


def chamber_covariance_check(p: FixedPoint, tau: Chamber) -> CheckReport:
    """The chamber-twisted integral equals the relabeled standard integral of
    the untwisted point, already at the level of the full equivariant sums."""
    report = CheckReport(f"chamber covariance for {p} under {tau}", kind=THEOREM)
    lhs = localization_sum(p, tau).value
    rhs = localization_sum(tau.inverse().apply_point(p)).value.relabel(tau.relabel_map())
    report.record(
        f"twisted sum at {p} equals relabeled standard sum",
        lhs == rhs,
        "" if lhs == rhs else f"{lhs} != {rhs}",
    )
    return report
