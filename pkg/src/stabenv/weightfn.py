"""Weight functions: symmetrized rational representatives of stable envelopes.

The weight function of a fixed point p_I is a sum over the symmetric group
S_k of products of linear forms in Chern-root variables t_1..t_k, the
equivariant parameters a_1..a_n and h.  Evaluating t at the a-indices of a
second fixed point yields a polynomial; the matrix of all such restrictions
realizes the stable envelope and satisfies the GKM divisibility relations.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .exactalg import (
    LinearFactorSum,
    MultiPoly,
    RationalFunction,
    VarSet,
    try_exact_divide,
)
from .geometry import (
    Chamber,
    FixedPoint,
    MomentGraph,
    a_only_vars,
    chamber_leq,
    enumerate_fixed_points,
    repelling_euler_class,
    torus_vars,
)
from .reports import THEOREM, CheckReport


class NonPolynomialRestriction(ArithmeticError):
    """A weight-function restriction failed to be a polynomial (a bug, not a state)."""


@lru_cache(maxsize=None)
def weight_vars(n: int, k: int) -> VarSet:
    """Variables (t_1..t_k, a_1..a_n, h) for unrestricted weight functions."""
    return torus_vars(n, extra=tuple(f"t{r}" for r in range(1, k + 1)))


class WeightFunction:
    """The weight function of a fixed point for a chamber.

    The full symmetrized expression is assembled lazily (it is only needed
    for small k); restrictions are computed per-summand without ever forming
    the joint rational function.
    """

    def __init__(self, point: FixedPoint, chamber: Chamber):
        if chamber.n != point.n:
            raise ValueError("chamber and point have different n")
        self.point = point
        self.chamber = chamber
        self._expr: RationalFunction | None = None

    @property
    def expr(self) -> RationalFunction:
        if self._expr is None:
            self._expr = _assemble_expr(self.point, self.chamber)
        return self._expr

    def restrict(self, J: FixedPoint) -> MultiPoly:
        return restrict(self, J)

    def __repr__(self) -> str:
        return f"WeightFunction(point={self.point}, chamber={self.chamber})"


def weight_function(p: FixedPoint, c: Chamber | None = None) -> WeightFunction:
    """The weight function of p for the chamber (standard if omitted)."""
    return WeightFunction(p, c or Chamber.standard(p.n))


def _standard_summand(
    vars: VarSet, n: int, I: tuple[int, ...], t_of_r, a_of_i
) -> tuple[list[MultiPoly], list[MultiPoly]]:
    """Numerator and denominator factor lists of one S_k summand.

    t_of_r(r) and a_of_i(i) name the symbol carrying slot r of the permuted
    Chern roots and the parameter a_i; passing a-names for the t slots yields
    the summand of a restriction instead.
    """
    k = len(I)
    num: list[MultiPoly] = []
    for r, i_r in enumerate(I, start=1):
        tr = t_of_r(r)
        for alpha in range(1, i_r):
            num.append(MultiPoly.linear(vars, 0, _merge({a_of_i(alpha): 1}, {tr: -1})))
        for beta in range(i_r + 1, n + 1):
            num.append(MultiPoly.linear(vars, 0, _merge({tr: 1, "h": 1}, {a_of_i(beta): -1})))
    den: list[MultiPoly] = []
    for l in range(1, k + 1):
        for m in range(l + 1, k + 1):
            tl, tm = t_of_r(l), t_of_r(m)
            den.append(MultiPoly.linear(vars, 0, _merge({tl: 1}, {tm: -1})))
            den.append(MultiPoly.linear(vars, 0, _merge({tl: 1, "h": 1}, {tm: -1})))
    return num, den


def _merge(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, val in b.items():
        out[key] = out.get(key, 0) + val
    return out


def _assemble_expr(p: FixedPoint, c: Chamber) -> RationalFunction:
    """The full symmetrized expression, term by term with cancellation."""
    if not c.is_standard():
        base = _assemble_expr(c.inverse().apply_point(p), Chamber.standard(p.n))
        return base.relabel(c.relabel_map())
    vars = weight_vars(p.n, p.k)
    acc = LinearFactorSum(vars)
    for sigma in permutations(range(1, p.k + 1)):
        num_factors, den_factors = _standard_summand(
            vars, p.n, p.indices, lambda r: f"t{sigma[r - 1]}", lambda i: f"a{i}"
        )
        num = MultiPoly.const(vars, 1)
        for f in num_factors:
            num = num * f
        acc.add(num, den_factors)
    return acc.value()


@lru_cache(maxsize=None)
def restrict_h1(p: FixedPoint, J: FixedPoint) -> MultiPoly:
    """Standard-chamber restriction at h = 1, over the a-variables alone.

    Every factor of every summand is homogeneous in (a, h) jointly and the
    restriction is homogeneous of degree k(n-k), so the h = 1 slice (one
    variable lighter) determines it.
    """
    n, k = p.n, p.k
    vars = a_only_vars(n)
    acc = LinearFactorSum(vars)
    for sigma in permutations(J.indices):
        dead = False
        num = MultiPoly.const(vars, 1)
        for r, i_r in enumerate(p.indices, start=1):
            j_s = sigma[r - 1]
            if any(alpha == j_s for alpha in range(1, i_r)):
                dead = True
                break
            for alpha in range(1, i_r):
                num = num * MultiPoly.linear(vars, 0, {f"a{alpha}": 1, f"a{j_s}": -1})
            for beta in range(i_r + 1, n + 1):
                if beta == j_s:
                    continue  # the factor is h alone, i.e. 1 at h = 1
                num = num * MultiPoly.linear(vars, 1, {f"a{j_s}": 1, f"a{beta}": -1})
        if dead:
            continue
        den_factors = []
        for l in range(1, k + 1):
            for m in range(l + 1, k + 1):
                tl, tm = sigma[l - 1], sigma[m - 1]
                den_factors.append(MultiPoly.linear(vars, 0, {f"a{tl}": 1, f"a{tm}": -1}))
                den_factors.append(MultiPoly.linear(vars, 1, {f"a{tl}": 1, f"a{tm}": -1}))
        acc.add(num, den_factors)
    value = acc.value()
    if not value.is_polynomial():
        raise NonPolynomialRestriction(
            f"restriction of W({p}) at {J} is not a polynomial: {value}"
        )
    return value.as_polynomial()


@lru_cache(maxsize=None)
def restrict_cached(p: FixedPoint, J: FixedPoint) -> MultiPoly:
    """Standard-chamber restriction, rehomogenized from its h = 1 slice."""
    flat = restrict_h1(p, J)
    n, k = p.n, p.k
    if flat.is_zero():
        return MultiPoly.zero(torus_vars(n))
    return flat.cast(torus_vars(n)).homogenize("h", k * (n - k))


def restrict(w: WeightFunction, J: FixedPoint) -> MultiPoly:
    """The weight function evaluated at t_r = a_{j_r}; always a polynomial.

    Computed summand by summand: each S_k summand has a nonzero denominator
    after the substitution (the j's are distinct), and the sum of summands
    must come out polynomial.
    """
    p, c = w.point, w.chamber
    if (J.n, J.k) != (p.n, p.k):
        raise ValueError("restriction point from a different Grassmannian")
    if not c.is_standard():
        inv = c.inverse()
        base = restrict(weight_function(inv.apply_point(p)), inv.apply_point(J))
        return base.relabel(c.relabel_map())
    return restrict_cached(p, J)


class StabClass:
    """A stable envelope class recorded by its fixed-point restrictions."""

    def __init__(
        self,
        point: FixedPoint,
        restrictions: dict[FixedPoint, MultiPoly],
        chamber: Chamber | None = None,
    ):
        self.point = point
        self.chamber = chamber or Chamber.standard(point.n)
        self.restrictions = restrictions

    @classmethod
    def from_weight_function(cls, p: FixedPoint, c: Chamber | None = None) -> "StabClass":
        w = weight_function(p, c)
        values = {J: restrict(w, J) for J in enumerate_fixed_points(p.n, p.k)}
        return cls(p, values, c)

    def __repr__(self) -> str:
        return f"StabClass(point={self.point}, chamber={self.chamber})"


def stab_matrix(n: int, k: int, c: Chamber | None = None) -> dict[FixedPoint, StabClass]:
    """All stable envelope classes, keyed by their fixed point."""
    return {
        p: StabClass.from_weight_function(p, c)
        for p in enumerate_fixed_points(n, k)
    }


def gkm_check(s: StabClass, g: MomentGraph) -> CheckReport:
    """On every moment-graph edge, the edge character divides the difference."""
    report = CheckReport(f"GKM relations for class of {s.point}", kind=THEOREM)
    for e in g.edges:
        diff = s.restrictions[e.lower] - s.restrictions[e.upper]
        name = f"edge {e.lower}-{e.upper}"
        if diff.is_zero() or try_exact_divide(diff, e.char_zero_section) is not None:
            report.add_pass(name)
        else:
            report.add_fail(name, f"(a{e.j} - a{e.i}) does not divide {diff}")
    return report


def axiom_check(s: StabClass, c: Chamber | None = None) -> CheckReport:
    """The three stable-envelope axioms: support, normalization, degree bound.

    Support is tested as vanishing of the restriction at every point not
    above s.point in the componentwise order (relabeled through the chamber);
    normalization as equality with the repelling Euler class; the degree
    bound as total a-degree of off-diagonal restrictions below k(n-k).
    """
    c = c or s.chamber
    p = s.point
    report = CheckReport(f"stable-envelope axioms for class of {p}", kind=THEOREM)
    a_names = [f"a{i}" for i in range(1, p.n + 1)]
    half_dim = p.k * (p.n - p.k)
    for J, value in sorted(s.restrictions.items(), key=lambda kv: kv[0].indices):
        if not chamber_leq(p, J, c):
            report.record(
                f"support: restriction at {J} vanishes",
                value.is_zero(),
                "" if value.is_zero() else f"nonzero restriction {value}",
            )
    diag = s.restrictions[p]
    expected = repelling_euler_class(p, c)
    report.record(
        "normalization: diagonal equals repelling Euler class",
        diag == expected,
        "" if diag == expected else f"{diag} != {expected}",
    )
    for J, value in sorted(s.restrictions.items(), key=lambda kv: kv[0].indices):
        if J == p or value.is_zero():
            continue
        deg_a = value.degree_in_names(a_names)
        report.record(
            f"degree: a-degree at {J} below {half_dim}",
            deg_a < half_dim,
            f"a-degree {deg_a}",
        )
    return report
