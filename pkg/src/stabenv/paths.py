"""Weighted box-removal paths and the rational sums they conjecturally equal.

A path to a partition in the (n-k) x k rectangle interleaves an outer-corner
removal order of the partition with one of its box complement.  After each
step the multiset of content indices removed so far defines a linear weight;
the sum over all paths of the reciprocal weight products is conjectured to
equal the equivariant localization sum of the matching fixed point.

The sum is computed by dynamic programming over pairs of remaining shapes:
the removed multiset after a step depends only on what remains, not on the
removal order, so path suffixes sharing a state share their subsum.  A naive
per-path product is kept for cross-checking on small boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exactalg import (
    LinearFactorSum,
    MultiPoly,
    RationalFunction,
    rational_limit_at_zero,
)
from .geometry import (
    BoxPartition,
    FixedPoint,
    a_only_vars,
    enumerate_box_partitions,
    omega,
    torus_vars,
)
from .localize import (
    IntegralValue,
    _as_integer,
    integral_via_z_limit,
    lift_h1_value,
    localization_sum,
)
from .reports import CONJECTURE, CheckReport

Box = tuple[int, int]


class ZeroWeightEncountered(ArithmeticError):
    """A path weight vanished identically, making the sum undefined."""


@dataclass(frozen=True)
class BoxPath:
    """A sequence of rectangle boxes covering the (n-k) x k rectangle once."""

    n: int
    k: int
    boxes: tuple[Box, ...]

    def __post_init__(self):
        rows = self.n - self.k
        expected = {(r, c) for r in range(1, rows + 1) for c in range(1, self.k + 1)}
        if set(self.boxes) != expected or len(self.boxes) != len(expected):
            raise ValueError("path must cover every rectangle box exactly once")

    def is_path_to(self, lam: BoxPartition) -> bool:
        """The in-partition subsequence removes lam corner by corner, and the
        complement subsequence does the same for the complement shape."""
        comp = lam.box_complement()
        sub_lam = [b for b in self.boxes if lam.contains_box(*b)]
        sub_comp = [
            _reflect_box(b, self.n, self.k)
            for b in self.boxes
            if not lam.contains_box(*b)
        ]
        return _is_removal_order(lam, tuple(sub_lam)) and _is_removal_order(comp, tuple(sub_comp))


@dataclass(frozen=True)
class WeightedMultiset:
    """Multiplicities of content indices 1..n-1, as accumulated along a path."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.n - 1:
            raise ValueError(f"need {self.n - 1} multiplicities, got {self.counts}")
        if any(c < 0 for c in self.counts):
            raise ValueError("negative multiplicity")

    @classmethod
    def from_boxes(cls, n: int, k: int, boxes: tuple[Box, ...]) -> "WeightedMultiset":
        counts = [0] * (n - 1)
        for r, c in boxes:
            counts[r - c + k - 1] += 1
        return cls(n, tuple(counts))


def _reflect_box(box: Box, n: int, k: int) -> Box:
    """The 180-degree rectangle reflection (r, c) -> (n-k+1-r, k+1-c)."""
    r, c = box
    return (n - k + 1 - r, k + 1 - c)


def reflect_path(path: BoxPath) -> BoxPath:
    """The natural bijection sending paths-to-lam to paths-to-complement."""
    return BoxPath(path.n, path.k, tuple(_reflect_box(b, path.n, path.k) for b in path.boxes))


def _is_removal_order(shape: BoxPartition, own_boxes: tuple[Box, ...]) -> bool:
    if len(own_boxes) != shape.size:
        return False
    current = shape
    for box in own_boxes:
        if box not in current.outer_corners():
            return False
        current = current.remove_box(*box)
    return True


@lru_cache(maxsize=None)
def _removal_orders(parts: tuple[int, ...]) -> tuple[tuple[Box, ...], ...]:
    """All corner-removal orders of a partition, in its own coordinates."""
    if not parts:
        return ((),)
    out = []
    plist = list(parts)
    for r, p in enumerate(plist, start=1):
        if p > 0 and (r == len(plist) or p > plist[r]):
            rest = list(plist)
            rest[r - 1] -= 1
            while rest and rest[-1] == 0:
                rest.pop()
            for tail in _removal_orders(tuple(rest)):
                out.append(((r, p),) + tail)
    return tuple(out)


def standard_tableau_count(parts: tuple[int, ...]) -> int:
    """Number of standard fillings, by the hook length formula."""
    n = sum(parts)
    if n == 0:
        return 1
    hooks = 1
    for r, p in enumerate(parts):
        for c in range(p):
            arm = p - c - 1
            leg = sum(1 for q in parts[r + 1 :] if q > c)
            hooks *= arm + leg + 1
    return factorial(n) // hooks


def enumerate_paths(lam: BoxPartition) -> list[BoxPath]:
    """All paths to lam: interleavings of a removal order of lam with one of
    its complement, complement boxes translated back to rectangle coordinates."""
    n, k = lam.n, lam.k
    comp = lam.box_complement()
    lam_orders = _removal_orders(lam.parts)
    comp_orders = [
        tuple(_reflect_box(b, n, k) for b in order)
        for order in _removal_orders(comp.parts)
    ]
    total = k * (n - k)
    paths: list[BoxPath] = []

    def interleave(prefix: list[Box], a: tuple[Box, ...], ai: int, b: tuple[Box, ...], bi: int):
        if len(prefix) == total:
            paths.append(BoxPath(n, k, tuple(prefix)))
            return
        if ai < len(a):
            prefix.append(a[ai])
            interleave(prefix, a, ai + 1, b, bi)
            prefix.pop()
        if bi < len(b):
            prefix.append(b[bi])
            interleave(prefix, a, ai, b, bi + 1)
            prefix.pop()

    for la in lam_orders:
        for co in comp_orders:
            interleave([], la, 0, co, 0)
    return paths


def multiset_weight(A: WeightedMultiset) -> MultiPoly:
    """The linear weight of a multiset: sum over i of
    h*k_i*(k_i - k_{i+1}) + k_i*(a_{i+1} - a_i), with k's zero past the end."""
    vars = torus_vars(A.n)
    coeffs: dict[str, Fraction | int] = {}
    h_coeff = 0
    for i in range(1, A.n):
        k_i = A.counts[i - 1]
        if k_i == 0:
            continue
        k_next = A.counts[i] if i < A.n - 1 else 0
        h_coeff += k_i * (k_i - k_next)
        coeffs[f"a{i + 1}"] = coeffs.get(f"a{i + 1}", 0) + k_i
        coeffs[f"a{i}"] = coeffs.get(f"a{i}", 0) - k_i
    if h_coeff:
        coeffs["h"] = h_coeff
    return MultiPoly.linear(vars, 0, coeffs)


def path_weight_factors(lam: BoxPartition, path: BoxPath) -> list[MultiPoly]:
    """The weights w(T_1), ..., w(T_N) along one path."""
    n, k = lam.n, lam.k
    out = []
    for j in range(1, len(path.boxes) + 1):
        A = WeightedMultiset.from_boxes(n, k, path.boxes[:j])
        w = multiset_weight(A)
        if w.is_zero():
            raise ZeroWeightEncountered(f"zero weight after {path.boxes[:j]}")
        out.append(w)
    return out


def path_product(lam: BoxPartition, path: BoxPath) -> RationalFunction:
    """The reciprocal product of the weights along one path."""
    vars = torus_vars(lam.n)
    acc = LinearFactorSum(vars)
    acc.add(MultiPoly.const(vars, 1), path_weight_factors(lam, path))
    return acc.value()


def path_sum_naive(lam: BoxPartition) -> RationalFunction:
    """Literal sum of per-path products; reference for small boxes."""
    vars = torus_vars(lam.n)
    acc = LinearFactorSum(vars)
    one = MultiPoly.const(vars, 1)
    for path in enumerate_paths(lam):
        acc.add(one, path_weight_factors(lam, path))
    return acc.value()


# -- dynamic programming over remaining-shape pairs ---------------------------
#
# The weight multiset after each step depends only on the remaining shapes,
# so suffix sums can be shared across all partitions of one rectangle.  All
# weights are homogeneous in (a, h) jointly, and none is a pure h multiple,
# so the whole computation runs one variable lighter at h = 1 and the result
# lifts back uniquely by padding every term with h to the forced degree.


def _a_vars(n: int):
    return a_only_vars(n)


@lru_cache(maxsize=None)
def _rect_multiset(n: int, k: int) -> tuple[int, ...]:
    counts = [0] * (n - 1)
    for r in range(1, n - k + 1):
        for c in range(1, k + 1):
            counts[r - c + k - 1] += 1
    return tuple(counts)


def _remaining_multiset(n: int, k: int, mu: tuple[int, ...], nu: tuple[int, ...]) -> tuple[int, ...]:
    """Content counts still in place: mu sits upper-left, nu lower-right rotated."""
    counts = [0] * (n - 1)
    for r, p in enumerate(mu, start=1):
        for c in range(1, p + 1):
            counts[r - c + k - 1] += 1
    for r, p in enumerate(nu, start=1):
        for c in range(1, p + 1):
            rr, cc = _reflect_box((r, c), n, k)
            counts[rr - cc + k - 1] += 1
    return tuple(counts)


def _shape_children(parts: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = []
    plist = list(parts)
    for r, p in enumerate(plist, start=1):
        if p > 0 and (r == len(plist) or p > plist[r]):
            child = list(plist)
            child[r - 1] -= 1
            while child and child[-1] == 0:
                child.pop()
            out.append(tuple(child))
    return out


@lru_cache(maxsize=None)
def _suffix_sum(n: int, k: int, mu: tuple[int, ...], nu: tuple[int, ...]) -> LinearFactorSum:
    """Sum over completions from the state (mu remaining, nu remaining) of the
    reciprocal weight products of all future steps, computed at h = 1."""
    vars = _a_vars(n)
    acc = LinearFactorSum(vars)
    if not mu and not nu:
        acc.add(MultiPoly.const(vars, 1))
        return acc
    rect = _rect_multiset(n, k)
    for child_mu in _shape_children(mu):
        w = _state_weight_h1(n, k, rect, child_mu, nu)
        acc.add_sum(_suffix_sum(n, k, child_mu, nu), extra_factors=[w])
    for child_nu in _shape_children(nu):
        w = _state_weight_h1(n, k, rect, mu, child_nu)
        acc.add_sum(_suffix_sum(n, k, mu, child_nu), extra_factors=[w])
    return acc


def _removed_multiset(n: int, k: int, mu: tuple[int, ...], nu: tuple[int, ...]) -> WeightedMultiset:
    rect = _rect_multiset(n, k)
    remaining = _remaining_multiset(n, k, mu, nu)
    return WeightedMultiset(n, tuple(f - r for f, r in zip(rect, remaining)))


def _state_weight_h1(n: int, k: int, rect: tuple[int, ...], mu: tuple[int, ...], nu: tuple[int, ...]) -> MultiPoly:
    remaining = _remaining_multiset(n, k, mu, nu)
    removed = tuple(f - r for f, r in zip(rect, remaining))
    w = multiset_weight(WeightedMultiset(n, removed))
    if w.is_zero():
        raise ZeroWeightEncountered(f"zero weight at state ({mu}, {nu})")
    vars = _a_vars(n)
    h_slot = w.vars.index("h")
    terms = {}
    for mono, c in w.terms.items():
        key = tuple(e for i, e in enumerate(mono) if i != h_slot)
        terms[key] = terms.get(key, 0) + c
    return MultiPoly(vars, terms)


def _sub_diagrams(parts: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All partitions contained in the given one."""
    if not parts:
        return [()]
    out = set()
    stack = [parts]
    seen = {parts}
    while stack:
        shape = stack.pop()
        out.add(shape)
        for child in _shape_children(shape):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return sorted(out)


def _shape_parents(parts: tuple[int, ...], bound: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Shapes one addable box above `parts`, still contained in `bound`."""
    out = []
    rows = len(bound)
    plist = list(parts) + [0] * (rows - len(parts))
    for r in range(rows):
        cur = plist[r]
        if cur >= bound[r]:
            continue
        if r > 0 and cur + 1 > plist[r - 1]:
            continue
        parent = list(plist)
        parent[r] = cur + 1
        out.append(tuple(p for p in parent if p > 0))
    return out


@lru_cache(maxsize=None)
def _prefix_sum(
    n: int,
    k: int,
    lam: tuple[int, ...],
    lamc: tuple[int, ...],
    mu: tuple[int, ...],
    nu: tuple[int, ...],
) -> LinearFactorSum:
    """Sum over partial paths from the full state (lam, lamc) down to the
    state (mu, nu) of the reciprocal weight products of the steps taken,
    including the weight of (mu, nu) itself; at h = 1."""
    vars = _a_vars(n)
    acc = LinearFactorSum(vars)
    if mu == lam and nu == lamc:
        acc.add(MultiPoly.const(vars, 1))
        return acc
    inner = LinearFactorSum(vars)
    for parent_mu in _shape_parents(mu, lam):
        inner.add_sum(_prefix_sum(n, k, lam, lamc, parent_mu, nu))
    for parent_nu in _shape_parents(nu, lamc):
        inner.add_sum(_prefix_sum(n, k, lam, lamc, mu, parent_nu))
    rect = _rect_multiset(n, k)
    acc.add_sum(inner, extra_factors=[_state_weight_h1(n, k, rect, mu, nu)])
    return acc


def _h1_path_sum(lam: BoxPartition) -> LinearFactorSum:
    """Meet-in-the-middle assembly of the path sum at h = 1.

    Suffix sums balloon near the root and prefix sums balloon near the
    terminal state, but both stay small at half depth; the full sum is a
    short combination of prefix * suffix products over half-depth states.
    """
    n, k = lam.n, lam.k
    lamc = lam.box_complement().parts
    total_boxes = k * (n - k)
    half = total_boxes // 2
    vars = _a_vars(n)
    acc = LinearFactorSum(vars)
    for mu in _sub_diagrams(lam.parts):
        for nu in _sub_diagrams(lamc):
            removed = (lam.size - sum(mu)) + (sum(lamc) - sum(nu))
            if removed != half:
                continue
            prefix = _prefix_sum(n, k, lam.parts, lamc, mu, nu)
            if prefix.is_zero():
                continue
            suffix = _suffix_sum(n, k, mu, nu)
            num = prefix.numerator() * suffix.numerator()
            den = prefix.den_factors()
            for f, e in suffix.den_factors().items():
                den[f] = den.get(f, 0) + e
            factors = [f for f, e in den.items() for _ in range(e)]
            acc.add(num, factors)
    return acc


@lru_cache(maxsize=None)
def path_sum(lam: BoxPartition) -> RationalFunction:
    """The sum over all paths to lam of reciprocal weight products.

    Identical to the naive per-path sum: the weight after each step depends
    only on the remaining shapes, so path prefixes and suffixes sharing a
    state share their subsums exactly.
    """
    flat = _h1_path_sum(lam)
    return lift_h1_value(flat, lam.n, lam.k * (lam.n - lam.k))


# -- numeric limit of the path sum -------------------------------------------


@lru_cache(maxsize=None)
def _suffix_limit(n: int, k: int, mu: tuple[int, ...], nu: tuple[int, ...]) -> Fraction:
    """The a -> 0 limit of the suffix sum: weights collapse to their h-parts,
    which are strictly positive, so each path term has an honest limit."""
    if not mu and not nu:
        return Fraction(1)
    total = Fraction(0)
    for child_mu in _shape_children(mu):
        w = multiset_weight(_removed_multiset(n, k, child_mu, nu))
        total += _suffix_limit(n, k, child_mu, nu) / w.coefficient(h=1)
    for child_nu in _shape_children(nu):
        w = multiset_weight(_removed_multiset(n, k, mu, child_nu))
        total += _suffix_limit(n, k, mu, child_nu) / w.coefficient(h=1)
    return total


def omega_inverse(p: FixedPoint) -> BoxPartition:
    """The box partition whose fixed point is p."""
    desc = sorted(p.indices, reverse=True)
    conj = tuple(desc[r - 1] - (p.k - r + 1) for r in range(1, p.k + 1))
    lam = BoxPartition(p.n, p.n - p.k, tuple(c for c in conj if c > 0)).conjugate()
    return lam


def integral_via_path_limit(p: FixedPoint) -> IntegralValue:
    """The scaled integral as the nonequivariant limit of the path sum."""
    lam = omega_inverse(p)
    value = _suffix_limit(lam.n, lam.k, lam.parts, lam.box_complement().parts)
    return IntegralValue(p, _as_integer(value, p), method="paths")


# -- conjecture checks ---------------------------------------------------------


DEFAULT_BOX_LIMIT = 9


def _guard_box(n: int, k: int, limit: int | None) -> None:
    limit = DEFAULT_BOX_LIMIT if limit is None else limit
    if k * (n - k) > limit:
        raise ValueError(
            f"box of size {k * (n - k)} exceeds the desk-scale limit {limit}"
        )


def _zh_limit(v: RationalFunction, n: int, k: int) -> Fraction:
    """Scaled limit of a localization-shaped function via a_s = s*z*h, z -> 0."""
    zvars = torus_vars(n, extra=("z",))
    z = MultiPoly.variable(zvars, "z")
    h = MultiPoly.variable(zvars, "h")
    bindings = {f"a{s}": (s * z) * h for s in range(1, n + 1)}
    substituted = v.cast(zvars).substitute(bindings)
    scaled = substituted * h ** (k * (n - k))
    if scaled.num.degree_in("h") > 0 or scaled.den.degree_in("h") > 0:
        raise AssertionError("h fails to cancel from the scaled path sum")
    return rational_limit_at_zero(scaled, "z").const_value()


def conjecture_44_check(n: int, k: int, limit: int | None = None) -> CheckReport:
    """Path sums equal localization sums for every partition in the box, as
    rational functions; their scaled limits equal the integer integrals."""
    _guard_box(n, k, limit)
    report = CheckReport(f"path sums match localization sums on Gr({k},{n})", kind=CONJECTURE)
    for lam in enumerate_box_partitions(n, k):
        point = omega(lam)
        v = path_sum(lam)
        loc = localization_sum(point).value
        report.record(
            f"partition {lam} vs fixed point {point}",
            v == loc,
            "" if v == loc else f"{v} != {loc}",
        )
        lim = _zh_limit(v, n, k)
        expected = integral_via_z_limit(point).scaled_integer
        report.record(
            f"scaled limit of the path sum for {lam} is {expected}",
            lim == expected,
            "" if lim == expected else f"limit {lim}",
        )
    return report


def alpha_map(v: RationalFunction, n: int) -> RationalFunction:
    """The involution a_i -> -a_{n+1-i}, h fixed."""
    mapping = {f"a{i}": f"a{n + 1 - i}" for i in range(1, n + 1)}
    signs = {f"a{i}": -1 for i in range(1, n + 1)}
    return v.relabel(mapping, signs)


def conjecture_45_check(n: int, k: int, limit: int | None = None) -> CheckReport:
    """The path sum of each partition equals the negated-reflected image of
    its complement's path sum."""
    _guard_box(n, k, limit)
    report = CheckReport(
        f"path sums of complementary partitions on Gr({k},{n}) match under the"
        " parameter involution",
        kind=CONJECTURE,
    )
    for lam in enumerate_box_partitions(n, k):
        comp = lam.box_complement()
        lhs = path_sum(lam)
        rhs = alpha_map(path_sum(comp), n)
        report.record(
            f"partition {lam} vs complement {comp}",
            lhs == rhs,
            "" if lhs == rhs else f"{lhs} != {rhs}",
        )
    return report
