"""Combinatorics of the torus action on the cotangent bundle of Gr(k,n).

Fixed points are increasing k-subsets of {1..n}; chambers are orderings of
the equivariant parameters; partitions in the (n-k) x k box index the same
fixed points through the map omega.  Tangent/normal weights and the moment
graph are built here as exact polynomials in a_1..a_n and h (the weight of
the fiber-scaling circle).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .exactalg import MultiPoly, VarSet


@lru_cache(maxsize=None)
def torus_vars(n: int, extra: tuple[str, ...] = ()) -> VarSet:
    """The variable set (a_1, ..., a_n, h), optionally with extra leading names."""
    return VarSet(tuple(extra) + tuple(f"a{i}" for i in range(1, n + 1)) + ("h",))


@lru_cache(maxsize=None)
def a_only_vars(n: int) -> VarSet:
    """The equivariant parameters alone; the h = 1 slice of torus_vars."""
    return VarSet(tuple(f"a{i}" for i in range(1, n + 1)))


def a_var(vars: VarSet, i: int) -> MultiPoly:
    return MultiPoly.variable(vars, f"a{i}")


@dataclass(frozen=True)
class FixedPoint:
    """A torus fixed point, labeled by a strictly increasing k-subset of {1..n}."""

    n: int
    k: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if not (0 < self.k < self.n):
            raise ValueError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        if len(self.indices) != self.k:
            raise ValueError(f"expected {self.k} indices, got {self.indices}")
        if any(i < 1 or i > self.n for i in self.indices):
            raise ValueError(f"indices out of range 1..{self.n}: {self.indices}")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"indices must be strictly increasing: {self.indices}")

    @property
    def weight(self) -> int:
        """The index sum i_1 + ... + i_k."""
        return sum(self.indices)

    def complement(self) -> tuple[int, ...]:
        inside = set(self.indices)
        return tuple(v for v in range(1, self.n + 1) if v not in inside)

    def dual(self) -> "FixedPoint":
        """The point with indices reflected by i -> n+1-i."""
        return FixedPoint(self.n, self.k, tuple(sorted(self.n + 1 - i for i in self.indices)))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"


@dataclass(frozen=True)
class Chamber:
    """An ordering a_{perm[0]} <= a_{perm[1]} <= ... <= a_{perm[n-1]}.

    perm is the permutation tau written in one-line notation, tau(i) =
    perm[i-1]; the identity is the standard chamber.
    """

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.perm)}: {self.perm}")

    @classmethod
    def standard(cls, n: int) -> "Chamber":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def is_standard(self) -> bool:
        return self.perm == tuple(range(1, self.n + 1))

    def apply(self, i: int) -> int:
        return self.perm[i - 1]

    def position(self, i: int) -> int:
        """tau^{-1}(i): the rank of a_i in the chamber's increasing order."""
        return self.perm.index(i) + 1

    def inverse(self) -> "Chamber":
        inv = [0] * self.n
        for pos, v in enumerate(self.perm, start=1):
            inv[v - 1] = pos
        return Chamber(tuple(inv))

    def apply_point(self, p: FixedPoint) -> FixedPoint:
        return FixedPoint(p.n, p.k, tuple(sorted(self.apply(i) for i in p.indices)))

    def relabel_map(self) -> dict[str, str]:
        """The substitution a_i -> a_{tau(i)} as a variable-name mapping."""
        return {f"a{i}": f"a{self.apply(i)}" for i in range(1, self.n + 1) if self.apply(i) != i}

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.perm)) + "]"


@dataclass(frozen=True)
class BoxPartition:
    """A partition fitting in the (n-k) x k rectangle: at most n-k parts, each <= k."""

    n: int
    k: int
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.parts):
            raise ValueError(f"negative part in {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {self.parts}")
        if self.parts and self.parts[-1] == 0:
            object.__setattr__(self, "parts", tuple(p for p in self.parts if p > 0))
        if len(self.parts) > self.n - self.k or any(p > self.k for p in self.parts):
            raise ValueError(f"{self.parts} does not fit in a {self.n - self.k} x {self.k} box")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def row(self, r: int) -> int:
        """Length of row r (1-based); zero beyond the last part."""
        return self.parts[r - 1] if 1 <= r <= len(self.parts) else 0

    def boxes(self) -> list[tuple[int, int]]:
        """All (row, col) boxes, 1-based, row-major."""
        return [(r, c) for r, p in enumerate(self.parts, start=1) for c in range(1, p + 1)]

    def contains_box(self, r: int, c: int) -> bool:
        return 1 <= r and 1 <= c <= self.row(r)

    def conjugate(self) -> "BoxPartition":
        """The transposed partition, fitting in the k x (n-k) box."""
        conj = tuple(sum(1 for p in self.parts if p >= c) for c in range(1, self.k + 1))
        return BoxPartition(self.n, self.n - self.k, tuple(p for p in conj if p > 0))

    def box_complement(self) -> "BoxPartition":
        """The 180-degree-rotated complement within the same rectangle."""
        rows = self.n - self.k
        comp = tuple(self.k - self.row(rows + 1 - r) for r in range(1, rows + 1))
        return BoxPartition(self.n, self.k, tuple(p for p in comp if p > 0))

    def outer_corners(self) -> list[tuple[int, int]]:
        """Boxes whose removal leaves a partition (last box of a strictly longer row)."""
        return [
            (r, p)
            for r, p in enumerate(self.parts, start=1)
            if p > 0 and (r == len(self.parts) or p > self.parts[r])
        ]

    def remove_box(self, r: int, c: int) -> "BoxPartition":
        if (r, c) not in self.outer_corners():
            raise ValueError(f"({r},{c}) is not an outer corner of {self.parts}")
        parts = list(self.parts)
        parts[r - 1] -= 1
        return BoxPartition(self.n, self.k, tuple(p for p in parts if p > 0))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "()"


def enumerate_fixed_points(n: int, k: int) -> list[FixedPoint]:
    """All C(n,k) fixed points in lexicographic order of their index tuples."""
    if not (0 < k < n):
        raise ValueError(f"need 0 < k < n, got k={k}, n={n}")
    return [FixedPoint(n, k, c) for c in combinations(range(1, n + 1), k)]


def enumerate_box_partitions(n: int, k: int) -> list[BoxPartition]:
    """All partitions in the (n-k) x k box."""
    rows = n - k
    out: list[BoxPartition] = []

    def rec(prefix: list[int], row: int, limit: int):
        if row > rows:
            out.append(BoxPartition(n, k, tuple(p for p in prefix if p > 0)))
            return
        for p in range(limit, -1, -1):
            rec(prefix + [p], row + 1, p)

    rec([], 1, k)
    return out


def attracting_leq(I: FixedPoint, J: FixedPoint) -> bool:
    """Componentwise comparison of index tuples: i_r <= j_r for all r."""
    if (I.n, I.k) != (J.n, J.k):
        raise ValueError("fixed points from different Grassmannians")
    return all(a <= b for a, b in zip(I.indices, J.indices))


def chamber_leq(I: FixedPoint, J: FixedPoint, c: Chamber) -> bool:
    """attracting_leq after relabeling both points through the chamber's inverse."""
    inv = c.inverse()
    return attracting_leq(inv.apply_point(I), inv.apply_point(J))


def tangent_weight_factors(p: FixedPoint) -> list[MultiPoly]:
    """The 2k(n-k) tangent weights at p: (a_v - a_s) and (a_s - a_v + h)."""
    vars = torus_vars(p.n)
    factors = []
    for s in p.indices:
        for v in p.complement():
            factors.append(MultiPoly.linear(vars, 0, {f"a{v}": 1, f"a{s}": -1}))
            factors.append(MultiPoly.linear(vars, 0, {f"a{s}": 1, f"a{v}": -1, "h": 1}))
    return factors


def tangent_euler_class(p: FixedPoint) -> MultiPoly:
    """Product of all tangent weights at p; degree 2k(n-k)."""
    vars = torus_vars(p.n)
    out = MultiPoly.const(vars, 1)
    for f in tangent_weight_factors(p):
        out = out * f
    return out


def _half_weight_factors(p: FixedPoint, c: Chamber, repelling: bool) -> list[MultiPoly]:
    vars = torus_vars(p.n)
    factors = []
    for s in p.indices:
        for q in p.complement():
            q_first = c.position(q) < c.position(s)
            # zero-section weight a_q - a_s repels iff q precedes s in the chamber
            if q_first == repelling:
                factors.append(MultiPoly.linear(vars, 0, {f"a{q}": 1, f"a{s}": -1}))
            else:
                factors.append(MultiPoly.linear(vars, 0, {f"a{s}": 1, f"a{q}": -1, "h": 1}))
    return factors


def repelling_euler_class(p: FixedPoint, c: Chamber | None = None) -> MultiPoly:
    """Euler class of the repelling half of the tangent space at p."""
    c = c or Chamber.standard(p.n)
    out = MultiPoly.const(torus_vars(p.n), 1)
    for f in _half_weight_factors(p, c, repelling=True):
        out = out * f
    return out


def attracting_euler_class(p: FixedPoint, c: Chamber | None = None) -> MultiPoly:
    """Euler class of the attracting half; complements repelling_euler_class."""
    c = c or Chamber.standard(p.n)
    out = MultiPoly.const(torus_vars(p.n), 1)
    for f in _half_weight_factors(p, c, repelling=False):
        out = out * f
    return out


@dataclass(frozen=True)
class MomentGraphEdge:
    """One edge of the moment graph; lower is the attracting endpoint.

    The two points differ in one index: lower carries i, upper carries j with
    i < j.  The zero-section character is a_j - a_i and the cotangent
    character a_i - a_j + h; they sum to h.
    """

    lower: FixedPoint
    upper: FixedPoint
    i: int
    j: int
    char_zero_section: MultiPoly
    char_cotangent: MultiPoly


@dataclass(frozen=True)
class MomentGraph:
    n: int
    k: int
    vertices: tuple[FixedPoint, ...]
    edges: tuple[MomentGraphEdge, ...]

    def neighbors(self, p: FixedPoint) -> list[FixedPoint]:
        out = []
        for e in self.edges:
            if e.lower == p:
                out.append(e.upper)
            elif e.upper == p:
                out.append(e.lower)
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "vertices": [list(v.indices) for v in self.vertices],
            "edges": [
                {
                    "lower": list(e.lower.indices),
                    "upper": list(e.upper.indices),
                    "zero_section_character": str(e.char_zero_section),
                    "cotangent_character": str(e.char_cotangent),
                }
                for e in self.edges
            ],
        }


def build_moment_graph(n: int, k: int) -> MomentGraph:
    """Vertices are fixed points; edges join points sharing k-1 indices."""
    vars = torus_vars(n)
    points = enumerate_fixed_points(n, k)
    edges = []
    for a, b in combinations(points, 2):
        common = set(a.indices) & set(b.indices)
        if len(common) != k - 1:
            continue
        ia = (set(a.indices) - common).pop()
        ib = (set(b.indices) - common).pop()
        i, j = min(ia, ib), max(ia, ib)
        lower, upper = (a, b) if i in a.indices else (b, a)
        edges.append(
            MomentGraphEdge(
                lower=lower,
                upper=upper,
                i=i,
                j=j,
                char_zero_section=MultiPoly.linear(vars, 0, {f"a{j}": 1, f"a{i}": -1}),
                char_cotangent=MultiPoly.linear(vars, 0, {f"a{i}": 1, f"a{j}": -1, "h": 1}),
            )
        )
    return MomentGraph(n, k, tuple(points), tuple(edges))


def omega(lam: BoxPartition) -> FixedPoint:
    """The fixed point of a box partition: transpose plus the staircase (k, ..., 1)."""
    conj = lam.conjugate().parts
    padded = list(conj) + [0] * (lam.k - len(conj))
    indices = sorted(padded[r] + (lam.k - r) for r in range(lam.k))
    return FixedPoint(lam.n, lam.k, tuple(indices))
