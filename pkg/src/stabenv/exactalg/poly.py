"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples (one nonnegative integer per
variable of a fixed :class:`VarSet`) to nonzero rational coefficients.
Coefficients are Python ``int`` when integral and ``Fraction`` otherwise;
the two interoperate and compare equal, so arithmetic stays in fast integer
territory whenever possible.  There is no floating point anywhere in this
module.

The monomial order used for leading terms, canonical signs and string output
is graded lexicographic: compare total degree first, then the exponent tuple
itself (so the first variable of the VarSet dominates lexicographically).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Iterator, Mapping, Union

Coeff = Union[int, Fraction]
Monomial = tuple  # tuple[int, ...], one exponent per variable


class NotDivisible(ArithmeticError):
    """Raised by exact_divide when the divisor does not divide exactly."""


def _norm_coeff(c: Coeff) -> Coeff:
    """Normalize a coefficient: integral Fractions become plain ints."""
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    return c


class VarSet:
    """An ordered set of distinct variable names, fixed for a family of polynomials."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self._index = {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        return self._index[name]

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet({', '.join(self.names)})"


def _grlex_key(mono: Monomial):
    return (sum(mono), mono)


class MultiPoly:
    """Immutable sparse polynomial over a :class:`VarSet`.

    ``terms`` maps exponent tuples to nonzero coefficients.  Do not mutate it.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VarSet, terms: Mapping[Monomial, Coeff]):
        self.vars = vars
        self.terms = {m: _norm_coeff(c) for m, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _make(cls, vars: VarSet, terms: dict) -> "MultiPoly":
        """Trusted constructor: terms already free of zeros, coefficients exact."""
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, vars: VarSet) -> "MultiPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: VarSet, c: Coeff) -> "MultiPoly":
        return cls(vars, {(0,) * len(vars): Fraction(c)})

    @classmethod
    def variable(cls, vars: VarSet, name: str) -> "MultiPoly":
        mono = [0] * len(vars)
        mono[vars.index(name)] = 1
        return cls(vars, {tuple(mono): 1})

    @classmethod
    def linear(cls, vars: VarSet, const: Coeff = 0, coeffs: Mapping[str, Coeff] = {}) -> "MultiPoly":
        """Build const + sum coeffs[name] * name, a convenience for linear forms."""
        n = len(vars)
        terms: dict[Monomial, Coeff] = {}
        if const:
            terms[(0,) * n] = Fraction(const)
        for name, c in coeffs.items():
            if c == 0:
                continue
            mono = [0] * n
            mono[vars.index(name)] = 1
            terms[tuple(mono)] = Fraction(c)
        return cls(vars, terms)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError(f"mismatched variable sets {other.vars} vs {self.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.vars, other)
        return NotImplemented  # type: ignore[return-value]

    # -- predicates and views ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(m) for m in self.terms)

    def const_value(self) -> Fraction:
        """The constant this polynomial equals; raises if it is not constant."""
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ValueError(f"not a constant polynomial: {self}")
        return Fraction(next(iter(self.terms.values())))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(m[i] for m in self.terms)

    def degree_in_names(self, names: Iterable[str]) -> int:
        """Total degree counting only the given variables (0 for others)."""
        if not self.terms:
            return -1
        idx = [self.vars.index(nm) for nm in names]
        return max(sum(m[i] for i in idx) for m in self.terms)

    def leading(self) -> tuple[Monomial, Coeff]:
        """Leading (monomial, coefficient) in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=_grlex_key)
        return m, self.terms[m]

    def coefficient(self, **exps: int) -> Fraction:
        """Coefficient of the monomial with the given exponents (others zero)."""
        mono = [0] * len(self.vars)
        for name, e in exps.items():
            mono[self.vars.index(name)] = e
        return Fraction(self.terms.get(tuple(mono), 0))

    def sorted_terms(self) -> list[tuple[Monomial, Coeff]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return MultiPoly._make(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._make(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly.zero(self.vars)
            return MultiPoly(self.vars, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.vars)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, Coeff] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        return MultiPoly._make(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        return (
            isinstance(other, MultiPoly)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- content and sign --------------------------------------------------

    def content_and_primitive(self) -> tuple[Fraction, "MultiPoly"]:
        """Split into (rational content, primitive part).

        The primitive part has coprime integer coefficients and positive
        leading coefficient; the content carries sign and scale.  The zero
        polynomial yields (0, 0).
        """
        if not self.terms:
            return Fraction(0), self
        den_lcm = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
        g = 0
        for c in self.terms.values():
            g = int_gcd(g, int(c * den_lcm))
        lead = max(self.terms, key=_grlex_key)
        if int(self.terms[lead] * den_lcm) < 0:
            g = -g
        content = Fraction(g, den_lcm)
        prim = MultiPoly(self.vars, {m: int(Fraction(c) / content) for m, c in self.terms.items()})
        return content, prim

    def primitive(self) -> "MultiPoly":
        return self.content_and_primitive()[1] if self.terms else self

    # -- substitution ------------------------------------------------------

    def substitute(self, bindings: Mapping[str, "MultiPoly | Coeff"]) -> "MultiPoly":
        """Substitute polynomials (or constants) for variables, exactly."""
        if not bindings:
            return self
        sub_idx: dict[int, MultiPoly] = {}
        for name, val in bindings.items():
            v = val if isinstance(val, MultiPoly) else MultiPoly.const(self.vars, val)
            if v.vars != self.vars:
                raise ValueError("binding value uses a different variable set")
            sub_idx[self.vars.index(name)] = v
        out = MultiPoly.zero(self.vars)
        pow_cache: dict[tuple[int, int], MultiPoly] = {}
        for mono, c in self.terms.items():
            kept = list(mono)
            factors: list[tuple[int, int]] = []
            for i in sub_idx:
                if mono[i]:
                    factors.append((i, mono[i]))
                    kept[i] = 0
            acc = MultiPoly(self.vars, {tuple(kept): c})
            for i, e in factors:
                p = pow_cache.get((i, e))
                if p is None:
                    p = sub_idx[i] ** e
                    pow_cache[(i, e)] = p
                acc = acc * p
            out = out + acc
        return out

    def relabel(self, mapping: Mapping[str, str], signs: Mapping[str, int] | None = None) -> "MultiPoly":
        """Fast substitution of variables by (signed) variables.

        ``mapping[name] = new_name`` sends the variable to ``new_name`` within
        the same VarSet; ``signs[name] = -1`` additionally negates it.
        Variables absent from the mapping are left alone.
        """
        idx_map = list(range(len(self.vars)))
        sign_of = [1] * len(self.vars)
        for src, dst in mapping.items():
            idx_map[self.vars.index(src)] = self.vars.index(dst)
            if signs and signs.get(src, 1) < 0:
                sign_of[self.vars.index(src)] = -1
        out: dict[Monomial, Coeff] = {}
        for mono, c in self.terms.items():
            new = [0] * len(self.vars)
            s = 1
            for i, e in enumerate(mono):
                if e:
                    new[idx_map[i]] += e
                    if sign_of[i] < 0 and e % 2:
                        s = -s
            m = tuple(new)
            v = out.get(m, 0) + (c if s > 0 else -c)
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        return MultiPoly(self.vars, out)

    def homogenize(self, var: str, degree: int) -> "MultiPoly":
        """Pad every term with powers of `var` up to the given total degree."""
        i = self.vars.index(var)
        out: dict[Monomial, Coeff] = {}
        for mono, c in self.terms.items():
            pad = degree - sum(mono)
            if pad < 0:
                raise ValueError(f"term of degree {sum(mono)} exceeds target {degree}")
            out[mono[:i] + (mono[i] + pad,) + mono[i + 1 :]] = c
        return MultiPoly._make(self.vars, out)

    def cast(self, new_vars: VarSet) -> "MultiPoly":
        """Re-home the polynomial in another variable set by matching names."""
        if new_vars == self.vars:
            return self
        positions = []
        for i, name in enumerate(self.vars.names):
            if name in new_vars:
                positions.append((i, new_vars.index(name)))
            elif any(m[i] for m in self.terms):
                raise ValueError(f"variable {name} is absent from {new_vars}")
        out: dict[Monomial, Coeff] = {}
        width = len(new_vars)
        for mono, c in self.terms.items():
            new = [0] * width
            for old_i, new_i in positions:
                new[new_i] = mono[old_i]
            out[tuple(new)] = c
        return MultiPoly._make(new_vars, out)

    def evaluate(self, values: Mapping[str, Coeff]) -> Fraction:
        """Evaluate at a rational point; every variable must get a value."""
        vals = [Fraction(values[name]) for name in self.vars]
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for v, e in zip(vals, mono):
                if e:
                    term *= v**e
            total += term
        return total

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono, c in self.sorted_terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.vars.names, mono)
                if e
            ]
            mag = abs(c) if isinstance(c, int) else abs(Fraction(c))
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


# -- division and gcd --------------------------------------------------------


def try_exact_divide(num: MultiPoly, den: MultiPoly) -> MultiPoly | None:
    """Return num/den if den divides num exactly, else None."""
    if den.vars != num.vars:
        raise ValueError("mismatched variable sets")
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return num
    if den.is_const():
        inv = 1 / Fraction(den.const_value())
        return num * inv
    if den.total_degree() == 1:
        return _try_divide_by_linear(num, den)
    dm, dc = den.leading()
    rem = dict(num.terms)
    q: dict[Monomial, Coeff] = {}
    while rem:
        m = max(rem, key=_grlex_key)
        qm = tuple(a - b for a, b in zip(m, dm))
        if any(e < 0 for e in qm):
            return None
        qc = _norm_coeff(Fraction(rem[m]) / Fraction(dc))
        q[qm] = qc
        for m2, c2 in den.terms.items():
            mm = tuple(a + b for a, b in zip(qm, m2))
            s = rem.get(mm, 0) - qc * c2
            if s:
                rem[mm] = s
            elif mm in rem:
                del rem[mm]
    return MultiPoly(num.vars, q)


def _try_divide_by_linear(num: MultiPoly, den: MultiPoly) -> MultiPoly | None:
    """Synthetic division by a total-degree-1 divisor.

    Any variable appearing in the divisor has a constant coefficient, so the
    quotient's slices along that variable satisfy a first-order recurrence
    with no leading-term searches: c*q_{i-1} = f_i - q_i * rest.
    """
    v = next(i for m in den.terms for i, e in enumerate(m) if e)
    c = 0
    rest: dict[Monomial, Coeff] = {}
    for m, coeff in den.terms.items():
        if m[v]:
            c = coeff
        else:
            rest[m] = coeff
    # slice the numerator by the exponent of the chosen variable
    slices: dict[int, dict[Monomial, Coeff]] = {}
    for m, coeff in num.terms.items():
        e = m[v]
        slices.setdefault(e, {})[m[:v] + (0,) + m[v + 1 :]] = coeff
    top = max(slices)
    q_slices: dict[int, dict[Monomial, Coeff]] = {}
    carry: dict[Monomial, Coeff] = slices.get(top, {})
    if c == 1:
        scale = lambda d: dict(d)
    elif c == -1:
        scale = lambda d: {m: -cf for m, cf in d.items()}
    else:
        inv_c = 1 / Fraction(c)
        scale = lambda d: {m: _norm_coeff(cf * inv_c) for m, cf in d.items()}
    for e in range(top, 0, -1):
        q = scale(carry)
        if q:
            q_slices[e - 1] = q
        carry = dict(slices.get(e - 1, {}))
        for mq, cq in q.items():
            for mr, cr in rest.items():
                m = tuple(x + y for x, y in zip(mq, mr))
                s = carry.get(m, 0) - cq * cr
                if s:
                    carry[m] = s
                elif m in carry:
                    del carry[m]
    if carry:
        return None
    out: dict[Monomial, Coeff] = {}
    for e, terms in q_slices.items():
        for m, coeff in terms.items():
            out[m[:v] + (e,) + m[v + 1 :]] = coeff
    return MultiPoly._make(num.vars, out)


def exact_divide(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact polynomial division; raises NotDivisible on nonzero remainder."""
    q = try_exact_divide(num, den)
    if q is None:
        raise NotDivisible(f"({den}) does not divide ({num})")
    return q


def _coeffs_wrt(p: MultiPoly, v: int) -> dict[int, MultiPoly]:
    """View p as a univariate polynomial in variable index v with MultiPoly coefficients."""
    out: dict[int, dict[Monomial, Coeff]] = {}
    for mono, c in p.terms.items():
        e = mono[v]
        rest = mono[:v] + (0,) + mono[v + 1 :]
        out.setdefault(e, {})[rest] = c
    return {e: MultiPoly(p.vars, d) for e, d in out.items()}


def _from_coeffs(vars: VarSet, v: int, coeffs: Mapping[int, MultiPoly]) -> MultiPoly:
    terms: dict[Monomial, Coeff] = {}
    for e, poly in coeffs.items():
        for mono, c in poly.terms.items():
            m = mono[:v] + (e,) + mono[v + 1 :]
            terms[m] = c
    return MultiPoly(vars, terms)


def _content_wrt(p: MultiPoly, v: int) -> MultiPoly:
    """gcd of the coefficients of p viewed in the variable with index v."""
    coeffs = list(_coeffs_wrt(p, v).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_const():
            break
        g = _gcd_prim(g, c)
    return g


def _prem(f: MultiPoly, g: MultiPoly, v: int) -> MultiPoly:
    """Pseudo-remainder of f by g in the variable with index v."""
    fc = _coeffs_wrt(f, v)
    gc = _coeffs_wrt(g, v)
    df, dg = max(fc), max(gc)
    lc_g = gc[dg]
    x_pow = [0] * len(f.vars)
    x_pow[v] = 1
    x = MultiPoly(f.vars, {tuple(x_pow): 1})
    r = f
    while not r.is_zero():
        rc = _coeffs_wrt(r, v)
        dr = max(rc)
        if dr < dg:
            break
        r = r * lc_g - (x ** (dr - dg)) * g * rc[dr]
    return r


def _gcd_prim(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """gcd of integer-primitive polynomials, itself primitive, via primitive PRS."""
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.is_const() or g.is_const():
        return MultiPoly.const(f.vars, 1)
    # main variable: present in both with smallest min-degree keeps the PRS short
    best_v, best_deg = -1, None
    for v in range(len(f.vars)):
        dfv = max((m[v] for m in f.terms), default=0)
        dgv = max((m[v] for m in g.terms), default=0)
        if dfv == 0 and dgv == 0:
            continue
        if dfv == 0 or dgv == 0:
            continue
        d = min(dfv, dgv)
        if best_deg is None or d < best_deg:
            best_v, best_deg = v, d
    if best_deg is None:
        # no shared variable: the gcd is the gcd of one side and the other's content
        for v in range(len(f.vars)):
            if any(m[v] for m in f.terms):
                return _gcd_prim(_content_wrt(f, v).primitive(), g)
        raise AssertionError("unreachable: non-constant polynomial with no variables")
    v = best_v
    cont_f = _content_wrt(f, v)
    cont_g = _content_wrt(g, v)
    cont = _gcd_prim(cont_f.primitive(), cont_g.primitive())
    a = exact_divide(f, cont_f).primitive()
    b = exact_divide(g, cont_g).primitive()
    if max(m[v] for m in a.terms) < max(m[v] for m in b.terms):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, v)
        if not r.is_zero():
            if any(m[v] for m in r.terms):
                r = exact_divide(r, _content_wrt(r, v)).primitive()
            else:
                r = MultiPoly.const(a.vars, 1)
        a, b = b, r
    return (cont * a.primitive()).primitive()


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """A gcd over the rationals, normalized primitive with positive leading coefficient.

    gcd(0, p) is the normalization of p; any two nonzero constants have gcd 1.
    """
    if f.vars != g.vars:
        raise ValueError("mismatched variable sets")
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    return _gcd_prim(f.primitive(), g.primitive())
