"""Sparse multivariate polynomials over Q and truncated graded rings.

A :class:`TruncatedRing` only knows monomial relations ``g**m_g = 0``, which
covers Q[h]/(h^(n+1)) and products of projective spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import to_fraction


class VariableMismatch(ValueError):
    pass


def _coerce(c):
    # ints stay ints (fast path for integer work); everything else is a Fraction
    if isinstance(c, int) and not isinstance(c, bool):
        return c
    c = to_fraction(c)
    return c.numerator if c.denominator == 1 else c


class MultiPoly:
    """Polynomial with exact coefficients in a fixed, ordered variable list.

    ``degrees`` assigns a weight to each variable (default 1); it only affects
    grading and the print order, never arithmetic.
    """

    __slots__ = ("variables", "degrees", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None,
                 degrees: Sequence[int] | None = None):
        self.variables = tuple(variables)
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(self.variables)
        if len(self.degrees) != len(self.variables):
            raise ValueError("one degree per variable")
        clean = {}
        nv = len(self.variables)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nv:
                raise ValueError("exponent vector length must match the variable count")
            c = _coerce(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    # constructors
    @classmethod
    def _raw(cls, variables, degrees, terms) -> "MultiPoly":
        p = cls.__new__(cls)
        p.variables = variables
        p.degrees = degrees
        p.terms = terms
        return p

    @classmethod
    def const(cls, variables: Sequence[str], c, degrees=None) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c}, degrees)

    @classmethod
    def var(cls, variables: Sequence[str], name: str, degrees=None) -> "MultiPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1}, degrees)

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence, degrees=None) -> "MultiPoly":
        nv = len(variables)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * nv
                e[i] = 1
                terms[tuple(e)] = c
        return cls(variables, terms, degrees)

    def zero(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, self.degrees, {})

    def one(self) -> "MultiPoly":
        return MultiPoly.const(self.variables, 1, self.degrees)

    # arithmetic
    def _check(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise VariableMismatch(f"variables differ: {self.variables} vs {other.variables}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.variables, other, self.degrees)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.variables, self.degrees, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, self.degrees, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = _coerce(other)
            if not c:
                return self.zero()
            return MultiPoly._raw(self.variables, self.degrees, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return MultiPoly._raw(self.variables, self.degrees, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def weight(self, e: Sequence[int]) -> int:
        return sum(a * d for a, d in zip(e, self.degrees))

    def total_degree(self) -> int:
        return max((self.weight(e) for e in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ws = {self.weight(e) for e in self.terms}
        if not ws:
            return True
        if len(ws) != 1:
            return False
        return degree is None or ws == {degree}

    def coefficient(self, e: Sequence[int]) -> Fraction:
        return Fraction(self.terms.get(tuple(e), 0))

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        return MultiPoly._raw(self.variables, self.degrees,
                              {e: c for e, c in self.terms.items() if self.weight(e) == degree})

    def evaluate(self, values: Sequence | Mapping):
        """Substitute values for the variables. Values may be numbers or any
        ring elements supporting ``+``, ``*`` and ``**`` with scalars."""
        if isinstance(values, Mapping):
            values = [values[v] for v in self.variables]
        if len(values) != len(self.variables):
            raise VariableMismatch("one value per variable")
        total = None
        for e, c in self.sorted_terms():
            term = None
            for v, a in zip(values, e):
                if a:
                    f = v ** a
                    term = f if term is None else term * f
            term = c if term is None else term * c
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def sorted_terms(self) -> list:
        """Terms in weighted graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (self.weight(t[0]), t[0]), reverse=True)

    # text
    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if a == 1 else f"{v}^{a}" for v, a in zip(self.variables, e) if a
            )
            c = Fraction(c)
            neg = c < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    __str__ = render

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r}, vars={self.variables})"


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, variables: Sequence[str], degrees=None) -> MultiPoly:
    """Parse the rendered form, e.g. ``"15*L^2 - 6*L*c1 + 1/2*c2"``."""
    variables = tuple(variables)
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    p = MultiPoly(variables, {}, degrees)
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(sign)
        e = [0] * len(variables)
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"bad term {m.group(2)!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in variables:
                raise VariableMismatch(f"unknown variable {name!r}")
            e[variables.index(name)] += int(power) if power else 1
        p = p + MultiPoly(variables, {tuple(e): coeff}, degrees)
    return p


def det_linear_forms(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Exact determinant of a square matrix of polynomials.

    Expands row by row over subsets of used columns, so a k x k matrix costs
    k * 2^(k-1) polynomial products.
    """
    k = len(m)
    if any(len(row) != k for row in m):
        raise ValueError("determinant of a non-square matrix")
    if k == 0:
        raise ValueError("empty matrix")
    first = m[0][0]
    layer = {0: first.one()}
    for i in range(k):
        nxt: dict = {}
        for used, acc in layer.items():
            for c in range(k):
                bit = 1 << c
                if used & bit:
                    continue
                entry = m[i][c]
                if entry.is_zero():
                    continue
                term = acc * entry
                if bin(used >> (c + 1)).count("1") & 1:
                    term = -term
                key = used | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        layer = nxt
    return layer.get((1 << k) - 1, first.zero())


def minors(m: Sequence[Sequence[MultiPoly]], size: int) -> Iterable[tuple[tuple, tuple, MultiPoly]]:
    """All size x size minors of a rectangular polynomial matrix."""
    nr, nc = len(m), len(m[0])
    for rows in combinations(range(nr), size):
        for cols in combinations(range(nc), size):
            yield rows, cols, det_linear_forms([[m[r][c] for c in cols] for r in rows])


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    order: int  # name**order == 0


class TruncatedRing:
    """Q[g_1, ..., g_s] / (g_i ** m_i) with a distinguished top monomial."""

    def __init__(self, generators: Sequence[Generator | tuple], top_monomial: Sequence[int],
                 top_integral=1):
        self.generators = tuple(g if isinstance(g, Generator) else Generator(*g) for g in generators)
        for g in self.generators:
            if g.degree < 1 or g.order < 1:
                raise ValueError(f"bad generator {g}")
        self.top_monomial = tuple(top_monomial)
        if len(self.top_monomial) != len(self.generators):
            raise ValueError("top monomial needs one exponent per generator")
        if any(a >= g.order for a, g in zip(self.top_monomial, self.generators)):
            raise ValueError("top monomial is killed by the relations")
        self.top_integral = to_fraction(top_integral)
        self.variables = tuple(g.name for g in self.generators)
        self.degrees = tuple(g.degree for g in self.generators)
        self.dim = sum(a * d for a, d in zip(self.top_monomial, self.degrees))

    def _key(self):
        return (self.generators, self.top_monomial, self.top_integral)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}^{g.order}" for g in self.generators)
        return f"TruncatedRing({gens}; top={self.top_monomial}, integral={self.top_integral})"

    def poly(self, terms=None) -> MultiPoly:
        return MultiPoly(self.variables, terms or {}, self.degrees)

    def gen(self, name: str) -> "RingClass":
        return ring_reduce(self, MultiPoly.var(self.variables, name, self.degrees))

    def one(self) -> "RingClass":
        return ring_reduce(self, MultiPoly.const(self.variables, 1, self.degrees))

    def zero(self) -> "RingClass":
        return RingClass(self, self.poly())

    def parse(self, text: str) -> "RingClass":
        return ring_reduce(self, parse_poly(text, self.variables, self.degrees))


def ring_reduce(r: TruncatedRing, p: MultiPoly) -> "RingClass":
    """Drop every monomial killed by a nilpotency relation."""
    if p.variables != r.variables:
        unknown = set(p.variables) - set(r.variables)
        if unknown:
            raise VariableMismatch(f"unknown variables {sorted(unknown)}")
        p = _reorder(p, r.variables, r.degrees)
    orders = [g.order for g in r.generators]
    terms = {e: c for e, c in p.terms.items() if all(a < m for a, m in zip(e, orders))}
    return RingClass(r, MultiPoly._raw(r.variables, r.degrees, terms))


def _reorder(p: MultiPoly, variables, degrees) -> MultiPoly:
    idx = [p.variables.index(v) if v in p.variables else None for v in variables]
    terms = {}
    for e, c in p.terms.items():
        terms[tuple(e[i] if i is not None else 0 for i in idx)] = c
    return MultiPoly(variables, terms, degrees)


class RingClass:
    """An element of a :class:`TruncatedRing`, always held in reduced form."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: TruncatedRing, poly: MultiPoly):
        self.ring = ring
        self.poly = poly

    def _lift(self, other) -> "RingClass":
        if isinstance(other, RingClass):
            if other.ring != self.ring:
                raise VariableMismatch("classes live in different rings")
            return other
        return ring_reduce(self.ring, MultiPoly.const(self.ring.variables, other, self.ring.degrees))

    def __add__(self, other) -> "RingClass":
        return RingClass(self.ring, self.poly + self._lift(other).poly)

    __radd__ = __add__

    def __sub__(self, other) -> "RingClass":
        return RingClass(self.ring, self.poly - self._lift(other).poly)

    def __rsub__(self, other) -> "RingClass":
        return self._lift(other) - self

    def __neg__(self) -> "RingClass":
        return RingClass(self.ring, -self.poly)

    def __mul__(self, other) -> "RingClass":
        if isinstance(other, RingClass):
            return ring_reduce(self.ring, self.poly * self._lift(other).poly)
        return RingClass(self.ring, self.poly * other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingClass":
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (RingClass, int, Fraction)):
            return (self - self._lift(other)).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def component(self, degree: int) -> "RingClass":
        return RingClass(self.ring, self.poly.homogeneous_part(degree))

    def render(self) -> str:
        return self.poly.render()

    __str__ = render

    def __repr__(self) -> str:
        return f"RingClass({self.render()!r})"


def integrate_top(c: RingClass) -> Fraction:
    """Coefficient of the top monomial times the ring's top integral."""
    return c.poly.coefficient(c.ring.top_monomial) * c.ring.top_integral
