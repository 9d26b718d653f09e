"""Universal sigma_k(X, L) polynomials and their values on concrete geometries.

sigma_k(X, L) = sum_{i=0}^{k} C(n+k, k-i) L^(k-i) s_i(X), where the Segre
classes s_i are the graded pieces of the formal inverse of c(X).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Sequence

from .linalg import to_fraction
from .poly import MultiPoly, RingClass, TruncatedRing, integrate_top, parse_poly


class GeometryError(ValueError):
    pass


def chern_vars(m: int) -> tuple[tuple[str, ...], tuple[int, ...]]:
    return tuple(f"c{i}" for i in range(1, m + 1)), tuple(range(1, m + 1))


def segre_from_chern(m: int) -> list[MultiPoly]:
    """s_0..s_m as polynomials in c_1..c_m via s_i = -sum_{j=1}^{i} c_j s_{i-j}."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    vs, ds = chern_vars(m)
    cs = [MultiPoly.var(vs, v, ds) for v in vs]
    s = [MultiPoly.const(vs, 1, ds)]
    for i in range(1, m + 1):
        acc = MultiPoly(vs, {}, ds)
        for j in range(1, i + 1):
            acc = acc - cs[j - 1] * s[i - j]
        s.append(acc)
    return s


@dataclass(frozen=True)
class UniversalClassPoly:
    n: int
    k: int
    poly: MultiPoly

    def render(self) -> str:
        return self.poly.render()


def _sigma_vars(k: int) -> tuple[tuple[str, ...], tuple[int, ...]]:
    cv, cd = chern_vars(k)
    return ("L",) + cv, (1,) + cd


def sigma_universal(n: int, k: int) -> UniversalClassPoly:
    if k < 1:
        raise ValueError("k must be at least 1")
    vs, ds = _sigma_vars(k)
    segre = segre_from_chern(k)
    L = MultiPoly.var(vs, "L", ds)
    total = MultiPoly(vs, {}, ds)
    for i in range(k + 1):
        # lift s_i from (c_1..c_k) into (L, c_1..c_k)
        s_i = MultiPoly(vs, {(0,) + e: c for e, c in segre[i].terms.items()}, ds)
        total = total + comb(n + k, k - i) * (L ** (k - i)) * s_i
    return UniversalClassPoly(n, k, total)


def alternate_sigma4(n: int) -> MultiPoly:
    """sigma_4 with constant term c1^4 - 2 c1^2 c2 + c1 c3 - c2^2 + c4 in place
    of s_4. That constant term does not satisfy s(E)c(E) = 1; the polynomial is
    kept only so tests can show where the two versions differ."""
    vs, ds = _sigma_vars(4)
    text = (f"{comb(n + 4, 4)}*L^4 - {comb(n + 4, 3)}*L^3*c1 + {comb(n + 4, 2)}*L^2*c1^2"
            f" - {comb(n + 4, 2)}*L^2*c2 - {n + 4}*L*c1^3 + {2 * (n + 4)}*L*c1*c2 - {n + 4}*L*c3"
            " + c1^4 - 2*c1^2*c2 + c1*c3 - c2^2 + c4")
    return parse_poly(text, vs, ds)


# -- geometries ------------------------------------------------------------------

@dataclass(frozen=True)
class GeometryDescriptor:
    """kind is one of hypersurface, complete_intersection, product_proj, custom."""

    kind: str
    n: int | None = None
    d: int | None = None
    degrees: tuple = ()
    a: int | None = None
    b: int | None = None
    ring: TruncatedRing | None = field(default=None, compare=False)
    chern: str | None = None
    L: str | None = None

    @classmethod
    def hypersurface(cls, n: int, d: int) -> "GeometryDescriptor":
        return cls("hypersurface", n=n, d=d)

    @classmethod
    def complete_intersection(cls, n: int, degrees: Sequence[int]) -> "GeometryDescriptor":
        return cls("complete_intersection", n=n, degrees=tuple(degrees))

    @classmethod
    def product(cls, a: int, b: int) -> "GeometryDescriptor":
        return cls("product_proj", a=a, b=b)

    @property
    def dim(self) -> int:
        if self.kind == "product_proj":
            return self.a + self.b
        if self.kind == "custom":
            return self.ring.dim
        return self.n

    def validate(self) -> None:
        k = self.kind
        if k == "hypersurface":
            if not _pos(self.n) or not _pos(self.d):
                raise GeometryError("hypersurface needs n >= 1 and d >= 1")
        elif k == "complete_intersection":
            if not _pos(self.n) or not self.degrees or not all(_pos(x) for x in self.degrees):
                raise GeometryError("complete intersection needs n >= 1 and degrees all >= 1")
        elif k == "product_proj":
            if not _pos(self.a) or not _pos(self.b):
                raise GeometryError("product needs a >= 1 and b >= 1")
        elif k == "custom":
            if self.ring is None or self.chern is None or self.L is None:
                raise GeometryError("custom geometry needs ring, chern and L")
        else:
            raise GeometryError(f"unknown geometry kind {k!r}")

    def to_json_obj(self) -> dict:
        if self.kind == "hypersurface":
            return {"kind": self.kind, "n": self.n, "d": self.d}
        if self.kind == "complete_intersection":
            return {"kind": self.kind, "n": self.n, "degrees": list(self.degrees)}
        if self.kind == "product_proj":
            return {"kind": self.kind, "a": self.a, "b": self.b}
        r = self.ring
        return {
            "kind": "custom",
            "generators": [[g.name, g.degree, g.order] for g in r.generators],
            "top_monomial": list(r.top_monomial),
            "top_integral": str(r.top_integral),
            "chern": self.chern,
            "L": self.L,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GeometryDescriptor":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise GeometryError("descriptor must be an object with a 'kind'")
        kind = {"product": "product_proj", "ci": "complete_intersection"}.get(obj["kind"], obj["kind"])
        try:
            if kind == "hypersurface":
                g = cls.hypersurface(obj["n"], obj["d"])
            elif kind == "complete_intersection":
                g = cls.complete_intersection(obj["n"], obj["degrees"])
            elif kind == "product_proj":
                g = cls.product(obj["a"], obj["b"])
            elif kind == "custom":
                ring = TruncatedRing([tuple(x) for x in obj["generators"]], obj["top_monomial"],
                                     to_fraction(obj.get("top_integral", 1)))
                g = cls("custom", ring=ring, chern=obj["chern"], L=obj["L"])
            else:
                raise GeometryError(f"unknown geometry kind {obj['kind']!r}")
        except KeyError as e:
            raise GeometryError(f"descriptor is missing {e.args[0]!r}") from None
        except (TypeError, ValueError) as e:
            if isinstance(e, GeometryError):
                raise
            raise GeometryError(str(e)) from None
        g.validate()
        return g

    @classmethod
    def from_json(cls, text: str) -> "GeometryDescriptor":
        try:
            return cls.from_json_obj(json.loads(text))
        except json.JSONDecodeError as e:
            raise GeometryError(f"invalid JSON: {e}") from None


def _pos(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 1


def _inverse_linear(ring: TruncatedRing, x: RingClass) -> RingClass:
    """(1 + x)^(-1) as a geometric series; x must be nilpotent."""
    out = ring.one()
    term = ring.one()
    for _ in range(ring.dim):
        term = term * (-x)
        if term.is_zero():
            break
        out = out + term
    return out


def chern_of_geometry(g: GeometryDescriptor) -> tuple[TruncatedRing, RingClass, RingClass]:
    """(ring, total Chern class c(X), L) for a descriptor."""
    g.validate()
    if g.kind == "hypersurface":
        ring = TruncatedRing([("h", 1, g.n + 1)], [g.n], g.d)
        h = ring.gen("h")
        c = (1 + h) ** (g.n + 2) * _inverse_linear(ring, g.d * h)
        return ring, c, h
    if g.kind == "complete_intersection":
        ring = TruncatedRing([("h", 1, g.n + 1)], [g.n], prod(g.degrees))
        h = ring.gen("h")
        c = (1 + h) ** (g.n + len(g.degrees) + 1)
        for d in g.degrees:
            c = c * _inverse_linear(ring, d * h)
        return ring, c, h
    if g.kind == "product_proj":
        ring = TruncatedRing([("h1", 1, g.a + 1), ("h2", 1, g.b + 1)], [g.a, g.b], 1)
        h1, h2 = ring.gen("h1"), ring.gen("h2")
        return ring, (1 + h1) ** (g.a + 1) * (1 + h2) ** (g.b + 1), h1 + h2
    ring = g.ring
    return ring, ring.parse(g.chern), ring.parse(g.L)


def chern_classes(ring: TruncatedRing, c: RingClass, m: int) -> list[RingClass]:
    """c_1..c_m, the graded pieces of a total Chern class."""
    return [c.component(i) for i in range(1, m + 1)]


def sigma_class(g: GeometryDescriptor, k: int) -> RingClass:
    n = g.dim
    if k < 1 or k > n:
        raise GeometryError(f"sigma_k needs 1 <= k <= dim X = {n}, got k={k}")
    ring, c, L = chern_of_geometry(g)
    u = sigma_universal(n, k)
    return u.poly.evaluate([L] + chern_classes(ring, c, k))


def segre_class(g: GeometryDescriptor) -> RingClass:
    """Total Segre class s(X), evaluated from the universal s_i."""
    ring, c, _ = chern_of_geometry(g)
    n = ring.dim
    cs = chern_classes(ring, c, n)
    total = ring.one()
    for s in segre_from_chern(n)[1:]:
        total = total + s.evaluate(cs)
    return total


def sigma_pairing(g: GeometryDescriptor, k: int) -> Fraction:
    """The intersection number of sigma_k(X, L) with L^(n-k)."""
    n = g.dim
    if k < 1 or k > n:
        raise GeometryError(f"sigma_k needs 1 <= k <= dim X = {n}, got k={k}")
    _, _, L = chern_of_geometry(g)
    return integrate_top(sigma_class(g, k) * L ** (n - k))
