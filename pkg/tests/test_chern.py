from __future__ import annotations

import json

import pytest
import sympy
from hypothesis import given, strategies as st

from helpers import poly_to_sympy, sympy_sigma_on_line
from widthk.chern import (
    GeometryDescriptor,
    GeometryError,
    chern_classes,
    chern_of_geometry,
    segre_class,
    segre_from_chern,
    sigma_class,
    sigma_pairing,
    sigma_universal,
)

C1, C2, C3 = sympy.symbols("c1 c2 c3")
H = sympy.Symbol("h")


def geometries():
    out = [GeometryDescriptor.hypersurface(n, d) for n in range(1, 6) for d in range(1, 5)]
    out += [GeometryDescriptor.complete_intersection(n, (d1, d2)) for n in range(2, 5)
            for d1 in range(1, 4) for d2 in range(1, 4)]
    out += [GeometryDescriptor.product(a, b) for a in range(1, 4) for b in range(1, 4)]
    return out


def test_segre_examples():
    s = segre_from_chern(3)
    syms = {"c1": C1, "c2": C2, "c3": C3}
    assert poly_to_sympy(s[1], syms) == -C1
    assert poly_to_sympy(s[2], syms) == C1**2 - C2
    assert poly_to_sympy(s[3], syms) == sympy.expand(-(C1**3 - 2 * C1 * C2 + C3))


@given(st.integers(1, 7))
def test_segre_inverts_chern(m):
    # (sum c_i)(sum s_i) = 1 degree by degree
    s = segre_from_chern(m)
    vs = s[0].variables
    c = [s[0].one()] + [s[0].var(vs, v, s[0].degrees) for v in vs]
    for d in range(1, m + 1):
        assert sum((c[j] * s[d - j] for j in range(d + 1)), s[0].zero()).is_zero()


def test_sigma_universal_examples():
    assert sigma_universal(4, 2).render() == "15*L^2 - 6*L*c1 + c1^2 - c2"
    assert sigma_universal(3, 1).render() == "4*L - c1"
    assert sigma_universal(2, 3).render() == "10*L^3 - 10*L^2*c1 + 5*L*c1^2 - 5*L*c2 - c1^3 + 2*c1*c2 - c3"
    with pytest.raises(ValueError):
        sigma_universal(3, 0)


@given(st.integers(1, 8), st.integers(1, 5))
def test_sigma_universal_is_weighted_homogeneous(n, k):
    assert sigma_universal(n, k).poly.is_homogeneous(k)


def test_chern_of_geometry_examples():
    ring, c, L = chern_of_geometry(GeometryDescriptor.hypersurface(2, 1))
    h = ring.gen("h")
    assert c == (1 + h) ** 3 and L == h
    ring, c, _ = chern_of_geometry(GeometryDescriptor.product(2, 2))
    assert c.component(1) == ring.parse("3*h1 + 3*h2")
    _, c, _ = chern_of_geometry(GeometryDescriptor.hypersurface(3, 5))
    assert c.component(1).is_zero()


@pytest.mark.parametrize("g", geometries(), ids=lambda g: json.dumps(g.to_json_obj()))
def test_chern_times_segre_is_one(g):
    ring, c, _ = chern_of_geometry(g)
    assert c * segre_class(g) == ring.one()


def test_sigma_class_examples():
    assert sigma_class(GeometryDescriptor.hypersurface(2, 3), 2).is_zero()
    assert sigma_class(GeometryDescriptor.complete_intersection(3, (2, 2)), 3).is_zero()
    assert sigma_class(GeometryDescriptor.product(2, 2), 4).is_zero()
    with pytest.raises(GeometryError):
        sigma_class(GeometryDescriptor.hypersurface(2, 3), 3)


@pytest.mark.parametrize("n,degrees", [(2, (3,)), (3, (2,)), (4, (2, 3)), (3, (1, 2)), (5, (2, 2, 2))])
def test_sigma_class_matches_series_oracle(n, degrees):
    g = GeometryDescriptor.complete_intersection(n, degrees)
    total = (1 + H) ** (n + len(degrees) + 1)
    for d in degrees:
        total = total / (1 + d * H)
    for k in range(1, n + 1):
        assert poly_to_sympy(sigma_class(g, k).poly, {"h": H}) == sympy_sigma_on_line(total, n, k, H)


def test_sigma_pairing_examples():
    # sigma_1 = 4h - c1 = 4h - 3h on a quadric threefold, and the quadric has degree 2
    assert sigma_pairing(GeometryDescriptor.hypersurface(3, 2), 1) == 2
    assert sigma_pairing(GeometryDescriptor.hypersurface(2, 3), 2) == 0
    assert sigma_pairing(GeometryDescriptor.product(2, 2), 1) == 12
    with pytest.raises(GeometryError):
        sigma_pairing(GeometryDescriptor.product(1, 1), 3)


def test_product_pairings_against_oracle():
    h1, h2 = sympy.symbols("h1 h2")
    c = sympy.expand((1 + h1) ** 3 * (1 + h2) ** 3)
    L = h1 + h2
    g = GeometryDescriptor.product(2, 2)
    t = sympy.Symbol("t")
    graded = sympy.expand(c.subs({h1: t * h1, h2: t * h2}))
    inv = sympy.series(1 / graded, t, 0, 5).removeO()
    for k in range(1, 5):
        sig = sum(sympy.binomial(4 + k, k - i) * L ** (k - i) * inv.coeff(t, i) for i in range(k + 1))
        top = sympy.Poly(sympy.expand(sig * L ** (4 - k)), h1, h2)
        assert sigma_pairing(g, k) == top.coeff_monomial(h1**2 * h2**2)


@pytest.mark.parametrize("g", geometries(), ids=lambda g: json.dumps(g.to_json_obj()))
def test_pairings_are_nonnegative(g):
    for k in range(1, g.dim + 1):
        assert sigma_pairing(g, k) >= 0


def test_descriptor_json():
    g = GeometryDescriptor.from_json('{"kind": "hypersurface", "n": 3, "d": 4}')
    assert g == GeometryDescriptor.hypersurface(3, 4)
    assert GeometryDescriptor.from_json_obj({"kind": "ci", "n": 3, "degrees": [2, 2]}).kind == "complete_intersection"
    assert GeometryDescriptor.from_json_obj({"kind": "product", "a": 1, "b": 2}).dim == 3
    for bad in ('{"kind": "hypersurface", "n": 3}', '{"kind": "torus"}', '{"kind": "hypersurface", "n": 0, "d": 2}',
                '[1, 2]', '{'):
        with pytest.raises(GeometryError):
            GeometryDescriptor.from_json(bad)


def test_custom_descriptor_reproduces_product():
    obj = {
        "kind": "custom",
        "generators": [["a", 1, 2], ["b", 1, 3]],
        "top_monomial": [1, 2],
        "top_integral": "1",
        "chern": "1 + 2*a + 3*b + 6*a*b + 3*b^2 + 6*a*b^2",
        "L": "a + b",
    }
    g = GeometryDescriptor.from_json_obj(obj)
    assert g.dim == 3
    assert GeometryDescriptor.from_json_obj(g.to_json_obj()).to_json_obj() == obj
    reference = GeometryDescriptor.product(1, 2)
    for k in range(1, 4):
        assert sigma_pairing(g, k) == sigma_pairing(reference, k)


def test_chern_classes_components():
    ring, c, _ = chern_of_geometry(GeometryDescriptor.hypersurface(2, 2))
    c1, c2 = chern_classes(ring, c, 2)
    assert c1 == ring.parse("2*h") and c2 == ring.parse("2*h^2")
