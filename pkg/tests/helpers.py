"""Random system generators and independent sympy oracles shared by the tests."""

from __future__ import annotations

import itertools
import random

import sympy

from widthk.linalg import SymMatrix, congruence
from widthk.systems import random_invertible, random_symmetric


def block_system(n: int, m: int, r: int, rng: random.Random) -> list[SymMatrix]:
    """r random matrices supported on a common m x m block, then congruent by
    one random invertible matrix. Width-k holds whenever m < k."""
    a = random_invertible(n, rng)
    out = []
    for _ in range(r):
        full = [[0] * n for _ in range(n)]
        for i in range(m):
            for j in range(i, m):
                full[i][j] = full[j][i] = rng.randint(-3, 3)
        out.append(congruence(a, SymMatrix.from_full(full)))
    return out


def mixed_system(i: int) -> tuple[list[SymMatrix], int]:
    """Draw number i of a seeded family with n <= 6, r <= 6, k <= 4, about half
    of which satisfy the width-k condition."""
    rng = random.Random(1000 + i)
    n = rng.randint(2, 6)
    k = rng.randint(2, min(4, n))
    r = rng.randint(k, 6)
    kind = i % 4
    if kind == 0:
        return [random_symmetric(n, rng) for _ in range(r)], k
    m = k if kind == 3 else rng.randint(1, k - 1)
    return block_system(n, m, r, rng), k


def sympy_width_holds(ms: list[SymMatrix], k: int) -> bool:
    """Width-k by brute-force sympy minors of the column matrices."""
    n = ms[0].n
    u = sympy.symbols(f"u1:{n + 1}")
    cols = [sympy.Matrix(m.full().tolist()) * sympy.Matrix(u) for m in ms]
    for idx in itertools.combinations(range(len(ms)), k):
        c = sympy.Matrix.hstack(*(cols[i] for i in idx))
        for rows in itertools.combinations(range(n), k):
            if sympy.expand(c.extract(list(rows), list(range(k))).det()) != 0:
                return False
    return True


def to_sympy(m) -> sympy.Matrix:
    return sympy.Matrix(m.tolist())


def poly_to_sympy(p, symbols: dict):
    """A MultiPoly as a sympy expression, variables looked up by name."""
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else sympy.Integer(c)
        for v, k in zip(p.variables, e):
            term *= symbols[v] ** k
        out += term
    return sympy.expand(out)


def sympy_sigma_on_line(total_chern, n: int, k: int, h):
    """sigma_k for a geometry whose cohomology is Q[h]/(h^(n+1)) and whose L is h.

    Computed with sympy power series, independently of the package's ring code.
    """
    t = sympy.Symbol("t")
    c_t = sympy.expand(total_chern.subs(h, t))
    inv = sympy.series(1 / c_t, t, 0, n + 1).removeO()
    s = [inv.coeff(t, i) for i in range(k + 1)]
    sig = sum(sympy.binomial(n + k, k - i) * s[i] for i in range(k + 1))
    return sympy.expand(sig * h ** k) if k <= n else sympy.Integer(0)
