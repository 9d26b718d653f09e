"""Systems of symmetric matrices: fixtures, planted generators and the classifier.

An (n, k)-system is a list of symmetric n x n matrices satisfying the width-k
condition and having zero common kernel. ``detect_special`` looks for the
structure an (n, 4)-system of span rank 4 is known to have when n >= 5: a
hyperplane N' of coefficient space on which every combination has rank <= 2,
all of them killing one (n-2)-dimensional subspace F.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .linalg import (
    Matrix,
    SubspaceBasis,
    SymMatrix,
    common_kernel,
    congruence,
    kernel_basis,
    linear_combination,
    mat_rank,
    span_rank,
    to_fraction,
    vector,
)
from .poly import MultiPoly, det_linear_forms
from .width import Witness, width_k_symbolic

NOT_SPECIAL = "not_special"
UNDETERMINED = "undetermined_over_rationals"


class InvalidSystem(ValueError):
    """Invalid system or parameters."""


@dataclass(frozen=True)
class SymMatrixSystem:
    n: int
    matrices: tuple
    label: str | None = None

    def __post_init__(self):
        if not self.matrices:
            raise InvalidSystem("a system needs at least one matrix")
        if any(m.n != self.n for m in self.matrices):
            raise InvalidSystem(f"all matrices must be {self.n}x{self.n}")

    @classmethod
    def of(cls, matrices: Sequence[SymMatrix], label: str | None = None) -> "SymMatrixSystem":
        matrices = tuple(matrices)
        return cls(matrices[0].n, matrices, label)

    @property
    def r(self) -> int:
        return len(self.matrices)

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i) -> SymMatrix:
        return self.matrices[i]

    def combination(self, w: Sequence) -> SymMatrix:
        """H^w = sum_i w_i H^i."""
        if len(w) != self.r:
            raise InvalidSystem(f"coefficient vector must have length {self.r}")
        return linear_combination(w, self.matrices)

    def extended(self, *extra: SymMatrix) -> "SymMatrixSystem":
        return SymMatrixSystem(self.n, self.matrices + tuple(extra), self.label)

    def to_json_obj(self) -> dict:
        d = {"n": self.n,
             "matrices": [[[str(x) for x in row] for row in m.rows()] for m in self.matrices]}
        if self.label is not None:
            d["label"] = self.label
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj) -> "SymMatrixSystem":
        if not isinstance(obj, dict):
            raise InvalidSystem("system JSON must be an object")
        try:
            n = obj["n"]
            raw = obj["matrices"]
        except KeyError as e:
            raise InvalidSystem(f"missing field {e.args[0]!r}") from None
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InvalidSystem("'n' must be a positive integer")
        if not isinstance(raw, list) or not raw:
            raise InvalidSystem("'matrices' must be a non-empty list")
        mats = []
        for k, m in enumerate(raw, 1):
            if not isinstance(m, list) or len(m) != n or any(not isinstance(r, list) or len(r) != n for r in m):
                raise InvalidSystem(f"matrix {k} is not {n}x{n}")
            try:
                rows = [[_parse_entry(x) for x in r] for r in m]
                mats.append(SymMatrix.from_full(rows))
            except (ValueError, TypeError, ZeroDivisionError) as e:
                raise InvalidSystem(f"matrix {k}: {e}") from None
        label = obj.get("label")
        if label is not None and not isinstance(label, str):
            raise InvalidSystem("'label' must be a string")
        return cls(n, tuple(mats), label)

    @classmethod
    def from_json(cls, text: str) -> "SymMatrixSystem":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidSystem(f"invalid JSON: {e}") from None
        return cls.from_json_obj(obj)


def _parse_entry(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise TypeError(f"entries must be integers or 'p/q' strings, got {x!r}")
    return to_fraction(x)


# -- helpers ---------------------------------------------------------------------

def random_invertible(n: int, rng: random.Random, lo: int = -2, hi: int = 2) -> Matrix:
    while True:
        a = Matrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if mat_rank(a) == n:
            return a


def random_symmetric(n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> SymMatrix:
    return SymMatrix(n, [rng.randint(lo, hi) for _ in range(n * (n + 1) // 2)])


def simultaneous_congruence(s: SymMatrixSystem, a: Matrix) -> SymMatrixSystem:
    if not a.is_invertible():
        raise InvalidSystem("congruence matrix must be invertible")
    return SymMatrixSystem(a.rows, tuple(congruence(a, h) for h in s), s.label)


def scramble(s: SymMatrixSystem, b: Matrix) -> SymMatrixSystem:
    """Replace the matrices by sum_j b_ij H^j (another basis of the same span)."""
    if b.rows != s.r or b.cols != s.r:
        raise InvalidSystem(f"scramble matrix must be {s.r}x{s.r}")
    if not b.is_invertible():
        raise InvalidSystem("scramble matrix is singular")
    return SymMatrixSystem(s.n, tuple(linear_combination(b.row(i), s.matrices) for i in range(s.r)), s.label)


def proportionality_constant(h1: SymMatrix, h2: SymMatrix) -> Fraction | None:
    """c with h2 = c*h1, or None when the two are not proportional."""
    if h1.is_zero():
        raise InvalidSystem("first matrix must be nonzero")
    if h1.n != h2.n:
        raise InvalidSystem("matrices have different sizes")
    p = next(i for i, x in enumerate(h1.upper) if x)
    c = h2.upper[p] / h1.upper[p]
    return c if h1 * c == h2 else None


def is_nk_system(s: SymMatrixSystem, k: int) -> bool:
    if s.r < k or s.n < k:
        raise InvalidSystem(f"an (n,{k})-system needs r >= {k} and n >= {k} (got r={s.r}, n={s.n})")
    return common_kernel(s.matrices).dim == 0 and width_k_symbolic(s.matrices, k).holds


# -- fixtures and planted generators --------------------------------------------

def gen_segre_fourfold() -> SymMatrixSystem:
    """Second fundamental form of P^2 x P^2 in P^8."""
    u = SymMatrix.unit
    return SymMatrixSystem(4, (u(4, 0, 2), u(4, 0, 3), u(4, 1, 2), u(4, 1, 3)), "segre-fourfold")


def gen_lower_bound(n: int, k: int) -> SymMatrixSystem:
    """A basis of Sym^2 of the first k-2 coordinates, padded, plus I_n."""
    if k < 4:
        raise InvalidSystem("the lower-bound construction needs k >= 4")
    if n < k:
        raise InvalidSystem("the lower-bound construction needs n >= k")
    block = [SymMatrix.unit(n, i, j) for i in range(k - 2) for j in range(i, k - 2)]
    return SymMatrixSystem(n, tuple(block) + (SymMatrix.identity(n),), f"lower-bound-n{n}-k{k}")


def gen_normal_form(variant: int) -> SymMatrixSystem:
    """The two n=4 'normal form' quadruples, in the order {H^1, H^4, H^2, H^3}."""
    def sym(entries):
        m = [[0] * 4 for _ in range(4)]
        for (i, j), v in entries.items():
            m[i - 1][j - 1] = m[j - 1][i - 1] = v
        return SymMatrix.from_full(m)

    first = sym({(1, 1): 1})
    second = sym({(2, 2): 1})
    if variant == 1:
        third = sym({(1, 2): 1, (2, 3): 1})
        fourth = sym({(1, 4): 1, (2, 3): 1})
    elif variant == 2:
        third = sym({(1, 2): 1, (3, 3): 1})
        fourth = sym({(1, 4): 1, (3, 3): 1})
    else:
        raise InvalidSystem("normal form variant must be 1 or 2")
    return SymMatrixSystem(4, (first, second, third, fourth), f"normal-form-{variant}")


@dataclass(frozen=True)
class Planted:
    """Hidden data of a planted construction, for test oracles only."""

    a: Matrix
    f: SubspaceBasis
    nprime: SubspaceBasis | None = None
    scramble: Matrix | None = None


def _two_by_two_units(n: int) -> list[SymMatrix]:
    return [SymMatrix.unit(n, 0, 0), SymMatrix.unit(n, 0, 1), SymMatrix.unit(n, 1, 1)]


def _planted_f(a: Matrix) -> SubspaceBasis:
    # A S A^t u = 0 with S supported on the 2x2 block  <=>  (A^t u)_1 = (A^t u)_2 = 0
    return kernel_basis(Matrix.from_rows([a.col(0), a.col(1)]))


def plant_width3_triple(n: int, seed: int) -> tuple[SymMatrixSystem, Planted]:
    if n < 3:
        raise InvalidSystem("width-3 triples need n >= 3")
    rng = random.Random(seed)
    a = random_invertible(n, rng)
    ms = tuple(congruence(a, s) for s in _two_by_two_units(n))
    return SymMatrixSystem(n, ms, f"width3-triple-n{n}-s{seed}"), Planted(a, _planted_f(a))


def gen_width3_triple(n: int, seed: int) -> SymMatrixSystem:
    return plant_width3_triple(n, seed)[0]


def plant_special(n: int, seed: int) -> tuple[SymMatrixSystem, Planted]:
    """Three matrices on a common 2-plane plus one nonsingular one, congruent
    by a random A and then scrambled by a random B."""
    if n < 5:
        raise InvalidSystem("planted special systems need n >= 5")
    rng = random.Random(seed)
    a = random_invertible(n, rng)
    while True:
        d = random_symmetric(n, rng, -2, 2) + SymMatrix.identity(n) * rng.choice([-3, 3])
        if d.rank() == n:
            break
    inner = _two_by_two_units(n) + [d]
    hs = [congruence(a, s) for s in inner]
    b = random_invertible(4, rng)
    scrambled = SymMatrixSystem(n, tuple(hs), None)
    s = scramble(scrambled, b)
    # sum_i w_i (B H)_i = sum_j (B^t w)_j H_j, so N' = {w : (B^t w)_4 = 0}
    nprime = kernel_basis(Matrix.from_rows([b.col(3)]))
    s = SymMatrixSystem(n, s.matrices, f"special-n{n}-s{seed}")
    return s, Planted(a, _planted_f(a), nprime, b)


def gen_special(n: int, seed: int) -> SymMatrixSystem:
    return plant_special(n, seed)[0]


# -- low-rank locus and special structure -----------------------------------------

def _w_vars(r: int) -> tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(r))


def symbolic_combination(s: SymMatrixSystem) -> list[list[MultiPoly]]:
    """The n x n matrix H^w with entries linear forms in w1..wr."""
    vs = _w_vars(s.r)
    return [[MultiPoly.linear(vs, [h[i, j] for h in s]) for j in range(s.n)] for i in range(s.n)]


def low_rank_locus_minors(s: SymMatrixSystem) -> list[MultiPoly]:
    """All 3x3 minors of H^w as cubics in w (row subsets outer, column subsets inner)."""
    if s.n < 3:
        return []
    hw = symbolic_combination(s)
    subsets = list(itertools.combinations(range(s.n), 3))
    cache: dict = {}
    out = []
    for rows in subsets:
        for cols in subsets:
            key = (rows, cols) if rows <= cols else (cols, rows)  # H^w is symmetric
            if key not in cache:
                cache[key] = det_linear_forms([[hw[i][j] for j in cols] for i in rows])
            out.append(cache[key])
    return out


@dataclass
class SpecialStructure:
    nprime_basis: tuple  # coefficient vectors spanning N'
    f_basis: SubspaceBasis
    congruence_a: Matrix
    linear_form: tuple  # N' = ker(linear_form)

    def nprime(self) -> SubspaceBasis:
        return SubspaceBasis.span(len(self.linear_form), self.nprime_basis)

    def to_dict(self) -> dict:
        return {
            "linear_form": [str(x) for x in self.linear_form],
            "nprime_basis": [[str(x) for x in v] for v in self.nprime_basis],
            "f_basis": [[str(x) for x in v] for v in self.f_basis.vectors],
            "f_dim": self.f_basis.dim,
            "congruence_a": [[str(x) for x in r] for r in self.congruence_a.tolist()],
        }


def _complement_rows(f: SubspaceBasis, n: int, count: int) -> list[tuple]:
    """First standard basis vectors, in order, that extend f to a larger space."""
    chosen: list[tuple] = []
    current = SubspaceBasis.span(n, f.vectors)
    for i in range(n):
        if len(chosen) == count:
            break
        e = tuple(Fraction(int(i == j)) for j in range(n))
        if not current.contains(e):
            chosen.append(e)
            current = SubspaceBasis.span(n, list(current.vectors) + [e])
    return chosen


def special_from_hyperplane(s: SymMatrixSystem, ell: Sequence) -> SpecialStructure | None:
    """Build the structure for N' = ker(ell), or None if F is not (n-2)-dimensional."""
    ell = vector(ell)
    nprime = kernel_basis(Matrix.from_rows([ell]))
    hs = [s.combination(w) for w in nprime.vectors]
    f = common_kernel(hs) if hs else SubspaceBasis(s.n, ())
    if f.dim != s.n - 2:
        return None
    a = Matrix.from_rows(_complement_rows(f, s.n, 2) + list(f.vectors))
    return SpecialStructure(nprime.vectors, f, a, ell)


_x = sympy.Symbol("x")


def _to_sympy(p: MultiPoly) -> sympy.Poly:
    return sympy.Poly.from_dict(
        {e: sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for e, c in p.terms.items()},
        _x, domain=sympy.QQ,
    )


def _line_gcd(p: SymMatrix, q: SymMatrix) -> sympy.Poly | None:
    """gcd of all 3x3 minors of x*P + Q (None if they all vanish)."""
    n = p.n
    m = [[MultiPoly(("x",), {(1,): p[i, j], (0,): q[i, j]}) for j in range(n)] for i in range(n)]
    g = None
    subsets = list(itertools.combinations(range(n), 3))
    for rows in subsets:
        for cols in subsets:
            if cols < rows:
                continue
            d = det_linear_forms([[m[i][j] for j in cols] for i in rows])
            if d.is_zero():
                continue
            sp = _to_sympy(d)
            g = sp if g is None else sympy.gcd(g, sp)
            if g.degree() == 0:
                return g
    return g


def detect_special(s: SymMatrixSystem, seed: int = 0):
    """Look for a rational hyperplane N' of coefficient space carrying the
    special structure.

    Returns a :class:`SpecialStructure`, ``NOT_SPECIAL`` when no linear form
    over C can work, or ``UNDETERMINED`` when only irrational candidates remain.

    A linear form ell with every 3x3 minor of H^w vanishing on ker(ell) divides
    each minor. Pick p0 with rank(H^{p0}) >= 3 (so ell(p0) != 0) and a basis
    p0, q_1..q_{r-1}; restricted to the line x*p0 + q_i, ell becomes
    x*ell(p0) + ell(q_i), so -ell(q_i)/ell(p0) is a root of the gcd G_i of the
    restricted minors. Every rational candidate is enumerated; if some G_i has
    no roots at all the structure is impossible, and if all roots are rational
    the enumeration is exhaustive.
    """
    if s.n < 3:
        raise InvalidSystem("special structure needs n >= 3")
    r = s.r
    rng = random.Random(seed)
    if r == 1:
        return NOT_SPECIAL  # N' would be {0}

    p0 = None
    for attempt in range(60):
        box = 1 if attempt < 20 else 5
        cand = [rng.randint(-box, box) for _ in range(r)]
        if any(cand) and s.combination(cand).rank() >= 3:
            p0 = cand
            break
    if p0 is None:
        if all(m.is_zero() for m in low_rank_locus_minors(s)):
            # every combination has rank <= 2: any hyperplane passes the rank test
            for i in reversed(range(r)):
                ell = [int(j == i) for j in range(r)]
                found = special_from_hyperplane(s, ell)
                if found is not None:
                    return found
            return NOT_SPECIAL
        return UNDETERMINED  # pragma: no cover - random search missed a rank>=3 point

    while True:
        qs = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r - 1)]
        basis = Matrix.from_rows([p0] + qs)
        if basis.is_invertible():
            break

    p_mat = s.combination(p0)
    root_lists = []
    exhaustive = True
    for q in qs:
        g = _line_gcd(p_mat, s.combination(q))
        if g is None or g.degree() == 0:
            return NOT_SPECIAL
        roots = g.ground_roots()
        if sum(roots.values()) != g.degree():
            exhaustive = False
        root_lists.append(sorted(Fraction(int(x.p), int(x.q)) for x in roots))

    inv = basis.inverse()
    for choice in itertools.product(*root_lists):
        values = (Fraction(1),) + tuple(-x for x in choice)
        ell = inv @ values  # basis @ ell = values
        found = special_from_hyperplane(s, ell)
        if found is not None:
            return found
    return NOT_SPECIAL if exhaustive else UNDETERMINED


# -- classifier ---------------------------------------------------------------------

@dataclass
class ClassifyReport:
    n: int
    r: int
    span_rank: int
    common_kernel_dim: int
    nondegenerate: bool
    width: dict = field(default_factory=dict)        # k -> bool
    witnesses: dict = field(default_factory=dict)    # k -> Witness
    is_nk_system: dict = field(default_factory=dict)  # k -> bool
    special: object = None  # SpecialStructure | NOT_SPECIAL | UNDETERMINED | None (not attempted)

    def to_dict(self) -> dict:
        if isinstance(self.special, SpecialStructure):
            special = {"status": "special", **self.special.to_dict()}
        elif self.special is None:
            special = {"status": "not_attempted"}
        else:
            special = {"status": self.special}
        return {
            "n": self.n,
            "r": self.r,
            "span_rank": self.span_rank,
            "common_kernel_dim": self.common_kernel_dim,
            "nondegenerate": self.nondegenerate,
            "width": {str(k): v for k, v in self.width.items()},
            "witnesses": {str(k): w.to_dict() for k, w in self.witnesses.items()},
            "is_nk_system": {str(k): v for k, v in self.is_nk_system.items()},
            "special": special,
        }


def classify(s: SymMatrixSystem, seed: int = 0) -> ClassifyReport:
    ck = common_kernel(s.matrices).dim
    rep = ClassifyReport(s.n, s.r, span_rank(s.matrices), ck, ck == 0)
    for k in range(2, min(s.r, s.n) + 1):
        wr = width_k_symbolic(s.matrices, k)
        rep.width[k] = wr.holds
        if wr.witness is not None:
            rep.witnesses[k] = wr.witness
        rep.is_nk_system[k] = wr.holds and rep.nondegenerate
    if s.r >= 4 and rep.width.get(4):
        rep.special = detect_special(s, seed)
    return rep


__all__ = [
    "ClassifyReport", "InvalidSystem", "NOT_SPECIAL", "Planted", "SpecialStructure", "SymMatrixSystem",
    "UNDETERMINED", "Witness", "classify", "detect_special", "gen_lower_bound",
    "gen_normal_form", "gen_segre_fourfold", "gen_special", "gen_width3_triple",
    "is_nk_system", "low_rank_locus_minors", "plant_special", "plant_width3_triple",
    "proportionality_constant", "random_invertible", "random_symmetric", "scramble",
    "simultaneous_congruence", "special_from_hyperplane", "symbolic_combination",
]
