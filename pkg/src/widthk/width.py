"""Width-k checks for lists of symmetric matrices.

The width-k condition on H^1..H^r asks that for every k-subset and every
vector u the columns H^{i_1} u, ..., H^{i_k} u are linearly dependent. Three
independent routes decide it:

* ``width_k_symbolic`` expands every k x k minor of the column matrix as a
  polynomial in u;
* ``width_k_symmetrized`` builds the symmetrized wedges of the row 1-forms of
  the matrices as alternating tensors with numeric coefficients;
* ``width_k_random`` evaluates at random integer points and reports a
  Schwartz-Zippel failure bound.

A reported failure always carries an exact :class:`Witness`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .linalg import SymMatrix, _check_same_n, _rank_rows, vector
from .poly import MultiPoly, det_linear_forms

RANDOM_BOX = 10**6
_SEARCH_SEED = 0x5EED


class WidthError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    indices: tuple  # 0-based, strictly increasing
    u: tuple

    def to_dict(self) -> dict:
        return {"indices": [i + 1 for i in self.indices], "u": [str(x) for x in self.u]}


@dataclass
class WidthReport:
    k: int
    holds: bool
    mode: str
    witness: Witness | None = None
    failure_probability_bound: Fraction | None = None
    trials: int | None = None
    seed: int | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        d = {"k": self.k, "holds": self.holds, "mode": self.mode,
             "witness": self.witness.to_dict() if self.witness else None}
        if self.mode == "randomized":
            d["trials"] = self.trials
            d["seed"] = self.seed
            b = self.failure_probability_bound
            d["failure_probability_bound"] = None if b is None else str(b)
            d["failure_probability_bound_float"] = None if b is None else float(b)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class WedgePolynomial:
    """k x k minors of the column matrix [H^{i_1}u ... H^{i_k}u], keyed by row subset."""

    indices: tuple
    coefficient_map: dict = field(default_factory=dict)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coefficient_map.values())


def _u_vars(n: int) -> tuple[str, ...]:
    return tuple(f"u{i + 1}" for i in range(n))


def linear_forms(h: SymMatrix) -> list[MultiPoly]:
    """The column H u as n linear forms in u1..un."""
    vs = _u_vars(h.n)
    return [MultiPoly.linear(vs, [h[i, j] for j in range(h.n)]) for i in range(h.n)]


def _validate(ms: Sequence[SymMatrix], k: int) -> None:
    _check_same_n(ms)
    if k < 1:
        raise WidthError("k must be positive")
    if len(ms) < k:
        raise WidthError(f"width-{k} needs at least {k} matrices, got {len(ms)}")


def _validate_indices(ms, indices) -> tuple:
    idx = tuple(indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise WidthError("indices must be strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= len(ms)):
        raise WidthError("index out of range")
    return idx


def column_rank(ms: Sequence[SymMatrix], indices: Sequence[int], u: Sequence) -> int:
    u = vector(u)
    return _rank_rows([ms[i].apply(u) for i in indices], ms[0].n)


def verify_witness(ms: Sequence[SymMatrix], k: int, w: Witness) -> bool:
    """True iff the columns H^i u for i in ``w.indices`` are independent."""
    if len(w.indices) != k:
        return False
    try:
        _validate_indices(ms, w.indices)
    except WidthError:
        return False
    if len(w.u) != ms[0].n:
        return False
    return column_rank(ms, w.indices, w.u) == k


def _lattice_points(n: int) -> Iterator[tuple]:
    """Unit vectors, then nonzero points of {-1,0,1}^n by increasing norm."""
    for i in range(n):
        yield tuple(int(i == j) for j in range(n))
    if n <= 8:
        pts = [p for p in itertools.product((0, 1, -1), repeat=n) if any(p)]
        pts.sort(key=lambda p: (sum(x * x for x in p), [abs(x) for x in p][::-1], [-x for x in p]))
        for p in pts:
            if sum(x * x for x in p) > 1:
                yield p


def find_witness(ms: Sequence[SymMatrix], indices: Sequence[int], *, quick: bool = False,
                 max_random: int = 10_000) -> Witness | None:
    """Search for u making the chosen columns independent.

    Order: unit vectors, small lattice points, then seeded random points. With
    ``quick`` only the first few lattice points are tried (used before the
    symbolic expansion).
    """
    n = ms[0].n
    k = len(indices)
    idx = tuple(indices)
    pts = _lattice_points(n)
    if quick:
        pts = itertools.islice(pts, 2 * n + 4)
    for p in pts:
        if column_rank(ms, idx, p) == k:
            return Witness(idx, vector(p))
    if quick:
        return None
    rng = random.Random(_SEARCH_SEED + 7919 * sum(idx) + n)
    for t in range(max_random):
        box = 3 if t < 50 else RANDOM_BOX
        p = tuple(rng.randint(-box, box) for _ in range(n))
        if column_rank(ms, idx, p) == k:
            return Witness(idx, vector(p))
    return None


def wedge_polynomial(ms: Sequence[SymMatrix], indices: Sequence[int]) -> WedgePolynomial:
    idx = _validate_indices(ms, indices)
    n, k = ms[0].n, len(idx)
    cols = [linear_forms(ms[i]) for i in idx]
    out = WedgePolynomial(idx)
    for rows in itertools.combinations(range(n), k):
        out.coefficient_map[rows] = det_linear_forms([[cols[c][r] for c in range(k)] for r in rows])
    return out


def _int_scaled(h: SymMatrix) -> list[list[int]]:
    den = 1
    for x in h.upper:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in r] for r in h.rows()]


def _symbolic_zero(ms: Sequence[SymMatrix], idx: tuple) -> bool:
    """All k x k minors of the column matrix vanish identically?"""
    n, k = ms[0].n, len(idx)
    vs = _u_vars(n)
    # scaling a matrix does not change whether its columns are dependent
    cols = []
    for i in idx:
        rows = _int_scaled(ms[i])
        cols.append([MultiPoly.linear(vs, rows[r]) for r in range(n)])
    for rows in itertools.combinations(range(n), k):
        if not det_linear_forms([[cols[c][r] for c in range(k)] for r in rows]).is_zero():
            return False
    return True


def width_subset_symbolic(ms: Sequence[SymMatrix], indices: Sequence[int]) -> tuple[bool, Witness | None]:
    """Width condition for one index tuple via symbolic minor expansion."""
    _check_same_n(ms)
    idx = _validate_indices(ms, indices)
    if len(idx) > ms[0].n:
        return True, None
    w = find_witness(ms, idx, quick=True)
    if w is not None:
        return False, w
    if _symbolic_zero(ms, idx):
        return True, None
    w = find_witness(ms, idx)
    if w is None:  # pragma: no cover - a nonzero polynomial cannot vanish on all these points
        raise RuntimeError("nonzero wedge but no witness found")
    return False, w


def _k_exceeds_n(ms, k, mode) -> WidthReport | None:
    if k > ms[0].n:
        return WidthReport(k, True, mode,
                           note=f"k={k} exceeds n={ms[0].n}: any {k} vectors in Q^{ms[0].n} are dependent")
    return None


def width_k_symbolic(ms: Sequence[SymMatrix], k: int) -> WidthReport:
    _validate(ms, k)
    trivial = _k_exceeds_n(ms, k, "symbolic")
    if trivial:
        return trivial
    for idx in itertools.combinations(range(len(ms)), k):
        holds, w = width_subset_symbolic(ms, idx)
        if not holds:
            return WidthReport(k, False, "symbolic", witness=w)
    return WidthReport(k, True, "symbolic")


# -- symmetrized route ---------------------------------------------------------

def _perm_sign(p: Sequence[int]) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def symmetrized_wedges(ms: Sequence[SymMatrix], indices: Sequence[int]) -> dict:
    """Psi_J for every multiset J, as {J: {I: coefficient}}, nonzero entries only.

    Psi_J = (1/k!) sum_pi xi^{a_1}_{j_pi(1)} ^ ... ^ xi^{a_k}_{j_pi(k)}, where
    xi^a_j is row j of H^a read as a 1-form; component I is the coefficient of
    dz^{I_1} ^ ... ^ dz^{I_k}. Exact and slow; the checker uses the integer
    kernel below.
    """
    idx = _validate_indices(ms, indices)
    n, k = ms[0].n, len(idx)
    hs = [ms[i] for i in idx]
    perms = list(itertools.permutations(range(k)))
    out = {}
    for J in itertools.combinations_with_replacement(range(n), k):
        comps = {}
        for I in itertools.combinations(range(n), k):
            total = Fraction(0)
            for pi in perms:
                for sigma in perms:
                    prod = Fraction(_perm_sign(sigma))
                    for m in range(k):
                        prod *= hs[m][I[sigma[m]], J[pi[m]]]
                        if not prod:
                            break
                    total += prod
            if total:
                comps[I] = total / math.factorial(k)
        if comps:
            out[J] = comps
    return out


def _symmetrized_zero(ms: Sequence[SymMatrix], idx: tuple) -> bool:
    n, k = ms[0].n, len(idx)
    hs = [_int_scaled(ms[i]) for i in idx]
    bound = math.factorial(k) ** 2
    for h in hs:
        bound *= max(1, max(abs(x) for r in h for x in r))
    dtype = np.int64 if bound < 2**62 else object
    H = np.array(hs, dtype=dtype)  # (k, n, n)
    Js = np.array(list(itertools.combinations_with_replacement(range(n), k)), dtype=np.intp)
    Is = np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)
    perms = list(itertools.permutations(range(k)))
    signs = [_perm_sign(p) for p in perms]
    # acc[J, I] = sum_pi sum_sigma sgn(sigma) prod_m H[m, I[sigma m], J[pi m]]
    acc = np.zeros((len(Js), len(Is)), dtype=dtype)
    for pi in perms:
        Jp = Js[:, list(pi)]
        for sigma, sg in zip(perms, signs):
            Is_ = Is[:, list(sigma)]
            prod = H[0][Is_[None, :, 0], Jp[:, None, 0]]
            for m in range(1, k):
                prod = prod * H[m][Is_[None, :, m], Jp[:, None, m]]
            if sg > 0:
                acc += prod
            else:
                acc -= prod
    return not np.any(acc != 0)


def width_k_symmetrized(ms: Sequence[SymMatrix], k: int) -> WidthReport:
    _validate(ms, k)
    trivial = _k_exceeds_n(ms, k, "symmetrized")
    if trivial:
        return trivial
    for idx in itertools.combinations(range(len(ms)), k):
        if not _symmetrized_zero(ms, idx):
            w = find_witness(ms, idx)
            if w is None:  # pragma: no cover
                raise RuntimeError("nonzero symmetrized wedge but no witness found")
            return WidthReport(k, False, "symmetrized", witness=w)
    return WidthReport(k, True, "symmetrized")


# -- randomized route ----------------------------------------------------------

def schwartz_zippel_bound(k: int, trials: int, box: int = RANDOM_BOX) -> Fraction:
    """Chance that ``trials`` uniform points of [-box, box]^n all miss a nonzero
    degree-k polynomial."""
    return min(Fraction(1), Fraction(k, 2 * box + 1)) ** trials


def width_k_random(ms: Sequence[SymMatrix], k: int, trials: int, seed: int) -> WidthReport:
    if trials < 1:
        raise WidthError("trials must be positive")
    _validate(ms, k)
    n = ms[0].n
    if k > n:
        rep = _k_exceeds_n(ms, k, "randomized")
        rep.trials, rep.seed, rep.failure_probability_bound = trials, seed, Fraction(0)
        return rep
    rng = random.Random(seed)
    tuples = list(itertools.combinations(range(len(ms)), k))
    for _ in range(trials):
        u = vector(rng.randint(-RANDOM_BOX, RANDOM_BOX) for _ in range(n))
        cols = [m.apply(u) for m in ms]
        for idx in tuples:
            if _rank_rows([cols[i] for i in idx], n) == k:
                w = Witness(idx, u)
                return WidthReport(k, False, "randomized", witness=w, trials=trials, seed=seed)
    return WidthReport(k, True, "randomized", trials=trials, seed=seed,
                       failure_probability_bound=schwartz_zippel_bound(k, trials))
