"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`. Vectors are plain tuples of
Fractions. Ranks and echelon forms go through fraction-free (Bareiss)
elimination on integer-scaled rows; subspaces are stored in reduced row
echelon form so that equal subspaces compare equal structurally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]


class DimensionError(ValueError):
    pass


class RankError(ValueError):
    pass


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vector(entries: Iterable) -> Vector:
    return tuple(to_fraction(e) for e in entries)


def _scale_to_int(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in row]


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form. Returns (rows, pivot columns); rows
    past ``len(pivots)`` are zero. Works in place on ``rows``."""
    m = rows
    nrows = len(m)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[c]
            for j in range(c + 1, ncols):
                row[j] = (piv * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def _rank_rows(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    _, pivots = _bareiss([_scale_to_int(r) for r in rows], ncols)
    return len(pivots)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    ech, pivots = _bareiss([_scale_to_int(r) for r in rows], ncols)
    red = [[Fraction(x) for x in ech[i]] for i in range(len(pivots))]
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        lead = red[i][c]
        red[i] = [x / lead for x in red[i]]
        for j in range(i):
            f = red[j][c]
            if f:
                red[j] = [a - f * b for a, b in zip(red[j], red[i])]
    return [tuple(r) for r in red], pivots


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major Fractions

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise DimensionError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [vector(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    @property
    def T(self) -> "Matrix":
        return Matrix.from_rows([self.col(j) for j in range(self.cols)])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            cols = [other.col(j) for j in range(other.cols)]
            return Matrix.from_rows(
                [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)]
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionError("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_invertible(self) -> bool:
        return self.is_square() and mat_rank(self) == self.rows

    def inverse(self) -> "Matrix":
        n = self.rows
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        aug = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        red, pivots = rref(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise RankError("matrix is singular")
        return Matrix.from_rows([r[n:] for r in red[:n]])

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]


class SymMatrix:
    """Symmetric n x n matrix stored as its upper triangle (row by row)."""

    __slots__ = ("n", "upper", "_hash")

    def __init__(self, n: int, upper: Sequence):
        if n < 1:
            raise DimensionError("n must be positive")
        upper = tuple(to_fraction(x) for x in upper)
        if len(upper) != n * (n + 1) // 2:
            raise DimensionError("upper-triangle storage must hold n(n+1)/2 entries")
        self.n = n
        self.upper = upper
        self._hash = None

    @staticmethod
    def _idx(n: int, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return i * n - i * (i - 1) // 2 + (j - i)

    @classmethod
    def from_full(cls, rows: Sequence[Sequence]) -> "SymMatrix":
        m = rows if isinstance(rows, Matrix) else Matrix.from_rows(rows)
        if not m.is_square():
            raise DimensionError("symmetric matrix must be square")
        n = m.rows
        for i in range(n):
            for j in range(i + 1, n):
                if m[i, j] != m[j, i]:
                    raise ValueError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        return cls(n, [m[i, j] for i in range(n) for j in range(i, n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "SymMatrix":
        """E_ij + E_ji for i != j, E_ii otherwise (0-based indices)."""
        up = [0] * (n * (n + 1) // 2)
        up[cls._idx(n, i, j)] = 1
        return cls(n, up)

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls.from_full(Matrix.identity(n))

    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls(n, [0] * (n * (n + 1) // 2))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.upper[self._idx(self.n, *ij)]

    def full(self) -> Matrix:
        n = self.n
        return Matrix(n, n, tuple(self[i, j] for i in range(n) for j in range(n)))

    def rows(self) -> list[Vector]:
        n = self.n
        return [tuple(self[i, j] for j in range(n)) for i in range(n)]

    def apply(self, u: Sequence) -> Vector:
        n = self.n
        return tuple(sum((self[i, j] * u[j] for j in range(n)), Fraction(0)) for i in range(n))

    def is_zero(self) -> bool:
        return not any(self.upper)

    def rank(self) -> int:
        return _rank_rows(self.rows(), self.n)

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        _check_same_n([self, other])
        return SymMatrix(self.n, [a + b for a, b in zip(self.upper, other.upper)])

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        _check_same_n([self, other])
        return SymMatrix(self.n, [a - b for a, b in zip(self.upper, other.upper)])

    def __mul__(self, c) -> "SymMatrix":
        c = to_fraction(c)
        return SymMatrix(self.n, [c * a for a in self.upper])

    __rmul__ = __mul__

    def __neg__(self) -> "SymMatrix":
        return self * -1

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self.n == other.n and self.upper == other.upper

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.upper))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows())
        return f"SymMatrix([{body}])"


def linear_combination(coeffs: Sequence, ms: Sequence[SymMatrix]) -> SymMatrix:
    _check_same_n(ms)
    if len(coeffs) != len(ms):
        raise DimensionError("need one coefficient per matrix")
    n = ms[0].n
    acc = [Fraction(0)] * (n * (n + 1) // 2)
    for c, m in zip(coeffs, ms):
        c = to_fraction(c)
        if c:
            acc = [a + c * b for a, b in zip(acc, m.upper)]
    return SymMatrix(n, acc)


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of Q^ambient_dim, held as the nonzero rows of its RREF."""

    ambient_dim: int
    vectors: tuple

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "SubspaceBasis":
        vs = [vector(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vs):
            raise DimensionError("vector dimension does not match ambient dimension")
        red, _ = rref(vs, ambient_dim)
        return cls(ambient_dim, tuple(red))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, v: Sequence) -> bool:
        return _rank_rows(list(self.vectors) + [vector(v)], self.ambient_dim) == self.dim

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        return all(other.contains(v) for v in self.vectors)

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimensions differ")
        if not self.vectors or not other.vectors:
            return SubspaceBasis(self.ambient_dim, ())
        # x = a.S = b.T  <=>  [a, b] in ker of the (p+q) x n matrix [S; -T]^t
        stacked = list(self.vectors) + [tuple(-x for x in v) for v in other.vectors]
        ker = kernel_basis(Matrix.from_rows(stacked).T)
        p = self.dim
        vs = []
        for coeffs in ker.vectors:
            vs.append(tuple(
                sum((coeffs[i] * self.vectors[i][j] for i in range(p)), Fraction(0))
                for j in range(self.ambient_dim)
            ))
        return SubspaceBasis.span(self.ambient_dim, vs)


def _check_same_n(ms: Sequence[SymMatrix]) -> None:
    if not ms:
        raise DimensionError("empty matrix list")
    n = ms[0].n
    if any(m.n != n for m in ms):
        raise DimensionError("matrices have different sizes")


def mat_rank(m: Matrix) -> int:
    """Rank over Q."""
    return _rank_rows(m.row_list(), m.cols)


def kernel_basis(m: Matrix) -> SubspaceBasis:
    """Right kernel {u : m u = 0} in canonical echelon form."""
    n = m.cols
    red, pivots = rref(m.row_list(), n)
    free = [c for c in range(n) if c not in pivots]
    vs = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        vs.append(v)
    return SubspaceBasis.span(n, vs)


def stacked(ms: Sequence[SymMatrix]) -> Matrix:
    _check_same_n(ms)
    return Matrix.from_rows([r for h in ms for r in h.rows()])


def common_kernel(ms: Sequence[SymMatrix]) -> SubspaceBasis:
    """Intersection of the kernels of all matrices in ``ms``."""
    return kernel_basis(stacked(ms))


def congruence(a: Matrix, h: SymMatrix) -> SymMatrix:
    """a h a^t, kept symmetric by construction."""
    if a.cols != h.n:
        raise DimensionError(f"congruence needs a with {h.n} columns, got {a.cols}")
    ah = a @ h.full()
    rows = [ah.row(i) for i in range(a.rows)]
    arows = [a.row(i) for i in range(a.rows)]
    up = []
    for i in range(a.rows):
        for j in range(i, a.rows):
            up.append(sum((x * y for x, y in zip(rows[i], arows[j])), Fraction(0)))
    return SymMatrix(a.rows, up)


def span_rank(ms: Sequence[SymMatrix]) -> int:
    """Dimension of the linear span of ``ms`` inside Sym^2(Q^n)."""
    _check_same_n(ms)
    return _rank_rows([m.upper for m in ms], len(ms[0].upper))


def restrict_to_hyperplane(ms: Sequence[SymMatrix], basis: Sequence[Sequence]) -> list[SymMatrix]:
    """Restrict each quadratic form to span(basis): B H B^t with B the rows of ``basis``."""
    _check_same_n(ms)
    b = Matrix.from_rows(basis)
    if b.cols != ms[0].n:
        raise DimensionError("basis vectors must live in the ambient space of the forms")
    if mat_rank(b) != b.rows:
        raise RankError("hyperplane basis is linearly dependent")
    return [congruence(b, h) for h in ms]
