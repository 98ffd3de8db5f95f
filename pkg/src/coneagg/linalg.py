"""Dense exact linear algebra over the rationals.

Vectors are tuples of ``fractions.Fraction`` and matrices are tuples of such
row tuples.  Everything in this module is immutable and computes exact
results; there is no floating point anywhere in the stack.  Pivoting is
deterministic (first usable row/column in index order), so repeated runs on
identical inputs produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatchError(ValueError):
    """Operands do not share a consistent ambient dimension."""


def frac(value) -> Fraction:
    """Coerce ints, strings like ``"2/3"``, or Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point input is not allowed; use a rational string")
    return Fraction(value)


def vec(values: Iterable) -> Vector:
    return tuple(frac(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vec(r) for r in rows)
    if out:
        width = len(out[0])
        for r in out:
            if len(r) != width:
                raise DimensionMismatchError("matrix rows have inconsistent width")
    return out


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def vadd(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dims {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dims {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Vector) -> Vector:
    c = frac(c)
    return tuple(c * x for x in a)


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def dot(a: Vector, b: Vector) -> Fraction:
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector dims {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def is_zero_vec(a: Vector) -> bool:
    return all(x == 0 for x in a)


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Matrix) -> Matrix:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_rows(m: Matrix) -> int:
    return len(m)


def mat_cols(m: Matrix, default: int = 0) -> int:
    return len(m[0]) if m else default


def hstack(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b):
        raise DimensionMismatchError("row counts differ")
    return tuple(ra + rb for ra, rb in zip(a, b))


def concat(a: Vector, b: Vector) -> Vector:
    return a + b


def normalize_ray(v: Vector) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector with
    the same direction.  Used to canonicalize cone generators and rows."""
    if is_zero_vec(v):
        return v
    denom_lcm = 1
    for x in v:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x, g) for x in ints)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.  Returns (rref_matrix, pivot_columns).

    Zero rows are kept at the bottom so the caller can slice them off; the
    pivot list gives deterministic column choices in ascending order.
    """
    rows = [list(r) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in rows), pivots


def rank(m: Matrix) -> int:
    _, pivots = rref(m)
    return len(pivots)


def solve_affine_system(a: Matrix, b: Vector) -> Optional[Vector]:
    """Solve ``a @ x = b`` exactly.

    Returns one solution (free variables set to zero, pivots chosen in
    ascending column order) or None when the system is inconsistent.
    """
    if len(a) != len(b):
        raise DimensionMismatchError("matrix rows vs rhs length")
    ncols = mat_cols(a)
    aug = tuple(row + (rhs,) for row, rhs in zip(a, b))
    if not aug:
        return zeros(ncols)
    red, pivots = rref(aug)
    # A pivot in the rhs column certifies inconsistency.
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for i, c in enumerate(pivots):
        x[c] = red[i][ncols]
    return tuple(x)


def kernel_basis(a: Matrix, ncols: Optional[int] = None) -> "Subspace":
    """Basis of the null space {x : a @ x = 0}."""
    n = mat_cols(a, ncols or 0) if a else (ncols or 0)
    if a and ncols is not None and ncols != len(a[0]):
        raise DimensionMismatchError("ncols disagrees with matrix width")
    red, pivots = rref(a) if a else ((), [])
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(tuple(v))
    return Subspace.from_vectors(n, basis)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n, stored with a canonical RREF basis."""

    ambient_dim: int
    basis: Matrix

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Sequence[Vector]) -> "Subspace":
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatchError("basis vector has wrong dimension")
        red, pivots = rref(tuple(vectors)) if vectors else ((), [])
        return Subspace(ambient_dim, tuple(red[i] for i in range(len(pivots))))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, identity(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector dimension vs ambient")
        if is_zero_vec(v):
            return True
        if not self.basis:
            return False
        stacked = self.basis + (v,)
        return rank(stacked) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("ambient dims differ")
        return Subspace.from_vectors(self.ambient_dim, list(self.basis) + list(other.basis))

    def orthogonal_complement_rows(self) -> Matrix:
        """Rows N with {v : N v = 0} equal to this subspace."""
        comp = kernel_basis(self.basis, ncols=self.ambient_dim)
        return comp.basis

    def coordinates_of(self, v: Vector) -> Optional[Vector]:
        """Coefficients of v in the stored basis, or None if v is outside."""
        cols = transpose(self.basis)
        if not self.basis:
            return () if is_zero_vec(v) else None
        return solve_affine_system(cols, v)

    def complement_pivot_map(self) -> "Matrix":
        """Deterministic projection-to-complement matrix.

        Returns the (n-k) x n matrix selecting, after elimination of this
        subspace's RREF pivots, the non-pivot coordinates.  Its kernel is
        exactly this subspace.
        """
        n = self.ambient_dim
        _, pivots = rref(self.basis) if self.basis else ((), [])
        pivot_set = set(pivots)
        nonpivots = [c for c in range(n) if c not in pivot_set]
        rows = []
        for c in nonpivots:
            row = [ZERO] * n
            row[c] = ONE
            for i, p in enumerate(pivots):
                row[p] = -self.basis[i][c]
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + offset, with exact rational entries."""

    matrix: Matrix
    offset: Vector

    def __post_init__(self):
        if len(self.matrix) != len(self.offset):
            raise DimensionMismatchError("offset length vs matrix row count")

    @property
    def input_dim(self) -> int:
        return mat_cols(self.matrix)

    @property
    def output_dim(self) -> int:
        return len(self.offset)

    def __call__(self, x: Vector) -> Vector:
        return vadd(mat_vec(self.matrix, x), self.offset)

    @staticmethod
    def stack(maps: Sequence["AffineMap"]) -> "AffineMap":
        """Stack outputs of several maps over one common input space."""
        widths = {m.input_dim for m in maps if m.matrix}
        if len(widths) > 1:
            raise DimensionMismatchError("stacked maps disagree on input dim")
        rows: list[Vector] = []
        offs: list[Fraction] = []
        for m in maps:
            rows.extend(m.matrix)
            offs.extend(m.offset)
        return AffineMap(tuple(rows), tuple(offs))
