"""Half-open polyhedral cone pieces and finite unions of them.

A ``Piece`` is a conjunction of homogeneous rows: nonstrict (a.v >= 0),
strict (a.v > 0) and equality (a.v = 0) constraints.  Finite unions of
pieces ("regions") are closed under intersection, complement, linear
pullback and coordinate projection (Fourier-Motzkin with strictness
bookkeeping), which turns every universally quantified order-theoretic
check in this package into a finite list of exact LP feasibility calls.

All rows are normalized to primitive integer vectors, so piece equality is
syntactic after simplification and the hot membership loops avoid large
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .linalg import (
    ZERO,
    Matrix,
    Subspace,
    Vector,
    dot,
    is_zero_vec,
    kernel_basis,
    normalize_ray,
    vneg,
    zeros,
)
from .lp import Constraint, Feasible, LinearConstraintSystem, Rel, lp_decide

Region = tuple["Piece", ...]


@dataclass(frozen=True)
class Piece:
    dim: int
    nonstrict: Matrix = ()
    strict: Matrix = ()
    equalities: Matrix = ()

    def contains(self, v: Vector) -> bool:
        if len(v) != self.dim:
            raise ValueError(f"vector of dim {len(v)} against piece of dim {self.dim}")
        return (
            all(dot(r, v) >= 0 for r in self.nonstrict)
            and all(dot(r, v) > 0 for r in self.strict)
            and all(dot(r, v) == 0 for r in self.equalities)
        )

    def row_count(self) -> int:
        return len(self.nonstrict) + len(self.strict) + len(self.equalities)


def universe(dim: int) -> Piece:
    return Piece(dim)


def _norm_sign(v: Vector) -> Vector:
    for x in v:
        if x < 0:
            return vneg(v)
        if x > 0:
            return v
    return v


def simplify(piece: Piece) -> Optional[Piece]:
    """Normalize rows, drop duplicates, detect syntactic contradictions.

    Returns None for pieces that are empty on purely syntactic grounds:
    a zero strict row, a strict row opposed by its own negation (strict or
    nonstrict), or a strict row parallel to an equality.  Opposed nonstrict
    pairs collapse to an equality row.  Deeper emptiness is left to
    ``feasible_point``.
    """
    eqs = []
    seen_eq = set()
    for r in piece.equalities:
        n = _norm_sign(normalize_ray(r))
        if is_zero_vec(n):
            continue
        if n not in seen_eq:
            seen_eq.add(n)
            eqs.append(n)
    strict = []
    seen_strict = set()
    for r in piece.strict:
        n = normalize_ray(r)
        if is_zero_vec(n):
            return None
        if n not in seen_strict:
            seen_strict.add(n)
            strict.append(n)
    for n in strict:
        if vneg(n) in seen_strict or _norm_sign(n) in seen_eq:
            return None
    seen_non = set()
    for r in piece.nonstrict:
        n = normalize_ray(r)
        if is_zero_vec(n):
            continue
        seen_non.add(n)
    for n in strict:
        if vneg(n) in seen_non:
            return None
    nonstrict = []
    emitted = set()
    for r in piece.nonstrict:
        n = normalize_ray(r)
        if is_zero_vec(n) or n in seen_strict or n in emitted:
            continue
        if _norm_sign(n) in seen_eq:
            continue  # implied by the equality
        if vneg(n) in seen_non:
            # r >= 0 and -r >= 0: an equality in disguise.
            key = _norm_sign(n)
            if key not in seen_eq:
                seen_eq.add(key)
                eqs.append(key)
                for s in strict:
                    if _norm_sign(s) == key:
                        return None
            emitted.add(n)
            emitted.add(vneg(n))
            continue
        emitted.add(n)
        nonstrict.append(n)
    return Piece(piece.dim, tuple(nonstrict), tuple(strict), tuple(eqs))


def intersect(a: Piece, b: Piece) -> Optional[Piece]:
    if a.dim != b.dim:
        raise ValueError("piece dims differ")
    return simplify(
        Piece(
            a.dim,
            a.nonstrict + b.nonstrict,
            a.strict + b.strict,
            a.equalities + b.equalities,
        )
    )


def negate(piece: Piece) -> Piece:
    """The piece of points v with -v in the given piece."""
    return Piece(
        piece.dim,
        tuple(vneg(r) for r in piece.nonstrict),
        tuple(vneg(r) for r in piece.strict),
        piece.equalities,
    )


def pullback(piece: Piece, matrix: Matrix, input_dim: int) -> Piece:
    """Piece of v with (matrix @ v) in the given piece."""

    def back(row: Vector) -> Vector:
        return tuple(
            sum((row[i] * matrix[i][j] for i in range(len(row))), ZERO)
            for j in range(input_dim)
        )

    return Piece(
        input_dim,
        tuple(back(r) for r in piece.nonstrict),
        tuple(back(r) for r in piece.strict),
        tuple(back(r) for r in piece.equalities),
    )


def embed(piece: Piece, offset: int, total_dim: int) -> Piece:
    """Pad rows with zeros so the piece constrains one coordinate block."""

    def pad(row: Vector) -> Vector:
        return zeros(offset) + row + zeros(total_dim - offset - piece.dim)

    return Piece(
        total_dim,
        tuple(pad(r) for r in piece.nonstrict),
        tuple(pad(r) for r in piece.strict),
        tuple(pad(r) for r in piece.equalities),
    )


def to_constraints(piece: Piece) -> list[Constraint]:
    rows: list[Constraint] = []
    for r in piece.nonstrict:
        rows.append(Constraint(Rel.GEQ, r, ZERO))
    for r in piece.strict:
        rows.append(Constraint(Rel.GT, r, ZERO))
    for r in piece.equalities:
        rows.append(Constraint(Rel.EQ, r, ZERO))
    return rows


def feasible_point(piece: Piece, extra_equalities: Matrix = ()) -> Optional[Vector]:
    """An exact point of the piece (within the given equality slice), if any.

    All rows are homogeneous, so a piece without strict rows always contains
    the origin and no LP call is needed.
    """
    if not piece.strict:
        return zeros(piece.dim)
    rows = to_constraints(piece)
    for r in extra_equalities:
        rows.append(Constraint(Rel.EQ, r, ZERO))
    res = lp_decide(LinearConstraintSystem(piece.dim, tuple(rows)))
    return res.witness if isinstance(res, Feasible) else None


# ---------------------------------------------------------------------------
# Regions: finite unions of pieces.


def region(pieces: Iterable[Optional[Piece]]) -> Region:
    out = []
    seen = set()
    for p in pieces:
        if p is None:
            continue
        sp = simplify(p)
        if sp is None:
            continue
        key = (sp.nonstrict, sp.strict, sp.equalities)
        if key not in seen:
            seen.add(key)
            out.append(sp)
    return tuple(out)


def region_intersect(a: Region, b: Region) -> Region:
    return region(intersect(p, q) for p in a for q in b)


def piece_complement(piece: Piece) -> Region:
    """Complement of one piece as a union of single-row pieces."""
    out = []
    for r in piece.nonstrict:
        out.append(Piece(piece.dim, strict=(vneg(r),)))
    for r in piece.strict:
        out.append(Piece(piece.dim, nonstrict=(vneg(r),)))
    for r in piece.equalities:
        out.append(Piece(piece.dim, strict=(r,)))
        out.append(Piece(piece.dim, strict=(vneg(r),)))
    return region(out)


def region_complement(pieces: Region, dim: int, prune_threshold: int = 24) -> Region:
    """Complement of a union, distributing piece complements."""
    acc: Region = (universe(dim),)
    for piece in pieces:
        acc = region_intersect(acc, piece_complement(piece))
        if len(acc) > prune_threshold:
            acc = tuple(p for p in acc if feasible_point(p) is not None)
    return acc


def region_contains(pieces: Region, v: Vector) -> bool:
    return any(p.contains(v) for p in pieces)


def region_witness(pieces: Region, extra_equalities: Matrix = ()) -> Optional[Vector]:
    """First exact witness in canonical piece order, or None if empty."""
    for p in pieces:
        w = feasible_point(p, extra_equalities)
        if w is not None:
            return w
    return None


def region_negate(pieces: Region) -> Region:
    return region(negate(p) for p in pieces)


def region_pullback(pieces: Region, matrix: Matrix, input_dim: int) -> Region:
    return region(pullback(p, matrix, input_dim) for p in pieces)


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection with strictness bookkeeping.


def _substitute_equality(rows, eq_row, var):
    """Use eq_row (nonzero at var) to eliminate var from rows."""
    pivot = eq_row[var]
    out = []
    for rel, row in rows:
        c = row[var]
        if c == 0:
            out.append((rel, row))
            continue
        f = c / pivot
        out.append((rel, tuple(x - f * y for x, y in zip(row, eq_row))))
    return out


def _drop_coords(row: Vector, drop: set[int]) -> Vector:
    return tuple(x for j, x in enumerate(row) if j not in drop)


def fm_project(piece: Piece, eliminate: Sequence[int]) -> Optional[Piece]:
    """Exact projection of the piece onto the complement of ``eliminate``.

    Strict rows stay strict; a combination involving a strict row is strict.
    Returns a piece over the remaining coordinates (in original order), or
    None when the input is syntactically contradictory.
    """
    rows: list[tuple[Rel, Vector]] = []
    for r in piece.nonstrict:
        rows.append((Rel.GEQ, r))
    for r in piece.strict:
        rows.append((Rel.GT, r))
    for r in piece.equalities:
        rows.append((Rel.EQ, r))
    todo = list(eliminate)
    while todo:
        # Equality substitution is cheap, do it first wherever possible.
        subst = None
        for var in todo:
            for rel, row in rows:
                if rel is Rel.EQ and row[var] != 0:
                    subst = (var, row)
                    break
            if subst:
                break
        if subst:
            var, eq_row = subst
            rows = _dedupe_rows(_substitute_equality(rows, eq_row, var))
            todo.remove(var)
            continue
        # Pick the variable with the smallest pos*neg fill-in.
        best_var, best_cost = None, None
        for var in todo:
            pos = sum(1 for rel, row in rows if rel is not Rel.EQ and row[var] > 0)
            neg = sum(1 for rel, row in rows if rel is not Rel.EQ and row[var] < 0)
            cost = pos * neg
            if best_cost is None or cost < best_cost:
                best_var, best_cost = var, cost
        var = best_var
        pos = [(rel, row) for rel, row in rows if row[var] > 0]
        neg = [(rel, row) for rel, row in rows if row[var] < 0]
        zero = [(rel, row) for rel, row in rows if row[var] == 0]
        combos = []
        for prel, prow in pos:
            for nrel, nrow in neg:
                coeff_p = -nrow[var]
                coeff_n = prow[var]
                row = tuple(coeff_p * a + coeff_n * b for a, b in zip(prow, nrow))
                rel = Rel.GT if (prel is Rel.GT or nrel is Rel.GT) else Rel.GEQ
                combos.append((rel, row))
        rows = zero + combos
        rows = _dedupe_rows(rows)
        todo.remove(var)
    drop = set(eliminate)
    out_nonstrict, out_strict, out_eqs = [], [], []
    for rel, row in rows:
        short = _drop_coords(row, drop)
        if rel is Rel.EQ:
            out_eqs.append(short)
        elif rel is Rel.GT:
            out_strict.append(short)
        else:
            out_nonstrict.append(short)
    return simplify(
        Piece(piece.dim - len(drop), tuple(out_nonstrict), tuple(out_strict), tuple(out_eqs))
    )


def _dedupe_rows(rows):
    out: dict[tuple, Rel] = {}
    order: list[tuple] = []
    for rel, row in rows:
        n = normalize_ray(row)
        if is_zero_vec(n):
            if rel is Rel.GT:
                # 0 > 0: the piece is empty, a marker row lets simplify see it.
                return [(Rel.GT, n)]
            continue
        key = ("eq", _norm_sign(n)) if rel is Rel.EQ else ("ineq", n)
        prev = out.get(key)
        if prev is None:
            out[key] = rel
            order.append(key)
        elif prev is Rel.GEQ and rel is Rel.GT:
            out[key] = Rel.GT
    return [(out[k], k[1]) for k in order]


def piece_minkowski(a: Piece, b: Piece) -> Optional[Piece]:
    """Minkowski sum of two cone pieces via projection of the graph."""
    if a.dim != b.dim:
        raise ValueError("piece dims differ")
    n = a.dim

    def widen_left(row: Vector) -> Vector:
        # constraint on u in coordinates (w, u)
        return zeros(n) + row

    def widen_diff(row: Vector) -> Vector:
        # constraint on w - u in coordinates (w, u)
        return row + vneg(row)

    graph = Piece(
        2 * n,
        tuple(widen_left(r) for r in a.nonstrict) + tuple(widen_diff(r) for r in b.nonstrict),
        tuple(widen_left(r) for r in a.strict) + tuple(widen_diff(r) for r in b.strict),
        tuple(widen_left(r) for r in a.equalities) + tuple(widen_diff(r) for r in b.equalities),
    )
    return fm_project(graph, list(range(n, 2 * n)))


def piece_linear_image(piece: Piece, matrix: Matrix, out_dim: int) -> Optional[Piece]:
    """Image {M v : v in piece} via projection of the graph {(w, v): w = Mv}."""
    n = piece.dim
    graph_eqs = []
    for i in range(out_dim):
        row = list(zeros(out_dim + n))
        row[i] = Fraction(1)
        for j in range(n):
            row[out_dim + j] = -matrix[i][j]
        graph_eqs.append(tuple(row))

    def widen(row: Vector) -> Vector:
        return zeros(out_dim) + row

    graph = Piece(
        out_dim + n,
        tuple(widen(r) for r in piece.nonstrict),
        tuple(widen(r) for r in piece.strict),
        tuple(widen(r) for r in piece.equalities) + tuple(graph_eqs),
    )
    return fm_project(graph, list(range(out_dim, out_dim + n)))


# ---------------------------------------------------------------------------
# Spans and lineality of convex piece unions.


def piece_span(piece: Piece) -> Subspace:
    """Span of a nonempty homogeneous piece (= its affine hull through 0).

    Equality rows plus nonstrict rows that cannot be made strictly positive
    on the piece cut out exactly the affine hull.
    """
    implied = list(piece.equalities)
    for r in piece.nonstrict:
        probe = intersect(piece, Piece(piece.dim, strict=(r,)))
        if probe is None or feasible_point(probe) is None:
            implied.append(r)
    return kernel_basis(tuple(implied), ncols=piece.dim)


def union_lineality(pieces: Region, dim: int) -> Subspace:
    """Lineality space of a convex union of pieces.

    The caller guarantees the union is a convex cone; then C and -C meet in
    a subspace, which equals the sum of the spans of the nonempty pieces of
    the intersection.
    """
    sym = region_intersect(pieces, region_negate(pieces))
    total = Subspace.zero(dim)
    for piece in sym:
        if feasible_point(piece) is None:
            continue
        total = total.sum(piece_span(piece))
        if total.dim == dim:
            break
    return total
