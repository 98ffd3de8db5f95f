"""Decidable convex cone descriptions and their decision procedures.

Every cone here induces a linear preorder via v >= w iff v - w in C.  The
supported class is polyhedral cones (H or V form), orthants, the zero cone,
finite products, binary lexicographic compositions, and internally also
convex unions of half-open polyhedral pieces (the form taken by cones built
from profiles whose social order has lexicographic structure).

Membership is exact everywhere.  H<->V conversion runs one double
description engine; Fourier-Motzkin (in ``pieces``) is used only for
projections of piece unions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .linalg import (
    DimensionMismatchError,
    Matrix,
    Subspace,
    Vector,
    dot,
    identity,
    is_zero_vec,
    kernel_basis,
    mat_vec,
    normalize_ray,
    rank,
    unit,
    vneg,
    vsub,
    zeros,
)
from .lp import Constraint, Feasible, Infeasible, LinearConstraintSystem, Rel, lp_decide
from . import pieces as pc
from .pieces import Piece, Region


class UnsupportedConeError(ValueError):
    """The requested operation is outside the supported cone class."""


MAX_LEX_DEPTH = 8


@dataclass(frozen=True)
class OrthantCone:
    dim: int


@dataclass(frozen=True)
class TrivialCone:
    """The zero cone: distinct points are incomparable."""

    dim: int


@dataclass(frozen=True)
class PolyhedralH:
    """{v : rows @ v >= 0}; empty rows give the full space."""

    rows: Matrix
    dim: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.dim:
                raise DimensionMismatchError("H-form row width vs dim")


@dataclass(frozen=True)
class PolyhedralV:
    """All nonnegative combinations of the generators; empty list is {0}."""

    generators: tuple[Vector, ...]
    dim: int

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.dim:
                raise DimensionMismatchError("generator width vs dim")


@dataclass(frozen=True)
class ProductCone:
    factors: tuple["ConeDesc", ...]


@dataclass(frozen=True)
class LexCompose:
    """{(w1, w2) : w1 in head, w1 not in -head} union {0} x tail."""

    head: "ConeDesc"
    tail: "ConeDesc"


@dataclass(frozen=True)
class PieceUnionCone:
    """A convex cone given as a union of half-open polyhedral pieces.

    Constructors must guarantee convexity and 0-membership; the class is
    produced internally (induced social cones, their sums and images) and is
    accepted anywhere a ConeDesc is.
    """

    dim: int
    parts: Region


ConeDesc = Union[
    OrthantCone, TrivialCone, PolyhedralH, PolyhedralV, ProductCone, LexCompose, PieceUnionCone
]


def cone_dim(cone: ConeDesc) -> int:
    if isinstance(cone, (OrthantCone, TrivialCone, PolyhedralH, PolyhedralV, PieceUnionCone)):
        return cone.dim
    if isinstance(cone, ProductCone):
        return sum(cone_dim(f) for f in cone.factors)
    if isinstance(cone, LexCompose):
        return cone_dim(cone.head) + cone_dim(cone.tail)
    raise TypeError(f"not a cone description: {cone!r}")


def lex_depth(cone: ConeDesc) -> int:
    if isinstance(cone, LexCompose):
        return 1 + max(lex_depth(cone.head), lex_depth(cone.tail))
    if isinstance(cone, ProductCone):
        return max((lex_depth(f) for f in cone.factors), default=0)
    return 0


def check_supported(cone: ConeDesc) -> None:
    if lex_depth(cone) > MAX_LEX_DEPTH:
        raise UnsupportedConeError(
            f"lexicographic nesting deeper than {MAX_LEX_DEPTH} is rejected"
        )


# ---------------------------------------------------------------------------
# Membership and pairwise classification.


@dataclass(frozen=True)
class MembershipResult:
    holds: bool
    certificate: dict

    def __bool__(self) -> bool:
        return self.holds


class Relation(Enum):
    EQUIVALENT = "equivalent"
    STRICT_GREATER = "strict_greater"
    STRICT_LESS = "strict_less"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class OrderRelationResult:
    relation: Relation
    forward: MembershipResult
    backward: MembershipResult


def member(cone: ConeDesc, v: Vector) -> MembershipResult:
    """Exact membership with a replayable certificate."""
    n = cone_dim(cone)
    if len(v) != n:
        raise DimensionMismatchError(f"vector dim {len(v)} vs cone dim {n}")
    if isinstance(cone, OrthantCone):
        for i, x in enumerate(v):
            if x < 0:
                return MembershipResult(False, {"kind": "orthant", "violated_index": i})
        return MembershipResult(True, {"kind": "orthant"})
    if isinstance(cone, TrivialCone):
        for i, x in enumerate(v):
            if x != 0:
                return MembershipResult(False, {"kind": "trivial", "nonzero_index": i})
        return MembershipResult(True, {"kind": "trivial"})
    if isinstance(cone, PolyhedralH):
        for i, row in enumerate(cone.rows):
            if dot(row, v) < 0:
                return MembershipResult(False, {"kind": "h_form", "violated_row": i})
        return MembershipResult(True, {"kind": "h_form"})
    if isinstance(cone, PolyhedralV):
        return _member_vform(cone, v)
    if isinstance(cone, ProductCone):
        certs = []
        holds = True
        offset = 0
        for f in cone.factors:
            d = cone_dim(f)
            sub = member(f, v[offset : offset + d])
            certs.append(sub.certificate)
            holds = holds and sub.holds
            offset += d
        return MembershipResult(holds, {"kind": "product", "factors": certs})
    if isinstance(cone, LexCompose):
        d1 = cone_dim(cone.head)
        w1, w2 = v[:d1], v[d1:]
        head_mem = member(cone.head, w1)
        if head_mem.holds:
            neg_mem = member(cone.head, vneg(w1))
            if not neg_mem.holds:
                return MembershipResult(
                    True,
                    {"kind": "lex", "branch": "strict_head",
                     "head": head_mem.certificate, "neg_head": neg_mem.certificate},
                )
            if is_zero_vec(w1):
                tail_mem = member(cone.tail, w2)
                return MembershipResult(
                    tail_mem.holds,
                    {"kind": "lex", "branch": "zero_head", "tail": tail_mem.certificate},
                )
            return MembershipResult(
                False,
                {"kind": "lex", "branch": "head_symmetric", "neg_head": neg_mem.certificate},
            )
        if is_zero_vec(w1):
            tail_mem = member(cone.tail, w2)
            return MembershipResult(
                tail_mem.holds,
                {"kind": "lex", "branch": "zero_head", "tail": tail_mem.certificate},
            )
        return MembershipResult(
            False, {"kind": "lex", "branch": "head_outside", "head": head_mem.certificate}
        )
    if isinstance(cone, PieceUnionCone):
        for i, piece in enumerate(cone.parts):
            if piece.contains(v):
                return MembershipResult(True, {"kind": "pieces", "piece_index": i})
        return MembershipResult(False, {"kind": "pieces"})
    raise TypeError(f"not a cone description: {cone!r}")


def _member_vform(cone: PolyhedralV, v: Vector) -> MembershipResult:
    gens = cone.generators
    if not gens:
        holds = is_zero_vec(v)
        return MembershipResult(holds, {"kind": "v_form", "generators": 0})
    k = len(gens)
    rows = []
    for i in range(cone.dim):
        rows.append(Constraint(Rel.EQ, tuple(g[i] for g in gens), v[i]))
    for j in range(k):
        rows.append(Constraint(Rel.GEQ, unit(k, j), Fraction(0)))
    res = lp_decide(LinearConstraintSystem(k, tuple(rows)))
    if isinstance(res, Feasible):
        return MembershipResult(True, {"kind": "v_form", "weights": res.witness})
    return MembershipResult(False, {"kind": "v_form", "farkas": res.certificate})


def classify(cone: ConeDesc, v: Vector, w: Vector) -> OrderRelationResult:
    """Order relation of v versus w under the cone's induced preorder."""
    forward = member(cone, vsub(v, w))
    backward = member(cone, vsub(w, v))
    if forward.holds and backward.holds:
        rel = Relation.EQUIVALENT
    elif forward.holds:
        rel = Relation.STRICT_GREATER
    elif backward.holds:
        rel = Relation.STRICT_LESS
    else:
        rel = Relation.INCOMPARABLE
    return OrderRelationResult(rel, forward, backward)


def mirror(relation: Relation) -> Relation:
    if relation is Relation.STRICT_GREATER:
        return Relation.STRICT_LESS
    if relation is Relation.STRICT_LESS:
        return Relation.STRICT_GREATER
    return relation


# ---------------------------------------------------------------------------
# Double description: one engine for both conversion directions.


def h_to_v(rows: Matrix, dim: int) -> tuple[Vector, ...]:
    """Generators of {v : rows @ v >= 0}, lineality returned as +/- pairs."""
    lin: list[Vector] = [unit(dim, i) for i in range(dim)]
    rays: list[Vector] = []
    processed: list[Vector] = []
    for raw in rows:
        a = normalize_ray(raw)
        if is_zero_vec(a):
            continue
        lin_vals = [dot(a, b) for b in lin]
        pidx = next((i for i, val in enumerate(lin_vals) if val != 0), None)
        if pidx is not None:
            p = lin[pidx]
            pv = lin_vals[pidx]
            if pv < 0:
                p, pv = vneg(p), -pv
            new_lin = []
            for i, b in enumerate(lin):
                if i == pidx:
                    continue
                f = lin_vals[i] / pv
                new_lin.append(tuple(x - f * y for x, y in zip(b, p)))
            new_rays = []
            for r in rays:
                f = dot(a, r) / pv
                rr = normalize_ray(tuple(x - f * y for x, y in zip(r, p)))
                if not is_zero_vec(rr):
                    new_rays.append(rr)
            lin = new_lin
            rays = _dedupe(new_rays + [normalize_ray(p)])
        else:
            plus, zero, minus = [], [], []
            for r in rays:
                val = dot(a, r)
                if val > 0:
                    plus.append((r, val))
                elif val < 0:
                    minus.append((r, val))
                else:
                    zero.append(r)
            if minus:
                pointed_dim = dim - len(lin)
                new = []
                for rp, vp in plus:
                    for rm, vm in minus:
                        if _adjacent(rp, rm, processed, pointed_dim):
                            combo = tuple(vp * x - vm * y for x, y in zip(rm, rp))
                            combo = normalize_ray(combo)
                            if not is_zero_vec(combo):
                                new.append(combo)
                rays = _dedupe([r for r, _ in plus] + zero + new)
        processed.append(a)
    gens = []
    for b in lin:
        nb = normalize_ray(b)
        gens.append(nb)
        gens.append(vneg(nb))
    gens.extend(rays)
    return tuple(sorted(_dedupe(gens)))


def _dedupe(vectors):
    seen = set()
    out = []
    for v in vectors:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _adjacent(r1: Vector, r2: Vector, processed: list[Vector], pointed_dim: int) -> bool:
    if pointed_dim <= 2:
        return True
    common = tuple(row for row in processed if dot(row, r1) == 0 and dot(row, r2) == 0)
    return rank(common) >= pointed_dim - 2


def v_to_h(generators: tuple[Vector, ...], dim: int) -> Matrix:
    """H-form rows of the cone generated by the given vectors.

    The rows are the generators of the dual cone, obtained from the same
    double description engine; the round trip preserves membership because
    polyhedral cones equal their double dual.
    """
    return tuple(h_to_v(tuple(generators), dim))


# ---------------------------------------------------------------------------
# Decomposition into pieces.


@lru_cache(maxsize=None)
def decompose(cone: ConeDesc) -> Region:
    """A finite union of half-open pieces equal to the cone pointwise."""
    n = cone_dim(cone)
    if isinstance(cone, OrthantCone):
        return pc.region([Piece(n, nonstrict=identity(n))])
    if isinstance(cone, TrivialCone):
        return pc.region([Piece(n, equalities=identity(n))])
    if isinstance(cone, PolyhedralH):
        return pc.region([Piece(n, nonstrict=cone.rows)])
    if isinstance(cone, PolyhedralV):
        return pc.region([Piece(n, nonstrict=v_to_h(cone.generators, n))])
    if isinstance(cone, ProductCone):
        acc = [pc.universe(n)]
        offset = 0
        for f in cone.factors:
            d = cone_dim(f)
            sub = [pc.embed(p, offset, n) for p in decompose(f)]
            acc = [q for a in acc for p in sub if (q := pc.intersect(a, p)) is not None]
            offset += d
        return pc.region(acc)
    if isinstance(cone, LexCompose):
        d1 = cone_dim(cone.head)
        head_region = tuple(pc.embed(p, 0, n) for p in decompose(cone.head))
        neg_head = pc.region_negate(head_region)
        not_neg_head = pc.region_complement(neg_head, n)
        strict_part = pc.region_intersect(head_region, not_neg_head)
        zero_head = Piece(n, equalities=tuple(unit(n, i) for i in range(d1)))
        tail_region = tuple(pc.embed(p, d1, n) for p in decompose(cone.tail))
        zero_part = pc.region_intersect((zero_head,), tail_region)
        return pc.region(list(strict_part) + list(zero_part))
    if isinstance(cone, PieceUnionCone):
        return cone.parts
    raise TypeError(f"not a cone description: {cone!r}")


@lru_cache(maxsize=None)
def v_form(cone: ConeDesc) -> Optional[tuple[Vector, ...]]:
    """Finite generator list when the cone is finitely generated, else None."""
    n = cone_dim(cone)
    if isinstance(cone, OrthantCone):
        return tuple(unit(n, i) for i in range(n))
    if isinstance(cone, TrivialCone):
        return ()
    if isinstance(cone, PolyhedralV):
        return tuple(sorted(_dedupe(
            normalize_ray(g) for g in cone.generators if not is_zero_vec(g)
        )))
    if isinstance(cone, PolyhedralH):
        return h_to_v(cone.rows, n)
    if isinstance(cone, ProductCone):
        gens = []
        offset = 0
        for f in cone.factors:
            d = cone_dim(f)
            sub = v_form(f)
            if sub is None:
                return None
            for g in sub:
                gens.append(zeros(offset) + g + zeros(n - offset - d))
            offset += d
        return tuple(sorted(_dedupe(gens)))
    if isinstance(cone, LexCompose):
        return None
    if isinstance(cone, PieceUnionCone):
        if any(p.strict for p in cone.parts):
            return None
        gens = []
        for p in cone.parts:
            rows = tuple(p.nonstrict) + tuple(p.equalities) + tuple(vneg(e) for e in p.equalities)
            gens.extend(h_to_v(rows, n))
        return tuple(sorted(_dedupe(g for g in gens if not is_zero_vec(g))))
    raise TypeError(f"not a cone description: {cone!r}")


def lineality(cone: ConeDesc) -> Subspace:
    """Basis of C intersect -C."""
    n = cone_dim(cone)
    if isinstance(cone, (OrthantCone, TrivialCone)):
        return Subspace.zero(n)
    if isinstance(cone, PolyhedralH):
        return kernel_basis(cone.rows, ncols=n)
    if isinstance(cone, PolyhedralV):
        return kernel_basis(v_to_h(cone.generators, n), ncols=n)
    if isinstance(cone, ProductCone):
        total = Subspace.zero(n)
        offset = 0
        vecs = []
        for f in cone.factors:
            d = cone_dim(f)
            for b in lineality(f).basis:
                vecs.append(zeros(offset) + b + zeros(n - offset - d))
            offset += d
        return Subspace.from_vectors(n, vecs)
    if isinstance(cone, LexCompose):
        # The strict head part admits no symmetric pairs, so only the
        # zero-head slice contributes.
        d1 = cone_dim(cone.head)
        vecs = [zeros(d1) + b for b in lineality(cone.tail).basis]
        return Subspace.from_vectors(n, vecs)
    if isinstance(cone, PieceUnionCone):
        return pc.union_lineality(cone.parts, n)
    raise TypeError(f"not a cone description: {cone!r}")


# ---------------------------------------------------------------------------
# Sums and linear images.


def cone_sum(a: ConeDesc, b: ConeDesc) -> ConeDesc:
    """The Minkowski sum of two cones on one ambient space."""
    n = cone_dim(a)
    if cone_dim(b) != n:
        raise DimensionMismatchError("cone dims differ in sum")
    va, vb = v_form(a), v_form(b)
    if va is not None and vb is not None:
        return PolyhedralV(tuple(sorted(_dedupe(list(va) + list(vb)))), n)
    parts = []
    for p in decompose(a):
        for q in decompose(b):
            s = pc.piece_minkowski(p, q)
            if s is not None:
                parts.append(s)
    return PieceUnionCone(n, pc.region(parts))


def cone_image(cone: ConeDesc, matrix: Matrix, out_dim: int) -> ConeDesc:
    """The image cone {M v : v in C} on the target space."""
    n = cone_dim(cone)
    if matrix and len(matrix[0]) != n:
        raise DimensionMismatchError("matrix width vs cone dim")
    vf = v_form(cone)
    if vf is not None:
        imgs = []
        for g in vf:
            img = normalize_ray(mat_vec(matrix, g))
            if not is_zero_vec(img):
                imgs.append(img)
        return PolyhedralV(tuple(sorted(_dedupe(imgs))), out_dim)
    parts = []
    for p in decompose(cone):
        img = pc.piece_linear_image(p, matrix, out_dim)
        if img is not None:
            parts.append(img)
    # The image of a cone containing 0 contains 0.
    parts.append(Piece(out_dim, equalities=identity(out_dim)))
    return PieceUnionCone(out_dim, pc.region(parts))
