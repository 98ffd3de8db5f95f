"""Polytope domains, affine representations and profile-level machinery.

A profile bundles one vertex-presented convex domain with affine
representations for each individual and for the social observer.  Points
are convex-weight vectors over the domain's vertices, so every witness a
decision procedure emits can be replayed exactly.

The central construction is ``induced_social_cone``: the cone of scaled
joint-image differences of socially weakly preferred pairs.  Because the
joint image of a polytope under affine maps is again a polytope, that cone
is assembled exactly from the vertices of the difference polytope sliced
along the social order's pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import (
    AffineMap,
    DimensionMismatchError,
    Matrix,
    Subspace,
    Vector,
    identity,
    is_zero_vec,
    mat_mul,
    mat_vec,
    normalize_ray,
    solve_affine_system,
    unit,
    vadd,
    vneg,
    vsub,
    zeros,
)
from . import pieces as pc
from .pieces import Piece
from .cones import (
    ConeDesc,
    LexCompose,
    OrthantCone,
    OrderRelationResult,
    PieceUnionCone,
    PolyhedralH,
    PolyhedralV,
    ProductCone,
    TrivialCone,
    UnsupportedConeError,
    classify,
    cone_dim,
    decompose,
    h_to_v,
    member,
    v_form,
    v_to_h,
)
from .spaces import Povs, product


class ConeRestrictionError(ValueError):
    """The order cone cannot be restricted to the requested subspace."""


@dataclass(frozen=True)
class Domain:
    """A convex polytope given by its vertices in some ambient Q^d."""

    vertices: Matrix

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a domain needs at least one vertex")
        d = len(self.vertices[0])
        for v in self.vertices:
            if len(v) != d:
                raise DimensionMismatchError("domain vertices of mixed dimension")

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)


def simplex_domain(outcomes: int) -> Domain:
    """The standard lottery simplex on the given number of outcomes."""
    if outcomes < 1:
        raise ValueError("a simplex needs at least one outcome")
    return Domain(identity(outcomes))


def cube_domain(atoms: int) -> Domain:
    """The unit cube [0,1]^atoms, vertex-presented (extended-event space)."""
    if atoms < 0:
        raise ValueError("negative atom count")
    verts = []
    for mask in range(2 ** atoms):
        verts.append(tuple(Fraction((mask >> j) & 1) for j in range(atoms)))
    return Domain(tuple(verts))


@dataclass(frozen=True)
class Point:
    """Convex-combination weights over a domain's vertices."""

    weights: Vector

    def __post_init__(self):
        total = sum(self.weights, Fraction(0))
        if total != 1:
            raise ValueError(f"point weights sum to {total}, expected 1")
        if any(w < 0 for w in self.weights):
            raise ValueError("point weights must be nonnegative")


def vertex_point(domain: Domain, index: int) -> Point:
    return Point(unit(domain.vertex_count, index))


def mixture(a: Point, b: Point, alpha: Fraction) -> Point:
    w = tuple(alpha * x + (1 - alpha) * y for x, y in zip(a.weights, b.weights))
    return Point(w)


def point_coordinates(domain: Domain, point: Point) -> Vector:
    if len(point.weights) != domain.vertex_count:
        raise DimensionMismatchError("point weight count vs domain vertices")
    coords = zeros(domain.ambient_dim)
    for w, v in zip(point.weights, domain.vertices):
        if w != 0:
            coords = vadd(coords, tuple(w * x for x in v))
    return coords


@dataclass(frozen=True)
class Representation:
    """An affine map from the domain's ambient space into an ordered space."""

    space: Povs
    map: AffineMap

    def __post_init__(self):
        if self.map.output_dim != self.space.dim:
            raise DimensionMismatchError("map output dim vs target space dim")


@dataclass(frozen=True)
class Profile:
    domain: Domain
    individuals: tuple[Representation, ...]
    social: Representation

    def __post_init__(self):
        if not self.individuals:
            raise ValueError("a profile needs at least one individual")
        d = self.domain.ambient_dim
        for rep in (*self.individuals, self.social):
            if rep.map.matrix and rep.map.input_dim != d:
                raise DimensionMismatchError("representation input dim vs domain")

    @property
    def product_space(self) -> Povs:
        return product([rep.space for rep in self.individuals])

    @property
    def joint_map(self) -> AffineMap:
        return AffineMap.stack([rep.map for rep in self.individuals])

    def block_offsets(self) -> list[int]:
        offs = [0]
        for rep in self.individuals:
            offs.append(offs[-1] + rep.space.dim)
        return offs


def evaluate(domain: Domain, rep: Representation, point: Point) -> Vector:
    """Image of the point under the representation's affine map."""
    return rep.map(point_coordinates(domain, point))


def evaluate_by_mixture(domain: Domain, rep: Representation, point: Point) -> Vector:
    """The same value computed as the convex combination of vertex images.

    Affine maps preserve mixtures, so this must agree with ``evaluate``
    exactly; the equality is the testable form of the convexity guarantee.
    """
    mixed = zeros(rep.space.dim)
    for w, v in zip(point.weights, domain.vertices):
        if w != 0:
            mixed = vadd(mixed, tuple(w * x for x in rep.map(v)))
    return mixed


def compare(domain: Domain, rep: Representation, x: Point, y: Point) -> OrderRelationResult:
    return classify(rep.space.order, evaluate(domain, rep, x), evaluate(domain, rep, y))


def vertex_images(domain: Domain, rep: Representation) -> list[Vector]:
    return [rep.map(v) for v in domain.vertices]


def diff_span(domain: Domain, reps) -> Subspace:
    """Span of image differences, jointly over the given representation(s)."""
    if isinstance(reps, Representation):
        reps = [reps]
    stacked = AffineMap.stack([r.map for r in reps])
    imgs = [stacked(v) for v in domain.vertices]
    base = imgs[0]
    return Subspace.from_vectors(len(base), [vsub(img, base) for img in imgs[1:]])


def check_pervasive(domain: Domain, rep: Representation) -> bool:
    return diff_span(domain, rep).dim == rep.space.dim


def check_DR(profile: Profile) -> bool:
    """Domain richness: joint differences span the whole product space."""
    span = diff_span(profile.domain, list(profile.individuals))
    return span.dim == profile.product_space.dim


@dataclass(frozen=True)
class WeakDRResult:
    contains_positive_cone: bool
    contains_direct_sum: bool


def check_weak_DR(profile: Profile) -> WeakDRResult:
    """The two footnote weakenings of domain richness."""
    span = diff_span(profile.domain, list(profile.individuals))
    prod = profile.product_space
    gens = v_form(prod.order)
    if gens is None:
        raise UnsupportedConeError(
            "weak domain-richness checks need finitely generated individual cones"
        )
    contains_cone = all(span.contains(g) for g in gens)
    n = prod.dim
    contains_sum = all(span.contains(unit(n, i)) for i in range(n))
    return WeakDRResult(contains_cone, contains_sum)


# ---------------------------------------------------------------------------
# Pervasive normalization.


def restrict_cone(cone: ConeDesc, basis: Subspace) -> ConeDesc:
    """The cone intersected with the subspace, in the basis coordinates."""
    n = cone_dim(cone)
    if basis.ambient_dim != n:
        raise DimensionMismatchError("subspace ambient vs cone dim")
    k = basis.dim
    if k == n:
        return cone
    if k == 0:
        return OrthantCone(0)
    rows_b = basis.basis  # k x n, u-coords map to v = B^T u
    if isinstance(cone, TrivialCone):
        return TrivialCone(k)
    if isinstance(cone, OrthantCone):
        restricted = tuple(mat_vec(rows_b, unit(n, i)) for i in range(n))
        return PolyhedralH(restricted, k)
    if isinstance(cone, PolyhedralH):
        return PolyhedralH(tuple(mat_vec(rows_b, r) for r in cone.rows), k)
    if isinstance(cone, PolyhedralV):
        ambient_rows = v_to_h(cone.generators, n)
        complement = basis.orthogonal_complement_rows()
        all_rows = list(ambient_rows)
        for r in complement:
            all_rows.append(r)
            all_rows.append(vneg(r))
        gens = h_to_v(tuple(all_rows), n)
        coords = []
        for g in gens:
            u = basis.coordinates_of(g)
            if u is None:
                raise ConeRestrictionError("generator escaped the subspace")
            if not is_zero_vec(u):
                coords.append(normalize_ray(u))
        return PolyhedralV(tuple(sorted(set(coords))), k)
    if isinstance(cone, ProductCone):
        rows = _h_rows_of(cone)
        if rows is None:
            return _restrict_blockwise(cone, basis)
        return PolyhedralH(tuple(mat_vec(rows_b, r) for r in rows), k)
    if isinstance(cone, LexCompose):
        return _restrict_blockwise(cone, basis)
    if isinstance(cone, PieceUnionCone):
        parts = []
        for p in cone.parts:
            parts.append(
                Piece(
                    k,
                    tuple(mat_vec(rows_b, r) for r in p.nonstrict),
                    tuple(mat_vec(rows_b, r) for r in p.strict),
                    tuple(mat_vec(rows_b, r) for r in p.equalities),
                )
            )
        return PieceUnionCone(k, pc.region(parts))
    raise ConeRestrictionError(f"cannot restrict cone of type {type(cone).__name__}")


def _h_rows_of(cone: ConeDesc) -> Optional[Matrix]:
    """H-form rows when the cone is plainly polyhedral, else None."""
    n = cone_dim(cone)
    if isinstance(cone, OrthantCone):
        return identity(n)
    if isinstance(cone, PolyhedralH):
        return cone.rows
    if isinstance(cone, PolyhedralV):
        return v_to_h(cone.generators, n)
    if isinstance(cone, TrivialCone):
        rows = list(identity(n)) + [vneg(r) for r in identity(n)]
        return tuple(rows)
    if isinstance(cone, ProductCone):
        rows = []
        offset = 0
        for f in cone.factors:
            d = cone_dim(f)
            sub = _h_rows_of(f)
            if sub is None:
                return None
            for r in sub:
                rows.append(zeros(offset) + r + zeros(n - offset - d))
            offset += d
        return tuple(rows)
    return None


def _restrict_blockwise(cone, basis: Subspace) -> ConeDesc:
    """Restrict a lex composition whose blocks the subspace must respect."""
    if isinstance(cone, ProductCone):
        raise ConeRestrictionError("product cone with non-polyhedral factor")
    d1 = cone_dim(cone.head)
    n = basis.ambient_dim
    head_part = [b for b in basis.basis if is_zero_vec(b[d1:])]
    tail_part = [b for b in basis.basis if is_zero_vec(b[:d1])]
    if len(head_part) + len(tail_part) != basis.dim:
        raise ConeRestrictionError("lex head straddles the subspace")
    head_dim = Subspace.from_vectors(d1, [b[:d1] for b in head_part]).dim
    tail_sub = Subspace.from_vectors(n - d1, [b[d1:] for b in tail_part])
    if head_dim == d1:
        return LexCompose(cone.head, restrict_cone(cone.tail, tail_sub))
    if head_dim == 0:
        return restrict_cone(cone.tail, tail_sub)
    raise ConeRestrictionError("lex head straddles the subspace")


def make_pervasive(domain: Domain, rep: Representation) -> Representation:
    """Shift by the first vertex image and restrict to the difference span.

    Returns the representation unchanged when it is already pervasive; the
    result represents the same preorder (checked on all vertex pairs).
    """
    if check_pervasive(domain, rep):
        return rep
    span = diff_span(domain, rep)
    base = rep.map(domain.vertices[0])
    k = span.dim
    cone = restrict_cone(rep.space.order, span)
    proj = _left_inverse_rows(span)  # k x n with (P v) the basis coords of v
    matrix = mat_mul(proj, rep.map.matrix) if k else ()
    offset = mat_vec(proj, vsub(rep.map.offset, base))
    new_rep = Representation(Povs(k, cone), AffineMap(matrix, offset))
    for i in range(domain.vertex_count):
        for j in range(i + 1, domain.vertex_count):
            x, y = vertex_point(domain, i), vertex_point(domain, j)
            assert (
                compare(domain, new_rep, x, y).relation
                == compare(domain, rep, x, y).relation
            ), "pervasive form changed the represented preorder"
    return new_rep


def _left_inverse_rows(span: Subspace) -> Matrix:
    """Rows p_i solving B p_i = e_i; then P maps span members to coordinates."""
    b = span.basis
    rows = []
    for i in range(len(b)):
        p = solve_affine_system(b, unit(len(b), i))
        if p is None:
            raise ConeRestrictionError("basis matrix lost rank")
        rows.append(p)
    return tuple(rows)


def realize_difference(domain: Domain, maps: Sequence[AffineMap], difference: Vector):
    """Domain points x, y whose stacked image difference is a positive
    multiple of the given vector; None when no such pair exists."""
    from .lp import Constraint, Feasible, LinearConstraintSystem, Rel, lp_decide

    stacked = AffineMap.stack(list(maps))
    imgs = [stacked(v) for v in domain.vertices]
    nv = len(imgs)
    one = Fraction(1)
    zero = Fraction(0)
    rows = [
        Constraint(Rel.EQ, tuple([one] * nv + [zero] * (nv + 1)), one),
        Constraint(Rel.EQ, tuple([zero] * nv + [one] * nv + [zero]), one),
    ]
    for coord in range(len(difference)):
        coeffs = (
            tuple(img[coord] for img in imgs)
            + tuple(-img[coord] for img in imgs)
            + (-difference[coord],)
        )
        rows.append(Constraint(Rel.EQ, coeffs, zero))
    for j in range(2 * nv):
        rows.append(Constraint(Rel.GEQ, unit(2 * nv + 1, j), zero))
    rows.append(Constraint(Rel.GT, unit(2 * nv + 1, 2 * nv), zero))
    res = lp_decide(LinearConstraintSystem(2 * nv + 1, tuple(rows)))
    if not isinstance(res, Feasible):
        return None
    w = res.witness
    return Point(w[:nv]), Point(w[nv : 2 * nv])


# ---------------------------------------------------------------------------
# The induced social cone.


def joint_difference_vertices(profile: Profile) -> list[Vector]:
    """Deduplicated pairwise vertex differences of the joint image."""
    stacked = AffineMap.stack([profile.joint_map, profile.social.map])
    imgs = [stacked(v) for v in profile.domain.vertices]
    seen = set()
    out = []
    for a in imgs:
        for b in imgs:
            d = vsub(a, b)
            if d not in seen:
                seen.add(d)
                out.append(d)
    return out


def induced_social_cone(profile: Profile) -> ConeDesc:
    """The cone of scaled f_I-differences of socially preferred pairs.

    Built per piece of the social order: slice the joint difference
    polytope along the closed rows, enumerate the slice's vertex rays, keep
    the piece's strict rows, and project everything to the individual
    block.  If no social piece carries strict rows the result is a plain
    V-form cone; otherwise it is a convex union of pieces.
    """
    m_i = profile.product_space.dim
    m_0 = profile.social.space.dim
    jd = m_i + m_0
    diffs = joint_difference_vertices(profile)
    rays = tuple(d + (Fraction(1),) for d in diffs)
    hull_rows = v_to_h(rays, jd + 1)
    social_pieces = decompose(profile.social.space.order)

    def embed_social(row: Vector) -> Vector:
        return zeros(m_i) + row + (Fraction(0),)

    fg_gens: list[Vector] = []
    strict_parts: list[Piece] = []
    for piece in social_pieces:
        closed = list(hull_rows)
        for r in piece.nonstrict:
            closed.append(embed_social(r))
        for r in piece.strict:
            closed.append(embed_social(r))  # closure: strict relaxed here
        for r in piece.equalities:
            closed.append(embed_social(r))
            closed.append(vneg(embed_social(r)))
        gens = h_to_v(tuple(closed), jd + 1)
        ray_dirs = []
        for g in gens:
            if g[jd] <= 0:
                if is_zero_vec(g):
                    continue
                # The slice of a bounded polytope cannot have recession rays.
                raise RuntimeError("difference polytope produced a recession ray")
            d_part = g[:jd]
            if not is_zero_vec(d_part):
                ray_dirs.append(normalize_ray(d_part))
        ray_dirs = sorted(set(ray_dirs))
        if not piece.strict:
            for d in ray_dirs:
                proj = d[:m_i]
                if not is_zero_vec(proj):
                    fg_gens.append(normalize_ray(proj))
        else:
            if not ray_dirs:
                continue
            joint_piece = Piece(
                jd,
                nonstrict=v_to_h(tuple(ray_dirs), jd),
                strict=tuple(zeros(m_i) + r for r in piece.strict),
            )
            projected = pc.fm_project(joint_piece, list(range(m_i, jd)))
            if projected is not None:
                strict_parts.append(projected)
    fg_gens = sorted(set(fg_gens))
    if not strict_parts:
        return PolyhedralV(tuple(fg_gens), m_i)
    parts = list(strict_parts)
    if fg_gens:
        parts.append(Piece(m_i, nonstrict=v_to_h(tuple(fg_gens), m_i)))
    parts.append(Piece(m_i, equalities=identity(m_i)))  # 0 always belongs
    return PieceUnionCone(m_i, pc.region(parts))
