"""Constructive aggregation of a profile's individual orders.

``synthesize`` carries out the cone construction behind the equivalence of
the unanimity axioms with linearly aggregated representations: it builds
the induced social cone, adds the product cone when weak unanimity is
required, quotients out the lineality, and returns the quotient map with
machine-checked certificates (representation agreement on all vertex pairs
plus sampled mixtures, positivity class, per-individual embedding flags).

``solve_affine`` recovers the unique affine decomposition of the social
representation over the individual block, pinned down on the difference
span and extended by zero on its canonical complement.  ``common_space``
rewrites everything into a single target space where the social
representation is exactly the sum of the individual ones.  The remaining
operations are the uniqueness witnesses relating any two such solutions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .linalg import (
    AffineMap,
    Matrix,
    Subspace,
    Vector,
    identity,
    kernel_basis,
    mat,
    mat_mul,
    mat_vec,
    solve_affine_system,
    unit,
    vadd,
    vsub,
    zeros,
)
from . import pieces as pc
from .cones import cone_dim, cone_sum, decompose, member
from .pareto import AxiomFailedError, AxiomReport, check_axioms, check_P1
from .profiles import (
    Domain,
    Point,
    Profile,
    Representation,
    check_DR,
    check_pervasive,
    compare,
    diff_span,
    induced_social_cone,
    mixture,
    realize_difference,
    restrict_cone,
    vertex_point,
)
from .spaces import (
    EmbeddingResult,
    PositivityClass,
    PositivityResult,
    Povs,
    PovsMap,
    map_positivity,
    order_embedding,
    quotient_by,
)

LEVELS = ("P1", "P2", "P3", "P4")


class DRRequiredError(RuntimeError):
    """The operation needs domain richness, which this profile lacks."""


class NotRepresentingError(RuntimeError):
    """A candidate map does not represent the social order."""

    def __init__(self, witness):
        super().__init__("candidate does not represent the social preorder")
        self.witness = witness


@dataclass(frozen=True)
class VerificationRecord:
    vertex_pairs: int
    mixture_pairs: int


@dataclass(frozen=True)
class SynthesisResult:
    level: str
    space: Povs
    map: PovsMap
    social_rep: Representation
    positivity: PositivityResult
    embeddings: Optional[tuple[EmbeddingResult, ...]]
    verification: VerificationRecord


def _require_axioms(profile: Profile, level: str) -> dict[str, AxiomReport]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
    from .pareto import check_P2, check_P3, check_P4

    checkers = {"P1": check_P1, "P2": check_P2, "P3": check_P3, "P4": check_P4}
    reports = {}
    for lv in LEVELS[: LEVELS.index(level) + 1]:
        report = checkers[lv](profile)
        reports[lv] = report
        if not report.holds:
            raise AxiomFailedError(report)
    return reports


def _compose_rep(space: Povs, matrix: Matrix, inner: AffineMap) -> Representation:
    composed = AffineMap(mat_mul(matrix, inner.matrix), mat_vec(matrix, inner.offset))
    return Representation(space, composed)


def _sample_mixture_pairs(domain: Domain, count: int, seed: int):
    rng = random.Random(seed)
    nv = domain.vertex_count
    for _ in range(count):
        pair = []
        for _ in range(2):
            raw = [rng.randint(0, 6) for _ in range(nv)]
            if sum(raw) == 0:
                raw[rng.randrange(nv)] = 1
            total = sum(raw)
            pair.append(Point(tuple(Fraction(r, total) for r in raw)))
        yield pair[0], pair[1]


def _piece_relation(region, v: Vector, w: Vector):
    """Order relation decided by cached piece evaluation (no LP calls)."""
    from .cones import Relation

    d = vsub(v, w)
    fwd = pc.region_contains(region, d)
    bwd = pc.region_contains(region, tuple(-x for x in d))
    if fwd and bwd:
        return Relation.EQUIVALENT
    if fwd:
        return Relation.STRICT_GREATER
    if bwd:
        return Relation.STRICT_LESS
    return Relation.INCOMPARABLE


def verify_represents(
    profile: Profile,
    candidate: Representation,
    mixture_samples: int = 1000,
    seed: int = 20240901,
) -> VerificationRecord:
    """Check candidate against the social order on all vertex pairs and
    sampled mixtures; raises on the first disagreement."""
    from .profiles import point_coordinates

    domain = profile.domain
    nv = domain.vertex_count
    cand_imgs = [candidate.map(v) for v in domain.vertices]
    soc_imgs = [profile.social.map(v) for v in domain.vertices]
    cand_region = decompose(candidate.space.order)
    soc_region = decompose(profile.social.space.order)
    pairs = 0
    for i in range(nv):
        for j in range(i + 1, nv):
            got = _piece_relation(cand_region, cand_imgs[i], cand_imgs[j])
            want = _piece_relation(soc_region, soc_imgs[i], soc_imgs[j])
            if got is not want:
                raise RuntimeError(
                    f"synthesized representation disagrees on vertex pair {i},{j}: "
                    f"{got.value} vs {want.value}"
                )
            pairs += 1
    sampled = 0
    for x, y in _sample_mixture_pairs(domain, mixture_samples, seed):
        cx, cy = point_coordinates(domain, x), point_coordinates(domain, y)
        got = _piece_relation(cand_region, candidate.map(cx), candidate.map(cy))
        want = _piece_relation(soc_region, profile.social.map(cx), profile.social.map(cy))
        if got is not want:
            raise RuntimeError("synthesized representation disagrees on a mixture pair")
        sampled += 1
    return VerificationRecord(pairs, sampled)


def synthesize(
    profile: Profile,
    level: str,
    mixture_samples: int = 1000,
    seed: int = 20240901,
) -> SynthesisResult:
    """Build a representing space and linear map at the requested level.

    Levels map to certificate strength: P1 only linearity, P2 adds
    positivity, P3 strict positivity, P4 order-embedding components.  The
    result is self-verified before it is returned.
    """
    _require_axioms(profile, level)
    prod = profile.product_space
    c0 = induced_social_cone(profile)
    if level == "P1":
        cone = c0
    else:
        cone = cone_sum(c0, prod.order)
    space, qmap = quotient_by(prod, cone)
    social_rep = _compose_rep(space, qmap.matrix, profile.joint_map)
    verification = verify_represents(profile, social_rep, mixture_samples, seed)
    positivity = map_positivity(qmap)
    if level == "P2" and positivity.classification is PositivityClass.NOT_POSITIVE:
        raise RuntimeError("level P2 synthesis produced a non-positive map")
    if level in ("P3", "P4") and positivity.classification is not PositivityClass.STRICTLY_POSITIVE:
        raise RuntimeError(f"level {level} synthesis is not strictly positive")
    embeddings = None
    if level == "P4":
        flags = []
        for i, rep in enumerate(profile.individuals):
            comp = _component_map(qmap, profile, i)
            res = order_embedding(comp)
            if not res.holds:
                raise RuntimeError(f"component {i} failed the embedding certificate")
            flags.append(res)
        embeddings = tuple(flags)
    return SynthesisResult(
        level, space, qmap, social_rep, positivity, embeddings, verification
    )


def _component_map(lmap: PovsMap, profile: Profile, index: int) -> PovsMap:
    offset = sum(r.space.dim for r in profile.individuals[:index])
    d = profile.individuals[index].space.dim
    cols = tuple(
        tuple(row[offset + j] for j in range(d)) for row in lmap.matrix
    )
    return PovsMap(profile.individuals[index].space, lmap.target, cols)


# ---------------------------------------------------------------------------
# Affine recovery.


@dataclass(frozen=True)
class AffineSolution:
    map: PovsMap
    offset: Vector
    dr_holds: bool
    positivity: PositivityResult
    uniqueness_scope: Subspace
    axiom_equivalence: bool
    """True only under domain richness: then the positivity class is
    equivalent to the axiom level.  Without richness the class describes
    this particular solution and no converse is implied."""


def solve_affine(profile: Profile) -> Union[AffineSolution, AxiomReport]:
    """Write the social representation as L f_I + b, or report why not.

    The indifference axiom is exactly solvability; its failing report (with
    witness pair) is returned instead of a solution.  L is pinned down on
    the difference span and extended by zero on the canonical complement.
    """
    p1 = check_P1(profile)
    if not p1.holds:
        return p1
    domain = profile.domain
    joint = profile.joint_map
    social = profile.social.map
    base_i = joint(domain.vertices[0])
    base_0 = social(domain.vertices[0])
    g_rows = [vsub(joint(v), base_i) for v in domain.vertices[1:]]
    h_rows = [vsub(social(v), base_0) for v in domain.vertices[1:]]
    span = diff_span(domain, list(profile.individuals))
    stacked = tuple(g_rows) + _complement_rows(span)
    m0 = profile.social.space.dim
    l_rows = []
    for coord in range(m0):
        rhs = tuple(h[coord] for h in h_rows) + zeros(len(stacked) - len(g_rows))
        sol = solve_affine_system(stacked, rhs)
        if sol is None:
            raise RuntimeError("affine recovery inconsistent although P1 holds")
        l_rows.append(sol)
    l_matrix = tuple(l_rows)
    b = vsub(social(domain.vertices[0]), mat_vec(l_matrix, base_i))
    for v in domain.vertices:
        assert social(v) == vadd(mat_vec(l_matrix, joint(v)), b), (
            "affine recovery failed vertex verification"
        )
    lmap = PovsMap(profile.product_space, profile.social.space, l_matrix)
    dr = check_DR(profile)
    positivity = map_positivity(lmap)
    return AffineSolution(
        map=lmap,
        offset=b,
        dr_holds=dr,
        positivity=positivity,
        uniqueness_scope=span,
        axiom_equivalence=dr,
    )


def _complement_rows(span: Subspace) -> Matrix:
    """Unit vectors on the RREF non-pivot columns: a canonical complement."""
    from .linalg import rref

    _, pivots = rref(span.basis) if span.basis else ((), [])
    pivot_set = set(pivots)
    n = span.ambient_dim
    return tuple(unit(n, c) for c in range(n) if c not in pivot_set)


# ---------------------------------------------------------------------------
# Common-space form.


@dataclass(frozen=True)
class CommonSpaceResult:
    space: Povs
    individual_reps: tuple[Representation, ...]
    social_rep: Representation
    dr_form: bool
    summation_checked: int
    """Number of vertices on which the individual sum reproduced the social
    representation exactly."""


def common_space(profile: Profile, use_dr_form: bool = False) -> CommonSpaceResult:
    """One space for everyone, with the social map the sum of the others.

    Without the richness form this runs the level-P4 synthesis and reuses
    its components; with it, the affine solution rebases everything into
    the social target space, absorbing the constant into one individual.
    """
    reports = check_axioms(profile)
    for lv in LEVELS:
        if not reports[lv].holds:
            raise AxiomFailedError(reports[lv])
    domain = profile.domain
    if use_dr_form:
        if not check_DR(profile):
            raise DRRequiredError("the richness form needs the joint span to fill V_I")
        sol = solve_affine(profile)
        assert isinstance(sol, AffineSolution)
        space = profile.social.space
        reps = []
        offset = 0
        for i, rep in enumerate(profile.individuals):
            block = tuple(
                tuple(row[offset + j] for j in range(rep.space.dim))
                for row in sol.map.matrix
            )
            g = _compose_rep(space, block, rep.map)
            offset += rep.space.dim
            reps.append(g)
        if any(x != 0 for x in sol.offset):
            # Absorb the constant into one individual so the plain sum lands
            # exactly on the social map.
            first = reps[0]
            reps[0] = Representation(
                space, AffineMap(first.map.matrix, vadd(first.map.offset, sol.offset))
            )
        social_rep = profile.social
    else:
        syn = synthesize(profile, "P4")
        space = syn.space
        reps = []
        offset = 0
        for rep in profile.individuals:
            block = tuple(
                tuple(row[offset + j] for j in range(rep.space.dim))
                for row in syn.map.matrix
            )
            reps.append(_compose_rep(space, block, rep.map))
            offset += rep.space.dim
        social_rep = syn.social_rep
    checked = _verify_common(domain, profile, reps, social_rep)
    return CommonSpaceResult(space, tuple(reps), social_rep, use_dr_form, checked)


def _verify_common(domain, profile, reps, social_rep) -> int:
    count = 0
    for v in domain.vertices:
        total = zeros(social_rep.space.dim)
        for g in reps:
            total = vadd(total, g.map(v))
        if total != social_rep.map(v):
            raise RuntimeError("individual sum failed to reproduce the social map")
        count += 1
    for i, (g, rep) in enumerate(zip(reps, profile.individuals)):
        for a in range(domain.vertex_count):
            for b in range(a + 1, domain.vertex_count):
                x, y = vertex_point(domain, a), vertex_point(domain, b)
                if (
                    compare(domain, g, x, y).relation
                    is not compare(domain, rep, x, y).relation
                ):
                    raise RuntimeError(f"common-space rep {i} changed the preorder")
    return count


# ---------------------------------------------------------------------------
# Uniqueness witnesses.


@dataclass(frozen=True)
class IsoResult:
    status: str  # "iso" | "not_same_preorder" | "not_pervasive"
    transform: Optional[PovsMap] = None
    offset: Optional[Vector] = None
    counterexample: Optional[tuple[Point, Point]] = None


def representation_iso(domain: Domain, rep_a: Representation, rep_b: Representation) -> IsoResult:
    """The unique affine order isomorphism g = T f + b between two pervasive
    representations of one preorder, or the reason there is none."""
    if not check_pervasive(domain, rep_a) or not check_pervasive(domain, rep_b):
        return IsoResult("not_pervasive")
    mismatch = _preorder_mismatch(domain, rep_a, rep_b)
    if mismatch is not None:
        return IsoResult("not_same_preorder", counterexample=mismatch)
    base_a = rep_a.map(domain.vertices[0])
    base_b = rep_b.map(domain.vertices[0])
    g_rows = [vsub(rep_a.map(v), base_a) for v in domain.vertices[1:]]
    h_rows = [vsub(rep_b.map(v), base_b) for v in domain.vertices[1:]]
    t_rows = []
    for coord in range(rep_b.space.dim):
        rhs = tuple(h[coord] for h in h_rows)
        sol = solve_affine_system(tuple(g_rows), rhs)
        if sol is None:
            raise RuntimeError("pervasive graphs inconsistent despite preorder equality")
        t_rows.append(sol)
    t_matrix = tuple(t_rows)
    tmap = PovsMap(rep_a.space, rep_b.space, t_matrix)
    b = vsub(base_b, mat_vec(t_matrix, base_a))
    for v in domain.vertices:
        assert rep_b.map(v) == vadd(mat_vec(t_matrix, rep_a.map(v)), b)
    if rep_a.space.dim != rep_b.space.dim or kernel_basis(t_matrix, ncols=rep_a.space.dim).dim:
        raise RuntimeError("order isomorphism is not bijective; internal inconsistency")
    pos = map_positivity(tmap)
    inv = _inverse_map(tmap)
    pos_inv = map_positivity(inv)
    if (
        pos.classification is PositivityClass.NOT_POSITIVE
        or pos_inv.classification is PositivityClass.NOT_POSITIVE
    ):
        raise RuntimeError("transform between equal preorders is not an order iso")
    return IsoResult("iso", transform=tmap, offset=b)


def _inverse_map(tmap: PovsMap) -> PovsMap:
    n = tmap.source.dim
    cols = []
    for i in range(n):
        col = solve_affine_system(tmap.matrix, unit(n, i))
        if col is None:
            raise RuntimeError("matrix not invertible")
        cols.append(col)
    inv_matrix = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return PovsMap(tmap.target, tmap.source, inv_matrix)


def _preorder_mismatch(domain, rep_a, rep_b):
    """A point pair classified differently by the two representations."""
    da, db = rep_a.space.dim, rep_b.space.dim
    total = da + db
    mem_a = tuple(pc.embed(p, 0, total) for p in decompose(rep_a.space.order))
    mem_b = tuple(pc.embed(p, da, total) for p in decompose(rep_b.space.order))
    span = diff_span(domain, [rep_a, rep_b])
    extra = span.orthogonal_complement_rows()
    for first, second in ((mem_a, mem_b), (mem_b, mem_a)):
        bad = pc.region_intersect(first, pc.region_complement(second, total))
        diff = pc.region_witness(bad, extra_equalities=extra)
        if diff is not None:
            pair = realize_difference(domain, [rep_a.map, rep_b.map], diff)
            if pair is None:
                raise RuntimeError("span witness not realizable; internal inconsistency")
            return pair
    return None


def compare_syntheses(profile: Profile, lmap: PovsMap, lmap2: PovsMap) -> PovsMap:
    """The unique order isomorphism M between two synthesized images with
    M after the first map equal to the second; needs domain richness."""
    if not check_DR(profile):
        raise DRRequiredError("synthesis comparison needs domain richness")
    for cand in (lmap, lmap2):
        witness = _representation_defect(profile, cand)
        if witness is not None:
            raise NotRepresentingError(witness)
    im1 = _image_space(lmap)
    im2 = _image_space(lmap2)
    coords1 = _coordinate_rows(im1)
    coords2 = _coordinate_rows(im2)
    space1 = Povs(im1.dim, restrict_cone(lmap.target.order, im1))
    space2 = Povs(im2.dim, restrict_cone(lmap2.target.order, im2))
    x_cols = mat_mul(coords1, lmap.matrix)
    y_cols = mat_mul(coords2, lmap2.matrix)
    xt = tuple(zip(*x_cols)) if x_cols else ()
    m_rows = []
    for coord in range(im2.dim):
        rhs = tuple(y_cols[coord])
        sol = solve_affine_system(mat(xt), rhs)
        if sol is None:
            raise RuntimeError("no linear factorization; representations inconsistent")
        m_rows.append(sol)
    m_matrix = tuple(m_rows)
    mmap = PovsMap(space1, space2, m_matrix)
    if mat_mul(m_matrix, x_cols) != y_cols:
        raise RuntimeError("factorization failed exact replay")
    pos = map_positivity(mmap)
    pos_inv = map_positivity(_inverse_map(mmap))
    if (
        pos.classification is PositivityClass.NOT_POSITIVE
        or pos_inv.classification is PositivityClass.NOT_POSITIVE
    ):
        raise RuntimeError("factorization is not an order isomorphism")
    return mmap


def _representation_defect(profile: Profile, cand: PovsMap):
    """A witness pair on which ``cand . f_I`` disagrees with the social order."""
    rep = _compose_rep(cand.target, cand.matrix, profile.joint_map)
    domain = profile.domain
    for i in range(domain.vertex_count):
        for j in range(domain.vertex_count):
            if i == j:
                continue
            x, y = vertex_point(domain, i), vertex_point(domain, j)
            if (
                compare(domain, rep, x, y).relation
                is not compare(domain, profile.social, x, y).relation
            ):
                return (x, y)
    # Vertex pairs are not conclusive in general: decide over the joint span.
    da = profile.product_space.dim
    d0 = profile.social.space.dim
    total = da + d0
    social_mem = tuple(
        pc.embed(p, da, total) for p in decompose(profile.social.space.order)
    )
    cand_mem = tuple(
        pc.embed(pc.pullback(p, cand.matrix, da), 0, total)
        for p in decompose(cand.target.order)
    )
    span = diff_span(domain, list(profile.individuals) + [profile.social])
    extra = span.orthogonal_complement_rows()
    for first, second in ((social_mem, cand_mem), (cand_mem, social_mem)):
        bad = pc.region_intersect(first, pc.region_complement(second, total))
        diff = pc.region_witness(bad, extra_equalities=extra)
        if diff is not None:
            maps = [r.map for r in profile.individuals] + [profile.social.map]
            return realize_difference(profile.domain, maps, diff)
    return None


def _image_space(lmap: PovsMap) -> Subspace:
    cols = tuple(zip(*lmap.matrix)) if lmap.matrix else ()
    return Subspace.from_vectors(lmap.target.dim, [tuple(c) for c in cols])


def _coordinate_rows(span: Subspace) -> Matrix:
    from .profiles import _left_inverse_rows

    return _left_inverse_rows(span)


@dataclass(frozen=True)
class CommonSpaceLink:
    """An order isomorphism and per-individual constants relating two
    common-space solutions."""

    transform: PovsMap
    offsets: tuple[Vector, ...]
    social_offset: Vector


@dataclass(frozen=True)
class CommonSpaceMismatch:
    reason: str
    individual: Optional[int] = None


def verify_common_space_uniqueness(
    profile: Profile, first: CommonSpaceResult, second: CommonSpaceResult
) -> Union[CommonSpaceLink, CommonSpaceMismatch]:
    """Relate two common-space solutions by one order isomorphism."""
    if not check_DR(profile):
        raise DRRequiredError("uniqueness comparison needs domain richness")
    domain = profile.domain
    if not check_pervasive(domain, first.social_rep) or not check_pervasive(
        domain, second.social_rep
    ):
        return CommonSpaceMismatch("social representation not pervasive")
    iso = representation_iso(domain, first.social_rep, second.social_rep)
    if iso.status != "iso":
        return CommonSpaceMismatch(f"social representations differ: {iso.status}")
    t = iso.transform
    offsets = []
    for i, (g, g2) in enumerate(zip(first.individual_reps, second.individual_reps)):
        b_i = vsub(g2.map(domain.vertices[0]), mat_vec(t.matrix, g.map(domain.vertices[0])))
        for v in domain.vertices:
            if g2.map(v) != vadd(mat_vec(t.matrix, g.map(v)), b_i):
                return CommonSpaceMismatch("individual maps unrelated by the iso", i)
        offsets.append(b_i)
    return CommonSpaceLink(t, tuple(offsets), iso.offset)
