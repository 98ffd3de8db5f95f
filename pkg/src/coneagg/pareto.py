"""Exact decision procedures for the four unanimity axioms on a profile.

Every quantification over pairs of domain points reduces to a search over
the joint difference span: scaled joint image differences of point pairs
fill that subspace exactly (the image of a polytope under affine maps is a
polytope, and spans of difference sets of convex sets are realized up to
positive scale).  The span is parametrized once, so every cone membership,
complement and intersection happens in span coordinates, whose dimension
is bounded by the vertex count; each axiom's violation set becomes a short
list of half-open pieces and one LP per piece decides it.  Violations are
replayed as vertex-weight witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linalg import Matrix, Subspace, Vector, mat_vec, transpose
from .lp import LpInternalError
from . import pieces as pc
from .cones import decompose
from .profiles import Point, Profile, Representation, diff_span, realize_difference


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    holds: bool
    witness: Optional[tuple[Point, Point]] = None
    individual: Optional[int] = None
    difference: Optional[Vector] = None

    def as_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "holds": self.holds,
            "witness": None
            if self.witness is None
            else [list(self.witness[0].weights), list(self.witness[1].weights)],
            "individual": self.individual,
        }


class AxiomFailedError(RuntimeError):
    """A pipeline step needed an axiom that the profile does not satisfy."""

    def __init__(self, report: AxiomReport):
        super().__init__(f"axiom {report.axiom} fails on this profile")
        self.report = report


class _SpanContext:
    """The joint difference span of a profile, parametrized for searches.

    Vectors of the span are written as B^T t; cone conditions on any block
    pull back to conditions on the parameters t, so the whole search runs
    in dimension ``span.dim``.
    """

    def __init__(self, profile: Profile):
        self.profile = profile
        reps = list(profile.individuals) + [profile.social]
        self.span = diff_span(profile.domain, reps)
        self.param_rows: Matrix = transpose(self.span.basis)  # total x k
        self.k = self.span.dim
        offs = []
        offset = 0
        for rep in profile.individuals:
            offs.append(offset)
            offset += rep.space.dim
        self.individual_offsets = offs
        self.social_offset = offset

    def to_ambient(self, t: Vector) -> Vector:
        return mat_vec(self.param_rows, t)

    def block_region(self, rep: Representation, offset: int) -> pc.Region:
        block = self.param_rows[offset : offset + rep.space.dim]
        return pc.region_pullback(decompose(rep.space.order), block, self.k)

    def member(self, index: Optional[int]) -> pc.Region:
        """Membership region for individual ``index`` or the social block."""
        if index is None:
            return self.block_region(self.profile.social, self.social_offset)
        return self.block_region(
            self.profile.individuals[index], self.individual_offsets[index]
        )


def _sym(ctx: _SpanContext, mem: pc.Region) -> pc.Region:
    return pc.region_intersect(mem, pc.region_negate(mem))


def _not_sym(ctx: _SpanContext, mem: pc.Region) -> pc.Region:
    return pc.region(
        list(pc.region_complement(mem, ctx.k))
        + list(pc.region_complement(pc.region_negate(mem), ctx.k))
    )


def _strict(ctx: _SpanContext, mem: pc.Region) -> pc.Region:
    return pc.region_intersect(
        mem, pc.region_complement(pc.region_negate(mem), ctx.k)
    )


def _not_strict(ctx: _SpanContext, mem: pc.Region) -> pc.Region:
    return pc.region(
        list(pc.region_complement(mem, ctx.k)) + list(pc.region_negate(mem))
    )


def recover_point_pair(profile: Profile, difference: Vector) -> tuple[Point, Point]:
    """Two domain points whose joint image difference is a positive multiple
    of the given vector, found by one LP over vertex weights."""
    maps = [r.map for r in profile.individuals] + [profile.social.map]
    pair = realize_difference(profile.domain, maps, difference)
    if pair is None:
        raise LpInternalError("span member not realizable as a point-pair difference")
    return pair


def check_P1(profile: Profile) -> AxiomReport:
    """All individuals indifferent forces social indifference."""
    ctx = _SpanContext(profile)
    acc: pc.Region = (pc.universe(ctx.k),)
    for i in range(len(profile.individuals)):
        acc = pc.region_intersect(acc, _sym(ctx, ctx.member(i)))
    acc = pc.region_intersect(acc, _not_sym(ctx, ctx.member(None)))
    return _report("P1", ctx, acc)


def check_P2(profile: Profile) -> AxiomReport:
    """Unanimous weak preference forces social weak preference."""
    ctx = _SpanContext(profile)
    acc: pc.Region = (pc.universe(ctx.k),)
    for i in range(len(profile.individuals)):
        acc = pc.region_intersect(acc, ctx.member(i))
    acc = pc.region_intersect(acc, pc.region_complement(ctx.member(None), ctx.k))
    return _report("P2", ctx, acc)


def check_P3(profile: Profile) -> AxiomReport:
    """Unanimous weak preference with one strict forces social strictness."""
    ctx = _SpanContext(profile)
    base: pc.Region = (pc.universe(ctx.k),)
    for i in range(len(profile.individuals)):
        base = pc.region_intersect(base, ctx.member(i))
    not_soc_strict = _not_strict(ctx, ctx.member(None))
    base = pc.region_intersect(base, not_soc_strict)
    for j in range(len(profile.individuals)):
        strict_j = _strict(ctx, ctx.member(j))
        bad = pc.region_intersect(base, strict_j)
        report = _report("P3", ctx, bad, individual=j)
        if not report.holds:
            return report
    return AxiomReport("P3", True)


def check_P4(profile: Profile) -> AxiomReport:
    """An unopposed incomparability cannot be socially reversed."""
    ctx = _SpanContext(profile)
    soc_mem = ctx.member(None)
    soc_leq = pc.region_negate(soc_mem)  # social difference weakly below zero
    for j in range(len(profile.individuals)):
        acc: pc.Region = soc_leq
        for i in range(len(profile.individuals)):
            if i == j:
                continue
            acc = pc.region_intersect(acc, ctx.member(i))
        mem_j = ctx.member(j)
        acc = pc.region_intersect(acc, pc.region_complement(mem_j, ctx.k))
        acc = pc.region_intersect(
            acc, pc.region_complement(pc.region_negate(mem_j), ctx.k)
        )
        report = _report("P4", ctx, acc, individual=j)
        if not report.holds:
            return report
    return AxiomReport("P4", True)


def check_axioms(profile: Profile) -> dict[str, AxiomReport]:
    return {
        "P1": check_P1(profile),
        "P2": check_P2(profile),
        "P3": check_P3(profile),
        "P4": check_P4(profile),
    }


def _report(
    axiom: str, ctx: _SpanContext, violation: pc.Region, individual: Optional[int] = None
) -> AxiomReport:
    t = pc.region_witness(violation)
    if t is None:
        return AxiomReport(axiom, True)
    diff = ctx.to_ambient(t)
    x, y = recover_point_pair(ctx.profile, diff)
    return AxiomReport(axiom, False, witness=(x, y), individual=individual, difference=diff)
