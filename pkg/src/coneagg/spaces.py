"""Partially ordered vector spaces, linear maps, and their order properties.

Positivity, strict positivity and order embedding are decided exactly by
intersecting piece regions: a map L is positive iff the source cone region
meets the complement of the pullback of the target cone region nowhere, and
each such emptiness question is one batch of LP feasibility calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .linalg import (
    DimensionMismatchError,
    Matrix,
    Vector,
    identity,
    kernel_basis,
    mat,
    mat_vec,
    zeros,
)
from . import pieces as pc
from .cones import (
    ConeDesc,
    OrthantCone,
    ProductCone,
    check_supported,
    cone_dim,
    cone_image,
    decompose,
    lineality,
    member,
    v_form,
)


class NotPartialOrderError(ValueError):
    """The cone has nonzero lineality, so the induced preorder is not a partial order."""


@dataclass(frozen=True)
class Povs:
    """A finite-dimensional vector space with a linear (pre)order cone.

    Public constructions should go through ``partial_order_space`` which
    checks antisymmetry; bare ``Povs`` values with nonzero lineality only
    appear as intermediates inside synthesis.
    """

    dim: int
    order: ConeDesc

    def __post_init__(self):
        if cone_dim(self.order) != self.dim:
            raise DimensionMismatchError("order cone dim vs space dim")


def partial_order_space(dim: int, order: ConeDesc) -> Povs:
    check_supported(order)
    space = Povs(dim, order)
    if lineality(order).dim != 0:
        raise NotPartialOrderError(
            "cone has nonzero lineality; quotient it before building a space"
        )
    return space


def real_line() -> Povs:
    return Povs(1, OrthantCone(1))


@dataclass(frozen=True)
class PovsMap:
    source: Povs
    target: Povs
    matrix: Matrix

    def __post_init__(self):
        if len(self.matrix) != self.target.dim:
            raise DimensionMismatchError("matrix rows vs target dim")
        if self.matrix and len(self.matrix[0]) != self.source.dim:
            raise DimensionMismatchError("matrix cols vs source dim")
        if not self.matrix and self.target.dim != 0:
            raise DimensionMismatchError("empty matrix needs 0-dim target")

    def __call__(self, v: Vector) -> Vector:
        if len(v) != self.source.dim:
            raise DimensionMismatchError("vector dim vs map source dim")
        return mat_vec(self.matrix, v)


def product(spaces: Sequence[Povs]) -> Povs:
    """Product space with the blockwise product order."""
    return Povs(sum(s.dim for s in spaces), ProductCone(tuple(s.order for s in spaces)))


def embedding_map(spaces: Sequence[Povs], index: int) -> PovsMap:
    """The natural inclusion of one factor into the product space."""
    prod = product(spaces)
    offset = sum(s.dim for s in spaces[:index])
    d = spaces[index].dim
    rows = []
    for i in range(prod.dim):
        row = list(zeros(d))
        if offset <= i < offset + d:
            row[i - offset] = 1
        rows.append(tuple(row))
    return PovsMap(source=spaces[index], target=prod, matrix=mat(rows))


class PositivityClass(Enum):
    NOT_POSITIVE = "not_positive"
    POSITIVE = "positive"
    STRICTLY_POSITIVE = "strictly_positive"


@dataclass(frozen=True)
class PositivityResult:
    classification: PositivityClass
    witness: Optional[Vector] = None
    """For NOT_POSITIVE: some v in the source cone with Lv outside the target
    cone.  For POSITIVE: some v strictly above 0 whose image is equivalent
    to 0, blocking strictness."""


def _source_region(space: Povs):
    return decompose(space.order)


def map_positivity(lmap: PovsMap) -> PositivityResult:
    """Exact positivity classification with violating witnesses."""
    check_supported(lmap.source.order)
    check_supported(lmap.target.order)
    n = lmap.source.dim
    tgt_region = decompose(lmap.target.order)
    pre = pc.region_pullback(tgt_region, lmap.matrix, n)

    gens = v_form(lmap.source.order)
    if gens is not None:
        for g in gens:
            if not member(lmap.target.order, lmap(g)).holds:
                return PositivityResult(PositivityClass.NOT_POSITIVE, g)
    else:
        src_region = _source_region(lmap.source)
        bad = pc.region_intersect(src_region, pc.region_complement(pre, n))
        w = pc.region_witness(bad)
        if w is not None:
            return PositivityResult(PositivityClass.NOT_POSITIVE, w)

    # Strictness: no v with v > 0 in the source and Lv equivalent to 0.
    src_region = _source_region(lmap.source)
    strictly_pos = pc.region_intersect(
        src_region, pc.region_complement(pc.region_negate(src_region), n)
    )
    sym_tgt = pc.region_intersect(tgt_region, pc.region_negate(tgt_region))
    pre_sym = pc.region_pullback(sym_tgt, lmap.matrix, n)
    blocked = pc.region_witness(pc.region_intersect(strictly_pos, pre_sym))
    if blocked is not None:
        return PositivityResult(PositivityClass.POSITIVE, blocked)
    return PositivityResult(PositivityClass.STRICTLY_POSITIVE)


@dataclass(frozen=True)
class EmbeddingResult:
    holds: bool
    failure: Optional[str] = None
    counterexample: Optional[Vector] = None


def order_embedding(lmap: PovsMap) -> EmbeddingResult:
    """Injectivity plus both directions of order reflection."""
    check_supported(lmap.source.order)
    check_supported(lmap.target.order)
    n = lmap.source.dim
    ker = kernel_basis(lmap.matrix, ncols=n)
    if ker.dim > 0:
        return EmbeddingResult(False, "kernel", ker.basis[0])
    src_region = _source_region(lmap.source)
    tgt_region = decompose(lmap.target.order)
    pre = pc.region_pullback(tgt_region, lmap.matrix, n)
    forward_bad = pc.region_intersect(src_region, pc.region_complement(pre, n))
    w = pc.region_witness(forward_bad)
    if w is not None:
        return EmbeddingResult(False, "forward", w)
    backward_bad = pc.region_intersect(pre, pc.region_complement(src_region, n))
    w = pc.region_witness(backward_bad)
    if w is not None:
        return EmbeddingResult(False, "backward", w)
    # An injective representation between partial orders is strictly positive.
    strictness = map_positivity(lmap)
    assert strictness.classification is PositivityClass.STRICTLY_POSITIVE, (
        "order embedding without strict positivity: internal inconsistency"
    )
    return EmbeddingResult(True)


def quotient_by(space: Povs, cone: ConeDesc) -> tuple[Povs, PovsMap]:
    """Quotient the ambient space by the cone's lineality.

    Returns the quotient space carrying the image cone and the quotient map;
    the induced order is verified to be antisymmetric.  The quotient basis
    is the reduced-echelon complement of the lineality space, so repeated
    runs serialize identically.
    """
    if cone_dim(cone) != space.dim:
        raise DimensionMismatchError("cone dim vs ambient dim")
    lin = lineality(cone)
    proj = lin.complement_pivot_map()
    qdim = space.dim - lin.dim
    if lin.dim == 0:
        proj = identity(space.dim)
    qcone = cone_image(cone, proj, qdim)
    residual = lineality(qcone)
    if residual.dim != 0:
        raise RuntimeError(
            "quotient cone kept nonzero lineality; cone description inconsistent"
        )
    qspace = Povs(qdim, qcone)
    return qspace, PovsMap(source=space, target=qspace, matrix=proj)
