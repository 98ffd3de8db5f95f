"""Exact aggregation of incomplete preorders over partially ordered vector spaces."""

from .linalg import (
    AffineMap,
    DimensionMismatchError,
    Subspace,
    kernel_basis,
    mat,
    solve_affine_system,
    vec,
)
from .lp import (
    Constraint,
    Feasible,
    Infeasible,
    LinearConstraintSystem,
    Rel,
    lp_decide,
    verify_certificate,
)
from .cones import (
    LexCompose,
    OrthantCone,
    PieceUnionCone,
    PolyhedralH,
    PolyhedralV,
    ProductCone,
    Relation,
    TrivialCone,
    UnsupportedConeError,
    classify,
    cone_image,
    cone_sum,
    decompose,
    h_to_v,
    lineality,
    member,
    v_to_h,
)
from .spaces import (
    NotPartialOrderError,
    PositivityClass,
    Povs,
    PovsMap,
    map_positivity,
    order_embedding,
    partial_order_space,
    product,
    quotient_by,
    real_line,
)
from .profiles import (
    ConeRestrictionError,
    Domain,
    Point,
    Profile,
    Representation,
    check_DR,
    check_pervasive,
    check_weak_DR,
    compare,
    cube_domain,
    diff_span,
    evaluate,
    induced_social_cone,
    make_pervasive,
    simplex_domain,
)
from .pareto import AxiomFailedError, AxiomReport, check_P1, check_P2, check_P3, check_P4, check_axioms
from .aggregate import (
    AffineSolution,
    CommonSpaceResult,
    DRRequiredError,
    IsoResult,
    SynthesisResult,
    common_space,
    compare_syntheses,
    representation_iso,
    solve_affine,
    synthesize,
    verify_common_space_uniqueness,
)
from .pooling import (
    FiniteAlgebra,
    VectorMeasure,
    check_positivity_nontriviality,
    extend,
    gfc_check,
    likelihood_compare,
    lyapunov_gap,
    measure_of,
    pool,
    restrict,
)

__version__ = "0.1.0"
