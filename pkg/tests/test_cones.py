"""Tests for cone descriptions, membership, decomposition and conversion."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coneagg.cones import (
    LexCompose,
    OrthantCone,
    PieceUnionCone,
    PolyhedralH,
    PolyhedralV,
    ProductCone,
    Relation,
    TrivialCone,
    classify,
    cone_dim,
    cone_image,
    cone_sum,
    decompose,
    h_to_v,
    lineality,
    member,
    mirror,
    v_form,
    v_to_h,
)
from coneagg.linalg import identity, mat, mat_vec, vec
from coneagg.lp import verify_certificate
from coneagg.pieces import region_contains

F = Fraction

EXAMPLE1_CONE = LexCompose(OrthantCone(2), OrthantCone(1))


def test_orthant_membership():
    c = OrthantCone(2)
    assert member(c, vec([1, 0])).holds
    assert not member(c, vec([1, -1])).holds


def test_lex_membership_ties_broken_by_tail():
    assert not member(EXAMPLE1_CONE, vec([0, 0, -5])).holds
    assert member(EXAMPLE1_CONE, vec([0, 0, 5])).holds


def test_vform_membership_with_weights():
    c = PolyhedralV((vec([1, 1]), vec([1, -1])), 2)
    res = member(c, vec([2, 0]))
    assert res.holds
    weights = res.certificate["weights"]
    combo = [
        weights[0] * g0 + weights[1] * g1
        for g0, g1 in zip(vec([1, 1]), vec([1, -1]))
    ]
    assert combo == [2, 0]
    out = member(c, vec([0, 1]))
    assert not out.holds
    assert "farkas" in out.certificate


def test_trivial_cone_is_zero_only():
    c = TrivialCone(2)
    assert member(c, vec([0, 0])).holds
    assert not member(c, vec([0, 1])).holds


def test_classify_on_bundles():
    # Images of the three-good bundles under the weighted mixing map.
    v = vec([F(2, 3), F(1, 3), 0])
    w = vec([F(1, 3), F(2, 3), 0])
    assert classify(EXAMPLE1_CONE, v, w).relation is Relation.INCOMPARABLE
    v2 = vec([F(4, 3), F(2, 3), 0])
    assert classify(EXAMPLE1_CONE, v2, w).relation is Relation.STRICT_GREATER
    assert classify(EXAMPLE1_CONE, v, v).relation is Relation.EQUIVALENT


def test_decompose_single_piece_for_h_form():
    c = PolyhedralH(mat([[1, 2], [0, 1]]), 2)
    ps = decompose(c)
    assert len(ps) == 1
    assert ps[0].nonstrict and not ps[0].strict and not ps[0].equalities


def test_decompose_lex_three_pieces():
    ps = decompose(EXAMPLE1_CONE)
    assert len(ps) == 3
    strict_pieces = [p for p in ps if p.strict]
    zero_pieces = [p for p in ps if p.equalities]
    assert len(strict_pieces) == 2 and len(zero_pieces) == 1


def test_decompose_trivial_all_equalities():
    ps = decompose(TrivialCone(3))
    assert len(ps) == 1
    assert len(ps[0].equalities) == 3


def _random_vector(rng, dim):
    return vec([F(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(dim)])


SAMPLE_CONES = [
    OrthantCone(3),
    TrivialCone(2),
    PolyhedralH(mat([[1, 1], [1, -1]]), 2),
    PolyhedralV((vec([1, 1]), vec([1, -1])), 2),
    ProductCone((OrthantCone(1), TrivialCone(1), OrthantCone(1))),
    EXAMPLE1_CONE,
    LexCompose(OrthantCone(1), LexCompose(OrthantCone(1), OrthantCone(1))),
]


@pytest.mark.parametrize("cone", SAMPLE_CONES, ids=lambda c: type(c).__name__)
def test_membership_agrees_with_decomposition(cone):
    rng = random.Random(20240601)
    ps = decompose(cone)
    n = cone_dim(cone)
    for _ in range(400):
        v = _random_vector(rng, n)
        assert member(cone, v).holds == region_contains(ps, v)


@pytest.mark.parametrize("cone", SAMPLE_CONES, ids=lambda c: type(c).__name__)
def test_cone_axioms_on_samples(cone):
    rng = random.Random(77)
    n = cone_dim(cone)
    members = []
    for _ in range(200):
        v = _random_vector(rng, n)
        if member(cone, v).holds:
            members.append(v)
    zero = vec([0] * n)
    assert member(cone, zero).holds
    for v in members[:20]:
        lam = F(rng.randint(1, 9), rng.randint(1, 9))
        assert member(cone, tuple(lam * x for x in v)).holds
    for v in members[:10]:
        for w in members[:10]:
            assert member(cone, tuple(a + b for a, b in zip(v, w))).holds


@pytest.mark.parametrize("cone", SAMPLE_CONES, ids=lambda c: type(c).__name__)
def test_classify_mirror_symmetry(cone):
    rng = random.Random(3)
    n = cone_dim(cone)
    for _ in range(50):
        v, w = _random_vector(rng, n), _random_vector(rng, n)
        assert classify(cone, v, w).relation is mirror(classify(cone, w, v).relation)


def test_farkas_certificates_replay():
    c = PolyhedralV((vec([1, 0]), vec([0, 1])), 2)
    res = member(c, vec([-1, 0]))
    assert not res.holds
    # The certificate refutes the weight system; replay it there.
    from coneagg.lp import Constraint, LinearConstraintSystem, Rel

    gens = [vec([1, 0]), vec([0, 1])]
    rows = [
        Constraint(Rel.EQ, tuple(g[i] for g in gens), F(-1) if i == 0 else F(0))
        for i in range(2)
    ]
    rows += [Constraint(Rel.GEQ, vec([1, 0]), F(0)), Constraint(Rel.GEQ, vec([0, 1]), F(0))]
    sys = LinearConstraintSystem(2, tuple(rows))
    assert verify_certificate(sys, res.certificate["farkas"])


def test_h_to_v_orthant_roundtrip():
    rows = identity(2)
    gens = h_to_v(rows, 2)
    assert set(gens) == {vec([1, 0]), vec([0, 1])}


def test_v_to_h_axes():
    a = v_to_h((vec([1, 0]), vec([0, 1])), 2)
    assert set(a) == {vec([1, 0]), vec([0, 1])}


def test_v_to_h_empty_generators_pins_origin():
    rows = v_to_h((), 2)
    c = PolyhedralH(rows, 2)
    assert member(c, vec([0, 0])).holds
    for v in [vec([1, 0]), vec([0, -1]), vec([F(1, 2), F(1, 2)])]:
        assert not member(c, v).holds


def test_h_to_v_no_rows_full_space():
    gens = h_to_v((), 2)
    c = PolyhedralV(gens, 2)
    rng = random.Random(5)
    for _ in range(20):
        assert member(c, _random_vector(rng, 2)).holds


@pytest.mark.parametrize(
    "rows",
    [
        identity(3),
        mat([[1, 1], [1, -1]]),
        mat([[1, 1, 0], [0, 1, 1]]),
        mat([[1, -1, 0], [-1, 1, 0]]),
        mat([[2, 1], [1, 2], [1, 1]]),
    ],
)
def test_dd_roundtrip_preserves_membership(rows):
    dim = len(rows[0])
    h = PolyhedralH(rows, dim)
    gens = h_to_v(rows, dim)
    v = PolyhedralV(gens, dim)
    rng = random.Random(11)
    for _ in range(120):
        x = _random_vector(rng, dim)
        assert member(h, x).holds == member(v, x).holds


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    ),
    st.integers(0, 2**30),
)
def test_dd_roundtrip_random(rows, seed):
    m = mat(rows)
    h = PolyhedralH(m, 3)
    v = PolyhedralV(h_to_v(m, 3), 3)
    rng = random.Random(seed)
    for _ in range(25):
        x = _random_vector(rng, 3)
        assert member(h, x).holds == member(v, x).holds


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    ),
    st.integers(0, 2**30),
)
def test_vh_roundtrip_random_generators(gens, seed):
    g = tuple(vec(x) for x in gens)
    v = PolyhedralV(g, 3)
    h = PolyhedralH(v_to_h(g, 3), 3)
    rng = random.Random(seed)
    for _ in range(25):
        x = _random_vector(rng, 3)
        assert member(v, x).holds == member(h, x).holds


def test_lineality_orthant_zero():
    assert lineality(OrthantCone(3)).dim == 0


def test_lineality_vform_hand_check():
    # Both (1,-1) and (-1,1) are generators, so that line folds into C and -C.
    c = PolyhedralV((vec([1, -1]), vec([-1, 1]), vec([1, 1])), 2)
    lin = lineality(c)
    assert lin.dim == 1
    assert lin.contains(vec([1, -1]))


def test_lineality_full_space():
    c = PolyhedralV((vec([1, 0]), vec([-1, 0]), vec([0, 1]), vec([0, -1])), 2)
    assert lineality(c).dim == 2


def test_lineality_lex_is_zero():
    assert lineality(EXAMPLE1_CONE).dim == 0


def test_cone_sum_of_axes_is_quadrant():
    c = cone_sum(PolyhedralV((vec([1, 0]),), 2), PolyhedralV((vec([0, 1]),), 2))
    assert isinstance(c, PolyhedralV)
    rng = random.Random(9)
    orth = OrthantCone(2)
    for _ in range(60):
        x = _random_vector(rng, 2)
        assert member(c, x).holds == member(orth, x).holds


def test_cone_image_collapses_quadrant_to_ray():
    img = cone_image(OrthantCone(2), mat([[1, 1]]), 1)
    assert member(img, vec([3])).holds
    assert not member(img, vec([-1])).holds


def test_piece_union_cone_behaves_like_lex():
    parts = decompose(EXAMPLE1_CONE)
    pu = PieceUnionCone(3, parts)
    rng = random.Random(13)
    for _ in range(150):
        x = _random_vector(rng, 3)
        assert member(pu, x).holds == member(EXAMPLE1_CONE, x).holds
    assert lineality(pu).dim == 0


def test_piece_union_sum_with_strict_parts():
    # lex cone in the plane plus the vertical ray: fills {x>0} plus {x=0,y>=0}.
    lex2 = LexCompose(OrthantCone(1), OrthantCone(1))
    ray = PolyhedralV((vec([0, 1]),), 2)
    s = cone_sum(PieceUnionCone(2, decompose(lex2)), ray)
    assert member(s, vec([1, -100])).holds
    assert member(s, vec([0, 5])).holds
    assert not member(s, vec([0, -1])).holds
    assert not member(s, vec([-1, 2])).holds


def test_vform_of_product():
    c = ProductCone((OrthantCone(1), OrthantCone(2)))
    gens = v_form(c)
    assert set(gens) == {vec([1, 0, 0]), vec([0, 1, 0]), vec([0, 0, 1])}
