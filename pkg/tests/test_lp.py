"""Tests for the exact feasibility engine and its certificates."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coneagg.linalg import vec
from coneagg.lp import (
    Constraint,
    Feasible,
    Infeasible,
    LinearConstraintSystem,
    Rel,
    lp_decide,
    verify_certificate,
    verify_witness,
)

F = Fraction


def sys_of(dim, *rows):
    return LinearConstraintSystem(dim, tuple(Constraint.make(r, c, rhs) for r, c, rhs in rows))


def test_infeasible_pair_with_unit_certificate():
    s = sys_of(1, (Rel.GEQ, [1], 0), (Rel.GEQ, [-1], 1))
    res = lp_decide(s)
    assert isinstance(res, Infeasible)
    assert res.certificate == vec([1, 1])
    assert verify_certificate(s, res.certificate)


def test_strict_band_is_feasible():
    # x > 0 together with x <= 1 (written as -x >= -1).
    s = sys_of(1, (Rel.GT, [1], 0), (Rel.GEQ, [-1], -1))
    res = lp_decide(s)
    assert isinstance(res, Feasible)
    x = res.witness[0]
    assert 0 < x <= 1


def test_unique_feasible_vertex():
    # Hand geometry: the three halfplanes meet exactly at (1, 0).
    s = sys_of(
        2,
        (Rel.GEQ, [1, 1], 1),
        (Rel.GEQ, [1, -1], 1),
        (Rel.GEQ, [-1, 0], -1),
    )
    res = lp_decide(s)
    assert isinstance(res, Feasible)
    assert res.witness == vec([1, 0])


def test_equalities_participate_in_certificates():
    s = sys_of(1, (Rel.EQ, [1], 2), (Rel.GEQ, [-1], 0))
    res = lp_decide(s)
    assert isinstance(res, Infeasible)
    assert verify_certificate(s, res.certificate)


def test_strict_infeasibility_on_boundary():
    # x >= 0, -x >= 0 forces x = 0, so x > 0 fails only strictly.
    s = sys_of(1, (Rel.GEQ, [1], 0), (Rel.GEQ, [-1], 0), (Rel.GT, [1], 0))
    res = lp_decide(s)
    assert isinstance(res, Infeasible)
    assert verify_certificate(s, res.certificate)


def test_empty_system_feasible_at_origin():
    s = sys_of(2)
    res = lp_decide(s)
    assert isinstance(res, Feasible)
    assert res.witness == vec([0, 0])


def test_zero_dimensional_rows():
    bad = sys_of(0, (Rel.GEQ, [], 3))
    assert isinstance(lp_decide(bad), Infeasible)
    ok = sys_of(0, (Rel.GEQ, [], -1), (Rel.GT, [], -2))
    assert isinstance(lp_decide(ok), Feasible)


def test_determinism():
    s = sys_of(
        2,
        (Rel.GEQ, [1, 0], 0),
        (Rel.GEQ, [0, 1], 0),
        (Rel.GT, [1, 1], 1),
    )
    first = lp_decide(s)
    for _ in range(3):
        again = lp_decide(s)
        assert again == first


def test_strict_rows_hold_strictly():
    s = sys_of(
        2,
        (Rel.GT, [1, 0], 0),
        (Rel.GT, [0, 1], 0),
        (Rel.GEQ, [-1, -1], -1),
        (Rel.EQ, [1, -1], 0),
    )
    res = lp_decide(s)
    assert isinstance(res, Feasible)
    x, y = res.witness
    assert x > 0 and y > 0 and x == y and x + y <= 1


def _random_system(draw_rows, dim):
    rows = []
    for rel, coeffs, rhs in draw_rows:
        rows.append((rel, coeffs, rhs))
    return sys_of(dim, *rows)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.sampled_from([Rel.EQ, Rel.GEQ, Rel.GT]),
            st.lists(st.integers(-3, 3), min_size=2, max_size=2),
            st.integers(-2, 2),
        ),
        min_size=1,
        max_size=5,
    )
)
def test_every_answer_replays(rows):
    s = _random_system(rows, 2)
    res = lp_decide(s)
    if isinstance(res, Feasible):
        assert verify_witness(s, res.witness)
    else:
        assert verify_certificate(s, res.certificate)


def test_certificate_rejects_tampering():
    s = sys_of(1, (Rel.GEQ, [1], 0), (Rel.GEQ, [-1], 1))
    res = lp_decide(s)
    assert not verify_certificate(s, vec([1, 0]))
    assert not verify_certificate(s, tuple(-c for c in res.certificate))


def test_dimension_mismatch_rejected():
    with pytest.raises(Exception):
        sys_of(2, (Rel.GEQ, [1], 0))
