"""Tests for vector measures, pooling, cancellation and the range gap."""

from fractions import Fraction

import pytest

from coneagg.aggregate import AxiomFailedError
from coneagg.cones import LexCompose, OrthantCone, Relation
from coneagg.linalg import identity, mat, vec
from coneagg.pooling import (
    FiniteAlgebra,
    GfcResult,
    NotZeroAtEmptyError,
    UnknownAtomError,
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
from coneagg.profiles import Representation
from coneagg.spaces import PositivityClass, Povs, real_line
from coneagg.linalg import AffineMap

F = Fraction


def sphere_measure(m=10):
    """Uniform discretization: m cells per hemisphere and m equator arcs,
    valued in the plane-then-tiebreaker ordered space."""
    atoms = (
        tuple(f"N{i}" for i in range(m))
        + tuple(f"S{i}" for i in range(m))
        + tuple(f"E{i}" for i in range(m))
    )
    algebra = FiniteAlgebra(atoms)
    goods = Povs(3, LexCompose(OrthantCone(2), OrthantCone(1)))
    values = []
    for i in range(m):
        values.append(vec([F(1, m), 0, 0]))
    for i in range(m):
        values.append(vec([0, F(1, m), 0]))
    for i in range(m):
        values.append(vec([0, 0, F(1, m)]))
    return algebra, VectorMeasure(algebra, goods, tuple(values))


def test_sphere_hemisphere_values():
    algebra, vm = sphere_measure(10)
    north = [f"N{i}" for i in range(10)]
    assert measure_of(vm, north) == vec([1, 0, 0])
    assert measure_of(vm, []) == vec([0, 0, 0])


def test_probability_measure_full_event():
    algebra = FiniteAlgebra(("a", "b"))
    vm = VectorMeasure(algebra, real_line(), (vec([F(1, 3)]), vec([F(2, 3)])))
    assert measure_of(vm, ["a", "b"]) == vec([1])


def test_measure_rejects_unknown_atom():
    algebra = FiniteAlgebra(("a",))
    vm = VectorMeasure(algebra, real_line(), (vec([1]),))
    with pytest.raises(UnknownAtomError):
        measure_of(vm, ["zz"])


def test_sphere_likelihood_judgments():
    algebra, vm = sphere_measure(10)
    north = [f"N{i}" for i in range(10)]
    south = [f"S{i}" for i in range(10)]
    equator = [f"E{i}" for i in range(10)]
    assert likelihood_compare(vm, north, south).relation is Relation.INCOMPARABLE
    assert likelihood_compare(vm, equator, []).relation is Relation.STRICT_GREATER
    assert likelihood_compare(vm, ["N0"], equator).relation is Relation.STRICT_GREATER
    assert likelihood_compare(vm, north, north).relation is Relation.EQUIVALENT


def test_extend_hits_indicators_and_mixtures():
    algebra = FiniteAlgebra(("a", "b", "c"))
    vm = VectorMeasure(
        algebra, real_line(), (vec([F(1, 2)]), vec([F(1, 4)]), vec([F(1, 4)]))
    )
    rep = extend(vm)
    assert rep.map(vec([1, 0, 1])) == measure_of(vm, ["a", "c"])
    assert rep.map(vec([F(1, 2), F(1, 2), F(1, 2)])) == vec([F(1, 2)])
    two_block = rep.map(vec([F(1, 3), F(1, 3), 1]))
    assert two_block == vec([F(1, 2) * F(1, 3) + F(1, 4) * F(1, 3) + F(1, 4)])


def test_restrict_roundtrip_and_offset_guard():
    algebra = FiniteAlgebra(("a", "b"))
    vm = VectorMeasure(algebra, real_line(), (vec([F(1, 3)]), vec([F(2, 3)])))
    back = restrict(algebra, extend(vm))
    assert back.atom_values == vm.atom_values
    bad = Representation(real_line(), AffineMap(mat([[1, 1]]), vec([5])))
    with pytest.raises(NotZeroAtEmptyError):
        restrict(algebra, bad)


def test_restrict_from_hand_table():
    algebra = FiniteAlgebra(("a", "b"))
    rep = Representation(real_line(), AffineMap(mat([[F(1, 4), F(3, 4)]]), vec([0])))
    vm = restrict(algebra, rep)
    assert measure_of(vm, ["a", "b"]) == vec([1])


def test_positivity_and_nontriviality():
    algebra = FiniteAlgebra(("a", "b"))
    prob = VectorMeasure(algebra, real_line(), (vec([F(1, 2)]), vec([F(1, 2)])))
    res = check_positivity_nontriviality(prob)
    assert res.positive and res.nontrivial and res.exhaustive
    zero = VectorMeasure(algebra, real_line(), (vec([0]), vec([0])))
    res0 = check_positivity_nontriviality(zero)
    assert res0.positive and not res0.nontrivial
    signed = VectorMeasure(
        FiniteAlgebra(("a", "b")),
        Povs(2, OrthantCone(2)),
        (vec([2, -1]), vec([-1, 2])),
    )
    res_signed = check_positivity_nontriviality(signed)
    assert not res_signed.positive
    assert res_signed.positivity_witness == frozenset(["a"])
    # The union of the two signed atoms is strictly above zero.
    assert res_signed.nontrivial
    assert res_signed.nontriviality_witness == frozenset(["a", "b"])


def test_pool_recovers_classic_linear_weights():
    algebra = FiniteAlgebra(("x", "y", "z"))
    p1 = VectorMeasure(
        algebra, real_line(), (vec([F(1, 2)]), vec([F(1, 4)]), vec([F(1, 4)]))
    )
    p2 = VectorMeasure(
        algebra, real_line(), (vec([F(1, 4)]), vec([F(1, 2)]), vec([F(1, 4)]))
    )
    social = VectorMeasure(
        algebra, real_line(), (vec([F(3, 8)]), vec([F(3, 8)]), vec([F(1, 4)]))
    )
    report = pool(algebra, [p1, p2], social, mixture_samples=100)
    assert report.dr_holds
    assert report.affine is not None
    assert report.affine.map.matrix == mat([[F(1, 2), F(1, 2)]])
    assert report.affine.offset == vec([0])
    assert report.affine.positivity.classification is PositivityClass.STRICTLY_POSITIVE
    assert report.synthesis.embeddings is not None


def test_pool_identity_single_individual():
    algebra = FiniteAlgebra(("x", "y"))
    p = VectorMeasure(algebra, real_line(), (vec([F(1, 3)]), vec([F(2, 3)])))
    report = pool(algebra, [p], p, mixture_samples=60)
    assert report.dr_holds
    assert report.affine.map.matrix == identity(1)


def test_pool_urn_fails_p1():
    algebra = FiniteAlgebra(("R", "Y", "B"))
    p1 = VectorMeasure(algebra, real_line(), (vec([0]), vec([F(1, 2)]), vec([F(1, 2)])))
    p2 = VectorMeasure(algebra, real_line(), (vec([F(1, 2)]), vec([0]), vec([F(1, 2)])))
    p0 = VectorMeasure(algebra, real_line(), (vec([0]), vec([0]), vec([1])))
    with pytest.raises(AxiomFailedError) as err:
        pool(algebra, [p1, p2], p0, mixture_samples=20)
    report = err.value.report
    assert report.axiom == "P1"
    assert report.witness is not None


def test_gfc_holds_for_measure_induced_relations():
    algebra = FiniteAlgebra(("a", "b", "c"))
    vm = VectorMeasure(
        algebra, real_line(), (vec([F(1, 2)]), vec([F(1, 3)]), vec([F(1, 6)]))
    )
    assert gfc_check(algebra, vm, 3).holds
    goods = Povs(2, OrthantCone(2))
    vm2 = VectorMeasure(algebra, goods, (vec([1, 0]), vec([0, 1]), vec([1, 1])))
    assert gfc_check(algebra, vm2, 3).holds


def test_gfc_violated_by_nonadditive_relation():
    algebra = FiniteAlgebra(("a", "b", "c"))
    base = frozenset(["a"]), frozenset(["b"])

    def likes(x, y):
        if x == y:
            return True
        return (x, y) == base

    res = gfc_check(algebra, likes, 2)
    assert not res.holds
    viol = res.violation
    # Balance forces a conclusion pair the relation refuses to draw.
    assert viol.premises == (base,) or viol.premises == ()


def test_gfc_single_atom_vacuous():
    algebra = FiniteAlgebra(("a",))
    vm = VectorMeasure(algebra, real_line(), (vec([1]),))
    assert gfc_check(algebra, vm, 3).holds


def test_lyapunov_gap_uniform():
    for n in (4, 8, 16):
        res = lyapunov_gap(n, [[F(1, n)] * n])
        assert res.gap <= F(1, n)
        assert res.exhaustive


def test_lyapunov_gap_monotone():
    gaps = [lyapunov_gap(n, [[F(1, n)] * n]).gap for n in (4, 8, 16)]
    assert gaps[0] >= gaps[1] >= gaps[2]


def test_lyapunov_gap_single_cell():
    res = lyapunov_gap(1, [[1]])
    assert res.gap == F(1, 2)


def test_lyapunov_gap_two_disjoint_uniform_measures():
    n = 16
    m1 = [F(1, 8)] * 8 + [0] * 8
    m2 = [0] * 8 + [F(1, 8)] * 8
    res = lyapunov_gap(n, [m1, m2])
    assert res.gap <= F(1, 8)
