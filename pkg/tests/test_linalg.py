"""Tests for the exact linear algebra layer."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coneagg.linalg import (
    AffineMap,
    DimensionMismatchError,
    Subspace,
    identity,
    kernel_basis,
    mat,
    mat_vec,
    rank,
    rref,
    solve_affine_system,
    vec,
    zeros,
)

F = Fraction


def small_fractions():
    return st.builds(F, st.integers(-6, 6), st.integers(1, 4))


def test_solve_identity():
    a = identity(2)
    assert solve_affine_system(a, vec([3, F(-1, 2)])) == vec([3, F(-1, 2)])


def test_solve_inconsistent_proportional_rows():
    a = mat([[1, 1], [2, 2]])
    assert solve_affine_system(a, vec([1, 3])) is None


def test_solve_hand_elimination():
    # 2x + 3y = 5 and x - y = 0 eliminate to x = y = 1.
    a = mat([[2, 3], [1, -1]])
    assert solve_affine_system(a, vec([5, 0])) == vec([1, 1])


def test_solve_underdetermined_sets_free_vars_to_zero():
    a = mat([[1, 1, 0]])
    assert solve_affine_system(a, vec([4])) == vec([4, 0, 0])


def test_kernel_identity_empty():
    assert kernel_basis(identity(3)).dim == 0


def test_kernel_zero_matrix_full():
    ker = kernel_basis(mat([[0, 0]]))
    assert ker.dim == 2


def test_kernel_rank_nullity_example():
    ker = kernel_basis(mat([[1, -1, 0]]))
    assert ker.dim == 2
    expected = Subspace.from_vectors(3, [vec([1, 1, 0]), vec([0, 0, 1])])
    assert ker.basis == expected.basis


def test_kernel_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        kernel_basis(mat([[1, 2]]), ncols=3)


def _grid_solutions(a, b, values):
    """Brute-force oracle: all grid points x with a @ x = b."""
    n = len(a[0])
    sols = []
    for combo in product(values, repeat=n):
        x = vec(combo)
        if mat_vec(a, x) == b:
            sols.append(x)
    return sols


def test_solution_set_matches_grid_enumeration():
    # x0 + kernel reproduces every bounded-denominator grid solution.
    values = [F(n, d) for n in range(-2, 3) for d in (1, 2)]
    cases = [
        (mat([[1, -1]]), vec([1])),
        (mat([[2, 0], [0, 0]]), vec([1, 0])),
        (mat([[1, 1, 1]]), vec([0])),
    ]
    for a, b in cases:
        x0 = solve_affine_system(a, b)
        assert x0 is not None
        ker = kernel_basis(a)
        for x in _grid_solutions(a, b, values):
            diff = tuple(u - v for u, v in zip(x, x0))
            assert ker.contains(diff)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(small_fractions(), min_size=3, max_size=3),
        min_size=1,
        max_size=3,
    )
)
def test_solve_then_substitute(rows):
    a = mat(rows)
    x_true = vec([1, F(1, 2), -2])
    b = mat_vec(a, x_true)
    x = solve_affine_system(a, b)
    assert x is not None
    assert mat_vec(a, x) == b


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(small_fractions(), min_size=4, max_size=4),
        min_size=1,
        max_size=3,
    )
)
def test_kernel_vectors_annihilate(rows):
    a = mat(rows)
    ker = kernel_basis(a)
    assert ker.dim + rank(a) == 4
    for v in ker.basis:
        assert mat_vec(a, v) == zeros(len(a))


def test_subspace_membership_and_canonical_basis():
    s = Subspace.from_vectors(3, [vec([1, 1, 0]), vec([2, 2, 0]), vec([0, 0, 3])])
    assert s.dim == 2
    assert s.contains(vec([5, 5, -1]))
    assert not s.contains(vec([1, 0, 0]))
    again = Subspace.from_vectors(3, [vec([0, 0, 1]), vec([3, 3, 7])])
    assert s.basis == again.basis


def test_subspace_complement_pivot_map():
    s = Subspace.from_vectors(3, [vec([1, 1, 0])])
    proj = s.complement_pivot_map()
    assert len(proj) == 2
    for b in s.basis:
        assert mat_vec(proj, b) == zeros(2)
    assert rank(proj) == 2


def test_orthogonal_complement_rows():
    s = Subspace.from_vectors(3, [vec([1, -1, 0])])
    n = s.orthogonal_complement_rows()
    assert len(n) == 2
    for v in [vec([1, -1, 0]), vec([F(1, 2), F(-1, 2), 0])]:
        assert mat_vec(n, v) == zeros(2)


def test_affine_map_evaluation():
    m = AffineMap(mat([[1, 2], [0, 1]]), vec([1, 0]))
    assert m(vec([1, 1])) == vec([4, 1])
    assert m.input_dim == 2 and m.output_dim == 2


def test_affine_map_stack():
    m1 = AffineMap(mat([[1, 0]]), vec([0]))
    m2 = AffineMap(mat([[0, 1], [1, 1]]), vec([1, 2]))
    stacked = AffineMap.stack([m1, m2])
    assert stacked(vec([2, 3])) == vec([2, 4, 7])


def test_rref_is_canonical():
    m1 = mat([[2, 4], [1, 3]])
    m2 = mat([[1, 3], [2, 4]])
    assert rref(m1)[0] == rref(m2)[0]
