from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from bilinsphere.induced_fields import (
    SystemPair,
    bracket_closure,
    field_bracket_check,
    induced_field,
    matrix_bracket,
)

from conftest import finite, random_unit, unit_vec, skew_matrix


def rational_sphere_point(m, n):
    # inverse stereographic projection of a rational point is rational
    m, n = Fraction(m), Fraction(n)
    d = 1 + m * m + n * n
    return np.array([2 * m / d, 2 * n / d, (m * m + n * n - 1) / d], dtype=object)


def test_rotation_pair_bracket(rotation_pair):
    A, B = rotation_pair
    np.testing.assert_array_equal(
        matrix_bracket(A, B), [[0, 0, 1], [0, 0, 0], [-1, 0, 0]]
    )


def test_skew_field_is_linear(rng):
    M = skew_matrix(*rng.standard_normal(3))
    s = random_unit(rng)
    np.testing.assert_allclose(induced_field(M, s), M @ s, atol=1e-15)


@given(unit_vec)
def test_field_is_tangent(s):
    M = np.arange(9.0).reshape(3, 3) - 4.0
    assert abs(induced_field(M, s) @ s) <= 1e-12


@given(unit_vec, finite)
def test_linearity_in_matrix(s, u):
    A = np.array([[1.0, 2.0, 0.0], [0.0, -1.0, 3.0], [4.0, 0.0, 0.5]])
    B = np.array([[0.0, 1.0, -1.0], [2.0, 0.0, 0.0], [0.0, 1.0, 1.0]])
    lhs = induced_field(A + u * B, s)
    rhs = induced_field(A, s) + u * induced_field(B, s)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1.0 + abs(u)))


def test_linearity_exact_on_rational_points():
    A = np.array([[Fraction(v) for v in row] for row in [[1, 2, 0], [0, -1, 3], [4, 0, 5]]],
                 dtype=object)
    B = np.array([[Fraction(v) for v in row] for row in [[0, 1, -1], [2, 0, 0], [0, 1, 1]]],
                 dtype=object)
    u = Fraction(-7, 3)
    for m, n in [(0, 0), (1, 2), (Fraction(1, 3), -5), (7, Fraction(-2, 9))]:
        s = rational_sphere_point(m, n)
        assert s @ s == 1
        lhs = induced_field(A + u * B, s)
        rhs = induced_field(A, s) + u * induced_field(B, s)
        assert list(lhs) == list(rhs)


def test_identity_and_scalar_fields_vanish(rng):
    s = random_unit(rng, 100)
    assert np.max(np.abs(induced_field(np.eye(3), s))) <= 1e-15
    assert np.max(np.abs(induced_field(-2.5 * np.eye(3), s))) <= 1e-15


def test_stacked_points_match_single(rng):
    M = rng.standard_normal((3, 3))
    pts = random_unit(rng, 20)
    stacked = induced_field(M, pts)
    for p, h in zip(pts, stacked):
        np.testing.assert_allclose(induced_field(M, p), h, atol=1e-15)


def test_system_pair_detects_skew(rotation_pair):
    A, B = rotation_pair
    assert SystemPair(A, B).skew
    assert not SystemPair(A, np.eye(3)).skew
    sys = SystemPair(A, B, label="x")
    s = np.array([0.0, 1.0, 0.0])
    np.testing.assert_allclose(sys.field(s, 2.0), A @ s + 2.0 * B @ s)


def test_field_bracket_homomorphism(rng):
    worst = 0.0
    for _ in range(200):
        A = rng.standard_normal((3, 3))
        B = rng.standard_normal((3, 3))
        worst = max(worst, field_bracket_check(A, B, random_unit(rng)))
    assert worst <= 1e-7


def test_field_bracket_rotation_pair_exact(rotation_pair):
    A, B = rotation_pair
    assert field_bracket_check(A, B, [0.0, 1.0, 0.0]) <= 1e-12
    assert field_bracket_check(A, A, [0.6, 0.0, 0.8]) == 0.0


def test_bracket_closure_levels(rotation_pair):
    A, B = rotation_pair
    assert len(bracket_closure(A, B, depth=1)) == 2
    two = bracket_closure(A, B, depth=2)
    assert len(two) == 3
    np.testing.assert_array_equal(two[2], matrix_bracket(A, B))
    # [A, [A, B]] and [B, [A, B]] are proportional to B and A for so(3)
    assert len(bracket_closure(A, B, depth=4)) == 3


def test_bracket_closure_commuting_pair():
    A = np.diag([1.0, 2.0, 3.0])
    B = np.diag([0.0, 1.0, -1.0])
    assert len(bracket_closure(A, B, depth=3)) == 2
    with pytest.raises(ValueError):
        bracket_closure(A, B, depth=0)


@settings(max_examples=50)
@given(unit_vec)
def test_bracket_field_rotation_pair(s):
    A = skew_matrix(1, 0, 0)
    B = skew_matrix(0, 0, 1)
    h = induced_field(matrix_bracket(A, B), s)
    np.testing.assert_allclose(h, [s[2], 0.0, -s[0]], atol=1e-12)
