import numpy as np
import pytest
from hypothesis import given, settings

from drfeas.geometry import (
    AffineSubspace,
    Ball,
    Box,
    DimensionError,
    FeasibilityProblem,
    Halfspace,
    Hyperplane,
    NonFiniteError,
    contains,
    distance,
    project,
)

from conftest import set_and_points


def test_halfspace_projection():
    np.testing.assert_array_equal(project(Halfspace([1, 0], 1), [2, 0]), [1, 0])


def test_ball_projection():
    np.testing.assert_allclose(project(Ball([0, 0], 1), [3, 4]), [0.6, 0.8], rtol=0, atol=1e-15)


def test_hyperplane_projection():
    np.testing.assert_allclose(project(Hyperplane([1, 1], 2), [0, 0]), [1, 1], atol=1e-15)


def test_box_projection():
    np.testing.assert_array_equal(project(Box([0, 0], [1, 1]), [1.5, -2.0]), [1.0, 0.0])


def kkt_projection(A, b, x):
    # min |y - x|^2 s.t. A y = b, solved through the full KKT system
    m, n = A.shape
    K = np.block([[np.eye(n), A.T], [A, np.zeros((m, m))]])
    sol = np.linalg.solve(K, np.concatenate([x, b]))
    return sol[:n]


def test_affine_projection_matches_kkt_oracle():
    A = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, 0.0]])
    b = np.zeros(2)
    x = np.array([1.0, 1.0, 1.0])
    y = project(AffineSubspace(A, b), x)
    np.testing.assert_allclose(y, kkt_projection(A, b, x), atol=1e-14)
    np.testing.assert_allclose(A @ y, b, atol=1e-14)
    # x - P(x) is orthogonal to the null space of A
    null = np.linalg.svd(A)[2][2:]
    np.testing.assert_allclose(null @ (x - y), 0, atol=1e-14)


def test_affine_rank_deficient_rows():
    A = np.array([[1.0, 0.0], [2.0, 0.0]])
    s = AffineSubspace(A, [1.0, 2.0])
    np.testing.assert_allclose(s.project([5.0, 7.0]), [1.0, 7.0], atol=1e-14)


@pytest.mark.parametrize("s, x, tol, expected", [
    (Halfspace([1, 0], 1), [1, 0], 0.0, True),
    (Ball([0, 0], 1), [0, 0], 0.0, True),
    (Box([0, 0], [1, 1]), [1.5, 0.5], 0.1, False),
    (Box([0, 0], [1, 1]), [1.05, 0.5], 0.1, True),
])
def test_contains(s, x, tol, expected):
    assert contains(s, x, tol) is expected


def test_contains_default_tolerance_scales():
    s = Halfspace([1.0], 1e6)
    assert contains(s, [1e6 + 1e-4])
    assert not contains(s, [1e6 + 1e-2])


@pytest.mark.parametrize("s, x, expected", [
    (Halfspace([1, 0], 1), [3, 0], 2.0),
    (Ball([0, 0], 1), [3, 4], 4.0),
    (Box([0, 0], [1, 1]), [4, 5], 5.0),
])
def test_distance(s, x, expected):
    assert distance(s, x) == pytest.approx(expected, abs=1e-15)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        project(Halfspace([1, 0], 1), [1, 2, 3])
    with pytest.raises(DimensionError):
        contains(Ball([0, 0], 1), [1.0])


def test_non_finite_input():
    with pytest.raises(NonFiniteError):
        project(Ball([0, 0], 1), [np.nan, 0])
    with pytest.raises(NonFiniteError):
        distance(Box([0], [1]), [np.inf])


@pytest.mark.parametrize("make", [
    lambda: Halfspace([0, 0], 1),
    lambda: Hyperplane([0.0], 1),
    lambda: Ball([0, 0], 0),
    lambda: Box([0, 2], [1, 1]),
    lambda: AffineSubspace([[1.0, 1.0], [2.0, 2.0]], [1.0, 3.0]),
])
def test_invalid_sets_rejected(make):
    with pytest.raises(ValueError):
        make()


def test_sets_are_immutable():
    s = Halfspace([1.0, 2.0], 1.0)
    with pytest.raises(Exception):
        s.offset = 2.0
    with pytest.raises(ValueError):
        s.normal[0] = 5.0


def test_problem_certification():
    sets = (Halfspace([1.0, 0.0], 1.0), Ball([0.0, 0.0], 2.0), Box([-1, -1], [1, 1]))
    prob = FeasibilityProblem(sets, [0.0, 0.0], 0.5)
    assert prob.certified and prob.m == 3 and prob.dim == 2
    with pytest.raises(ValueError):
        FeasibilityProblem(sets, [0.0, 0.0], 1.5)
    with pytest.raises(ValueError):
        FeasibilityProblem(sets + (Hyperplane([1.0, 1.0], 0.0),), [0.0, 0.0], 0.1)
    # slack 0 only asks for membership
    prob = FeasibilityProblem(sets + (Hyperplane([1.0, 1.0], 0.0),), [0.0, 0.0], 0.0)
    assert not prob.certified


def test_problem_dimension_mismatch():
    with pytest.raises(DimensionError):
        FeasibilityProblem((Halfspace([1.0], 1.0), Ball([0.0, 0.0], 1.0)))
    with pytest.raises(ValueError):
        FeasibilityProblem(())


def test_halfspace_margin_formula():
    # <a, p> + s |a| <= b
    s = Halfspace([3.0, 4.0], 10.0)
    assert s.margin([0.0, 0.0]) == pytest.approx(2.0)


def test_batched_projection_matches_rows(rng):
    from drfeas.harness.generate import catalog_problem
    prob = catalog_problem(4, seed=3)
    X = 3 * rng.normal(size=(50, 4))
    for s in prob.sets:
        batch = s._project(X)
        rows = np.array([s.project(x) for x in X])
        np.testing.assert_allclose(batch, rows, rtol=0, atol=1e-13)


@settings(max_examples=300, deadline=None)
@given(set_and_points(k=2))
def test_projection_characterization(args):
    s, x, y = args
    px, z = s.project(x), s.project(y)
    bound = 1e-10 * (1 + np.linalg.norm(x)) * (1 + np.linalg.norm(z))
    assert (x - px) @ (z - px) <= bound


@settings(max_examples=300, deadline=None)
@given(set_and_points(k=2))
def test_projection_firmly_nonexpansive(args):
    s, x, y = args
    d = s.project(x) - s.project(y)
    assert d @ (x - y) >= d @ d - 1e-10


@settings(max_examples=300, deadline=None)
@given(set_and_points(k=2))
def test_distance_lipschitz(args):
    s, x, y = args
    assert abs(s.distance(x) - s.distance(y)) <= np.linalg.norm(x - y) + 1e-10


@settings(max_examples=300, deadline=None)
@given(set_and_points(k=1))
def test_projection_idempotent_and_member(args):
    s, x = args
    p = s.project(x)
    scale = 1 + np.linalg.norm(x)
    assert s.distance(p) <= 1e-12 * scale
    np.testing.assert_allclose(s.project(p), p, rtol=0, atol=1e-12 * scale)
    assert contains(s, p)
    assert contains(s, x, s.distance(x))
