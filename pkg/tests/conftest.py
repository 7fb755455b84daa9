import numpy as np
import pytest
from hypothesis import strategies as st

from drfeas.geometry import (
    AffineSubspace,
    Ball,
    Box,
    FeasibilityProblem,
    Halfspace,
    Hyperplane,
)


@pytest.fixture
def line_problem():
    """C1 = (-inf, 1], C2 = [-1, inf) on the real line."""
    return FeasibilityProblem((Halfspace([1.0], 1.0), Halfspace([-1.0], 1.0)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vectors(n):
    return st.lists(coords, min_size=n, max_size=n).map(np.array)


def nonzero_vectors(n):
    return vectors(n).filter(lambda v: np.linalg.norm(v) > 1e-3)


@st.composite
def convex_sets(draw, n):
    kind = draw(st.sampled_from(["halfspace", "hyperplane", "ball", "box", "affine"]))
    if kind == "halfspace":
        return Halfspace(draw(nonzero_vectors(n)), draw(coords))
    if kind == "hyperplane":
        return Hyperplane(draw(nonzero_vectors(n)), draw(coords))
    if kind == "ball":
        return Ball(draw(vectors(n)), draw(st.floats(0.1, 5)))
    if kind == "box":
        a, b = draw(vectors(n)), draw(vectors(n))
        return Box(np.minimum(a, b), np.maximum(a, b))
    rows = draw(st.integers(1, n))
    A = np.array([draw(vectors(n)) for _ in range(rows)])
    return AffineSubspace(A, A @ draw(vectors(n)))


@st.composite
def set_and_points(draw, k=2):
    n = draw(st.integers(1, 5))
    s = draw(convex_sets(n))
    return (s,) + tuple(draw(vectors(n)) for _ in range(k))


# criterion number -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
