import numpy as np
import pytest

from drfeas.algorithms import (
    BlockPlan,
    StringPlan,
    bi_dr,
    cyclic_dr,
    r_set_dr_scheme,
    reference_cyclic_projections,
    sa_dr,
    simultaneous_dr,
    simultaneous_pairs,
    two_set_dr_iteration,
)
from drfeas.diagnostics import StopConfig, check_fejer
from drfeas.geometry import Ball, FeasibilityProblem, Hyperplane, project
from drfeas.harness.generate import catalog_problem, default_start, generate, parse_instance_spec

ONE_STEP = StopConfig(residual_tol=1e-300, step_tol=0.0, max_iters=1)
STATIONARY = StopConfig(residual_tol=np.finfo(float).tiny, step_tol=1e-12, max_iters=20_000)


def test_sa_dr_line_instance(line_problem):
    # T(1,2)(5) = 3, then T(2,1)(3) = (3 + R1(R2(3))) / 2 = (3 - 1) / 2 = 1
    rec = sa_dr(line_problem, StringPlan.equal([(1, 2)]), [5.0], ONE_STEP)
    assert rec.iterates[1][0] == 1.0
    assert rec.residuals == [4.0, 0.0]


def test_bi_dr_line_instance(line_problem):
    # z1 = T(1,2)(5) = 3 and z2 = T(2,1)(5) = 1, both from x0
    rec = bi_dr(line_problem, BlockPlan.equal([(1, 2)]), [5.0], ONE_STEP)
    assert rec.iterates[1][0] == 2.0


def test_cyclic_and_pocs_line_instance(line_problem):
    assert cyclic_dr(line_problem, [5.0], ONE_STEP).iterates[1][0] == 1.0
    assert reference_cyclic_projections(line_problem, [5.0], ONE_STEP).iterates[1][0] == 1.0
    assert two_set_dr_iteration(line_problem, [5.0], ONE_STEP).iterates[1][0] == 3.0


def test_sdr_line_instance(line_problem):
    assert simultaneous_pairs(2) == ((1, 2), (2, 1))
    assert simultaneous_pairs(3) == ((1, 2), (2, 3), (3, 1))
    # (T(1,2)(5) + T(2,1)(5)) / 2 = (3 + 1) / 2
    rec = simultaneous_dr(line_problem, None, [5.0], ONE_STEP)
    assert rec.iterates[1][0] == 2.0
    assert rec.meta["algorithm"] == "sdr"


def test_sdr_is_single_block_bi_dr():
    prob = catalog_problem(4, seed=8)
    x0 = default_start(prob, 8)
    cfg = StopConfig(residual_tol=1e-300, step_tol=0.0, max_iters=100)
    w = [0.1, 0.2, 0.3, 0.15, 0.25]
    a = simultaneous_dr(prob, w, x0, cfg)
    b = bi_dr(prob, BlockPlan([(1, 2, 3, 4, 5)], [w]), x0, cfg)
    assert np.array_equal(np.array(a.iterates), np.array(b.iterates))
    with pytest.raises(ValueError, match="one per pair"):
        simultaneous_dr(prob, [0.5, 0.5], x0, cfg)


def test_interior_start_is_stationary():
    prob = catalog_problem(3, seed=1)
    z = prob.interior_point
    for rec in (
        sa_dr(prob, StringPlan.equal([(1, 2, 3), (4, 5)]), z),
        bi_dr(prob, BlockPlan.equal([(1, 2, 3), (4, 5)]), z),
        r_set_dr_scheme(prob, [0.25] * 4, z),
    ):
        assert rec.iterations == 1
        assert rec.stop_reason == "residual_tol"
        np.testing.assert_allclose(rec.final, z, atol=1e-12)


def test_single_string_matches_cyclic():
    prob = generate(parse_instance_spec("ball_box_mix:4x3+2:slack=0.2", seed=3))
    x0 = default_start(prob, 3)
    cfg = StopConfig(residual_tol=1e-300, step_tol=0.0, max_iters=300)
    a = sa_dr(prob, StringPlan((tuple(range(1, 6)),), (1.0,)), x0, cfg)
    b = cyclic_dr(prob, x0, cfg)
    assert np.array_equal(np.array(a.iterates), np.array(b.iterates))
    assert b.meta["algorithm"] == "cyclic-dr"


def test_r_set_scheme_coordinate_example():
    planes = tuple(Hyperplane(np.eye(3)[i], 0.0) for i in range(3))
    prob = FeasibilityProblem(planes)
    # r = 2 sends x to (0, 0, x3), r = 3 sends it to 0
    rec = r_set_dr_scheme(prob, [0.3, 0.7], [1.0, 2.0, 3.0], ONE_STEP)
    np.testing.assert_allclose(rec.iterates[1], [0.0, 0.0, 0.3 * 3.0], atol=1e-15)


def test_r_set_scheme_m2_is_plain_dr():
    prob = catalog_problem(4, seed=6).subproblem([2, 3])
    x0 = default_start(prob, 6)
    cfg = StopConfig(residual_tol=1e-300, step_tol=0.0, max_iters=200)
    a = r_set_dr_scheme(prob, [1.0], x0, cfg)
    b = two_set_dr_iteration(prob, x0, cfg)
    assert np.array_equal(np.array(a.iterates), np.array(b.iterates))


def test_r_set_scheme_weight_count():
    prob = catalog_problem(2, seed=0)
    with pytest.raises(ValueError, match="need 4 weights"):
        r_set_dr_scheme(prob, [0.5, 0.5], np.zeros(2))


@pytest.mark.parametrize("seed", range(5))
def test_cyclic_dr_from_first_set_is_rotated_pocs(seed):
    prob = generate(parse_instance_spec("ball_box_mix:3x2+2:slack=0.2", seed=seed))
    x0 = prob.sets[0].project(default_start(prob, seed))
    rotated = FeasibilityProblem(prob.sets[1:] + prob.sets[:1])
    cfg = StopConfig(residual_tol=1e-300, step_tol=0.0, max_iters=200)
    a = cyclic_dr(prob, x0, cfg)
    b = reference_cyclic_projections(rotated, x0, cfg)
    dev = np.max(np.linalg.norm(np.array(a.iterates) - np.array(b.iterates), axis=1))
    assert dev <= 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_shadow_of_dr_limit_is_in_both_sets(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=2)
    A = Hyperplane(a, 0.3)
    # ball crossing the line away from its centre
    c = A.project(rng.normal(size=2)) + 0.5 * a / np.linalg.norm(a)
    B = Ball(c, 1.0)
    prob = FeasibilityProblem((A, B))
    rec = two_set_dr_iteration(prob, rng.normal(size=2) * 5, STATIONARY)
    shadow = A.project(rec.final)
    assert B.distance(shadow) <= 1e-6
    assert A.distance(shadow) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_bi_dr_lines_shadow_limit(seed):
    prob = generate(parse_instance_spec("lines:2x2", seed=seed))
    p = prob.interior_point
    rec = bi_dr(prob, BlockPlan.equal([(1, 2)]), default_start(prob, seed), STATIONARY)
    assert np.linalg.norm(project(prob.sets[0], rec.sweep_iterates[-1]) - p) <= 1e-6


def test_bi_dr_sweeps_and_block_stall():
    # with blocks (1, 2) and (1, 3) a fixed point of one block alone must not stop the run
    prob = catalog_problem(3, seed=2).subproblem([1, 2, 3])
    x0 = default_start(prob, 2)
    rec = bi_dr(prob, BlockPlan.equal([(1, 2), (1, 3)]), x0, STATIONARY)
    assert rec.converged
    assert prob.residual(rec.final) <= 1e-8
    assert len(rec.sweep_iterates) == rec.iterations // 2 + 1
    assert check_fejer(rec)


def test_plan_validation():
    prob = catalog_problem(2, seed=0)
    with pytest.raises(ValueError, match="cover every set"):
        sa_dr(prob, StringPlan.equal([(1, 2), (3, 4)]), np.zeros(2))
    with pytest.raises(ValueError, match="outside 1..5"):
        bi_dr(prob, BlockPlan.equal([(1, 2, 3, 4, 5, 6)]), np.zeros(2))
    with pytest.raises(ValueError, match="at least two"):
        StringPlan.equal([(1,)])
    with pytest.raises(ValueError, match="weights"):
        StringPlan([(1, 2), (3, 4)], [0.5, 0.6])
    with pytest.raises(ValueError, match="block 1"):
        BlockPlan([(1, 2, 3)], [(0.5, 0.5)])


def test_stop_reasons_and_trace_stride():
    prob = catalog_problem(3, seed=4)
    x0 = default_start(prob, 4)
    rec = sa_dr(prob, StringPlan.equal([(1, 2, 3, 4, 5)]), x0,
                StopConfig(residual_tol=1e-300, step_tol=0.0, max_iters=25, trace_stride=10))
    assert rec.stop_reason == "max_iters" and not rec.converged
    assert rec.iterate_indices == [0, 10, 20, 25]
    assert len(rec.residuals) == 26 and len(rec.step_norms) == 25
    rec = sa_dr(prob, StringPlan.equal([(1, 2, 3, 4, 5)]), x0)
    assert rec.stop_reason == "residual_tol" and rec.residuals[-1] <= 1e-8


def test_x0_dimension_checked():
    prob = catalog_problem(3, seed=4)
    with pytest.raises(ValueError):
        cyclic_dr(prob, [1.0, 2.0])
