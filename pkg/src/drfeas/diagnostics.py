"""
Stopping configuration and verdicts computed from run traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StopConfig:
    """When to stop an iteration.

    A run stops as soon as the largest distance to the sets drops to
    ``residual_tol``, the step drops to ``step_tol``, or ``max_iters`` steps
    have been taken. Iterates are kept every ``trace_stride`` steps.
    """

    residual_tol: float = 1e-8
    step_tol: float = 1e-12
    max_iters: int = 100_000
    trace_stride: int = 1

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if not self.step_tol >= 0:
            raise ValueError("step_tol must be nonnegative")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if int(self.trace_stride) != self.trace_stride or self.trace_stride < 1:
            raise ValueError("trace_stride must be a positive integer")


@dataclass(frozen=True)
class Verdict:
    passed: bool
    metric: float
    threshold: float
    detail: str = ""

    def __bool__(self):
        return self.passed


def check_fejer(rec, slack=None) -> Verdict:
    """Check ``d[k+1] <= d[k] + slack`` along ``rec.fejer_distances``.

    ``slack=None`` uses the per-step roundoff allowance ``1e-12 (1 + d[k])``.
    The metric is the largest excess over the allowance (0 if none).
    """
    d = np.asarray(rec.fejer_distances, dtype=float)
    if rec.reference_point is None or d.size == 0 or np.any(np.isnan(d)):
        raise ValueError("run has no reference point for a Fejer check")
    if slack is None:
        allow = 1e-12 * (1.0 + d[:-1])
        threshold = 1e-12
    else:
        allow = np.full(d.size - 1, float(slack))
        threshold = float(slack)
    excess = np.diff(d) - allow
    worst = float(max(0.0, excess.max())) if excess.size else 0.0
    n_bad = int(np.sum(excess > 0))
    return Verdict(n_bad == 0, worst, threshold,
                   f"{n_bad} increases over {d.size - 1} steps")


def check_asymptotic_regularity(rec, tol: float = 1e-8) -> Verdict:
    """Pass if the smallest step in the last 10% of the run is ``<= tol``."""
    s = np.asarray(rec.step_norms, dtype=float)
    if s.size == 0:
        raise ValueError("run has no steps")
    tail = s[-max(1, int(np.ceil(0.1 * s.size))):]
    metric = float(tail.min())
    return Verdict(metric <= tol, metric, tol,
                   f"min step over last {tail.size} of {s.size} steps")


def compare_trajectories(a, b, per_iter_tol: float, stride_a: int = 1,
                         stride_b: int = 1) -> Verdict:
    """Largest distance between aligned iterates of two runs.

    Iterates ``a.iterates[::stride_a]`` are matched one-to-one against
    ``b.iterates[::stride_b]``; a sweep-level comparison uses a stride equal to
    the number of steps per sweep.
    """
    xa = np.asarray(a.iterates, dtype=float)[::stride_a]
    xb = np.asarray(b.iterates, dtype=float)[::stride_b]
    if xa.shape != xb.shape:
        raise ValueError(
            f"trajectories do not align after striding: {xa.shape} vs {xb.shape}")
    metric = float(np.max(np.linalg.norm(xa - xb, axis=1))) if len(xa) else 0.0
    return Verdict(metric <= per_iter_tol, metric, per_iter_tol,
                   f"{len(xa)} aligned iterates")
