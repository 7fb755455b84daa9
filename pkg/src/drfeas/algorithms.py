"""
Iterative Douglas-Rachford schemes for convex feasibility problems.

Set indices in plans are 1-based, ``1..m``, matching the usual index set of a
feasibility problem with ``m`` sets. ``T(i, j)`` below stands for
``two_set_dr(C_i, C_j)``: reflect into ``C_i``, then into ``C_j``, then
average with the starting point.

Each scheme is realized as an operator expression from :mod:`drfeas.operators`
and iterated by one shared driver, so equivalent schemes share the exact same
floating-point evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .diagnostics import StopConfig
from .geometry import FeasibilityProblem, NonFiniteError, as_point
from .operators import (
    Composition,
    ConvexCombination,
    Operator,
    Projection,
    RSetDR,
    TwoSetDR,
    check_weights,
)

STOP_REASONS = ("residual_tol", "step_tol", "max_iters")


def _as_index_tuples(groups, what):
    out = []
    for g in groups:
        g = tuple(int(i) for i in g)
        if len(g) < 2:
            raise ValueError(f"each {what} needs at least two set indices, got {g}")
        out.append(g)
    if not out:
        raise ValueError(f"need at least one {what}")
    return tuple(out)


def _check_indices(groups, m, what):
    for g in groups:
        bad = [i for i in g if not 1 <= i <= m]
        if bad:
            raise ValueError(f"{what} {g} has indices outside 1..{m}: {bad}")
    missing = sorted(set(range(1, m + 1)) - {i for g in groups for i in g})
    if missing:
        raise ValueError(
            f"the {what}s must cover every set index 1..{m} (convergence to the "
            f"intersection needs each set in some {what}); missing {missing}")


@dataclass(frozen=True)
class StringPlan:
    """Strings of set indices and one positive weight per string."""

    strings: tuple
    weights: tuple

    def __post_init__(self):
        strings = _as_index_tuples(self.strings, "string")
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(strings):
            raise ValueError(
                f"{len(strings)} strings but {len(weights)} weights")
        check_weights(weights, "string weights")
        object.__setattr__(self, "strings", strings)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def equal(cls, strings) -> "StringPlan":
        strings = tuple(strings)
        return cls(strings, (1.0 / len(strings),) * len(strings))

    def validate(self, m: int) -> None:
        _check_indices(self.strings, m, "string")


@dataclass(frozen=True)
class BlockPlan:
    """Blocks of set indices with per-block weights over the block's pairs."""

    blocks: tuple
    weights: tuple

    def __post_init__(self):
        blocks = _as_index_tuples(self.blocks, "block")
        weights = tuple(tuple(float(w) for w in ws) for ws in self.weights)
        if len(weights) != len(blocks):
            raise ValueError(f"{len(blocks)} blocks but {len(weights)} weight lists")
        for t, (b, ws) in enumerate(zip(blocks, weights), start=1):
            if len(ws) != len(b):
                raise ValueError(
                    f"block {t} has {len(b)} indices but {len(ws)} weights")
            check_weights(ws, f"weights of block {t}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def equal(cls, blocks) -> "BlockPlan":
        blocks = tuple(tuple(b) for b in blocks)
        return cls(blocks, tuple((1.0 / len(b),) * len(b) for b in blocks))

    def validate(self, m: int) -> None:
        _check_indices(self.blocks, m, "block")


@dataclass
class RunRecord:
    """Trace of one run.

    ``residuals[k]`` and ``fejer_distances[k]`` belong to iterate ``x^k``
    (``k = 0..iterations``); ``step_norms[k]`` is ``|x^{k+1} - x^k|``.
    ``iterates`` holds ``x^k`` for ``k`` in ``iterate_indices`` (every
    ``trace_stride`` steps plus the final iterate). For block-iterative runs
    ``sweep_iterates`` holds ``x^{jM}``, the iterates after full sweeps.
    """

    iterates: List[np.ndarray] = field(default_factory=list)
    iterate_indices: List[int] = field(default_factory=list)
    step_norms: List[float] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    fejer_distances: List[float] = field(default_factory=list)
    reference_point: Optional[np.ndarray] = None
    stop_reason: str = ""
    iterations: int = 0
    sweep_iterates: List[np.ndarray] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def converged(self) -> bool:
        return self.stop_reason != "max_iters"


def _drive(problem: FeasibilityProblem, step_op: Callable[[int], Operator], x0,
           cfg: Optional[StopConfig], meta: dict, sweep_len: int = 0) -> RunRecord:
    cfg = StopConfig() if cfg is None else cfg
    x = as_point(x0, problem.dim, "x0").copy()
    z = problem.interior_point
    rec = RunRecord(reference_point=z, meta=dict(meta))
    rec.iterates.append(x)
    rec.iterate_indices.append(0)
    rec.residuals.append(problem.residual(x))
    if z is not None:
        rec.fejer_distances.append(float(np.linalg.norm(x - z)))
    if sweep_len:
        rec.sweep_iterates.append(x)

    # a block step can stall at a fixed point of its own block only, so
    # stagnation must hold over a whole sweep
    window = max(1, sweep_len)
    k = 0
    while True:
        try:
            x_new = step_op(k)._eval_checked(x)
        except NonFiniteError as exc:
            raise NonFiniteError(f"iteration {k + 1}: {exc}") from None
        k += 1
        step = float(np.linalg.norm(x_new - x))
        x = x_new
        res = problem.residual(x)
        rec.step_norms.append(step)
        rec.residuals.append(res)
        if z is not None:
            rec.fejer_distances.append(float(np.linalg.norm(x - z)))
        if sweep_len and k % sweep_len == 0:
            rec.sweep_iterates.append(x)

        if res <= cfg.residual_tol:
            reason = "residual_tol"
        elif step <= cfg.step_tol and k >= window and all(
                s <= cfg.step_tol for s in rec.step_norms[-window:]):
            reason = "step_tol"
        elif k >= cfg.max_iters:
            reason = "max_iters"
        else:
            reason = None
        if reason is not None or k % cfg.trace_stride == 0:
            rec.iterates.append(x)
            rec.iterate_indices.append(k)
        if reason is not None:
            rec.stop_reason = reason
            rec.iterations = k
            return rec


def _iterate(problem, op: Operator, x0, cfg, meta) -> RunRecord:
    return _drive(problem, lambda k: op, x0, cfg, meta)


def string_operator(problem: FeasibilityProblem, string: Sequence[int]) -> Composition:
    """``T(i_g, i_1) ... T(i_2, i_3) T(i_1, i_2)`` for a string ``(i_1, ..., i_g)``."""
    C = [problem.sets[i - 1] for i in string]
    g = len(C)
    return Composition(tuple(TwoSetDR(C[l], C[(l + 1) % g]) for l in range(g)))


def block_operator(problem: FeasibilityProblem, block: Sequence[int],
                   weights: Sequence[float]) -> ConvexCombination:
    """Weighted average of ``T(i_l, i_{l+1})`` over a block, wrapping at the end."""
    C = [problem.sets[i - 1] for i in block]
    g = len(C)
    return ConvexCombination(
        tuple(weights), tuple(TwoSetDR(C[l], C[(l + 1) % g]) for l in range(g)))


def sa_dr(problem: FeasibilityProblem, plan: StringPlan, x0,
          cfg: Optional[StopConfig] = None) -> RunRecord:
    """String-averaging Douglas-Rachford.

    Each step maps every string through its chain of two-set DR operators and
    averages the string end-points with the plan weights.
    """
    plan.validate(problem.m)
    op = ConvexCombination(
        plan.weights, tuple(string_operator(problem, s) for s in plan.strings))
    meta = {"algorithm": "sa-dr", "plan": [list(s) for s in plan.strings],
            "weights": list(plan.weights)}
    return _iterate(problem, op, x0, cfg, meta)


def bi_dr(problem: FeasibilityProblem, plan: BlockPlan, x0,
          cfg: Optional[StopConfig] = None) -> RunRecord:
    """Block-iterative Douglas-Rachford with cyclic block control.

    Step ``k`` uses block ``k mod M`` (0-based); every pair of the block is
    evaluated at the same iterate and the results are averaged.
    """
    plan.validate(problem.m)
    ops = [block_operator(problem, b, w) for b, w in zip(plan.blocks, plan.weights)]
    M = len(ops)
    meta = {"algorithm": "bi-dr", "plan": [list(b) for b in plan.blocks],
            "weights": [list(w) for w in plan.weights]}
    return _drive(problem, lambda k: ops[k % M], x0, cfg, meta, sweep_len=M)


def r_set_dr_operator(problem: FeasibilityProblem, weights) -> ConvexCombination:
    weights = tuple(float(w) for w in weights)
    m = problem.m
    if m < 2:
        raise ValueError("the r-set DR scheme needs at least two sets")
    if len(weights) != m - 1:
        raise ValueError(f"need {m - 1} weights (r = 2..{m}), got {len(weights)}")
    return ConvexCombination(
        weights, tuple(RSetDR(problem.sets[:r]) for r in range(2, m + 1)))


def r_set_dr_scheme(problem: FeasibilityProblem, weights, x0,
                    cfg: Optional[StopConfig] = None) -> RunRecord:
    """Average of the r-set DR operators over the prefixes ``C_1..C_r``, r = 2..m."""
    op = r_set_dr_operator(problem, weights)
    meta = {"algorithm": "rset-dr", "plan": [list(range(1, r + 1))
                                             for r in range(2, problem.m + 1)],
            "weights": list(op.weights)}
    return _iterate(problem, op, x0, cfg, meta)


def cyclic_dr(problem: FeasibilityProblem, x0,
              cfg: Optional[StopConfig] = None) -> RunRecord:
    """Cyclic DR: string-averaging with the single string ``(1, ..., m)``."""
    rec = sa_dr(problem, StringPlan((tuple(range(1, problem.m + 1)),), (1.0,)),
                x0, cfg)
    rec.meta["algorithm"] = "cyclic-dr"
    return rec


def simultaneous_pairs(m: int) -> tuple:
    """Consecutive pairs ``(i, i+1)`` closed by ``(m, 1)``."""
    if m < 2:
        raise ValueError("need at least two sets")
    return tuple((i, i % m + 1) for i in range(1, m + 1))


def simultaneous_dr(problem: FeasibilityProblem, weights, x0,
                    cfg: Optional[StopConfig] = None) -> RunRecord:
    """Simultaneous DR: ``x -> sum_i w_i T(i, i+1)(x)`` with ``T(m, m+1) = T(m, 1)``.

    Every pair from :func:`simultaneous_pairs` is one two-set string, so this
    is also block-iterative DR with the single block ``(1, ..., m)``. Equal
    weights (``weights=None``) give the averaged DR iteration.
    """
    pairs = simultaneous_pairs(problem.m)
    if weights is None:
        weights = (1.0 / len(pairs),) * len(pairs)
    weights = tuple(float(w) for w in weights)
    if len(weights) != len(pairs):
        raise ValueError(f"need {len(pairs)} weights, one per pair, got {len(weights)}")
    S = problem.sets
    op = ConvexCombination(weights, tuple(TwoSetDR(S[i - 1], S[j - 1]) for i, j in pairs))
    meta = {"algorithm": "sdr", "plan": [list(p) for p in pairs], "weights": list(weights)}
    return _iterate(problem, op, x0, cfg, meta)


def two_set_dr_iteration(problem: FeasibilityProblem, x0,
                         cfg: Optional[StopConfig] = None) -> RunRecord:
    """Plain iteration of ``two_set_dr(C_1, C_2)`` on a two-set problem."""
    if problem.m != 2:
        raise ValueError("plain DR iteration needs exactly two sets")
    op = TwoSetDR(problem.sets[0], problem.sets[1])
    return _iterate(problem, op, x0, cfg, {"algorithm": "dr", "plan": [[1, 2]]})


def reference_cyclic_projections(problem: FeasibilityProblem, x0,
                                 cfg: Optional[StopConfig] = None) -> RunRecord:
    """Cyclic projections ``x -> P_m ... P_1 x`` (POCS)."""
    op = Composition(tuple(Projection(s) for s in problem.sets))
    return _iterate(problem, op, x0, cfg,
                    {"algorithm": "pocs", "plan": [list(range(1, problem.m + 1))]})
