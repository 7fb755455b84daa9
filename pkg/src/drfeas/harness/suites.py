"""
Property suites run by ``drfeas verify``.

Each suite returns a list of ``(name, Verdict)`` pairs. Instances come from
seeded generators so a suite is reproducible from its seed.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..algorithms import (
    BlockPlan,
    StringPlan,
    bi_dr,
    cyclic_dr,
    r_set_dr_scheme,
    sa_dr,
)
from ..diagnostics import (
    StopConfig,
    Verdict,
    check_asymptotic_regularity,
    check_fejer,
    compare_trajectories,
)
from ..geometry import FeasibilityProblem, Halfspace
from ..operators import (
    ConvexCombination,
    Reflection,
    apply,
    probe_fne,
    probe_sqne,
    r_set_dr,
    two_set_dr,
)
from .generate import catalog_problem, default_start, generate, parse_instance_spec

SUITES = ("geometry", "operators", "algorithms")

# residual trigger effectively off: runs continue until they stop moving
STATIONARY = StopConfig(residual_tol=np.finfo(float).tiny, step_tol=1e-12,
                        max_iters=10_000)


def _bound(name, value, threshold, detail=""):
    return name, Verdict(bool(value <= threshold), float(value), threshold, detail)


def _points(rng, n, count, scale=3.0):
    return scale * rng.normal(size=(count, n))


def geometry_suite(seed: int = 0, samples: int = 100):
    rng = np.random.default_rng([seed, 10])
    char = fne = member = lip = -np.inf
    for dim in range(2, 7):
        prob = catalog_problem(dim, seed + dim)
        for s in prob.sets:
            xs = _points(rng, dim, samples)
            ys = _points(rng, dim, samples)
            for x, y in zip(xs, ys):
                px, py = s.project(x), s.project(y)
                z = py
                scale = (1 + np.linalg.norm(x)) * (1 + np.linalg.norm(z))
                char = max(char, float((x - px) @ (z - px)) / scale)
                d = px - py
                fne = max(fne, float(d @ d - d @ (x - y)))
                member = max(member, s.distance(px) / (1 + np.linalg.norm(x)))
                lip = max(lip, abs(s.distance(x) - s.distance(y)) - float(np.linalg.norm(x - y)))
    return [
        _bound("projection characterization", char, 1e-10),
        _bound("projections firmly nonexpansive", fne, 1e-10),
        _bound("projected points are members", member, 1e-12),
        _bound("distance is 1-Lipschitz", lip, 1e-10),
    ]


def operator_probe(problem: FeasibilityProblem, rng, pairs: int):
    """Worst FNE and 1-SQNE violations over every 2-set and r-set DR operator."""
    n, sets = problem.dim, problem.sets
    ops = [two_set_dr(a, b) for a, b in itertools.permutations(sets, 2)]
    ops += [r_set_dr(sets[:r]) for r in range(3, len(sets) + 1)]
    ops.append(r_set_dr(list(reversed(sets))))
    fne = sqne = fix = -np.inf
    z = problem.interior_point
    for op in ops:
        xs = _points(rng, n, pairs)
        ys = _points(rng, n, pairs)
        fne = max(fne, probe_fne(op, zip(xs, ys)).max_violation)
        sqne = max(sqne, probe_sqne(op, [z], xs, alpha=1.0).max_violation)
        fix = max(fix, float(np.linalg.norm(apply(op, z) - z)))
    return fne, sqne, fix, len(ops)


def operators_suite(seed: int = 0, pairs: int = 200):
    rng = np.random.default_rng([seed, 11])
    fne = sqne = fix = comb = -np.inf
    exact = True
    for dim in (2, 3, 5, 8):
        prob = catalog_problem(dim, seed + dim)
        f, s, x, _ = operator_probe(prob, rng, pairs)
        fne, sqne, fix = max(fne, f), max(sqne, s), max(fix, x)
        a, b = prob.sets[0], prob.sets[1]
        for x in _points(rng, dim, pairs):
            exact &= bool(np.array_equal(apply(two_set_dr(a, b), x),
                                         apply(r_set_dr([a, b]), x)))
        cc = ConvexCombination((0.2, 0.3, 0.5), (two_set_dr(a, b), two_set_dr(b, prob.sets[2]),
                                                 r_set_dr(prob.sets)))
        pts = _points(rng, dim, 2 * pairs)
        comb = max(comb, probe_fne(cc, zip(pts[::2], pts[1::2])).max_violation)
    # negative control: reflections are nonexpansive but not firmly so
    refl = probe_fne(Reflection(Halfspace([1.0, 0.0], 1.0)), [([3.0, 0.0], [0.0, 0.0])])
    return [
        _bound("DR operators firmly nonexpansive", fne, 1e-9),
        _bound("DR operators 1-strongly quasi-nonexpansive", sqne, 1e-9),
        _bound("common point is fixed", fix, 1e-10),
        _bound("convex combination firmly nonexpansive", comb, 1e-9),
        ("r = 2 operator equals two-set DR bitwise",
         Verdict(exact, 0.0 if exact else 1.0, 0.0, "exact comparison")),
        ("reflection violates FNE (negative control)",
         Verdict(refl.max_violation > 0, refl.max_violation, 0.0, "expects a violation")),
    ]


def algorithms_suite(seed: int = 0, instances: int = 3):
    out = []
    C1, C2 = Halfspace([1.0], 1.0), Halfspace([-1.0], 1.0)
    line = FeasibilityProblem((C1, C2))
    one = StopConfig(max_iters=1)
    x_sa = sa_dr(line, StringPlan.equal([(1, 2)]), [5.0], one).iterates[1][0]
    x_bi = bi_dr(line, BlockPlan.equal([(1, 2)]), [5.0], one).iterates[1][0]
    out.append(_bound("SA-DR hand witness x1 = 1", abs(x_sa - 1.0), 0.0))
    out.append(_bound("BI-DR hand witness x1 = 2", abs(x_bi - 2.0), 0.0))

    worst_res = worst_fejer = worst_reg = worst_eq = 0.0
    for i in range(instances):
        prob = generate(parse_instance_spec("polytope:5x10:slack=0.3", seed + i))
        x0 = default_start(prob, seed + i)
        halves = [(1, 2, 3, 4, 5), (6, 7, 8, 9, 10)]
        runs = [sa_dr(prob, StringPlan.equal(halves), x0, STATIONARY),
                bi_dr(prob, BlockPlan.equal(halves), x0, STATIONARY),
                r_set_dr_scheme(prob, [1 / 9] * 9, x0, STATIONARY)]
        for rec in runs:
            worst_res = max(worst_res, rec.residuals[-1])
            worst_fejer = max(worst_fejer, check_fejer(rec).metric)
            worst_reg = max(worst_reg, check_asymptotic_regularity(rec, 1e-8).metric)
        cfg = StopConfig(residual_tol=np.finfo(float).tiny, step_tol=0.0, max_iters=200)
        single = sa_dr(prob, StringPlan((tuple(range(1, 11)),), (1.0,)), x0, cfg)
        worst_eq = max(worst_eq, compare_trajectories(single, cyclic_dr(prob, x0, cfg), 1e-12).metric)
    out.append(_bound("schemes reach residual 1e-6", worst_res, 1e-6))
    out.append(_bound("Fejer monotone w.r.t. interior point", worst_fejer, 0.0))
    out.append(_bound("asymptotically regular", worst_reg, 1e-8))
    out.append(_bound("single-string SA-DR equals cyclic DR", worst_eq, 1e-12))
    return out


def run_suite(name: str, seed: int = 0):
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, seed)]
    funcs = {"geometry": geometry_suite, "operators": operators_suite,
             "algorithms": algorithms_suite}
    if name not in funcs:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}, all")
    return [(f"{name}: {label}", v) for label, v in funcs[name](seed)]
