"""
Seeded random instance families.

``polytope`` and ``ball_box_mix`` embed a ball of radius ``slack`` around a
sampled point ``p`` in every set, so the intersection has nonempty interior.
``lines_through_point`` returns hyperplanes through ``p`` (lines when the
dimension is 2), which meet only at ``p`` once there are at least ``dim`` of
them in general position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..geometry import (
    AffineSubspace,
    Ball,
    Box,
    FeasibilityProblem,
    Halfspace,
    Hyperplane,
)

MIN_LINE_ANGLE = 5.0  # degrees
_MAX_LINE_COS = float(np.cos(np.radians(MIN_LINE_ANGLE)))

GENERATORS = ("polytope", "ball_box_mix", "lines_through_point", "explicit")
_ALIASES = {"lines": "lines_through_point", "file": "explicit"}


@dataclass(frozen=True)
class InstanceSpec:
    """What to generate. ``params`` depends on ``generator``:

    * polytope: ``num_halfspaces``, ``slack``
    * ball_box_mix: ``balls``, ``boxes``, ``slack``
    * lines_through_point: ``count`` (normals pairwise at least ``MIN_LINE_ANGLE`` apart)
    * explicit: ``path``
    """

    generator: str
    dim: int = 0
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        gen = _ALIASES.get(self.generator, self.generator)
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}; "
                             f"expected one of {', '.join(GENERATORS)}")
        object.__setattr__(self, "generator", gen)
        if gen != "explicit" and (int(self.dim) != self.dim or self.dim < 1):
            raise ValueError("dim must be a positive integer")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        p = self.params
        if gen in ("polytope", "ball_box_mix") and not float(p.get("slack", 0)) > 0:
            raise ValueError(f"{gen} needs slack > 0")
        if gen == "polytope" and int(p.get("num_halfspaces", 0)) < 1:
            raise ValueError("polytope needs num_halfspaces >= 1")
        if gen == "ball_box_mix" and int(p.get("balls", 0)) + int(p.get("boxes", 0)) < 1:
            raise ValueError("ball_box_mix needs at least one ball or box")
        if gen == "lines_through_point" and int(p.get("count", 0)) < 1:
            raise ValueError("lines_through_point needs count >= 1")
        if gen == "explicit" and "path" not in p:
            raise ValueError("explicit instance needs a path")


def parse_instance_spec(text: str, seed: Optional[int] = None) -> InstanceSpec:
    """Parse ``kind:SHAPE[:key=value...]``.

    Examples: ``polytope:5x10:slack=0.3``, ``ball_box_mix:4x3+2:slack=0.2``,
    ``lines:2x2``, ``file:problem.json``. A ``seed=`` field overrides ``seed``.
    """
    parts = text.split(":")
    kind = _ALIASES.get(parts[0], parts[0])
    if kind == "explicit":
        if len(parts) < 2 or not parts[1]:
            raise ValueError("file spec needs a path, e.g. file:problem.json")
        return InstanceSpec("explicit", params={"path": ":".join(parts[1:])},
                            seed=seed or 0)
    if len(parts) < 2:
        raise ValueError(f"instance spec {text!r} lacks a shape such as 5x10")
    kv = {}
    for item in parts[2:]:
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"malformed option {item!r} in {text!r}")
        kv[key] = val
    if "seed" in kv:
        seed = int(kv.pop("seed"))
    try:
        dim_s, count_s = parts[1].split("x", 1)
        dim = int(dim_s)
        if kind == "ball_box_mix":
            balls, _, boxes = count_s.partition("+")
            params = {"balls": int(balls), "boxes": int(boxes or 0)}
        elif kind == "polytope":
            params = {"num_halfspaces": int(count_s)}
        else:
            params = {"count": int(count_s)}
    except ValueError:
        raise ValueError(f"cannot parse shape {parts[1]!r} in {text!r}") from None
    if "slack" in kv:
        params["slack"] = float(kv.pop("slack"))
    if kv:
        raise ValueError(f"unknown options {sorted(kv)} in {text!r}")
    return InstanceSpec(kind, dim, params, seed or 0)


def _unit(rng, n):
    while True:
        v = rng.normal(size=n)
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            return v / nrm


def generate(spec: InstanceSpec) -> FeasibilityProblem:
    """Build the instance described by ``spec``; deterministic in ``spec.seed``."""
    if spec.generator == "explicit":
        from .io import load_problem
        return load_problem(spec.params["path"])
    rng = np.random.default_rng(spec.seed)
    n = spec.dim
    p = rng.uniform(-1.0, 1.0, size=n)
    prm = spec.params

    if spec.generator == "polytope":
        slack = float(prm["slack"])
        sets = []
        for _ in range(int(prm["num_halfspaces"])):
            a = _unit(rng, n)
            sets.append(Halfspace(a, a @ p + slack * (1.0 + rng.uniform())))
        return FeasibilityProblem(tuple(sets), p, slack)

    if spec.generator == "ball_box_mix":
        slack = float(prm["slack"])
        sets = []
        for _ in range(int(prm["balls"])):
            off = rng.uniform(0.0, 2.0)
            c = p + off * _unit(rng, n)
            sets.append(Ball(c, off + slack * (1.0 + rng.uniform())))
        for _ in range(int(prm["boxes"])):
            lo = p - slack * (1.0 + rng.uniform(size=n))
            hi = p + slack * (1.0 + rng.uniform(size=n))
            sets.append(Box(lo, hi))
        return FeasibilityProblem(tuple(sets), p, slack)

    # lines_through_point: normals are redrawn until every pair is at least
    # MIN_LINE_ANGLE apart, so the common point is well conditioned
    count = int(prm["count"])
    normals = []
    for _ in range(1000 * count):
        a = _unit(rng, n)
        if all(abs(a @ b) <= _MAX_LINE_COS for b in normals):
            normals.append(a)
            if len(normals) == count:
                break
    if len(normals) < count:
        raise ValueError(f"cannot place {prm['count']} hyperplanes in dimension {n} "
                         f"with pairwise angles of at least {MIN_LINE_ANGLE} degrees")
    sets = tuple(Hyperplane(a, a @ p) for a in normals)
    return FeasibilityProblem(sets, p, 0.0)


def default_start(problem: FeasibilityProblem, seed: int = 0,
                  scale: float = 10.0) -> np.ndarray:
    """Seeded starting point at distance ``scale`` from the known feasible point."""
    rng = np.random.default_rng([int(seed), 1])
    base = problem.interior_point
    if base is None:
        base = np.zeros(problem.dim)
    return base + scale * _unit(rng, problem.dim)


def catalog_problem(dim: int, seed: int = 0, slack: float = 0.25) -> FeasibilityProblem:
    """One set of every catalog variant, all passing through a common point.

    The halfspace, ball and box contain a ball of radius ``slack`` around the
    common point; the hyperplane and affine subspace contain the point itself.
    Used by the operator probes, which need every projection formula exercised.
    """
    rng = np.random.default_rng([int(seed), 2])
    p = rng.uniform(-1.0, 1.0, size=dim)
    a = _unit(rng, dim)
    off = rng.uniform(0.0, 1.0)
    c = p + off * _unit(rng, dim)
    rows = max(1, dim // 2)
    A = rng.normal(size=(rows, dim))
    h = _unit(rng, dim)
    sets = (
        Halfspace(a, a @ p + slack * (1.0 + rng.uniform())),
        Ball(c, off + slack * (1.0 + rng.uniform())),
        Box(p - slack * (1.0 + rng.uniform(size=dim)),
            p + slack * (1.0 + rng.uniform(size=dim))),
        Hyperplane(h, h @ p),
        AffineSubspace(A, A @ p),
    )
    return FeasibilityProblem(sets, p, 0.0)
