"""
Problem files (JSON) and run traces (CSV plus a JSON metadata sidecar).

Problem file layout::

    {"dim": 2,
     "sets": [{"type": "halfspace", "normal": [1, 0], "offset": 1},
              {"type": "ball", "center": [0, 0], "radius": 2}],
     "interior_point": [0, 0], "slack": 0.5}

Set types and their fields: ``halfspace``/``hyperplane`` (normal, offset),
``ball`` (center, radius), ``box`` (lower, upper), ``affine`` (matrix, rhs).
Floats are written with ``repr``, the shortest decimal that round-trips.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from ..algorithms import RunRecord
from ..geometry import (
    AffineSubspace,
    Ball,
    Box,
    FeasibilityProblem,
    Halfspace,
    Hyperplane,
)

CSV_HEADER = ("iter", "step_norm", "residual", "fejer_distance")

_FIELDS = {
    "halfspace": (Halfspace, ("normal", "offset")),
    "hyperplane": (Hyperplane, ("normal", "offset")),
    "ball": (Ball, ("center", "radius")),
    "box": (Box, ("lower", "upper")),
    "affine": (AffineSubspace, ("matrix", "rhs")),
}
_TYPE_OF = {cls: name for name, (cls, _) in _FIELDS.items()}


class ProblemFormatError(ValueError):
    """Malformed problem or run file; the message names the offending field."""


def _tolist(v):
    return np.asarray(v, dtype=float).tolist()


def problem_to_dict(problem: FeasibilityProblem) -> dict:
    sets = []
    for s in problem.sets:
        name = _TYPE_OF[type(s)]
        entry = {"type": name}
        for f in _FIELDS[name][1]:
            val = getattr(s, f)
            entry[f] = float(val) if np.ndim(val) == 0 else _tolist(val)
        sets.append(entry)
    out = {"dim": problem.dim, "sets": sets}
    if problem.interior_point is not None:
        out["interior_point"] = _tolist(problem.interior_point)
        out["slack"] = float(problem.slack)
    return out


def problem_from_dict(data) -> FeasibilityProblem:
    if not isinstance(data, dict):
        raise ProblemFormatError("top level: expected a JSON object")
    if "dim" not in data:
        raise ProblemFormatError("dim: missing required field")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ProblemFormatError(f"dim: expected a positive integer, got {dim!r}")
    if "sets" not in data:
        raise ProblemFormatError("sets: missing required field")
    if not isinstance(data["sets"], list) or not data["sets"]:
        raise ProblemFormatError("sets: expected a nonempty array")
    sets = []
    for i, entry in enumerate(data["sets"]):
        where = f"sets[{i}]"
        if not isinstance(entry, dict) or "type" not in entry:
            raise ProblemFormatError(f"{where}.type: missing set type")
        kind = entry["type"]
        if kind not in _FIELDS:
            raise ProblemFormatError(
                f"{where}.type: unknown set variant {kind!r} "
                f"(expected one of {', '.join(_FIELDS)})")
        cls, names = _FIELDS[kind]
        for f in names:
            if f not in entry:
                raise ProblemFormatError(f"{where}.{f}: missing required field")
        try:
            s = cls(*(entry[f] for f in names))
        except (ValueError, TypeError) as exc:
            raise ProblemFormatError(f"{where}: {exc}") from None
        if s.dim != dim:
            raise ProblemFormatError(f"{where}: dimension {s.dim} does not match dim={dim}")
        sets.append(s)
    try:
        return FeasibilityProblem(tuple(sets), data.get("interior_point"),
                                  data.get("slack"))
    except (ValueError, TypeError) as exc:
        raise ProblemFormatError(f"interior_point/slack: {exc}") from None


def save_problem(problem: FeasibilityProblem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=1) + "\n")


def load_problem(path) -> FeasibilityProblem:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return problem_from_dict(data)
    except ProblemFormatError as exc:
        raise ProblemFormatError(f"{path}: {exc}") from None


def _fmt(v) -> str:
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def meta_path(path) -> Path:
    return Path(path).with_suffix(".meta.json")


def save_run(rec: RunRecord, path, seed=None, extra=None) -> None:
    """Write the per-iteration CSV and its ``.meta.json`` sidecar.

    Row ``k`` holds ``|x^k - x^(k-1)|`` (empty for k = 0), the largest set
    distance of ``x^k`` and its distance to the reference point (empty when
    the run had none). The sidecar stores the stored iterates.
    """
    path = Path(path)
    K = rec.iterations
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for k in range(K + 1):
            step = rec.step_norms[k - 1] if k else math.nan
            fej = rec.fejer_distances[k] if rec.fejer_distances else math.nan
            w.writerow((k, _fmt(step), _fmt(rec.residuals[k]), _fmt(fej)))
    meta = {
        "algorithm": rec.meta.get("algorithm"),
        "plan": rec.meta.get("plan"),
        "weights": rec.meta.get("weights"),
        "seed": seed,
        "stop_reason": rec.stop_reason,
        "iterations": K,
        "reference_point": None if rec.reference_point is None
        else _tolist(rec.reference_point),
        "iterate_indices": list(rec.iterate_indices),
        "iterates": [_tolist(x) for x in rec.iterates],
    }
    if rec.sweep_iterates:
        meta["sweep_iterates"] = [_tolist(x) for x in rec.sweep_iterates]
    if extra:
        meta.update(extra)
    meta_path(path).write_text(json.dumps(meta, indent=1) + "\n")


def load_run(path) -> RunRecord:
    """Inverse of :func:`save_run`."""
    path = Path(path)
    steps, res, fej = [], [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise ProblemFormatError(f"{path}: line 1: expected header {','.join(CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ProblemFormatError(f"{path}: line {lineno}: expected 4 fields")
            try:
                if int(row[0]) != lineno - 2:
                    raise ValueError("iteration counter out of sequence")
                if lineno > 2:
                    steps.append(float(row[1]))
                res.append(float(row[2]))
                if row[3]:
                    fej.append(float(row[3]))
            except ValueError as exc:
                raise ProblemFormatError(f"{path}: line {lineno}: {exc}") from None
    mp = meta_path(path)
    try:
        meta = json.loads(mp.read_text())
    except FileNotFoundError:
        raise ProblemFormatError(f"{mp}: metadata sidecar not found") from None
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{mp}: line {exc.lineno}: {exc.msg}") from None
    ref = meta.get("reference_point")
    return RunRecord(
        iterates=[np.array(x, dtype=float) for x in meta.get("iterates", [])],
        iterate_indices=list(meta.get("iterate_indices", [])),
        step_norms=steps,
        residuals=res,
        fejer_distances=fej,
        reference_point=None if ref is None else np.array(ref, dtype=float),
        stop_reason=meta.get("stop_reason", ""),
        iterations=len(res) - 1,
        sweep_iterates=[np.array(x, dtype=float) for x in meta.get("sweep_iterates", [])],
        meta={k: meta.get(k) for k in ("algorithm", "plan", "weights", "seed")},
    )
