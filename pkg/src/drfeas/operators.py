"""
Operator expressions built from projections and reflections.

An operator is an immutable expression tree evaluated with :func:`apply`.
Conventions:

* ``Reflection(s)(x) = 2 P_s(x) - x``
* ``TwoSetDR(first, second)(x) = (x + R_second(R_first(x))) / 2``. Sets are
  given in reflection order, so the classical ``T_{i,j}`` operator (reflect
  into ``C_i``, then into ``C_j``) is ``two_set_dr(C_i, C_j)``.
* ``RSetDR([C1, ..., Cr])(x) = (x + R_Cr(...R_C1(x)...)) / 2``
* ``Composition([U1, ..., Um])(x) = Um(...U1(x)...)``, list order.
* ``ConvexCombination`` sums its terms in list order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import ConvexSet, DimensionError, NonFiniteError, as_point, as_points


class Operator:
    """Base class for operator expressions."""

    dim: int

    def _eval(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _eval_checked(self, x: np.ndarray) -> np.ndarray:
        y = self._eval(x)
        if not np.all(np.isfinite(y)):
            raise NonFiniteError(f"non-finite value produced by {self!r}")
        return y

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)


def _common_dim(parts, what: str) -> int:
    dims = {p.dim for p in parts}
    if len(dims) != 1:
        raise DimensionError(f"{what} have mismatched dimensions {sorted(dims)}")
    return dims.pop()


def _set_label(s: ConvexSet) -> str:
    return f"{type(s).__name__}(dim={s.dim})"


@dataclass(frozen=True, eq=False)
class Identity(Operator):
    dim: int

    def _eval(self, x):
        return x.copy()


@dataclass(frozen=True, eq=False)
class Projection(Operator):
    set: ConvexSet

    @property
    def dim(self):
        return self.set.dim

    def _eval(self, x):
        return self.set._project(x)

    def __repr__(self):
        return f"Projection({_set_label(self.set)})"


@dataclass(frozen=True, eq=False)
class Reflection(Operator):
    set: ConvexSet

    @property
    def dim(self):
        return self.set.dim

    def _eval(self, x):
        return 2.0 * self.set._project(x) - x

    def __repr__(self):
        return f"Reflection({_set_label(self.set)})"


@dataclass(frozen=True, eq=False)
class Relaxation(Operator):
    """``(1 - lam) Id + lam T`` for ``lam`` in ``[0, 2]``."""

    inner: Operator
    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not 0.0 <= lam <= 2.0:
            raise ValueError(f"relaxation parameter must lie in [0, 2], got {lam}")
        object.__setattr__(self, "lam", lam)

    @property
    def dim(self):
        return self.inner.dim

    def _eval(self, x):
        return (1.0 - self.lam) * x + self.lam * self.inner._eval_checked(x)


@dataclass(frozen=True, eq=False)
class TwoSetDR(Operator):
    first: ConvexSet
    second: ConvexSet

    def __post_init__(self):
        _common_dim((self.first, self.second), "sets")

    @property
    def dim(self):
        return self.first.dim

    def _eval(self, x):
        y = 2.0 * self.first._project(x) - x
        y = 2.0 * self.second._project(y) - y
        return 0.5 * (x + y)

    def __repr__(self):
        return f"TwoSetDR({_set_label(self.first)}, {_set_label(self.second)})"


@dataclass(frozen=True, eq=False)
class RSetDR(Operator):
    sets: tuple

    def __post_init__(self):
        sets = tuple(self.sets)
        if len(sets) < 2:
            raise ValueError("the r-set DR operator needs at least two sets")
        _common_dim(sets, "sets")
        object.__setattr__(self, "sets", sets)

    @property
    def dim(self):
        return self.sets[0].dim

    def _eval(self, x):
        y = x
        for s in self.sets:
            y = 2.0 * s._project(y) - y
        return 0.5 * (x + y)

    def __repr__(self):
        return f"RSetDR(r={len(self.sets)}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Composition(Operator):
    """Apply ``ops`` left to right."""

    ops: tuple

    def __post_init__(self):
        ops = tuple(self.ops)
        if not ops:
            raise ValueError("empty composition")
        _common_dim(ops, "composed operators")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self):
        return self.ops[0].dim

    def _eval(self, x):
        for op in self.ops:
            x = op._eval_checked(x)
        return x

    def __repr__(self):
        return f"Composition({len(self.ops)} ops, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class ConvexCombination(Operator):
    """``sum_i w_i U_i`` with constant positive weights summing to one."""

    weights: tuple
    ops: tuple

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        ops = tuple(self.ops)
        if not ops or len(weights) != len(ops):
            raise ValueError("need one weight per operator")
        check_weights(weights)
        _common_dim(ops, "combined operators")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self):
        return self.ops[0].dim

    def _eval(self, x):
        # fixed reduction order keeps trajectories bit-stable
        acc = self.weights[0] * self.ops[0]._eval_checked(x)
        for w, op in zip(self.weights[1:], self.ops[1:]):
            acc = acc + w * op._eval_checked(x)
        return acc

    def __repr__(self):
        return f"ConvexCombination({len(self.ops)} terms, dim={self.dim})"


def check_weights(weights: Sequence[float], what: str = "weights") -> None:
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise ValueError(f"{what} must be a nonempty list of finite numbers")
    if np.any(w <= 0.0):
        raise ValueError(f"{what} must be positive")
    if abs(float(np.sum(w)) - 1.0) > 1e-12:
        raise ValueError(f"{what} must sum to 1, got {float(np.sum(w))!r}")


def apply(op: Operator, x) -> np.ndarray:
    """Evaluate ``op`` at ``x``."""
    x = as_point(x, op.dim)
    return op._eval_checked(x)


def two_set_dr(first: ConvexSet, second: ConvexSet) -> TwoSetDR:
    """Douglas-Rachford operator reflecting into ``first``, then ``second``."""
    return TwoSetDR(first, second)


def r_set_dr(sets: Sequence[ConvexSet]) -> RSetDR:
    """Midpoint of ``x`` and its consecutive reflections through ``sets``."""
    return RSetDR(tuple(sets))


def relax(op: Operator, lam: float) -> Relaxation:
    return Relaxation(op, lam)


def compose(ops: Sequence[Operator]) -> Composition:
    return Composition(tuple(ops))


def combine(weights: Sequence[float], ops: Sequence[Operator]) -> ConvexCombination:
    return ConvexCombination(tuple(weights), tuple(ops))


@dataclass(frozen=True)
class ProbeReport:
    """Largest observed violation of an operator inequality.

    Positive ``max_violation`` means the inequality failed on ``witness``.
    """

    max_violation: float
    witness: Optional[tuple]
    count: int


def apply_many(op: Operator, X) -> np.ndarray:
    """Evaluate ``op`` on each row of a ``(k, n)`` array."""
    X = as_points(X, op.dim)
    return op._eval_checked(X)


def _stack(points, dim, name):
    try:
        arr = np.array(list(points), dtype=float)
    except ValueError:
        raise DimensionError(f"{name} samples have inconsistent shapes") from None
    if arr.shape[0] == 0:
        raise ValueError("no samples given")
    return as_points(arr, dim, name)


def probe_fne(op: Operator, samples) -> ProbeReport:
    """Check firm nonexpansiveness on sampled pairs.

    Violation for a pair ``(x, y)`` is ``|Tx - Ty|^2 - <Tx - Ty, x - y>``.
    Pairs are evaluated as one batch.
    """
    pairs = np.array(list(samples), dtype=float)
    if pairs.size == 0:
        raise ValueError("no samples given")
    if pairs.ndim != 3 or pairs.shape[1] != 2:
        raise DimensionError("samples must be (x, y) pairs of equal-length points")
    X = as_points(pairs[:, 0], op.dim, "x")
    Y = as_points(pairs[:, 1], op.dim, "y")
    D = op._eval_checked(X) - op._eval_checked(Y)
    v = np.einsum("ij,ij->i", D, D) - np.einsum("ij,ij->i", D, X - Y)
    i = int(np.argmax(v))
    return ProbeReport(float(v[i]), (X[i], Y[i]), len(X))


def probe_sqne(op: Operator, fixed_points, samples, alpha: float = 1.0) -> ProbeReport:
    """Check ``|Tx - z|^2 <= |x - z|^2 - alpha |Tx - x|^2`` for fixed points ``z``.

    Every ``z`` must satisfy ``|Tz - z| <= 1e-10 (1 + |z|)``.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    Z = _stack(fixed_points, op.dim, "z")
    gaps = np.linalg.norm(op._eval_checked(Z) - Z, axis=1)
    bad = gaps > 1e-10 * (1.0 + np.linalg.norm(Z, axis=1))
    if np.any(bad):
        raise ValueError("supplied point is not a fixed point "
                         f"(|Tz - z| = {gaps[bad][0]:.3e})")
    X = _stack(samples, op.dim, "x")
    TX = op._eval_checked(X)
    step = np.einsum("ij,ij->i", TX - X, TX - X)
    worst, witness = -np.inf, None
    for z in Z:
        v = (np.einsum("ij,ij->i", TX - z, TX - z) + alpha * step
             - np.einsum("ij,ij->i", X - z, X - z))
        i = int(np.argmax(v))
        if v[i] > worst:
            worst, witness = float(v[i]), (X[i], z)
    return ProbeReport(worst, witness, len(X) * len(Z))
