"""
Closed convex sets with exact projections.

Every set in the catalog is nonempty, closed and convex by construction and
knows how to compute its own orthogonal projection in closed form (or, for
affine subspaces, through a row-space basis computed once at construction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class DimensionError(ValueError):
    """Raised when a point or set does not match the expected dimension."""


class NonFiniteError(ValueError):
    """Raised when a point contains NaN or Inf entries."""


def as_point(x, dim: Optional[int] = None, name: str = "x") -> np.ndarray:
    """Validate ``x`` as a finite 1-D float vector (a copy is not made)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def as_points(X, dim: int, name: str = "points") -> np.ndarray:
    """Validate a ``(k, dim)`` stack of finite points."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionError(f"{name} must have shape (k, {dim}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contain non-finite entries")
    return arr


def default_tol(x: np.ndarray) -> float:
    """Membership tolerance scaled with the magnitude of ``x``."""
    return 1e-9 * (1.0 + float(np.linalg.norm(x)))


class ConvexSet:
    """Base class of the set catalog.

    Subclasses implement ``_project`` on an already validated point (or on a
    ``(k, n)`` stack of points, projected row by row) and
    ``margin``, the radius of the largest ball around a point that fits
    inside the set (negative outside).
    """

    dim: int

    def _project(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def margin(self, p) -> float:
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        return self._project(as_point(x, self.dim))

    def reflect(self, x) -> np.ndarray:
        x = as_point(x, self.dim)
        return 2.0 * self._project(x) - x

    def distance(self, x) -> float:
        x = as_point(x, self.dim)
        return float(np.linalg.norm(x - self._project(x)))

    def contains(self, x, tol: Optional[float] = None) -> bool:
        x = as_point(x, self.dim)
        if tol is None:
            tol = default_tol(x)
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        return float(np.linalg.norm(x - self._project(x))) <= tol


def _vector(v, name: str) -> np.ndarray:
    arr = np.array(v, dtype=float)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise DimensionError(f"{name} must be a nonempty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _scalar(v, name: str) -> float:
    v = float(v)
    if not np.isfinite(v):
        raise NonFiniteError(f"{name} must be finite")
    return v


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexSet):
    """``{x : <normal, x> <= offset}``."""

    normal: np.ndarray
    offset: float
    dim: int = field(init=False)

    def __post_init__(self):
        a = _vector(self.normal, "normal")
        nrm2 = float(a @ a)
        if nrm2 <= 0.0:
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", _scalar(self.offset, "offset"))
        object.__setattr__(self, "dim", a.shape[0])
        object.__setattr__(self, "_nrm2", nrm2)

    def _project(self, x):
        excess = x @ self.normal - self.offset
        if x.ndim > 1:
            return x - (np.maximum(excess, 0.0) / self._nrm2)[:, None] * self.normal
        if excess <= 0.0:
            return x.copy()
        return x - (excess / self._nrm2) * self.normal

    def margin(self, p):
        p = as_point(p, self.dim, "p")
        return (self.offset - self.normal @ p) / np.sqrt(self._nrm2)


@dataclass(frozen=True, eq=False)
class Hyperplane(ConvexSet):
    """``{x : <normal, x> = offset}``."""

    normal: np.ndarray
    offset: float
    dim: int = field(init=False)

    def __post_init__(self):
        a = _vector(self.normal, "normal")
        nrm2 = float(a @ a)
        if nrm2 <= 0.0:
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", _scalar(self.offset, "offset"))
        object.__setattr__(self, "dim", a.shape[0])
        object.__setattr__(self, "_nrm2", nrm2)

    def _project(self, x):
        shift = (self.offset - x @ self.normal) / self._nrm2
        if x.ndim > 1:
            return x + shift[:, None] * self.normal
        return x + shift * self.normal

    def margin(self, p):
        # a hyperplane has empty interior
        return -self.distance(p)


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    """Closed Euclidean ball."""

    center: np.ndarray
    radius: float
    dim: int = field(init=False)

    def __post_init__(self):
        c = _vector(self.center, "center")
        r = _scalar(self.radius, "radius")
        if r <= 0.0:
            raise ValueError("ball radius must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "dim", c.shape[0])

    def _project(self, x):
        d = x - self.center
        if x.ndim > 1:
            nrm = np.linalg.norm(d, axis=1, keepdims=True)
            out = x.copy()
            outside = nrm[:, 0] > self.radius
            out[outside] = self.center + d[outside] / nrm[outside] * self.radius
            return out
        nrm = float(np.linalg.norm(d))
        if nrm <= self.radius:
            return x.copy()
        return self.center + d / nrm * self.radius

    def margin(self, p):
        p = as_point(p, self.dim, "p")
        return self.radius - float(np.linalg.norm(p - self.center))


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    """Axis-aligned box ``lower <= x <= upper``."""

    lower: np.ndarray
    upper: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        lo = _vector(self.lower, "lower")
        hi = _vector(self.upper, "upper")
        if lo.shape != hi.shape:
            raise DimensionError("lower and upper must have the same length")
        if np.any(lo > hi):
            raise ValueError("box requires lower <= upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "dim", lo.shape[0])

    def _project(self, x):
        return np.minimum(np.maximum(x, self.lower), self.upper)

    def margin(self, p):
        p = as_point(p, self.dim, "p")
        if not np.all((p >= self.lower) & (p <= self.upper)):
            return -self.distance(p)
        return float(min(np.min(p - self.lower), np.min(self.upper - p)))


@dataclass(frozen=True, eq=False)
class AffineSubspace(ConvexSet):
    """Solution set of a consistent linear system ``matrix @ x = rhs``.

    An SVD gives an orthonormal basis ``Q`` of the row space of ``matrix``
    (singular values below the usual rank cutoff count as zero) and the set
    becomes ``{x : Q x = c}``, so ``P(x) = x - Q^T (Q x - c)``. Directions
    outside the row space stay unconstrained.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        A = np.array(self.matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
            raise DimensionError("matrix must be a nonempty 2-D array")
        b = _vector(self.rhs, "rhs")
        if b.shape[0] != A.shape[0]:
            raise DimensionError(
                f"rhs has length {b.shape[0]}, matrix has {A.shape[0]} rows")
        if not np.all(np.isfinite(A)):
            raise NonFiniteError("matrix contains non-finite entries")
        A.setflags(write=False)
        U, S, Vt = np.linalg.svd(A, full_matrices=False)
        cutoff = max(A.shape) * np.finfo(float).eps * (S[0] if S.size else 0.0)
        r = int(np.sum(S > cutoff))
        Q = Vt[:r]
        c = (U[:, :r].T @ b) / S[:r]
        if np.linalg.norm(A @ (Q.T @ c) - b) > 1e-10 * (1.0 + np.linalg.norm(b)):
            raise ValueError("inconsistent linear system: affine subspace is empty")
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "dim", A.shape[1])
        object.__setattr__(self, "_basis", Q)
        object.__setattr__(self, "_coef", c)

    @property
    def rank(self) -> int:
        return self._basis.shape[0]

    def _project(self, x):
        Q, c = self._basis, self._coef
        if x.ndim > 1:
            return x - (x @ Q.T - c) @ Q
        return x - Q.T @ (Q @ x - c)

    def margin(self, p):
        if self.rank == 0:
            return np.inf
        return -self.distance(p)


def project(s: ConvexSet, x) -> np.ndarray:
    """Nearest point of ``s`` to ``x``."""
    return s.project(x)


def reflect(s: ConvexSet, x) -> np.ndarray:
    """Reflection ``2 P_s(x) - x``."""
    return s.reflect(x)


def distance(s: ConvexSet, x) -> float:
    return s.distance(x)


def contains(s: ConvexSet, x, tol: Optional[float] = None) -> bool:
    """Membership test; ``tol`` defaults to ``1e-9 * (1 + |x|)``."""
    return s.contains(x, tol)


@dataclass(frozen=True, eq=False)
class FeasibilityProblem:
    """An ordered family of convex sets sharing one ambient dimension.

    ``interior_point`` is a known point of the intersection. When ``slack`` is
    positive the ball of that radius around it lies inside every set, which
    certifies that the intersection has nonempty interior.
    """

    sets: tuple
    interior_point: Optional[np.ndarray] = None
    slack: Optional[float] = None

    def __post_init__(self):
        sets = tuple(self.sets)
        if not sets:
            raise ValueError("a feasibility problem needs at least one set")
        for i, s in enumerate(sets):
            if not isinstance(s, ConvexSet):
                raise TypeError(f"sets[{i}] is not a ConvexSet")
        dims = {s.dim for s in sets}
        if len(dims) != 1:
            raise DimensionError(f"sets have mismatched dimensions {sorted(dims)}")
        object.__setattr__(self, "sets", sets)
        if self.slack is not None and self.interior_point is None:
            raise ValueError("slack given without interior_point")
        if self.interior_point is not None:
            p = as_point(self.interior_point, sets[0].dim, "interior_point").copy()
            p.setflags(write=False)
            slack = 0.0 if self.slack is None else float(self.slack)
            if not slack >= 0.0:
                raise ValueError("slack must be nonnegative")
            tol = 1e-12 * (1.0 + float(np.linalg.norm(p)))
            for i, s in enumerate(sets):
                if slack > 0.0:
                    ok = s.margin(p) >= slack - tol
                else:
                    ok = s.distance(p) <= tol
                if not ok:
                    raise ValueError(
                        f"interior_point is not certified for sets[{i}] "
                        f"with slack {slack}")
            object.__setattr__(self, "interior_point", p)
            object.__setattr__(self, "slack", slack)

    @property
    def dim(self) -> int:
        return self.sets[0].dim

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def certified(self) -> bool:
        """True when the intersection is known to have nonempty interior."""
        return self.interior_point is not None and self.slack > 0.0

    def residual(self, x) -> float:
        """Largest distance from ``x`` to any of the sets."""
        x = as_point(x, self.dim)
        return max(float(np.linalg.norm(x - s._project(x))) for s in self.sets)

    def subproblem(self, indices: Sequence[int]) -> "FeasibilityProblem":
        """Problem made of ``sets[i]`` for the given 0-based indices."""
        return FeasibilityProblem(
            tuple(self.sets[i] for i in indices), self.interior_point, self.slack)
