"""Feasible sets and projections: simplexes, coupled strategy pairs, grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import CapExceededError, ConvergenceError, DimensionError
from .games import MixedStrategy
from .rational import FVec, to_fraction

PROJECT_JOINT_TOL = 1e-10
PROJECT_JOINT_MAX_SWEEPS = 100_000
FEASIBILITY_TOL = 1e-8


def _project_simplex_raw(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort and threshold)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    cond = u - css / ind > 0.0
    rho = ind[cond][-1]
    theta = css[cond][-1] / rho
    return np.maximum(v - theta, 0.0)


def project_simplex(point) -> MixedStrategy:
    """Project an arbitrary real vector onto the simplex."""
    v = np.asarray(point, dtype=float).reshape(-1)
    if v.size == 0:
        raise DimensionError("empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite entries")
    return MixedStrategy(_project_simplex_raw(v))


@dataclass(frozen=True)
class JointDomain:
    """Pairs (x, y) of n-simplex points with |x_i - y_i| <= delta for all i."""

    n: int
    delta: float

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("need at least one action")
        if not (self.delta >= 0.0):
            raise ValueError("delta must be nonnegative")
        object.__setattr__(self, "delta", float(self.delta))

    def violation(self, x, y) -> float:
        """Largest constraint violation of the pair (simplex and band)."""
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if x.size != self.n or y.size != self.n:
            raise DimensionError("point does not match domain dimension")
        worst = 0.0
        for v in (x, y):
            worst = max(worst, abs(v.sum() - 1.0), float(np.maximum(-v, 0.0).max()))
        worst = max(worst, float(np.maximum(np.abs(x - y) - self.delta, 0.0).max()))
        return worst

    def contains(self, x, y, tol: float = FEASIBILITY_TOL) -> bool:
        return self.violation(x, y) <= tol


def _project_band(z: np.ndarray, n: int, delta: float) -> np.ndarray:
    """Project stacked (x, y) onto the band |x_i - y_i| <= delta, coordinatewise."""
    x, y = z[:n].copy(), z[n:].copy()
    diff = x - y
    excess = (np.abs(diff) - delta) / 2.0
    np.clip(excess, 0.0, None, out=excess)
    shift = np.sign(diff) * excess
    x -= shift
    y += shift
    return np.concatenate([x, y])


def project_joint(
    x,
    y,
    domain: JointDomain,
    tol: float = PROJECT_JOINT_TOL,
    max_sweeps: int = PROJECT_JOINT_MAX_SWEEPS,
) -> tuple[MixedStrategy, MixedStrategy]:
    """Euclidean projection of a strategy pair onto a JointDomain.

    Dykstra alternating projections between the simplex product and the
    coordinate band; unlike plain alternating projection this converges to
    the true nearest point of the intersection.  Stops when an entire sweep
    moves the iterate by no more than `tol` and the iterate is feasible to
    1e-8; raises ConvergenceError (carrying the last residual) otherwise.
    """
    n = domain.n
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.size != n or y.size != n:
        raise DimensionError("point does not match domain dimension")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("point contains non-finite entries")
    cur = np.concatenate([x, y])
    p = np.zeros(2 * n)
    q = np.zeros(2 * n)
    residual = math.inf
    for _ in range(max_sweeps):
        prev = cur
        t = prev + q
        b = _project_band(t, n, domain.delta)
        q = t - b
        t = b + p
        cur = np.concatenate([_project_simplex_raw(t[:n]), _project_simplex_raw(t[n:])])
        p = t - cur
        residual = float(np.linalg.norm(cur - prev))
        if residual <= tol and domain.violation(cur[:n], cur[n:]) <= FEASIBILITY_TOL:
            return MixedStrategy(cur[:n]), MixedStrategy(cur[n:])
    raise ConvergenceError(
        f"projection did not settle within {max_sweeps} sweeps", residual=residual
    )


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_size(n: int, resolution) -> int:
    """Number of grid points of the n-simplex at spacing `resolution` = 1/m."""
    m = _resolution_denominator(resolution)
    return math.comb(m + n - 1, n - 1)


def _resolution_denominator(resolution) -> int:
    r = to_fraction(resolution)
    if r <= 0 or r > 1 or r.numerator != 1:
        raise ValueError(f"resolution must be 1/m for a positive integer m, got {resolution}")
    return r.denominator


def simplex_grid(n: int, resolution, cap: int = 10_000_000) -> Iterator[FVec]:
    """Stream all points of the n-simplex with coordinates in multiples of 1/m.

    Yields exact rational vectors in a fixed (first-coordinate descending)
    order.  Raises CapExceededError when the grid would hold more than `cap`
    points; nothing is materialized.
    """
    if n < 1:
        raise DimensionError("need at least one coordinate")
    m = _resolution_denominator(resolution)
    count = math.comb(m + n - 1, n - 1)
    if count > cap:
        raise CapExceededError(f"grid holds {count} points, cap is {cap}")

    def _stream() -> Iterator[FVec]:
        for comp in _compositions(m, n):
            yield tuple(Fraction(c, m) for c in comp)

    return _stream()
