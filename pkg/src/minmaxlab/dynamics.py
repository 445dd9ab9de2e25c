"""Learning dynamics for quadratic min-max problems on simplex products.

Five update rules share one interface: the x player receives grad_x f and
descends, the y player receives -grad_y f and descends on that, and both
apply the *same* deterministic rule to their own feedback.  Four of the
rules (GDA, ExtraGradient, OptimisticGDA, OMWU) update simultaneously;
with an antisymmetric objective and a shared starting point their feedback
vectors are bitwise identical, so the two iterates never separate — the
recorded symmetry drift stays exactly zero.  AlternatingGDA deliberately
breaks the pattern by updating x first and letting y react to the new x,
which is enough to pull the iterates apart on ordinary bilinear problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionError, PreconditionError, UnsupportedDomainError
from .games import MixedStrategy
from .geometry import _project_simplex_raw
from .minmax import QuadraticMinMaxProblem, f_value, gda_gap

GDA = "GDA"
EXTRAGRADIENT = "ExtraGradient"
OPTIMISTIC_GDA = "OptimisticGDA"
OMWU = "OMWU"
ALTERNATING_GDA = "AlternatingGDA"
ALGORITHMS = (GDA, EXTRAGRADIENT, OPTIMISTIC_GDA, OMWU, ALTERNATING_GDA)
SYMMETRIC_ALGORITHMS = (GDA, EXTRAGRADIENT, OPTIMISTIC_GDA, OMWU)


@dataclass(frozen=True)
class DynamicsConfig:
    """Algorithm choice, stepsize, horizon, and optional starting profile.

    Stepsizes are capped at 1 because the fixed-point-gap certificates are
    only stated there; the default init is the symmetric uniform profile.
    """

    algorithm: str
    stepsize: float = 0.1
    horizon: int = 100
    init: tuple[MixedStrategy, MixedStrategy] | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise PreconditionError(
                f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}"
            )
        if not (0 < self.stepsize <= 1):
            raise PreconditionError("stepsize must lie in (0, 1]")
        if self.horizon < 1:
            raise PreconditionError("horizon must be at least 1")


@dataclass(frozen=True)
class Trajectory:
    """Recorded run: T points with their gaps, drifts, and utilities."""

    points: tuple[tuple[np.ndarray, np.ndarray], ...]
    gaps: tuple[float, ...]
    drifts: tuple[float, ...]
    utilities: tuple[float, ...]

    def __post_init__(self):
        t = len(self.points)
        if not (len(self.gaps) == len(self.drifts) == len(self.utilities) == t):
            raise DimensionError("trajectory records have mismatched lengths")

    def __len__(self) -> int:
        return len(self.points)


def _init_point(
    problem: QuadraticMinMaxProblem, config: DynamicsConfig
) -> tuple[np.ndarray, np.ndarray]:
    if config.init is None:
        x = np.full(problem.n_x, 1.0 / problem.n_x)
        y = np.full(problem.n_y, 1.0 / problem.n_y)
        return x, y
    x_strat, y_strat = config.init
    x, y = x_strat.probs.copy(), y_strat.probs.copy()
    if x.size != problem.n_x or y.size != problem.n_y:
        raise DimensionError("initial point does not match problem dimensions")
    return x, y


def run(problem: QuadraticMinMaxProblem, config: DynamicsConfig) -> Trajectory:
    """Run the configured dynamics and record one entry per step.

    The first recorded point is the initialization; each later point is one
    update of its predecessor, so a horizon of T performs T - 1 updates.
    Gaps are fixed-point gaps at stepsize 1 regardless of the stepsize the
    dynamics use, making traces comparable across configurations.  Only
    plain simplex products are supported, and OMWU additionally needs a
    strictly positive starting profile since zeros are absorbing under
    multiplicative updates.
    """
    if problem.domain is not None:
        raise UnsupportedDomainError(
            "dynamics run on the simplex product; coupled domains are not supported"
        )
    x, y = _init_point(problem, config)
    eta = config.stepsize
    algo = config.algorithm
    if algo == OMWU and (x.min() <= 0 or y.min() <= 0):
        raise PreconditionError("OMWU requires a strictly positive initialization")

    gx_prev = np.zeros_like(x)
    gy_prev = np.zeros_like(y)
    points, gaps, drifts, utilities = [], [], [], []
    for t in range(config.horizon):
        points.append((x.copy(), y.copy()))
        gaps.append(gda_gap(problem, x, y, stepsize=1.0).gap)
        drifts.append(float(np.abs(x - y).max()) if x.size == y.size else float("inf"))
        utilities.append(f_value(problem, x, y))
        if t == config.horizon - 1:
            break
        if algo == GDA:
            gx = problem.minimizer_feedback(x, y)
            gy = problem.maximizer_feedback(y, x)
            x = _project_simplex_raw(x - eta * gx)
            y = _project_simplex_raw(y - eta * gy)
        elif algo == EXTRAGRADIENT:
            gx = problem.minimizer_feedback(x, y)
            gy = problem.maximizer_feedback(y, x)
            x_half = _project_simplex_raw(x - eta * gx)
            y_half = _project_simplex_raw(y - eta * gy)
            gx2 = problem.minimizer_feedback(x_half, y_half)
            gy2 = problem.maximizer_feedback(y_half, x_half)
            x = _project_simplex_raw(x - eta * gx2)
            y = _project_simplex_raw(y - eta * gy2)
        elif algo == OPTIMISTIC_GDA:
            gx = problem.minimizer_feedback(x, y)
            gy = problem.maximizer_feedback(y, x)
            x = _project_simplex_raw(x - eta * (2.0 * gx - gx_prev))
            y = _project_simplex_raw(y - eta * (2.0 * gy - gy_prev))
            gx_prev, gy_prev = gx, gy
        elif algo == OMWU:
            gx = problem.minimizer_feedback(x, y)
            gy = problem.maximizer_feedback(y, x)
            with np.errstate(over="ignore", invalid="ignore"):
                x_w = x * np.exp(-eta * (2.0 * gx - gx_prev))
                y_w = y * np.exp(-eta * (2.0 * gy - gy_prev))
            if (
                not np.isfinite(x_w).all()
                or not np.isfinite(y_w).all()
                or x_w.sum() <= 0
                or y_w.sum() <= 0
            ):
                raise OverflowError(
                    f"multiplicative update overflowed at step {t + 1}"
                )
            x = x_w / x_w.sum()
            y = y_w / y_w.sum()
            gx_prev, gy_prev = gx, gy
        else:  # AlternatingGDA: x moves first, y reacts to the fresh x
            gx = problem.minimizer_feedback(x, y)
            x = _project_simplex_raw(x - eta * gx)
            gy = problem.maximizer_feedback(y, x)
            y = _project_simplex_raw(y - eta * gy)
    return Trajectory(
        points=tuple(points),
        gaps=tuple(gaps),
        drifts=tuple(drifts),
        utilities=tuple(utilities),
    )


def symmetry_drift(trajectory: Trajectory) -> float:
    """Largest recorded ||x^t - y^t||_inf over the run."""
    if not trajectory.points:
        raise PreconditionError("empty trajectory")
    return max(trajectory.drifts)


def min_gap(trajectory: Trajectory) -> float:
    """Best (smallest) fixed-point gap achieved over the run."""
    if not trajectory.points:
        raise PreconditionError("empty trajectory")
    return min(trajectory.gaps)


def drift_witness_instance() -> tuple[QuadraticMinMaxProblem, DynamicsConfig]:
    """A bilinear problem and config on which AlternatingGDA separates.

    Rock-paper-scissors coupling from a symmetric non-equilibrium start:
    the four simultaneous rules keep x = y forever here, while the
    alternating rule lets y react to the already-moved x and the iterates
    split by far more than 1e-3 within a couple hundred steps.
    """
    zero = tuple(tuple(Fraction(0) for _ in range(3)) for _ in range(3))
    m = (
        (Fraction(0), Fraction(-1), Fraction(1)),
        (Fraction(1), Fraction(0), Fraction(-1)),
        (Fraction(-1), Fraction(1), Fraction(0)),
    )
    problem = QuadraticMinMaxProblem(qx=zero, qy=zero, m=m)
    init = (
        MixedStrategy.from_exact([Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)]),
        MixedStrategy.from_exact([Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)]),
    )
    config = DynamicsConfig(
        algorithm=ALTERNATING_GDA, stepsize=0.1, horizon=200, init=init
    )
    return problem, config
