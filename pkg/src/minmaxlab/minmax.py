"""Quadratic min-max problems on simplex products, GDA maps, and gap bounds.

The objective has the fixed shape

    f(x, y) = 1/2 y^T Qy y - 1/2 x^T Qx x + y^T M x,

with x the minimizer and y the maximizer, each on a probability simplex
(optionally coupled through a JointDomain band).  Qx and Qy must be
symmetric, exactly, in rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, PreconditionError, UnsupportedDomainError
from .games import MixedStrategy
from .geometry import JointDomain, _project_simplex_raw, project_joint
from .rational import FMat, fmat, shape, to_float_matrix, transpose


def _spectral_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True, eq=False)
class QuadraticMinMaxProblem:
    """Min-max quadratic with exact rational data and float evaluation mirrors.

    `smoothness_bound` (L) and `lipschitz_bound` (G) are conservative upper
    bounds used by the gap-to-VI translations; constructors of specific
    instances may pass tighter or customary values, otherwise spectral-norm
    estimates are filled in.
    """

    qx: FMat
    qy: FMat
    m: FMat
    domain: JointDomain | None = None
    smoothness_bound: float | None = None
    lipschitz_bound: float | None = None

    def __post_init__(self):
        qx = fmat(self.qx)
        qy = fmat(self.qy)
        mm = fmat(self.m)
        nx, nx2 = shape(qx)
        ny, ny2 = shape(qy)
        if nx != nx2 or ny != ny2:
            raise DimensionError("Qx and Qy must be square")
        if qx != transpose(qx) or qy != transpose(qy):
            raise DimensionError("Qx and Qy must be symmetric (exactly)")
        if shape(mm) != (ny, nx):
            raise DimensionError(f"M must have shape ({ny}, {nx}), got {shape(mm)}")
        if self.domain is not None and (self.domain.n != nx or nx != ny):
            raise DimensionError("a coupled domain needs matching x and y dimensions")
        object.__setattr__(self, "qx", qx)
        object.__setattr__(self, "qy", qy)
        object.__setattr__(self, "m", mm)
        if self.smoothness_bound is None:
            l_est = 2.0 * (
                _spectral_norm(self.qx_float)
                + _spectral_norm(self.qy_float)
                + _spectral_norm(self.m_float)
            )
            object.__setattr__(self, "smoothness_bound", l_est)
        if self.lipschitz_bound is None:
            a = _spectral_norm(self.qx_float) + _spectral_norm(self.m_float)
            b = _spectral_norm(self.qy_float) + _spectral_norm(self.m_float)
            object.__setattr__(self, "lipschitz_bound", math.hypot(a, b))

    @property
    def n_x(self) -> int:
        return len(self.qx)

    @property
    def n_y(self) -> int:
        return len(self.qy)

    @cached_property
    def qx_float(self) -> np.ndarray:
        return to_float_matrix(self.qx)

    @cached_property
    def qy_float(self) -> np.ndarray:
        return to_float_matrix(self.qy)

    @cached_property
    def m_float(self) -> np.ndarray:
        return to_float_matrix(self.m)

    @cached_property
    def mt_float(self) -> np.ndarray:
        # contiguous transpose so both players' feedbacks run the same kernel
        return np.ascontiguousarray(self.m_float.T)

    @cached_property
    def neg_m_float(self) -> np.ndarray:
        return np.ascontiguousarray(-self.m_float)

    def antisymmetric(self) -> bool:
        """Structural test for f(x, y) = -f(y, x): Qx = Qy and M skew, exactly."""
        return (
            self.n_x == self.n_y
            and self.qx == self.qy
            and transpose(self.m) == tuple(tuple(-v for v in row) for row in self.m)
        )

    def minimizer_feedback(self, own: np.ndarray, other: np.ndarray) -> np.ndarray:
        """Gradient fed to the x player: grad_x f."""
        return self.mt_float @ other - self.qx_float @ own

    def maximizer_feedback(self, own: np.ndarray, other: np.ndarray) -> np.ndarray:
        """Gradient fed to the y player: -grad_y f (it descends on -f)."""
        return self.neg_m_float @ other - self.qy_float @ own


def _point(problem: QuadraticMinMaxProblem, x, y) -> tuple[np.ndarray, np.ndarray]:
    xv = x.probs if isinstance(x, MixedStrategy) else np.asarray(x, dtype=float).reshape(-1)
    yv = y.probs if isinstance(y, MixedStrategy) else np.asarray(y, dtype=float).reshape(-1)
    if xv.size != problem.n_x or yv.size != problem.n_y:
        raise DimensionError("point does not match problem dimensions")
    return xv, yv


def f_value(problem: QuadraticMinMaxProblem, x, y) -> float:
    xv, yv = _point(problem, x, y)
    return float(
        0.5 * yv @ problem.qy_float @ yv
        - 0.5 * xv @ problem.qx_float @ xv
        + yv @ problem.m_float @ xv
    )


def gradient(problem: QuadraticMinMaxProblem, x, y) -> tuple[np.ndarray, np.ndarray]:
    """(grad_x f, grad_y f) at the point."""
    xv, yv = _point(problem, x, y)
    gx = problem.mt_float @ yv - problem.qx_float @ xv
    gy = problem.qy_float @ yv + problem.m_float @ xv
    return gx, gy


def gda_map(
    problem: QuadraticMinMaxProblem, x, y, stepsize: float = 1.0
) -> tuple[MixedStrategy, MixedStrategy]:
    """One projected gradient-descent-ascent step.

    On a plain simplex product each block projects independently; on a
    coupled domain the stacked update is projected jointly (safe variant).
    """
    if stepsize <= 0:
        raise PreconditionError("stepsize must be positive")
    xv, yv = _point(problem, x, y)
    gx, gy = gradient(problem, x, y)
    x_new = xv - stepsize * gx
    y_new = yv + stepsize * gy
    if problem.domain is None:
        return (
            MixedStrategy(_project_simplex_raw(x_new)),
            MixedStrategy(_project_simplex_raw(y_new)),
        )
    if problem.domain.violation(xv, yv) > 1e-8:
        raise PreconditionError("input point is not feasible for the coupled domain")
    return project_joint(x_new, y_new, problem.domain)


@dataclass(frozen=True)
class GapReport:
    """Distance moved by one GDA step, with the matching VI bound when stepsize is 1."""

    gap: float
    stepsize: float
    point: tuple[MixedStrategy, MixedStrategy]
    vi_bound: float | None
    bound_name: str | None


def gap_to_vi_bound(gap: float, smoothness: float) -> float:
    """First-order suboptimality implied by a unit-stepsize gap: gap * (L + 1)."""
    if gap < 0 or smoothness < 0:
        raise PreconditionError("gap and smoothness must be nonnegative")
    return gap * (smoothness + 1.0)


def safe_gap_to_vi_bound(gap: float, smoothness: float, lipschitz: float) -> float:
    """VI bound for the jointly projected (safe) step: sqrt(gap) * K.

    K = (L + 1) * sqrt(G + 4 sqrt(2)); loose but valid at any scale.
    """
    if gap < 0 or smoothness < 0 or lipschitz < 0:
        raise PreconditionError("gap, smoothness, and lipschitz must be nonnegative")
    k = (smoothness + 1.0) * math.sqrt(lipschitz + 4.0 * math.sqrt(2.0))
    return math.sqrt(gap) * k


def gda_gap(
    problem: QuadraticMinMaxProblem, x, y, stepsize: float = 1.0
) -> GapReport:
    """Euclidean distance between (x, y) and its GDA image.

    The VI translation is only certified at stepsize 1 (the lemmas are
    stated there); other stepsizes report the raw gap with no bound.
    """
    xv, yv = _point(problem, x, y)
    x2, y2 = gda_map(problem, x, y, stepsize)
    gap = float(
        math.hypot(np.linalg.norm(xv - x2.probs), np.linalg.norm(yv - y2.probs))
    )
    vi_bound = None
    bound_name = None
    if stepsize == 1.0:
        if problem.domain is None:
            vi_bound = gap_to_vi_bound(gap, problem.smoothness_bound)
            bound_name = "gradient mapping"
        else:
            vi_bound = safe_gap_to_vi_bound(
                gap, problem.smoothness_bound, problem.lipschitz_bound
            )
            bound_name = "safe gradient mapping"
    return GapReport(
        gap=gap,
        stepsize=float(stepsize),
        point=(MixedStrategy(xv), MixedStrategy(yv)),
        vi_bound=vi_bound,
        bound_name=bound_name,
    )


def check_fone(problem: QuadraticMinMaxProblem, x, y) -> tuple[float, float]:
    """Smallest (eps_x, eps_y) making (x, y) a first-order Nash point.

    eps_x = max over simplex vertices v of <x - v, grad_x f> and likewise
    eps_y = max over vertices w of <w - y, grad_y f>; linearity makes the
    vertex scan exact.  Only defined on the plain simplex product.
    """
    if problem.domain is not None:
        raise UnsupportedDomainError(
            "first-order certificates on the coupled domain are not supported"
        )
    xv, yv = _point(problem, x, y)
    gx, gy = gradient(problem, x, y)
    eps_x = float(xv @ gx - gx.min())
    eps_y = float(gy.max() - yv @ gy)
    return eps_x, eps_y


@dataclass(frozen=True)
class AntisymmetryReport:
    structural: bool
    max_violation: float
    ok: bool


def antisymmetry_check(
    problem: QuadraticMinMaxProblem, samples: int = 100, seed: int = 0
) -> AntisymmetryReport:
    """Structural antisymmetry plus sampled |f(x, y) + f(y, x)| <= 1e-10."""
    structural = problem.antisymmetric()
    worst = 0.0
    if problem.n_x == problem.n_y:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            xv = rng.dirichlet(np.ones(problem.n_x))
            yv = rng.dirichlet(np.ones(problem.n_y))
            worst = max(worst, abs(f_value(problem, xv, yv) + f_value(problem, yv, xv)))
    else:
        structural = False
        worst = math.inf
    return AntisymmetryReport(structural, worst, structural and worst <= 1e-10)
