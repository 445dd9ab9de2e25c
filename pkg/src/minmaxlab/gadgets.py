"""Reduction gadgets between symmetric games, team games, and min-max problems.

The constructions all share one trick: an adversary with 2n + 1 actions
whose first 2n "mirror" actions pay (|A_min| / eps) times the signed
difference between two team strategies, plus an anchor action paying a
flat |A_min|.  Near equilibrium the anchor soaks up the adversary's mass
and the team members are forced to play almost identically, which is what
lets approximate equilibria be mapped back to the original game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .checks import Certificate, epsilon_ne_report
from .errors import BoundViolationError, DimensionError, PreconditionError
from .games import (
    MAXIMIZE,
    MINIMIZE,
    MixedProfile,
    MixedStrategy,
    PolymatrixGame,
    as_profile,
    decompose_symmetric_skew,
)
from .geometry import JointDomain
from .minmax import QuadraticMinMaxProblem
from .oracle import symmetric_support_enumeration
from .rational import (
    FMat,
    fmat,
    mat_add,
    mat_max,
    mat_min,
    mat_scale,
    shape,
    to_fraction,
    transpose,
)

EPS_CAP = Fraction(1, 10)


def _square_exact(matrix) -> FMat:
    m = fmat(matrix)
    n, n2 = shape(m)
    if n != n2 or n == 0:
        raise DimensionError("non-empty square matrix required")
    return m


def shift_to_gadget_range(matrix) -> tuple[FMat, Fraction]:
    """Affine shift making all entries <= -1 (identity when already there).

    Subtracts (max entry + 2) from every entry when needed, so the shifted
    maximum lands at -2.  A constant shift moves every profile's utility by
    the same amount and leaves best responses, equilibria, and regrets of
    an identical-payoff game unchanged; only |A_min| in the additive bounds
    grows.  Returns (shifted matrix, shift used).
    """
    m = _square_exact(matrix)
    top = mat_max(m)
    if top <= -1:
        return m, Fraction(0)
    shift = top + 2
    shifted = tuple(tuple(x - shift for x in row) for row in m)
    return shifted, shift


def _mirror_coupling(n: int, scale: Fraction) -> FMat:
    """(2n+1) x n matrix P with P[i, i] = scale, P[n+i, i] = -scale, last row 0."""
    zero = Fraction(0)
    rows = []
    for i in range(n):
        row = [zero] * n
        row[i] = scale
        rows.append(tuple(row))
    for i in range(n):
        row = [zero] * n
        row[i] = -scale
        rows.append(tuple(row))
    rows.append(tuple([zero] * n))
    return tuple(rows)


def _anchor_matrix(n: int, payoff: Fraction) -> FMat:
    """(2n+1) x n matrix paying `payoff` on the anchor row (folds a z-linear term)."""
    zero = Fraction(0)
    rows = [tuple([zero] * n) for _ in range(2 * n)]
    rows.append(tuple([payoff] * n))
    return tuple(rows)


@dataclass(frozen=True, eq=False)
class TeamGadgetInstance:
    """Two-player team (x, y) versus one adversary z with mirror actions.

    The shared scalar payoff (which z maximizes and the team minimizes) is

        u(x, y, z) = <x, A y>
                     + (|A_min| / eps) * sum_i ( z_i (x_i - y_i) + z_{n+i} (y_i - x_i) )
                     + z_{2n+1} |A_min|.
    """

    a: FMat
    epsilon: Fraction
    shift: Fraction
    penalty_scale: Fraction
    game: PolymatrixGame

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def anchor_action(self) -> int:
        return 2 * self.n


def team_gadget(matrix, epsilon, shift=0) -> TeamGadgetInstance:
    """Build the two-team-player gadget for a symmetric A with entries <= -1.

    `epsilon` must satisfy 0 < eps <= 1/10 (rational, kept exact).  Callers
    holding a matrix with larger entries shift it first via
    shift_to_gadget_range and pass the recorded shift along.
    """
    a = _square_exact(matrix)
    if a != transpose(a):
        raise PreconditionError("A must be symmetric")
    if mat_max(a) > -1:
        raise PreconditionError(
            "A must have entries <= -1; see shift_to_gadget_range"
        )
    eps = to_fraction(epsilon)
    if not (0 < eps <= EPS_CAP):
        raise PreconditionError(f"epsilon must lie in (0, 1/10], got {eps}")
    n = len(a)
    penalty = -mat_min(a)
    coupling = _mirror_coupling(n, penalty / eps)
    game = PolymatrixGame(
        action_counts=(n, n, 2 * n + 1),
        pair_matrices={
            (0, 1): a,
            (2, 0): mat_add(coupling, _anchor_matrix(n, penalty)),
            (2, 1): mat_scale(coupling, Fraction(-1)),
        },
        orientation=(MINIMIZE, MINIMIZE, MAXIMIZE),
        team_partition=(frozenset({0, 1}), frozenset({2})),
    )
    return TeamGadgetInstance(
        a=a, epsilon=eps, shift=to_fraction(shift), penalty_scale=penalty, game=game
    )


def canonical_team_ne(instance: TeamGadgetInstance) -> MixedProfile:
    """An exact equilibrium of the gadget: both team players on an exact
    symmetric minimization equilibrium of A, the adversary on the anchor.

    With x = y the mirror actions all pay zero, so the anchor is the
    adversary's strict best response; against the anchored adversary the
    team faces exactly the identical-payoff game on A.
    """
    eqs = symmetric_support_enumeration(instance.a, orientation=MINIMIZE)
    if not eqs:
        raise RuntimeError("no exact symmetric minimization equilibrium found")
    x_bar = eqs[0].strategy
    z = MixedStrategy.pure(2 * instance.n + 1, instance.anchor_action)
    return MixedProfile((x_bar, x_bar, z))


def _certify(game, profile, eps_sq: float) -> Certificate:
    cert = epsilon_ne_report(game, profile, eps_sq)
    if not cert.satisfied:
        raise PreconditionError(
            f"profile is not a certified {eps_sq}-equilibrium: regrets {cert.regrets}"
        )
    return cert


def team_backmap(
    instance: TeamGadgetInstance, profile: MixedProfile, eps2_certified: float
) -> tuple[MixedStrategy, float]:
    """Map an eps^2-equilibrium of the gadget back to the symmetric game on A.

    Returns (y*, bound): playing (y*, y*) in the identical-payoff game on A
    (both players minimizing) has regret at most (21 n + 1) |A_min| eps.
    """
    profile = as_profile(profile)
    eps = math.sqrt(float(eps2_certified))
    if eps > float(EPS_CAP) + 1e-12:
        raise PreconditionError(f"need eps <= 1/10, got {eps}")
    _certify(instance.game, profile, float(eps2_certified))
    n = instance.n
    bound = (21 * n + 1) * float(instance.penalty_scale) * eps
    return profile[1], bound


@dataclass(frozen=True)
class GadgetStructureReport:
    """Measured near-equilibrium structure of a team gadget profile."""

    epsilon: float
    max_pair_gap: float       # ||x - y||_inf, bounded by 2 eps
    pair_bound: float
    max_mirror_mass: float    # max_j z_j over the 2n mirror actions, bounded by 9 eps
    mirror_bound: float
    certificate: Certificate


def gadget_structure_audit(
    instance: TeamGadgetInstance, profile: MixedProfile, epsilon: float
) -> GadgetStructureReport:
    """Verify the two structure lemmas on a certified eps^2-equilibrium.

    In any eps^2-equilibrium of the gadget (eps <= 1/10) the team strategies
    are close, ||x - y||_inf <= 2 eps, and the adversary leaves at most
    9 eps on each mirror action.  Violations raise BoundViolationError.
    """
    profile = as_profile(profile)
    eps = float(epsilon)
    if not (0 < eps <= float(EPS_CAP) + 1e-12):
        raise PreconditionError(f"epsilon must lie in (0, 1/10], got {eps}")
    cert = _certify(instance.game, profile, eps * eps)
    x, y, z = (profile[p].probs for p in range(3))
    pair_gap = float(np.abs(x - y).max())
    mirror_mass = float(z[: 2 * instance.n].max()) if instance.n else 0.0
    report = GadgetStructureReport(
        epsilon=eps,
        max_pair_gap=pair_gap,
        pair_bound=2.0 * eps,
        max_mirror_mass=mirror_mass,
        mirror_bound=9.0 * eps,
        certificate=cert,
    )
    if pair_gap > report.pair_bound + 1e-9:
        raise BoundViolationError(
            f"team strategies differ by {pair_gap} > 2 eps = {report.pair_bound}"
        )
    if mirror_mass > report.mirror_bound + 1e-9:
        raise BoundViolationError(
            f"mirror action holds {mirror_mass} > 9 eps = {report.mirror_bound}"
        )
    return report


# ---------------------------------------------------------------------------
# quadratic and coupled min-max gadgets


def quadratic_gadget(matrix) -> QuadraticMinMaxProblem:
    """Antisymmetric quadratic min-max problem encoding a symmetric play of R.

    For square R with entries in [-1, 1], split R = A + C into symmetric and
    skew parts and set f(x, y) = 1/2 y^T A y - 1/2 x^T A x + y^T C x.  Then
    f(x, y) = -f(y, x), and f is 4n-smooth with gradients bounded by 4n
    (both recorded on the problem).
    """
    r = _square_exact(matrix)
    if mat_min(r) < -1 or mat_max(r) > 1:
        raise PreconditionError("entries of R must lie in [-1, 1]")
    a, c = decompose_symmetric_skew(r)
    n = len(r)
    return QuadraticMinMaxProblem(
        qx=a, qy=a, m=c, smoothness_bound=4.0 * n, lipschitz_bound=4.0 * n
    )


def symmetric_backmap(matrix, x_star: MixedStrategy, gap: float) -> float:
    """Regret bound for (x*, x*) in (R, R^T) from a symmetric GDA gap.

    A unit-stepsize GDA gap of eps at the symmetric point (x*, x*) of the
    quadratic gadget bounds every unilateral deviation by
    sqrt(2) * eps * (2n + 1).
    """
    r = _square_exact(matrix)
    if gap < 0:
        raise PreconditionError("gap must be nonnegative")
    n = len(r)
    if len(x_star) != n:
        raise DimensionError("strategy length does not match R")
    return math.sqrt(2.0) * float(gap) * (2.0 * n + 1.0)


def coupling_width(eps: float, n: int) -> float:
    """Default band width for the coupled domain: delta = eps^(1/4) n^(-1/4)."""
    if eps <= 0 or n < 1:
        raise PreconditionError("need eps > 0 and n >= 1")
    return float(eps) ** 0.25 * float(n) ** -0.25

def coupled_gadget(matrix, delta: float) -> QuadraticMinMaxProblem:
    """The quadratic gadget restricted to strategy pairs with |x_i - y_i| <= delta."""
    base = quadratic_gadget(matrix)
    n = base.n_x
    return QuadraticMinMaxProblem(
        qx=base.qx,
        qy=base.qy,
        m=base.m,
        domain=JointDomain(n, float(delta)),
        smoothness_bound=base.smoothness_bound,
        lipschitz_bound=base.lipschitz_bound,
    )


def median_backmap(
    matrix, x_star: MixedStrategy, y_star: MixedStrategy, gap: float, delta: float
) -> tuple[MixedStrategy, float]:
    """Map a safe-GDA stationary pair on the coupled domain back to (R, R^T).

    Returns the coordinatewise median (x* + y*) / 2 and the regret bound
    2 n^2 delta + 2 K n^(3/2) sqrt(gap) / delta with K = (L+1) sqrt(G + 4 sqrt 2)
    and L = G = 4n.  The pair must be feasible for the width-delta domain.
    """
    r = _square_exact(matrix)
    n = len(r)
    if len(x_star) != n or len(y_star) != n:
        raise DimensionError("strategy length does not match R")
    if gap < 0 or delta <= 0:
        raise PreconditionError("need gap >= 0 and delta > 0")
    domain = JointDomain(n, float(delta))
    if domain.violation(x_star.probs, y_star.probs) > 1e-8:
        raise PreconditionError("pair is not feasible for the coupled domain")
    l = g = 4.0 * n
    k = (l + 1.0) * math.sqrt(g + 4.0 * math.sqrt(2.0))
    bound = 2.0 * n * n * float(delta) + 2.0 * k * n**1.5 * math.sqrt(float(gap)) / float(delta)
    median = MixedStrategy((x_star.probs + y_star.probs) / 2.0)
    return median, bound


# ---------------------------------------------------------------------------
# three-versus-three team gadget


@dataclass(frozen=True, eq=False)
class Team3v3Instance:
    """Two symmetric teams (x, y, z) and (x-hat, y-hat, z-hat) around a square R.

    With A = -(R + R^T)/2 shifted to entries <= -1 and C = R^T - R, the
    hatted team maximizes

        u = <x, A y> - <x-hat, A y-hat> + <x, C x-hat>
            + delta(x, y, z-hat) - delta(x-hat, y-hat, z),

    where delta(x, y, w) is the mirror coupling of the two-player gadget
    driven by the listed adversary w.  Each adversary polices the *other*
    team's internal agreement.  Swapping the teams negates u.
    """

    r: FMat
    a: FMat
    c: FMat
    shift: Fraction
    epsilon: Fraction
    penalty_scale: Fraction
    game: PolymatrixGame

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def anchor_action(self) -> int:
        return 2 * self.n


def team3v3_gadget(matrix, epsilon) -> Team3v3Instance:
    """Build the three-versus-three gadget from any square rational R."""
    r = _square_exact(matrix)
    eps = to_fraction(epsilon)
    if not (0 < eps <= EPS_CAP):
        raise PreconditionError(f"epsilon must lie in (0, 1/10], got {eps}")
    sym, skew = decompose_symmetric_skew(r)
    a_raw = mat_scale(sym, Fraction(-1))
    a, shift = shift_to_gadget_range(a_raw)
    c = mat_scale(skew, Fraction(-2))  # C = R^T - R = -2 * skew(R)
    n = len(r)
    penalty = -mat_min(a)
    coupling = _mirror_coupling(n, penalty / eps)
    anchored = mat_add(coupling, _anchor_matrix(n, penalty))
    neg = lambda m: mat_scale(m, Fraction(-1))
    # players: 0 x, 1 y, 2 z (unhatted, minimize u); 3 x-hat, 4 y-hat, 5 z-hat
    game = PolymatrixGame(
        action_counts=(n, n, 2 * n + 1, n, n, 2 * n + 1),
        pair_matrices={
            (0, 1): a,            # <x, A y>
            (3, 4): neg(a),       # -<x-hat, A y-hat>
            (0, 3): c,            # <x, C x-hat>
            (5, 0): anchored,     # delta(x, y, z-hat): + side and anchor
            (5, 1): neg(coupling),
            (2, 3): neg(anchored),  # -delta(x-hat, y-hat, z)
            (2, 4): coupling,
        },
        orientation=(MINIMIZE, MINIMIZE, MINIMIZE, MAXIMIZE, MAXIMIZE, MAXIMIZE),
        team_partition=(frozenset({0, 1, 2}), frozenset({3, 4, 5})),
    )
    return Team3v3Instance(
        r=r,
        a=a,
        c=c,
        shift=shift,
        epsilon=eps,
        penalty_scale=penalty,
        game=game,
    )


@dataclass(frozen=True)
class Team3v3Report:
    """Structure audit and back-map of a team-symmetric 3v3 profile."""

    epsilon: float
    strategy: MixedStrategy
    bound: float
    max_pair_gap: float
    pair_bound: float
    max_mirror_mass: float
    mirror_bound: float
    certificate: Certificate


def team3v3_audit_and_backmap(
    instance: Team3v3Instance, profile: MixedProfile, epsilon: float
) -> Team3v3Report:
    """Audit a certified, team-symmetric eps^2-equilibrium and map it back.

    Requires x = x-hat, y = y-hat, z = z-hat up to 1e-9.  Checks both teams'
    internal agreement (<= 2 eps per coordinate) and both adversaries'
    mirror masses (<= 9 eps), then returns x* with the guarantee that
    (x*, x*) is a (21 n + 1) |A_min| eps equilibrium of (R, R^T).
    """
    profile = as_profile(profile)
    eps = float(epsilon)
    if not (0 < eps <= float(EPS_CAP) + 1e-12):
        raise PreconditionError(f"epsilon must lie in (0, 1/10], got {eps}")
    if len(profile) != 6:
        raise DimensionError("profile must cover all six players")
    for p in range(3):
        mismatch = float(np.abs(profile[p].probs - profile[p + 3].probs).max())
        if mismatch > 1e-9:
            raise PreconditionError(
                f"profile is not symmetric across teams (player {p}: {mismatch})"
            )
    cert = _certify(instance.game, profile, eps * eps)
    n = instance.n
    pair_gap = max(
        float(np.abs(profile[0].probs - profile[1].probs).max()),
        float(np.abs(profile[3].probs - profile[4].probs).max()),
    )
    mirror_mass = max(
        float(profile[2].probs[: 2 * n].max()),
        float(profile[5].probs[: 2 * n].max()),
    )
    bound = (21 * n + 1) * float(instance.penalty_scale) * eps
    report = Team3v3Report(
        epsilon=eps,
        strategy=profile[0],
        bound=bound,
        max_pair_gap=pair_gap,
        pair_bound=2.0 * eps,
        max_mirror_mass=mirror_mass,
        mirror_bound=9.0 * eps,
        certificate=cert,
    )
    if pair_gap > report.pair_bound + 1e-9:
        raise BoundViolationError(
            f"teammates differ by {pair_gap} > 2 eps = {report.pair_bound}"
        )
    if mirror_mass > report.mirror_bound + 1e-9:
        raise BoundViolationError(
            f"mirror action holds {mirror_mass} > 9 eps = {report.mirror_bound}"
        )
    return report
