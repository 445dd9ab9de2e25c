"""Equilibrium certificates: approximate Nash, well-supported Nash, mass bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BoundViolationError, PreconditionError
from .games import (
    MAXIMIZE,
    BimatrixGame,
    Game,
    MixedProfile,
    MixedStrategy,
    SUPPORT_TOL,
    as_profile,
    deviation_payoffs,
    regret,
)
from .rational import FMat, FVec, fmat, fvec, mat_vec, shape, transpose

CERT_SLACK = 1e-12


@dataclass(frozen=True)
class Certificate:
    """Regret audit of a profile against a target epsilon.

    `witnesses` lists one (player, pure action, gain) per player: the best
    deviation found and how much it gains.  `satisfied` is true when every
    regret is at most epsilon + 1e-12.  Audits that certify a lemma bound
    can attach its name and value.
    """

    regrets: tuple[float, ...]
    epsilon: float
    satisfied: bool
    witnesses: tuple[tuple[int, int, float], ...]
    bound_name: str | None = None
    bound_value: float | None = None


def epsilon_ne_report(
    game: Game,
    profile: MixedProfile,
    epsilon: float = 0.0,
    bound_name: str | None = None,
    bound_value: float | None = None,
) -> Certificate:
    """Per-player regrets of a profile, tested against epsilon."""
    profile = as_profile(profile)
    n_players = 2 if isinstance(game, BimatrixGame) else game.n_players
    regrets = []
    witnesses = []
    for p in range(n_players):
        dev = deviation_payoffs(game, profile, p)
        current = float(dev @ profile[p].probs)
        if game.orientation[p] == MAXIMIZE:
            action = int(np.argmax(dev))
            gain = float(dev[action] - current)
        else:
            action = int(np.argmin(dev))
            gain = float(current - dev[action])
        regrets.append(gain)
        witnesses.append((p, action, gain))
    satisfied = all(r <= epsilon + CERT_SLACK for r in regrets)
    return Certificate(
        regrets=tuple(regrets),
        epsilon=float(epsilon),
        satisfied=satisfied,
        witnesses=tuple(witnesses),
        bound_name=bound_name,
        bound_value=bound_value,
    )


def wsne_report(game: BimatrixGame, x: MixedStrategy) -> float:
    """Smallest eps for which (x, x) is an eps-well-supported equilibrium.

    Requires a symmetric identical-payoff game (R = C and R symmetric), so a
    single strategy describes the profile and both players share the
    deviation vector Rx.  Support means probability above 1e-12.
    """
    if not isinstance(game, BimatrixGame) or not game.identical_payoff():
        raise PreconditionError("wsne_report needs an identical-payoff bimatrix game")
    if game.row_payoff != transpose(game.row_payoff):
        raise PreconditionError("wsne_report needs a symmetric payoff matrix")
    if game.orientation[0] != game.orientation[1]:
        raise PreconditionError("players must share an orientation")
    probs = x.probs if isinstance(x, MixedStrategy) else np.asarray(x, dtype=float)
    if probs.size != game.action_counts[0]:
        raise PreconditionError("strategy length does not match the game")
    payoffs = game.row_float @ probs
    support = probs > SUPPORT_TOL
    if game.orientation[0] == MAXIMIZE:
        return float((payoffs.max() - payoffs[support]).max())
    return float((payoffs[support] - payoffs.min()).max())


def wsne_eps_exact(matrix, x, orientation: str = MAXIMIZE) -> Fraction:
    """Exact-rational version of wsne_report on a raw symmetric matrix.

    Support is exact here: every action with positive probability.
    """
    m = fmat(matrix)
    n, n2 = shape(m)
    if n != n2:
        raise PreconditionError("square matrix required")
    xv = fvec(x)
    if len(xv) != n:
        raise PreconditionError("strategy length does not match the matrix")
    payoffs = mat_vec(m, xv)
    supported = [payoffs[i] for i in range(n) if xv[i] > 0]
    if not supported:
        raise PreconditionError("empty support")
    if orientation == MAXIMIZE:
        return max(payoffs) - min(supported)
    return max(supported) - min(payoffs)


def _wsne_eps_bimatrix(game: BimatrixGame, profile: MixedProfile) -> float:
    """Largest supported-action suboptimality over both players (float)."""
    worst = 0.0
    for p in range(2):
        dev = deviation_payoffs(game, profile, p)
        support = profile[p].probs > SUPPORT_TOL
        if game.orientation[p] == MAXIMIZE:
            worst = max(worst, float((dev.max() - dev[support]).max()))
        else:
            worst = max(worst, float((dev[support] - dev.min()).max()))
    return worst


def ne_to_wsne(game: BimatrixGame, profile: MixedProfile, epsilon: float) -> MixedProfile:
    """Turn an (eps^2/8)-Nash profile into an eps-well-supported one.

    Each player drops every action whose payoff against the co-player's
    original strategy is more than eps below the best response, then
    renormalizes.  The construction is verified a posteriori: the output
    must be an eps-WSNE and move each probability by at most eps/4 in
    sup-norm, else BoundViolationError is raised.
    """
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    profile = as_profile(profile)
    cert = epsilon_ne_report(game, profile, epsilon**2 / 8.0)
    if not cert.satisfied:
        raise PreconditionError(
            f"profile is not an (eps^2/8)-equilibrium: regrets {cert.regrets}"
        )
    new_strategies = []
    for p in range(2):
        dev = deviation_payoffs(game, profile, p)
        if game.orientation[p] == MAXIMIZE:
            gaps = dev.max() - dev
        else:
            gaps = dev - dev.min()
        probs = profile[p].probs.copy()
        probs[gaps > epsilon] = 0.0
        probs /= probs.sum()
        new_strategies.append(MixedStrategy(probs))
    out = MixedProfile(tuple(new_strategies))
    measured = _wsne_eps_bimatrix(game, out)
    if measured > epsilon + CERT_SLACK:
        raise BoundViolationError(
            f"constructed profile is only a {measured}-WSNE, wanted {epsilon}"
        )
    drift = max(
        float(np.abs(out[p].probs - profile[p].probs).max()) for p in range(2)
    )
    if drift > epsilon / 4.0 + CERT_SLACK:
        raise BoundViolationError(f"construction moved mass by {drift} > eps/4")
    return out


@dataclass(frozen=True)
class MassBoundEntry:
    """One suboptimal action whose probability mass exceeds eps^2 / gap."""

    player: int
    action: int
    mass: float
    gap: float
    bound: float


def mass_bound_audit(game: Game, profile: MixedProfile, epsilon: float) -> list[MassBoundEntry]:
    """Check that suboptimal actions carry little mass in an eps^2-equilibrium.

    In any eps^2-equilibrium, an action whose payoff is c worse than the
    best response (c > 0) can carry at most eps^2 / c probability.  Requires
    the profile to actually be an eps^2-equilibrium; returns the list of
    violating (player, action) pairs with measured masses, empty when the
    bound holds everywhere (with 1e-9 slack).
    """
    profile = as_profile(profile)
    eps_sq = float(epsilon) ** 2
    cert = epsilon_ne_report(game, profile, eps_sq)
    if not cert.satisfied:
        raise PreconditionError(
            f"profile is not an eps^2-equilibrium: regrets {cert.regrets}"
        )
    n_players = 2 if isinstance(game, BimatrixGame) else game.n_players
    violations = []
    for p in range(n_players):
        dev = deviation_payoffs(game, profile, p)
        if game.orientation[p] == MAXIMIZE:
            gaps = dev.max() - dev
        else:
            gaps = dev - dev.min()
        for a in range(gaps.size):
            gap = float(gaps[a])
            if gap <= 0.0:
                continue
            mass = float(profile[p].probs[a])
            bound = eps_sq / gap
            if mass > bound + 1e-9:
                violations.append(MassBoundEntry(p, a, mass, gap, bound))
    return violations
