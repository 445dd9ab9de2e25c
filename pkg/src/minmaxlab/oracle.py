"""Brute-force ground truth: support enumeration, cliques, grid search, refinement.

Everything here is meant to be slow but trustworthy at desk scale, so the
closed forms and reduction gadgets can be audited against independent
computations.  Support enumeration and grid search work in exact rationals
at the decision points; floats are only a pre-filter.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .checks import Certificate, epsilon_ne_report
from .errors import CapExceededError, DimensionError
from .games import (
    MAXIMIZE,
    MINIMIZE,
    BimatrixGame,
    Game,
    MixedProfile,
    MixedStrategy,
    NormalFormGame,
    PolymatrixGame,
    as_profile,
    deviation_payoffs,
    to_normal_form,
)
from .geometry import simplex_grid
from .rational import FMat, FVec, fmat, fvec, mat_vec, shape, solve_linear, to_fraction

logger = logging.getLogger(__name__)

SUPPORT_ENUM_MAX_N = 12
MAX_CLIQUE_MAX_N = 20
GRID_SEARCH_CAP = 100_000_000
REFINE_MAX_ITERS = 100_000
REFINE_DAMPING = 0.1


@dataclass(frozen=True)
class SymmetricEquilibrium:
    """Exact symmetric equilibrium (x, x) of a two-player game (M, M^T)."""

    probs: FVec
    value: Fraction
    support: tuple[int, ...]

    @property
    def strategy(self) -> MixedStrategy:
        return MixedStrategy.from_exact(self.probs)


def symmetric_support_enumeration(
    matrix,
    orientation: str = MAXIMIZE,
    cap_n: int = SUPPORT_ENUM_MAX_N,
) -> list[SymmetricEquilibrium]:
    """Enumerate all exact symmetric equilibria (x, x) of the game (M, M^T).

    Both players share the deviation vector Mx, so (x, x) is an equilibrium
    iff (Mx)_i = v on the support and every off-support payoff is no better
    than v in the given orientation.  For each candidate support the linear
    system is solved exactly over the rationals; singular systems (which can
    hide equilibrium continua) are skipped and logged.  Solutions must be
    strictly positive on their support, so each equilibrium is reported once,
    under its true support.

    M need not be symmetric: for a matrix R this enumerates the symmetric
    equilibria of (R, R^T).  When M is symmetric these are also the symmetric
    equilibria of the identical-payoff game (M, M).
    """
    m = fmat(matrix)
    n, n2 = shape(m)
    if n != n2:
        raise DimensionError("square matrix required")
    if n > cap_n:
        raise CapExceededError(f"support enumeration capped at n = {cap_n}, got {n}")
    if orientation not in (MAXIMIZE, MINIMIZE):
        raise ValueError(f"bad orientation {orientation!r}")
    zero = Fraction(0)
    one = Fraction(1)
    results: list[SymmetricEquilibrium] = []
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            # unknowns: x on the support, then v
            rows = []
            rhs = []
            for i in support:
                rows.append([m[i][j] for j in support] + [Fraction(-1)])
                rhs.append(zero)
            rows.append([one] * size + [zero])
            rhs.append(one)
            sol = solve_linear(rows, rhs)
            if sol is None:
                logger.debug("singular support system skipped: %s", support)
                continue
            x_support, v = sol[:-1], sol[-1]
            if any(p <= 0 for p in x_support):
                continue
            x = [zero] * n
            for i, p in zip(support, x_support):
                x[i] = p
            payoffs = mat_vec(m, x)
            if orientation == MAXIMIZE:
                ok = all(payoffs[i] <= v for i in range(n) if i not in support)
            else:
                ok = all(payoffs[i] >= v for i in range(n) if i not in support)
            if ok:
                results.append(SymmetricEquilibrium(tuple(x), v, support))
    results.sort(key=lambda eq: (eq.value, eq.probs))
    return results


# ---------------------------------------------------------------------------
# cliques


def _adjacency_masks(graph) -> list[int]:
    n = graph.n
    masks = [0] * n
    for i, j in graph.edges:
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def max_clique(graph) -> tuple[int, tuple[int, ...]]:
    """Exact maximum clique (size, witness) by branch and bound.

    Deterministic: among maximum cliques the lexicographically smallest
    vertex tuple is returned.  Capped at 20 vertices.
    """
    n = graph.n
    if n > MAX_CLIQUE_MAX_N:
        raise CapExceededError(f"max_clique capped at n = {MAX_CLIQUE_MAX_N}, got {n}")
    if n == 0:
        return 0, ()
    adj = _adjacency_masks(graph)
    best_mask = 0
    best_size = 0

    def expand(cur_mask: int, cur_size: int, cand: int) -> None:
        nonlocal best_mask, best_size
        if cand == 0:
            if cur_size > best_size:
                best_mask, best_size = cur_mask, cur_size
            return
        while cand:
            if cur_size + cand.bit_count() <= best_size:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            expand(cur_mask | (1 << v), cur_size + 1, cand & adj[v])

    expand(0, 0, (1 << n) - 1)
    witness = tuple(i for i in range(n) if best_mask >> i & 1)
    return best_size, witness


def cliques_of_size(graph, k: int) -> list[tuple[int, ...]]:
    """All vertex sets of size k that are cliques, in lexicographic order."""
    n = graph.n
    if n > MAX_CLIQUE_MAX_N:
        raise CapExceededError(f"clique enumeration capped at n = {MAX_CLIQUE_MAX_N}")
    if k < 1 or k > n:
        return []
    adj = _adjacency_masks(graph)
    out: list[tuple[int, ...]] = []

    def expand(cur: tuple[int, ...], cand: int) -> None:
        if len(cur) == k:
            out.append(cur)
            return
        while cand:
            if len(cur) + cand.bit_count() < k:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            expand(cur + (v,), cand & adj[v])

    expand((), (1 << n) - 1)
    return out


def all_max_cliques(graph) -> list[tuple[int, ...]]:
    k, _ = max_clique(graph)
    return cliques_of_size(graph, k)


# ---------------------------------------------------------------------------
# grid search


def _as_normal_form(game: Game) -> NormalFormGame | BimatrixGame:
    if isinstance(game, PolymatrixGame):
        return to_normal_form(game)
    return game


def _player_tensors(game) -> tuple[list[np.ndarray], list[np.ndarray], tuple[str, ...]]:
    """Float and exact per-player tensors for bimatrix or normal-form games."""
    if isinstance(game, BimatrixGame):
        floats = [game.row_float, game.col_float]
        exacts = [
            np.array(game.row_payoff, dtype=object),
            np.array(game.col_payoff, dtype=object),
        ]
        return floats, exacts, game.orientation
    return list(game.float_payoffs), list(game.payoffs), game.orientation


def _exact_deviation(tensor: np.ndarray, strategies: list[FVec], player: int) -> list[Fraction]:
    """Exact deviation payoffs of `player` from an object tensor."""
    t = tensor
    for q in range(len(strategies) - 1, -1, -1):
        if q == player:
            continue
        vec = np.array(strategies[q], dtype=object)
        t = np.tensordot(t, vec, axes=([q], [0]))
    return list(t)


def exact_max_regret(game: Game, strategies: Sequence[Iterable]) -> Fraction:
    """Largest regret over players, computed in exact rational arithmetic."""
    game = _as_normal_form(game)
    exact = [fvec(s) for s in strategies]
    _, tensors, orientation = _player_tensors(game)
    worst = Fraction(0)
    for p, tensor in enumerate(tensors):
        dev = _exact_deviation(tensor, exact, p)
        current = sum(d * w for d, w in zip(dev, exact[p]))
        if orientation[p] == MAXIMIZE:
            r = max(dev) - current
        else:
            r = current - min(dev)
        worst = max(worst, r)
    return worst


def grid_ne_search(
    game: Game,
    resolution,
    eps,
    cap: int = GRID_SEARCH_CAP,
) -> list[tuple[MixedProfile, float]]:
    """All grid profiles whose max regret is at most eps (exact comparison).

    Each player's strategy ranges over the simplex grid with spacing
    `resolution` = 1/m.  Regrets are computed for every joint profile with
    vectorized float arithmetic, candidates within 1e-9 of the threshold are
    re-checked in exact rational arithmetic, and only profiles with exact
    max regret <= eps survive.  Raises CapExceededError when the number of
    joint profiles exceeds `cap`.
    """
    nf = _as_normal_form(game)
    counts = nf.action_counts
    n_players = len(counts)
    eps_exact = to_fraction(eps)
    eps_f = float(eps_exact)
    grids_exact: list[list[FVec]] = [list(simplex_grid(c, resolution, cap)) for c in counts]
    sizes = [len(g) for g in grids_exact]
    total = math.prod(sizes)
    if total > cap:
        raise CapExceededError(f"{total} grid profiles exceed cap {cap}")
    grids_float = [
        np.array([[float(p) for p in point] for point in g]) for g in grids_exact
    ]
    floats, _, orientation = _player_tensors(nf)

    # per-player chunked regret arrays over the joint grid, chunking player 0
    act = [chr(ord("a") + p) for p in range(n_players)]
    gl = [chr(ord("A") + p) for p in range(n_players)]
    chunk_rows = max(1, min(sizes[0], int(2e7 // max(1, total // sizes[0]))))
    candidates: list[tuple[int, ...]] = []
    for start in range(0, sizes[0], chunk_rows):
        stop = min(sizes[0], start + chunk_rows)
        chunk_grids = [grids_float[0][start:stop]] + grids_float[1:]
        worst = None
        for p in range(n_players):
            others = [q for q in range(n_players) if q != p]
            sub_in = "".join(act) + "," + ",".join(gl[q] + act[q] for q in others)
            dev = np.einsum(sub_in + "->" + act[p] + "".join(gl[q] for q in others),
                            floats[p], *[chunk_grids[q] for q in others])
            if orientation[p] == MAXIMIZE:
                best = dev.max(axis=0)
            else:
                best = dev.min(axis=0)
            cur = np.einsum(gl[p] + act[p] + "," + act[p] + "".join(gl[q] for q in others)
                            + "->" + "".join(gl), chunk_grids[p], dev)
            sign = 1.0 if orientation[p] == MAXIMIZE else -1.0
            r = sign * (np.expand_dims(best, axis=p) - cur)
            worst = r if worst is None else np.maximum(worst, r)
        hits = np.argwhere(worst <= eps_f + 1e-9)
        for idx in hits:
            idx = tuple(int(i) for i in idx)
            candidates.append((idx[0] + start,) + idx[1:])

    results = []
    for idx in candidates:
        strategies = [grids_exact[p][idx[p]] for p in range(n_players)]
        exact_regret = exact_max_regret(nf, strategies)
        if exact_regret <= eps_exact:
            profile = MixedProfile(tuple(MixedStrategy.from_exact(s) for s in strategies))
            results.append((profile, float(exact_regret)))
    return results


# ---------------------------------------------------------------------------
# local refinement


@dataclass(frozen=True)
class RefineResult:
    profile: MixedProfile
    max_regret: float
    iterations: int
    converged: bool
    certificate: Certificate | None


def local_ne_refine(
    game: Game,
    start: MixedProfile,
    target_regret: float,
    max_iters: int = REFINE_MAX_ITERS,
    damping: float = REFINE_DAMPING,
) -> RefineResult:
    """Damped fictitious play toward an approximate equilibrium.

    All players simultaneously step toward a pure best response,
    s <- (1 - eta_t) s + eta_t e_br, with eta_t = damping / (1 + damping t):
    the first step uses `damping`, the tail decays like the classic 1/t
    averaging so oscillations shrink instead of limit-cycling.  Stops once
    the max regret reaches `target_regret`, returning a freshly recomputed
    certificate; otherwise returns the best profile seen with a failure flag.
    """
    profile = as_profile(start)
    n_players = len(profile)
    strategies = [profile[p].probs.copy() for p in range(n_players)]
    best_profile = profile
    best_regret = math.inf
    iterations = 0
    for t in range(max_iters):
        iterations = t + 1
        worst = 0.0
        brs = []
        for p in range(n_players):
            dev = deviation_payoffs(game, profile, p)
            cur = float(dev @ strategies[p])
            if game.orientation[p] == MAXIMIZE:
                br = int(np.argmax(dev))
                worst = max(worst, float(dev[br] - cur))
            else:
                br = int(np.argmin(dev))
                worst = max(worst, float(cur - dev[br]))
            brs.append(br)
        if worst < best_regret:
            best_regret = worst
            best_profile = profile
        if worst <= target_regret:
            cert = epsilon_ne_report(game, profile, target_regret)
            return RefineResult(profile, worst, iterations, True, cert)
        eta = damping / (1.0 + damping * t)
        for p in range(n_players):
            strategies[p] *= 1.0 - eta
            strategies[p][brs[p]] += eta
        profile = MixedProfile(tuple(MixedStrategy(s) for s in strategies))
    return RefineResult(best_profile, best_regret, iterations, False, None)
