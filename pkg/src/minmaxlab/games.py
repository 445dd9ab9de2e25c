"""Strategy and game containers: bimatrix, polymatrix, and dense tensor form.

Payoffs are stored as exact rationals and mirrored to float64 once for
evaluation.  Every player carries an explicit orientation (maximize or
minimize its stored payoff), since the adversarial-team constructions mix
both conventions inside a single game.

A :class:`PolymatrixGame` here is a pairwise-bilinear game with one shared
scalar payoff: the stored matrices define

    u(s) = sum over pairs (i, j) of  s_i^T M_ij s_j,

every player evaluates that same scalar, and the orientation says which way
the player pulls it.  Teams are the orientation classes, so players on a
team share per-profile utility exactly and the two teams' signed utilities
cancel by construction.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceededError, DimensionError
from .rational import (
    FMat,
    FVec,
    fmat,
    fvec,
    shape,
    to_float_matrix,
    to_fraction,
    transpose,
)

MAXIMIZE = "maximize"
MINIMIZE = "minimize"

# strategy hygiene thresholds
CLAMP_TOL = 1e-12     # negative components above this magnitude are rejected
SUM_TOL = 1e-9        # |sum - 1| must be below this before renormalizing
SUPPORT_TOL = 1e-12   # default support threshold


def _validate_orientation(orientation: Sequence[str], n_players: int) -> tuple[str, ...]:
    out = tuple(orientation)
    if len(out) != n_players:
        raise DimensionError(f"expected {n_players} orientations, got {len(out)}")
    for o in out:
        if o not in (MAXIMIZE, MINIMIZE):
            raise ValueError(f"orientation must be '{MAXIMIZE}' or '{MINIMIZE}', got {o!r}")
    return out


@dataclass(frozen=True)
class MixedStrategy:
    """A point of the probability simplex, stored as float64.

    Tiny negative components (>= -1e-12) are clamped to zero and the vector
    renormalized; larger violations or a total mass off by more than 1e-9
    raise.  When the strategy was built from rational data an exact copy is
    kept alongside the float view.
    """

    probs: np.ndarray
    exact: FVec | None = None

    def __post_init__(self):
        v = np.array(self.probs, dtype=float).reshape(-1)
        if v.size == 0:
            raise DimensionError("empty strategy vector")
        if not np.all(np.isfinite(v)):
            raise ValueError("strategy contains non-finite entries")
        if v.min() < -CLAMP_TOL:
            raise ValueError(f"negative probability {v.min()} below clamp tolerance")
        total = v.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        v[v < 0.0] = 0.0
        v /= v.sum()
        v.flags.writeable = False
        object.__setattr__(self, "probs", v)
        if self.exact is not None:
            e = fvec(self.exact)
            if len(e) != v.size:
                raise DimensionError("exact and float views disagree on length")
            if any(p < 0 for p in e) or sum(e) != 1:
                raise ValueError("exact strategy must lie on the simplex")
            object.__setattr__(self, "exact", e)

    @classmethod
    def from_exact(cls, values: Iterable) -> "MixedStrategy":
        e = fvec(values)
        return cls(np.array([float(p) for p in e]), exact=e)

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls.from_exact([Fraction(1, n)] * n)

    @classmethod
    def pure(cls, n: int, action: int) -> "MixedStrategy":
        e = [Fraction(0)] * n
        e[action] = Fraction(1)
        return cls.from_exact(e)

    def __len__(self) -> int:
        return int(self.probs.size)

    def support(self, threshold: float = SUPPORT_TOL) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.probs > threshold)[0])


@dataclass(frozen=True)
class MixedProfile:
    """One mixed strategy per player."""

    strategies: tuple[MixedStrategy, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if not self.strategies:
            raise DimensionError("empty profile")
        for s in self.strategies:
            if not isinstance(s, MixedStrategy):
                raise TypeError("profile entries must be MixedStrategy")

    def __len__(self) -> int:
        return len(self.strategies)

    def __getitem__(self, player: int) -> MixedStrategy:
        return self.strategies[player]


def as_strategy(values) -> MixedStrategy:
    if isinstance(values, MixedStrategy):
        return values
    return MixedStrategy(np.asarray(values, dtype=float))


def as_profile(strategies) -> MixedProfile:
    if isinstance(strategies, MixedProfile):
        return strategies
    return MixedProfile(tuple(as_strategy(s) for s in strategies))


@dataclass(frozen=True, eq=False)
class BimatrixGame:
    """Two-player game with dense rational payoff matrices R (row) and C (column)."""

    row_payoff: FMat
    col_payoff: FMat
    orientation: tuple[str, str] = (MAXIMIZE, MAXIMIZE)

    def __post_init__(self):
        r = fmat(self.row_payoff)
        c = fmat(self.col_payoff)
        if shape(r) != shape(c):
            raise DimensionError("row and column payoff shapes differ")
        if not r or not r[0]:
            raise DimensionError("empty payoff matrix")
        object.__setattr__(self, "row_payoff", r)
        object.__setattr__(self, "col_payoff", c)
        object.__setattr__(self, "orientation", _validate_orientation(self.orientation, 2))

    @property
    def n_players(self) -> int:
        return 2

    @property
    def action_counts(self) -> tuple[int, int]:
        return shape(self.row_payoff)

    @cached_property
    def row_float(self) -> np.ndarray:
        m = to_float_matrix(self.row_payoff)
        m.flags.writeable = False
        return m

    @cached_property
    def col_float(self) -> np.ndarray:
        m = to_float_matrix(self.col_payoff)
        m.flags.writeable = False
        return m

    def symmetric(self) -> bool:
        """True when the column player faces the transposed row matrix."""
        return self.col_payoff == transpose(self.row_payoff)

    def identical_payoff(self) -> bool:
        return self.row_payoff == self.col_payoff


@dataclass(frozen=True, eq=False)
class PolymatrixGame:
    """Pairwise-bilinear game with a single shared scalar payoff (see module docs)."""

    action_counts: tuple[int, ...]
    pair_matrices: Mapping[tuple[int, int], FMat]
    orientation: tuple[str, ...]
    team_partition: tuple[frozenset[int], frozenset[int]] | None = None

    def __post_init__(self):
        counts = tuple(int(c) for c in self.action_counts)
        if not counts or any(c < 1 for c in counts):
            raise DimensionError("each player needs at least one action")
        object.__setattr__(self, "action_counts", counts)
        p = len(counts)
        pairs: dict[tuple[int, int], FMat] = {}
        for (i, j), m in dict(self.pair_matrices).items():
            if not (0 <= i < p and 0 <= j < p) or i == j:
                raise DimensionError(f"bad player pair ({i}, {j})")
            fm = fmat(m)
            if shape(fm) != (counts[i], counts[j]):
                raise DimensionError(f"pair ({i}, {j}) matrix has shape {shape(fm)}")
            pairs[(i, j)] = fm
        object.__setattr__(self, "pair_matrices", pairs)
        object.__setattr__(self, "orientation", _validate_orientation(self.orientation, p))
        if self.team_partition is not None:
            t0, t1 = (frozenset(t) for t in self.team_partition)
            if t0 & t1 or (t0 | t1) != set(range(p)) or not t0 or not t1:
                raise ValueError("team partition must split the players into two non-empty sets")
            for team in (t0, t1):
                if len({self.orientation[q] for q in team}) != 1:
                    raise ValueError("players on one team must share an orientation")
            if self.orientation[min(t0)] == self.orientation[min(t1)]:
                raise ValueError("the two teams must pull the shared payoff in opposite directions")
            object.__setattr__(self, "team_partition", (t0, t1))

    @property
    def n_players(self) -> int:
        return len(self.action_counts)

    @cached_property
    def pair_floats(self) -> dict[tuple[int, int], np.ndarray]:
        out = {}
        for key, m in self.pair_matrices.items():
            fm = to_float_matrix(m)
            fm.flags.writeable = False
            out[key] = fm
        return out


@dataclass(frozen=True, eq=False)
class NormalFormGame:
    """Dense tensor game: one payoff tensor per player, rational entries."""

    payoffs: tuple[np.ndarray, ...]
    orientation: tuple[str, ...]
    team_partition: tuple[frozenset[int], frozenset[int]] | None = None

    def __post_init__(self):
        tensors = []
        for t in self.payoffs:
            arr = np.array(t, dtype=object)
            flat = np.array([to_fraction(x) for x in arr.reshape(-1)], dtype=object)
            arr = flat.reshape(arr.shape)
            arr.flags.writeable = False
            tensors.append(arr)
        if not tensors:
            raise DimensionError("need at least one player tensor")
        shp = tensors[0].shape
        if len(shp) != len(tensors):
            raise DimensionError("tensor rank must equal the number of players")
        if any(t.shape != shp for t in tensors):
            raise DimensionError("all player tensors must share one shape")
        object.__setattr__(self, "payoffs", tuple(tensors))
        p = len(tensors)
        object.__setattr__(self, "orientation", _validate_orientation(self.orientation, p))
        if self.team_partition is not None:
            t0, t1 = (frozenset(t) for t in self.team_partition)
            if t0 & t1 or (t0 | t1) != set(range(p)) or not t0 or not t1:
                raise ValueError("team partition must split the players into two non-empty sets")
            object.__setattr__(self, "team_partition", (t0, t1))

    @property
    def n_players(self) -> int:
        return len(self.payoffs)

    @property
    def action_counts(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.payoffs[0].shape)

    @cached_property
    def float_payoffs(self) -> tuple[np.ndarray, ...]:
        out = []
        for t in self.payoffs:
            f = t.astype(float)
            f.flags.writeable = False
            out.append(f)
        return tuple(out)


Game = BimatrixGame | PolymatrixGame | NormalFormGame


def _check_profile(game: Game, profile: MixedProfile) -> None:
    counts = game.action_counts
    if len(profile) != len(counts):
        raise DimensionError(f"profile has {len(profile)} strategies for {len(counts)} players")
    for s, c in zip(profile.strategies, counts):
        if len(s) != c:
            raise DimensionError(f"strategy length {len(s)} does not match {c} actions")


def _check_player(game: Game, player: int) -> None:
    if not (0 <= player < (2 if isinstance(game, BimatrixGame) else game.n_players)):
        raise DimensionError(f"no player {player}")


def evaluate_utility(game: Game, profile: MixedProfile, player: int) -> float:
    """Expected stored payoff of `player` under a mixed profile.

    For polymatrix games this is the shared bilinear sum (identical for all
    players); orientation is not applied here, only in regret.
    """
    profile = as_profile(profile)
    _check_profile(game, profile)
    _check_player(game, player)
    if isinstance(game, BimatrixGame):
        x, y = profile[0].probs, profile[1].probs
        m = game.row_float if player == 0 else game.col_float
        return float(x @ m @ y)
    if isinstance(game, PolymatrixGame):
        total = 0.0
        for (i, j), m in game.pair_floats.items():
            total += float(profile[i].probs @ m @ profile[j].probs)
        return total
    t = game.float_payoffs[player]
    for s in profile.strategies:
        t = np.tensordot(s.probs, t, axes=(0, 0))
    return float(t)


def deviation_payoffs(game: Game, profile: MixedProfile, player: int) -> np.ndarray:
    """Stored payoff of each pure action of `player` against the co-players.

    For polymatrix games the constant contribution of pairs not touching
    `player` is included, so a dot with the player's own strategy recovers
    evaluate_utility exactly.
    """
    profile = as_profile(profile)
    _check_profile(game, profile)
    _check_player(game, player)
    if isinstance(game, BimatrixGame):
        if player == 0:
            return game.row_float @ profile[1].probs
        return game.col_float.T @ profile[0].probs
    if isinstance(game, PolymatrixGame):
        vec = np.zeros(game.action_counts[player])
        const = 0.0
        for (i, j), m in game.pair_floats.items():
            if i == player:
                vec += m @ profile[j].probs
            elif j == player:
                vec += m.T @ profile[i].probs
            else:
                const += float(profile[i].probs @ m @ profile[j].probs)
        return vec + const
    letters = string.ascii_lowercase[: game.n_players]
    others = [q for q in range(game.n_players) if q != player]
    sub = letters + "," + ",".join(letters[q] for q in others) + "->" + letters[player]
    return np.einsum(sub, game.float_payoffs[player], *[profile[q].probs for q in others])


def regret(game: Game, profile: MixedProfile, player: int) -> float:
    """Best pure-deviation payoff minus current payoff, in the player's direction."""
    profile = as_profile(profile)
    dev = deviation_payoffs(game, profile, player)
    current = float(dev @ profile[player].probs)
    orientation = game.orientation[player]
    if orientation == MAXIMIZE:
        return float(dev.max() - current)
    return float(current - dev.min())


def best_response_action(game: Game, profile: MixedProfile, player: int) -> int:
    """Index of the best pure deviation; ties go to the smallest index."""
    dev = deviation_payoffs(game, profile, player)
    if game.orientation[player] == MAXIMIZE:
        return int(np.argmax(dev))
    return int(np.argmin(dev))


def signed_utility(game: Game, profile: MixedProfile, player: int) -> float:
    """Utility with the orientation folded in: maximizers get +u, minimizers -u."""
    u = evaluate_utility(game, profile, player)
    return u if game.orientation[player] == MAXIMIZE else -u


def max_team_inconsistency(game: Game, samples: int = 100, seed: int = 0) -> float:
    """Spot-check the team structure on random profiles.

    Returns the largest deviation from "signed utilities agree within a team
    and the two team values cancel" over `samples` random mixed profiles.
    """
    if game.team_partition is None:
        raise ValueError("game has no team partition")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        profile = MixedProfile(
            tuple(MixedStrategy(rng.dirichlet(np.ones(c))) for c in game.action_counts)
        )
        su = [signed_utility(game, profile, p) for p in range(game.n_players)]
        team_values = []
        for team in game.team_partition:
            vals = [su[p] for p in sorted(team)]
            worst = max(worst, max(vals) - min(vals))
            team_values.append(vals[0])
        worst = max(worst, abs(team_values[0] + team_values[1]))
    return worst


def decompose_symmetric_skew(matrix) -> tuple[FMat, FMat]:
    """Split a square rational matrix exactly into symmetric + skew parts.

    Returns (A, C) with A = (R + R^T)/2 symmetric, C = (R - R^T)/2 skew,
    and A + C == R entrywise.
    """
    r = fmat(matrix)
    n, m = shape(r)
    if n != m:
        raise DimensionError("square matrix required")
    rt = transpose(r)
    half = Fraction(1, 2)
    a = tuple(tuple((x + y) * half for x, y in zip(ra, rb)) for ra, rb in zip(r, rt))
    c = tuple(tuple((x - y) * half for x, y in zip(ra, rb)) for ra, rb in zip(r, rt))
    return a, c


def to_normal_form(game: PolymatrixGame, cap: int = 10_000_000) -> NormalFormGame:
    """Expand a polymatrix game to dense tensors (exact entries).

    Every player receives the same shared-scalar tensor; orientations and
    the team partition carry over.  Raises CapExceededError when the number
    of pure profiles exceeds `cap`.
    """
    counts = game.action_counts
    total = math.prod(counts)
    if total > cap:
        raise CapExceededError(f"{total} pure profiles exceed cap {cap}")
    u = np.empty(counts, dtype=object)
    for idx in np.ndindex(*counts):
        acc = Fraction(0)
        for (i, j), m in game.pair_matrices.items():
            acc += m[idx[i]][idx[j]]
        u[idx] = acc
    return NormalFormGame(
        payoffs=tuple(u for _ in range(game.n_players)),
        orientation=game.orientation,
        team_partition=game.team_partition,
    )
