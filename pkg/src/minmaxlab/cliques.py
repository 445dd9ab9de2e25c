"""Clique-counting games: payoff builders, uniqueness borders, and audits.

Two payoff families over a graph G on n vertices:

  * A(G): -1 on the diagonal, 0 across edges, -2 across non-edges.  Its
    symmetric equilibria track cliques: uniform play on a maximum clique of
    size k attains value -1/k and everything else is at most -1/(k-1).
  * A-bar(G, delta): delta on the diagonal, 1 across edges, 0 across
    non-edges (0 < delta < 1), the robust variant used for the
    well-supported audits.

Each family extends to an (n+1)-action "bordered" game whose extra action
pins the equilibrium set down to three canonical shapes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BoundViolationError, DimensionError, PreconditionError
from .checks import wsne_eps_exact
from .games import MAXIMIZE, BimatrixGame, MixedStrategy
from .minmax import QuadraticMinMaxProblem
from .oracle import (
    SymmetricEquilibrium,
    cliques_of_size,
    max_clique,
    symmetric_support_enumeration,
)
from .geometry import simplex_grid
from .rational import FMat, FVec, fvec, mat_vec, to_fraction, vec_dot


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: vertex count and a set of 0-indexed edges."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("graph needs at least one vertex")
        normalized = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(
            j for j in range(self.n) if j != i and self.has_edge(i, j)
        )

    def is_clique(self, vertices: Sequence[int]) -> bool:
        return all(
            self.has_edge(i, j) for i, j in itertools.combinations(vertices, 2)
        )

    def complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2


def payoff_from_graph(graph: Graph) -> FMat:
    """A(G): -1 diagonal, 0 across edges, -2 across non-edges."""
    rows = []
    for i in range(graph.n):
        row = []
        for j in range(graph.n):
            if i == j:
                row.append(Fraction(-1))
            elif graph.has_edge(i, j):
                row.append(Fraction(0))
            else:
                row.append(Fraction(-2))
        rows.append(tuple(row))
    return tuple(rows)


def payoff_from_graph_delta(graph: Graph, delta) -> FMat:
    """A-bar(G, delta): delta diagonal, 1 across edges, 0 across non-edges."""
    d = to_fraction(delta)
    if not (0 < d < 1):
        raise PreconditionError(f"delta must lie in (0, 1), got {d}")
    rows = []
    for i in range(graph.n):
        row = []
        for j in range(graph.n):
            if i == j:
                row.append(d)
            elif graph.has_edge(i, j):
                row.append(Fraction(1))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return tuple(rows)


def clique_uniform(graph: Graph, clique: Sequence[int]) -> MixedStrategy:
    """Uniform distribution over a clique's vertices (validated)."""
    vertices = tuple(sorted(set(int(v) for v in clique)))
    if len(vertices) != len(tuple(clique)):
        raise ValueError("repeated vertices in clique")
    if not vertices:
        raise ValueError("empty clique")
    if any(not (0 <= v < graph.n) for v in vertices):
        raise ValueError("clique vertex out of range")
    if not graph.is_clique(vertices):
        raise PreconditionError(f"{vertices} is not a clique")
    k = len(vertices)
    probs = [Fraction(0)] * graph.n
    for v in vertices:
        probs[v] = Fraction(1, k)
    return MixedStrategy.from_exact(probs)


@dataclass(frozen=True)
class ParameterRegime:
    """Scale parameters (n, k, delta, epsilon) for the robust constructions.

    The bounds from the source analysis hold under the strict regime
    n >= k >= 10, delta = 1/2, eps < delta (1 - delta) / (6 n^7); desk-scale
    experiments run far below it, so `strict` is an explicit flag: when set,
    the conditions are enforced at construction, and audits treat the
    closeness bounds as hard assertions rather than recorded measurements.
    """

    n: int
    k: int
    delta: Fraction
    epsilon: Fraction
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "delta", to_fraction(self.delta))
        object.__setattr__(self, "epsilon", to_fraction(self.epsilon))
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise PreconditionError("need 1 <= k <= n")
        if not (0 < self.delta < 1):
            raise PreconditionError("delta must lie in (0, 1)")
        if self.epsilon <= 0:
            raise PreconditionError("epsilon must be positive")
        if self.strict and not strict_conditions_hold(
            self.n, self.k, self.delta, self.epsilon
        ):
            raise PreconditionError(
                "strict regime requires n >= k >= 10, delta = 1/2, "
                "eps < delta (1 - delta) / (6 n^7)"
            )


def strict_conditions_hold(n: int, k: int, delta: Fraction, epsilon: Fraction) -> bool:
    return (
        n >= k >= 10
        and delta == Fraction(1, 2)
        and epsilon < delta * (1 - delta) / (6 * n**7)
    )


def unique_ne_game(graph: Graph, k: int) -> BimatrixGame:
    """Bordered identical-payoff game whose equilibria witness k-cliques.

    Appends one action to A(G) paying r = -(2k - 1) / (2 (k - 1) k) against
    every original action and V = -1/k against itself; r sits strictly
    between -1/(k-1) and -1/k, so mixing onto the border is attractive
    exactly against sub-clique play.
    """
    if k < 2:
        raise PreconditionError("border construction needs k >= 2")
    if k > graph.n:
        raise PreconditionError("k cannot exceed the vertex count")
    a = payoff_from_graph(graph)
    r = Fraction(-(2 * k - 1), 2 * (k - 1) * k)
    v = Fraction(-1, k)
    return _bordered_game(a, r, v)


def robust_unique_ne_game(graph: Graph, regime: ParameterRegime) -> BimatrixGame:
    """Bordered A-bar game with the same equilibrium shapes, robustly.

    Border payoff r = V - delta / (n^2 k^4) + 3 eps against original
    actions, V = 1 - 1/k + delta/k against itself.
    """
    if regime.n != graph.n:
        raise DimensionError("regime n does not match the graph")
    n, k = regime.n, regime.k
    a = payoff_from_graph_delta(graph, regime.delta)
    v = 1 - Fraction(1, k) + regime.delta / k
    r = v - regime.delta / (n**2 * k**4) + 3 * regime.epsilon
    return _bordered_game(a, r, v)


def _bordered_game(a: FMat, r: Fraction, v: Fraction) -> BimatrixGame:
    n = len(a)
    rows = [tuple(list(a[i]) + [r]) for i in range(n)]
    rows.append(tuple([r] * n + [v]))
    b = tuple(rows)
    return BimatrixGame(b, b, orientation=(MAXIMIZE, MAXIMIZE))


# ---------------------------------------------------------------------------
# audits


@dataclass(frozen=True)
class NashGapReport:
    """Exact symmetric equilibrium census of A(G)."""

    k: int
    max_cliques: tuple[tuple[int, ...], ...]
    equilibria: tuple[SymmetricEquilibrium, ...]
    max_value: Fraction
    clique_form_count: int
    best_nonclique_value: Fraction | None
    nonclique_bound: Fraction | None


def _is_clique_uniform(graph: Graph, probs: FVec) -> bool:
    """True when probs is the uniform distribution over some clique of G."""
    support = tuple(i for i, p in enumerate(probs) if p > 0)
    m = len(support)
    if any(probs[i] != Fraction(1, m) for i in support):
        return False
    return graph.is_clique(support)


def nashgap_audit(graph: Graph) -> NashGapReport:
    """Enumerate all symmetric equilibria of A(G) and check the value gap.

    Asserts that uniform play on every maximum clique is an exact
    equilibrium of value -1/k, that the best symmetric equilibrium value is
    exactly -1/k, and (for k >= 2) that every equilibrium that is not the
    uniform distribution over some clique is worth at most -1/(k-1).

    Caution: the last assertion fails on many graphs.  Symmetric equilibria
    only require indifference across the support, not local optimality, and
    indifference points with a compromised support can sit strictly between
    -1/(k-1) and -1/k; the smallest example is the four-cycle-with-chord
    graph (complete on four vertices minus one edge), where
    (1/8, 1/8, 3/8, 3/8) is an exact symmetric equilibrium of value -3/8 >
    -1/2.  The audit reports such profiles in its error message; the
    maximum-value and clique-uniform assertions are always sound.
    """
    a = payoff_from_graph(graph)
    k, _ = max_clique(graph)
    maxima = tuple(cliques_of_size(graph, k))
    eqs = symmetric_support_enumeration(a, orientation=MAXIMIZE)
    by_probs = {eq.probs: eq for eq in eqs}
    for clique in maxima:
        probs = clique_uniform(graph, clique).exact
        eq = by_probs.get(probs)
        if eq is None:
            raise BoundViolationError(
                f"uniform play on maximum clique {clique} is not an equilibrium"
            )
        if eq.value != Fraction(-1, k):
            raise BoundViolationError(
                f"clique {clique} equilibrium value {eq.value} != -1/{k}"
            )
    max_value = max(eq.value for eq in eqs)
    if max_value != Fraction(-1, k):
        raise BoundViolationError(
            f"best symmetric equilibrium value {max_value} != -1/{k}"
        )
    clique_form = 0
    best_nonclique = None
    bound = Fraction(-1, k - 1) if k >= 2 else None
    offenders = []
    for eq in eqs:
        if _is_clique_uniform(graph, eq.probs):
            clique_form += 1
            continue
        if best_nonclique is None or eq.value > best_nonclique:
            best_nonclique = eq.value
        if bound is not None and eq.value > bound + Fraction(1, 10**9):
            offenders.append(eq)
    if offenders:
        listing = "; ".join(
            f"{eq.probs} at value {eq.value}" for eq in offenders[:4]
        )
        raise BoundViolationError(
            f"{len(offenders)} non-clique-form symmetric equilibria exceed "
            f"-1/(k-1) = {bound}: {listing}"
        )
    return NashGapReport(
        k=k,
        max_cliques=maxima,
        equilibria=tuple(eqs),
        max_value=max_value,
        clique_form_count=clique_form,
        best_nonclique_value=best_nonclique,
        nonclique_bound=bound,
    )


@dataclass(frozen=True)
class WsneCandidateRecord:
    probs: FVec
    wsne_eps: Fraction
    value: Fraction
    clique_supported: bool


@dataclass(frozen=True)
class WsneValueReport:
    k: int
    candidates: int
    min_clique_value: Fraction | None
    max_other_value: Fraction | None
    records: tuple[WsneCandidateRecord, ...]


def wsne_value_audit(
    graph: Graph,
    regime: ParameterRegime,
    resolution=Fraction(1, 6),
) -> WsneValueReport:
    """Check the two well-supported value bounds on A-bar(G, delta), exactly.

    Candidates are every simplex grid point at `resolution`, every exact
    symmetric equilibrium, and rational perturbations of those equilibria.
    For each candidate x with measured well-supported slack e (the smallest
    e for which x is an e-WSNE):

      * support inside a maximum clique:  value >= 1 - 1/k + delta/k
        - ((k - delta)/(1 - delta)) e, and x is within that same factor of
        the uniform clique profile in sup norm;
      * support not inside any maximum clique:  value <= 1 - 1/k + delta/k
        - 2 delta / (n^2 k^4) + 2 e.

    All comparisons are exact rational arithmetic; a violation raises.
    """
    if regime.n != graph.n:
        raise DimensionError("regime n does not match the graph")
    n, k = graph.n, regime.k
    true_k, _ = max_clique(graph)
    if true_k != k:
        raise PreconditionError(f"regime says k = {k} but the maximum clique has {true_k}")
    delta = regime.delta
    a = payoff_from_graph_delta(graph, delta)
    maxima = cliques_of_size(graph, k)
    clique_sets = [frozenset(c) for c in maxima]
    uniforms = {
        frozenset(c): clique_uniform(graph, c).exact for c in maxima
    }

    candidates: dict[FVec, None] = {}
    for point in simplex_grid(n, resolution):
        candidates.setdefault(point, None)
    eqs = symmetric_support_enumeration(a, orientation=MAXIMIZE)
    uniform = tuple(Fraction(1, n) for _ in range(n))
    for eq in eqs:
        candidates.setdefault(eq.probs, None)
        for weight in (Fraction(1, 100), Fraction(1, 10)):
            mixed = tuple(
                (1 - weight) * p + weight * q for p, q in zip(eq.probs, uniform)
            )
            candidates.setdefault(mixed, None)
            for v in range(n):
                toward = tuple(
                    (1 - weight) * p + (weight if i == v else 0)
                    for i, p in enumerate(eq.probs)
                )
                candidates.setdefault(toward, None)

    base = 1 - Fraction(1, k) + delta / k
    factor = Fraction(k - delta, 1 - delta) if delta != 1 else None
    other_cap_const = base - 2 * delta / (n**2 * k**4)
    records = []
    min_clique_value = None
    max_other_value = None
    for probs in candidates:
        eps_hat = wsne_eps_exact(a, probs, MAXIMIZE)
        value = vec_dot(probs, mat_vec(a, probs))
        support = frozenset(i for i, p in enumerate(probs) if p > 0)
        containing = [c for c in clique_sets if support <= c]
        clique_supported = bool(containing)
        if clique_supported:
            lower = base - factor * eps_hat
            if value < lower:
                raise BoundViolationError(
                    f"clique-supported candidate {probs} has value {value} < {lower}"
                )
            dist_bound = factor * eps_hat
            best_dist = min(
                max(abs(p - q) for p, q in zip(probs, uniforms[c]))
                for c in containing
            )
            if best_dist > dist_bound:
                raise BoundViolationError(
                    f"clique-supported candidate {probs} strays {best_dist} "
                    f"> {dist_bound} from the uniform clique profile"
                )
            if min_clique_value is None or value < min_clique_value:
                min_clique_value = value
        else:
            upper = other_cap_const + 2 * eps_hat
            if value > upper:
                raise BoundViolationError(
                    f"non-clique candidate {probs} has value {value} > {upper}"
                )
            if max_other_value is None or value > max_other_value:
                max_other_value = value
        records.append(
            WsneCandidateRecord(probs, eps_hat, value, clique_supported)
        )
    return WsneValueReport(
        k=k,
        candidates=len(records),
        min_clique_value=min_clique_value,
        max_other_value=max_other_value,
        records=tuple(records),
    )


def find_nonadjacent_cover(graph: Graph, k: int) -> tuple[int, ...]:
    """A set S of at least n - k + 1 vertices, each with a non-neighbor in S.

    Greedily removes any vertex adjacent to all remaining ones.  Each
    removed vertex is adjacent to everything removed later and to the final
    set, so more than k - 1 removals would assemble a clique larger than k;
    the survivor set therefore has size >= n - k + 1 and by stability every
    survivor keeps a non-neighbor.  Complete graphs admit no such set.
    """
    if graph.complete():
        raise PreconditionError("cover impossible: the graph is complete")
    true_k, _ = max_clique(graph)
    if k != true_k:
        raise PreconditionError(f"k = {k} but the maximum clique has size {true_k}")
    survivors = set(range(graph.n))
    changed = True
    while changed:
        changed = False
        for v in sorted(survivors):
            if all(graph.has_edge(v, w) for w in survivors if w != v):
                survivors.discard(v)
                changed = True
                break
    cover = tuple(sorted(survivors))
    if len(cover) < graph.n - k + 1:
        raise BoundViolationError(
            f"cover of size {len(cover)} is smaller than n - k + 1"
        )
    for v in cover:
        if all(graph.has_edge(v, w) for w in cover if w != v):
            raise BoundViolationError(f"vertex {v} has no non-neighbor in the cover")
    return cover


# ---------------------------------------------------------------------------
# classification of bordered-game profiles


TRIVIAL_LAST = "TrivialLast"
CLIQUE_UNIFORM = "CliqueUniform"
HALF_MIX = "HalfMix"
OTHER = "Other"
_FORM_ORDER = {TRIVIAL_LAST: 0, CLIQUE_UNIFORM: 1, HALF_MIX: 2}


@dataclass(frozen=True)
class ProfileClassification:
    """Nearest canonical shape for a bordered-game profile.

    Iterates as (form, distance) so callers can unpack the pair directly.
    """

    form: str
    clique: tuple[int, ...] | None
    distance: float
    bound: float | None
    enforced: bool

    def __iter__(self):
        yield self.form
        yield self.distance


def graph_from_bordered_game(game: BimatrixGame) -> Graph:
    """Recover the graph from a bordered payoff matrix.

    Both bordered families are recognized by their diagonal: the exact one
    has -1 on the graph block's diagonal with edges at 0 and non-edges at
    -2; the robust one has delta in (0, 1) on the diagonal with edges at 1
    and non-edges at 0.  The last action is the border.
    """
    if not game.identical_payoff():
        raise PreconditionError("bordered games carry identical payoffs")
    b = game.row_payoff
    n = len(b) - 1
    if n < 1:
        raise DimensionError("bordered game needs at least two actions")
    diag = {b[i][i] for i in range(n)}
    if len(diag) != 1:
        raise PreconditionError("graph block has a non-constant diagonal")
    d = next(iter(diag))
    if d == -1:
        edge_value = Fraction(0)
    elif 0 < d < 1:
        edge_value = Fraction(1)
    else:
        raise PreconditionError(f"unrecognized diagonal value {d}")
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if b[i][j] == edge_value
    ]
    return Graph.from_edges(n, edges)


def _canonical_forms(graph: Graph, k: int) -> list[tuple[str, tuple[int, ...] | None, np.ndarray]]:
    n = graph.n
    forms: list[tuple[str, tuple[int, ...] | None, np.ndarray]] = []
    trivial = np.zeros(n + 1)
    trivial[n] = 1.0
    forms.append((TRIVIAL_LAST, None, trivial))
    for clique in cliques_of_size(graph, k):
        cu = np.zeros(n + 1)
        for v in clique:
            cu[v] = 1.0 / k
        forms.append((CLIQUE_UNIFORM, clique, cu))
        hm = np.zeros(n + 1)
        hm[n] = 0.5
        for v in clique:
            hm[v] = 0.5 / k
        forms.append((HALF_MIX, clique, hm))
    return forms


def classify_symmetric_profile(
    game: BimatrixGame,
    k: int,
    regime: ParameterRegime,
    x_hat: MixedStrategy,
    eps: float,
    well_supported: bool = False,
) -> ProfileClassification:
    """Snap a bordered-game profile to the nearest canonical shape.

    The shapes are TrivialLast (all mass on the border action),
    CliqueUniform (uniform on a k-clique), and HalfMix (half border, half
    clique-uniform), with the k-cliques enumerated from the graph encoded
    in the payoff block.  Distance is sup-norm; ties prefer the smaller
    distance, then the form order above, then the lexicographically
    smallest clique.  A profile farther than the stability bound from
    every shape classifies as Other — the bound being 2 n^6 eps for a
    well-supported input and n^6 sqrt(eps) for a plain approximate
    equilibrium.  Under the strict regime that situation raises instead;
    at desk scale it is merely recorded, and with eps = 0 exact equilibria
    away from all three shapes (which many graphs do have) come out as
    Other.
    """
    graph = graph_from_bordered_game(game)
    probs = x_hat.probs
    if probs.size != graph.n + 1:
        raise DimensionError("profile must include the border action")
    best: tuple[tuple, tuple[int, ...] | None, str, float] | None = None
    for form, clique, vec in _canonical_forms(graph, k):
        dist = float(np.abs(probs - vec).max())
        key = (dist, _FORM_ORDER[form], clique if clique is not None else ())
        if best is None or key < best[0]:
            best = (key, clique, form, dist)
    _, clique, form, dist = best
    n = graph.n
    bound = 2.0 * n**6 * eps if well_supported else n**6 * math.sqrt(eps)
    if dist > bound + 1e-9:
        if regime.strict:
            raise BoundViolationError(
                f"profile sits {dist} from every canonical shape, above {bound}"
            )
        form, clique = OTHER, None
    return ProfileClassification(
        form=form,
        clique=clique,
        distance=dist,
        bound=bound,
        enforced=regime.strict,
    )


def nonsym_instance(graph: Graph, regime: ParameterRegime) -> QuadraticMinMaxProblem:
    """Decoupled min-max form of the robust bordered game.

    f(x, y) = y^T B y - x^T B x with B the robust bordered payoff, i.e.
    Qx = Qy = 2B and no cross term; first-order points of f recover
    symmetric approximate equilibria of (B, B) on each block.
    """
    game = robust_unique_ne_game(graph, regime)
    b = game.row_payoff
    two_b = tuple(tuple(2 * x for x in row) for row in b)
    zero = tuple(tuple(Fraction(0) for _ in row) for row in b)
    return QuadraticMinMaxProblem(qx=two_b, qy=two_b, m=zero)
