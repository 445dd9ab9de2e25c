"""Brute-force reference machinery: enumeration, grids, refinement, cliques."""

from fractions import Fraction

import numpy as np
import pytest

from minmaxlab import analytic, checks, oracle
from minmaxlab.cliques import Graph, payoff_from_graph
from minmaxlab.errors import CapExceededError
from minmaxlab.games import (
    MAXIMIZE,
    MINIMIZE,
    BimatrixGame,
    MixedProfile,
    MixedStrategy,
)
from minmaxlab.rational import fmat

RPS = fmat([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])


def test_rock_paper_scissors_has_only_the_uniform_equilibrium():
    eqs = oracle.symmetric_support_enumeration(RPS, orientation=MAXIMIZE)
    assert len(eqs) == 1
    assert eqs[0].probs == (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
    assert eqs[0].value == 0


def test_triangle_clique_game_equilibrium_is_uniform():
    g = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    a = payoff_from_graph(g)
    eqs = oracle.symmetric_support_enumeration(a, orientation=MAXIMIZE)
    assert len(eqs) == 1
    assert eqs[0].probs == (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
    assert eqs[0].value == Fraction(-1, 3)


def test_enumeration_respects_orientation():
    m = fmat([[2, 0], [0, 1]])
    max_values = {e.value for e in oracle.symmetric_support_enumeration(m, orientation=MAXIMIZE)}
    min_values = {e.value for e in oracle.symmetric_support_enumeration(m, orientation=MINIMIZE)}
    # both pure profiles are stable for a maximizer, neither is for a minimizer
    assert max_values == {Fraction(2), Fraction(1), Fraction(2, 3)}
    assert min_values == {Fraction(2, 3)}


def test_enumeration_cap():
    big = fmat([[0] * 13 for _ in range(13)])
    with pytest.raises(CapExceededError):
        oracle.symmetric_support_enumeration(big, cap_n=12)


def test_max_clique_on_the_pinned_graph():
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    size, members = oracle.max_clique(g)
    assert size == 4
    assert members == (0, 1, 2, 3)
    # four triangles inside the 4-clique plus the (2, 3, 4) ear
    assert len(oracle.cliques_of_size(g, 3)) == 5
    assert oracle.all_max_cliques(g) == [(0, 1, 2, 3)]


def test_max_clique_trivial_cases():
    empty = Graph.from_edges(3, [])
    assert oracle.max_clique(empty)[0] == 1
    k2 = Graph.from_edges(2, [(0, 1)])
    assert oracle.max_clique(k2) == (2, (0, 1))


def test_grid_search_finds_matching_pennies_equilibrium():
    game = BimatrixGame(
        fmat([[1, -1], [-1, 1]]), fmat([[-1, 1], [1, -1]]), (MAXIMIZE, MAXIMIZE)
    )
    hits = oracle.grid_ne_search(game, Fraction(1, 4), 1e-9)
    assert len(hits) == 1
    prof, measured = hits[0]
    assert np.allclose(prof[0].probs, 0.5)
    assert np.allclose(prof[1].probs, 0.5)
    assert measured <= 1e-9


def test_grid_search_on_the_surd_game_at_tight_eps_is_empty():
    game = analytic.irrational_game()
    hits = oracle.grid_ne_search(game, Fraction(1, 100), 1e-4)
    assert hits == []


def test_all_pure_corner_is_a_weak_approximate_equilibrium_of_the_surd_game():
    """(e1, e1, e1) has exact max regret 1/100, far below coarse thresholds.

    This is why coarse grid sweeps cannot localize the irrational equilibrium:
    spurious approximate equilibria exist at distance ~0.79 from it.
    """
    game = analytic.irrational_game()
    e1 = (Fraction(1), Fraction(0))
    assert oracle.exact_max_regret(game, (e1, e1, e1)) == Fraction(1, 100)


def test_local_refinement_reaches_small_regret():
    game = BimatrixGame(
        fmat([[1, -1], [-1, 1]]), fmat([[-1, 1], [1, -1]]), (MAXIMIZE, MAXIMIZE)
    )
    start = MixedProfile((MixedStrategy(np.array([0.9, 0.1])), MixedStrategy.uniform(2)))
    result = oracle.local_ne_refine(game, start, target_regret=5e-3)
    assert result.converged
    assert result.max_regret <= 5e-3
    assert result.certificate.satisfied


def test_local_refinement_reports_honestly_when_cut_short():
    game = BimatrixGame(
        fmat([[1, -1], [-1, 1]]), fmat([[-1, 1], [1, -1]]), (MAXIMIZE, MAXIMIZE)
    )
    start = MixedProfile((MixedStrategy.pure(2, 0), MixedStrategy.pure(2, 0)))
    result = oracle.local_ne_refine(game, start, target_regret=1e-12, max_iters=1)
    assert not result.converged
    assert result.iterations == 1
    assert result.max_regret > 1e-12
