"""Quadratic saddle problems: values, gradients, GDA maps, and gap bounds."""

from fractions import Fraction

import numpy as np
import pytest

from minmaxlab import gadgets, minmax, oracle
from minmaxlab.games import MAXIMIZE, MixedStrategy
from minmaxlab.minmax import QuadraticMinMaxProblem
from minmaxlab.rational import fmat, mat_scale


def skew_problem():
    return gadgets.quadratic_gadget(fmat([[0, -1], [1, 0]]))


def random_problem(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    m = fmat(
        [
            [Fraction(int(rng.integers(-100, 101)), 100) for _ in range(n)]
            for _ in range(n)
        ]
    )
    return gadgets.quadratic_gadget(m)


def test_value_is_antisymmetric_under_swap():
    prob = random_problem(1)
    rng = np.random.default_rng(2)
    n = len(prob.qx)
    for _ in range(10):
        x = rng.dirichlet(np.ones(n))
        y = rng.dirichlet(np.ones(n))
        assert minmax.f_value(prob, x, y) == pytest.approx(
            -minmax.f_value(prob, y, x), abs=1e-12
        )


def test_gradient_matches_finite_differences():
    prob = random_problem(3)
    n = len(prob.qx)
    rng = np.random.default_rng(4)
    x = rng.dirichlet(np.ones(n))
    y = rng.dirichlet(np.ones(n))
    gx, gy = minmax.gradient(prob, x, y)
    h = 1e-6
    for i in range(n):
        dx = np.zeros(n)
        dx[i] = h
        num = (minmax.f_value(prob, x + dx, y) - minmax.f_value(prob, x - dx, y)) / (2 * h)
        assert gx[i] == pytest.approx(num, abs=1e-5)
        num = (minmax.f_value(prob, x, y + dx) - minmax.f_value(prob, x, y - dx)) / (2 * h)
        assert gy[i] == pytest.approx(num, abs=1e-5)


def test_antisymmetry_check_passes_on_gadget_problems():
    rep = minmax.antisymmetry_check(random_problem(5), samples=40, seed=0)
    assert rep.structural
    assert rep.ok
    assert rep.max_violation <= 1e-12


def test_antisymmetry_check_flags_a_biased_problem():
    prob = gadgets.quadratic_gadget(fmat([[1, 0], [0, -1]]))
    biased = QuadraticMinMaxProblem(
        qx=prob.qx,
        qy=mat_scale(prob.qy, Fraction(2)),
        m=prob.m,
        domain=prob.domain,
        smoothness_bound=prob.smoothness_bound,
        lipschitz_bound=prob.lipschitz_bound,
    )
    rep = minmax.antisymmetry_check(biased, samples=40, seed=0)
    assert not rep.ok


def test_gda_gap_vanishes_at_the_enumerated_equilibrium():
    m = fmat([[0, -1], [1, 0]])
    prob = gadgets.quadratic_gadget(m)
    eqs = oracle.symmetric_support_enumeration(m, orientation=MAXIMIZE)
    s = MixedStrategy.from_exact(eqs[0].probs).probs
    report = minmax.gda_gap(prob, s, s)
    assert report.gap <= 1e-12
    assert report.vi_bound <= 1e-9


def test_gda_gap_positive_away_from_equilibrium():
    prob = skew_problem()
    e1 = np.array([1.0, 0.0])
    report = minmax.gda_gap(prob, e1, e1)
    assert report.gap > 0.1


def test_gda_map_stepsize_scales_the_update():
    prob = skew_problem()
    x = np.array([0.5, 0.5])
    y = np.array([0.9, 0.1])
    x_full, y_full = minmax.gda_map(prob, x, y, stepsize=1.0)
    x_half, y_half = minmax.gda_map(prob, x, y, stepsize=0.5)
    # smaller steps stay closer to the starting point
    assert np.abs(x_half.probs - x).max() <= np.abs(x_full.probs - x).max() + 1e-12
    assert np.abs(y_half.probs - y).max() <= np.abs(y_full.probs - y).max() + 1e-12


def test_check_fone_zero_at_equilibrium():
    m = fmat([[0, -1], [1, 0]])
    prob = gadgets.quadratic_gadget(m)
    eqs = oracle.symmetric_support_enumeration(m, orientation=MAXIMIZE)
    s = MixedStrategy.from_exact(eqs[0].probs).probs
    rx, ry = minmax.check_fone(prob, s, s)
    assert rx <= 1e-9 and ry <= 1e-9


def test_vi_bound_formulas():
    assert minmax.gap_to_vi_bound(0.5, 3.0) == pytest.approx(0.5 * 4.0)
    k = 4.0 * np.sqrt(3.0 + 4.0 * np.sqrt(2.0))
    assert minmax.safe_gap_to_vi_bound(0.25, 3.0, 3.0) == pytest.approx(
        k * np.sqrt(0.25)
    )
    assert minmax.gap_to_vi_bound(0.0, 7.0) == 0.0
