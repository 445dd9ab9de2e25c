"""Command-line surface: build gadgets, check certificates, audit lemma bounds.

Every command emits a JSON report (stdout or --report PATH) whose exit code
matches the process exit: 0 when all checked bounds hold, 1 when a bound or
lemma is violated, 2 on malformed or out-of-scope input.  Artifact outputs
(games, profiles, trajectories) go to -o.  Vertices in command output are
1-indexed, matching the graph file format.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import fileio
from .analytic import (
    irrational_equilibrium,
    irrational_game,
    solve_2x2,
    verify_irrational_equilibrium,
)
from .checks import epsilon_ne_report, mass_bound_audit, wsne_eps_exact, wsne_report
from .cliques import (
    OTHER,
    ParameterRegime,
    classify_symmetric_profile,
    graph_from_bordered_game,
    nashgap_audit,
    payoff_from_graph,
    payoff_from_graph_delta,
    robust_unique_ne_game,
    unique_ne_game,
    wsne_value_audit,
)
from .dynamics import (
    ALTERNATING_GDA,
    EXTRAGRADIENT,
    GDA,
    OMWU,
    OPTIMISTIC_GDA,
    DynamicsConfig,
)
from .dynamics import run as run_dynamics
from .errors import (
    BoundViolationError,
    CapExceededError,
    DegenerateGameError,
    DimensionError,
    FormatError,
    PreconditionError,
    UnsupportedDomainError,
)
from .fileio import BoundRecord, make_report, write_report
from .gadgets import (
    coupled_gadget,
    coupling_width,
    gadget_structure_audit,
    median_backmap,
    quadratic_gadget,
    symmetric_backmap,
    team3v3_audit_and_backmap,
    team3v3_gadget,
    team_backmap,
    team_gadget,
)
from .games import (
    MAXIMIZE,
    MINIMIZE,
    BimatrixGame,
    MixedProfile,
    MixedStrategy,
    NormalFormGame,
)
from .minmax import QuadraticMinMaxProblem, check_fone, gda_gap
from .oracle import (
    grid_ne_search,
    local_ne_refine,
    max_clique,
    symmetric_support_enumeration,
)
from .rational import FMat, fmat, mat_vec, to_fraction, transpose, vec_dot

ALGO_NAMES = {
    "gda": GDA,
    "eg": EXTRAGRADIENT,
    "ogda": OPTIMISTIC_GDA,
    "omwu": OMWU,
    "alt-gda": ALTERNATING_GDA,
}

SLACK = 1e-9


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"expected a rational like 3/4 or 0.05, got {text!r}") from None


def _load_game(path: str, inputs: dict, label: str = "game"):
    game = fileio.load_game(path)
    inputs[label] = fileio.game_to_dict(game)
    return game


def _load_graph(path: str, inputs: dict, label: str = "graph"):
    graph = fileio.load_graph(path)
    inputs[label] = fileio.graph_to_dict(graph)
    return graph


def _load_profile(path: str, inputs: dict, label: str = "profile") -> MixedProfile:
    profile = fileio.load_profile(path)
    inputs[label] = fileio.profile_to_dict(profile)
    return profile


def _require_problem(game) -> QuadraticMinMaxProblem:
    if not isinstance(game, QuadraticMinMaxProblem):
        raise FormatError("this command needs a quadratic problem file")
    return game


def _tensor_matrix(game) -> FMat:
    """Shared payoff tensor of a two-player game file, as an exact matrix."""
    if not isinstance(game, NormalFormGame) or game.n_players != 2:
        raise FormatError("this command needs a two-player tensor game file")
    return fmat(game.payoffs[0].tolist())


def _as_bimatrix(game) -> BimatrixGame:
    m = _tensor_matrix(game)
    return BimatrixGame(m, m, game.orientation)


def _single_strategy(profile: MixedProfile) -> MixedStrategy:
    """One strategy from a 1- or 2-entry profile, requiring agreement."""
    if len(profile) == 1:
        return profile[0]
    if len(profile) == 2:
        if profile[0].probs.shape == profile[1].probs.shape and np.allclose(
            profile[0].probs, profile[1].probs, atol=1e-12
        ):
            return profile[0] if profile[0].exact is not None else profile[1]
        raise FormatError("the two strategies of a symmetric profile must agree")
    raise FormatError("expected a profile with one strategy (or two identical ones)")


def _pair(profile: MixedProfile) -> tuple[MixedStrategy, MixedStrategy]:
    if len(profile) != 2:
        raise FormatError("expected a two-strategy profile")
    return profile[0], profile[1]


def _strategy_obj(strategy: MixedStrategy) -> list:
    if strategy.exact is not None:
        return [str(p) for p in strategy.exact]
    return [float(p) for p in strategy.probs]


def _emit(args, report: dict) -> int:
    write_report(report, args.report)
    return report["exit_code"]


# ---------------------------------------------------------------------------
# gadget


def cmd_gadget_team(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    eps = _frac(args.eps)
    inputs["eps"] = str(eps)
    instance = team_gadget(matrix, eps)
    if args.output:
        fileio.save_game(instance.game, args.output)
    data = {
        "n": instance.n,
        "players": 3,
        "anchor_action": instance.anchor_action + 1,
        "penalty_scale": str(instance.penalty_scale),
        "output": args.output,
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_gadget_quadratic(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    problem = quadratic_gadget(matrix)
    if args.output:
        fileio.save_game(problem, args.output)
    data = {
        "n": problem.n_x,
        "smoothness_bound": problem.smoothness_bound,
        "lipschitz_bound": problem.lipschitz_bound,
        "output": args.output,
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_gadget_coupled(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    n = len(matrix)
    if args.delta is not None:
        delta = float(_frac(args.delta))
    elif args.eps is not None:
        delta = coupling_width(float(_frac(args.eps)), n)
    else:
        raise FormatError("gadget coupled needs --delta or --eps")
    inputs["delta"] = repr(delta)
    problem = coupled_gadget(matrix, delta)
    if args.output:
        fileio.save_game(problem, args.output)
    data = {"n": n, "delta": delta, "output": args.output}
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_gadget_team3v3(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    eps = _frac(args.eps)
    inputs["eps"] = str(eps)
    instance = team3v3_gadget(matrix, eps)
    if args.output:
        fileio.save_game(instance.game, args.output)
    data = {
        "n": instance.n,
        "players": 6,
        "shift": str(instance.shift),
        "penalty_scale": str(instance.penalty_scale),
        "output": args.output,
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def _default_regime(graph, k, delta, eps, strict=False) -> ParameterRegime:
    n = graph.n
    if k is None:
        k, _ = max_clique(graph)
    delta = _frac(delta) if delta is not None else Fraction(1, 2)
    if eps is not None:
        eps = _frac(eps)
    else:
        eps = delta * (1 - delta) / (12 * n**7)
    return ParameterRegime(n=n, k=k, delta=delta, epsilon=eps, strict=strict)


def cmd_gadget_clique(args) -> int:
    inputs: dict = {}
    graph = _load_graph(args.graph, inputs)
    inputs["variant"] = args.variant
    data: dict = {"variant": args.variant}
    if args.variant == "base":
        matrix = payoff_from_graph(graph)
        game = BimatrixGame(matrix, matrix, (MAXIMIZE, MAXIMIZE))
    elif args.variant == "delta":
        delta = _frac(args.delta) if args.delta is not None else Fraction(1, 2)
        inputs["delta"] = str(delta)
        data["delta"] = str(delta)
        matrix = payoff_from_graph_delta(graph, delta)
        game = BimatrixGame(matrix, matrix, (MAXIMIZE, MAXIMIZE))
    elif args.variant == "unique":
        k = args.k if args.k is not None else max_clique(graph)[0]
        inputs["k"] = k
        data["k"] = k
        game = unique_ne_game(graph, k)
    else:  # robust
        regime = _default_regime(graph, args.k, args.delta, args.eps)
        inputs["regime"] = {
            "n": regime.n,
            "k": regime.k,
            "delta": str(regime.delta),
            "eps": str(regime.epsilon),
        }
        data["regime"] = inputs["regime"]
        game = robust_unique_ne_game(graph, regime)
    if args.output:
        fileio.save_game(game, args.output)
    data["actions"] = game.action_counts[0]
    data["output"] = args.output
    return _emit(args, make_report(args.command, inputs, [], 0, data))


# ---------------------------------------------------------------------------
# check


def cmd_check_ne(args) -> int:
    inputs: dict = {}
    game = _load_game(args.game, inputs)
    profile = _load_profile(args.profile, inputs)
    eps = float(_frac(args.eps)) if args.eps is not None else None
    inputs["eps"] = repr(eps)
    cert = epsilon_ne_report(game, profile, eps if eps is not None else 0.0)
    measured = max(cert.regrets)
    satisfied = cert.satisfied if eps is not None else True
    bounds = [BoundRecord("epsilon_ne", eps, measured, satisfied)]
    data = {
        "regrets": list(cert.regrets),
        "witnesses": [list(w) for w in cert.witnesses],
    }
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_check_wsne(args) -> int:
    inputs: dict = {}
    game = _as_bimatrix(_load_game(args.game, inputs))
    profile = _load_profile(args.profile, inputs)
    x = _single_strategy(profile)
    eps = float(_frac(args.eps)) if args.eps is not None else None
    inputs["eps"] = repr(eps)
    data: dict = {}
    if x.exact is not None:
        exact = wsne_eps_exact(game.row_payoff, x.exact, game.orientation[0])
        measured = float(exact)
        data["measured_exact"] = str(exact)
    else:
        measured = wsne_report(game, x)
    satisfied = measured <= eps + 1e-12 if eps is not None else True
    bounds = [BoundRecord("wsne", eps, measured, satisfied)]
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_check_fone(args) -> int:
    inputs: dict = {}
    problem = _require_problem(_load_game(args.game, inputs))
    x, y = _pair(_load_profile(args.profile, inputs))
    eps = float(_frac(args.eps)) if args.eps is not None else None
    inputs["eps"] = repr(eps)
    eps_x, eps_y = check_fone(problem, x, y)
    measured = max(eps_x, eps_y)
    satisfied = measured <= eps + SLACK if eps is not None else True
    bounds = [BoundRecord("fone", eps, measured, satisfied)]
    data = {"eps_x": eps_x, "eps_y": eps_y}
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_check_gap(args) -> int:
    inputs: dict = {}
    problem = _require_problem(_load_game(args.game, inputs))
    x, y = _pair(_load_profile(args.profile, inputs))
    eps = float(_frac(args.eps)) if args.eps is not None else None
    stepsize = float(_frac(args.stepsize))
    inputs["eps"] = repr(eps)
    inputs["stepsize"] = repr(stepsize)
    report = gda_gap(problem, x, y, stepsize=stepsize)
    satisfied = report.gap <= eps + SLACK if eps is not None else True
    bounds = [BoundRecord("gda_gap", eps, report.gap, satisfied)]
    data: dict = {"gap": report.gap, "stepsize": stepsize}
    if report.vi_bound is not None:
        bounds.append(BoundRecord(report.bound_name, report.vi_bound, report.gap, True))
        data["vi_bound"] = report.vi_bound
        data["vi_bound_name"] = report.bound_name
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


# ---------------------------------------------------------------------------
# backmap


def cmd_backmap_team(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    profile = _load_profile(args.profile, inputs)
    eps = _frac(args.eps)
    inputs["eps"] = str(eps)
    instance = team_gadget(matrix, eps)
    strategy, bound = team_backmap(instance, profile, float(eps) ** 2)
    target = NormalFormGame(
        payoffs=(instance.a, instance.a), orientation=(MINIMIZE, MINIMIZE)
    )
    cert = epsilon_ne_report(target, MixedProfile((strategy, strategy)), bound)
    measured = max(cert.regrets)
    satisfied = measured <= bound + SLACK
    if args.output:
        fileio.save_profile(MixedProfile((strategy,)), args.output)
    bounds = [BoundRecord("team_backmap", bound, measured, satisfied)]
    data = {"strategy": _strategy_obj(strategy), "output": args.output}
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def _max_vi_residual(matrix: FMat, strategy: MixedStrategy) -> float:
    """Largest gain of a deviation from x* when maximizing <x, M x*>."""
    if strategy.exact is not None:
        payoffs = mat_vec(matrix, strategy.exact)
        value = vec_dot(strategy.exact, payoffs)
        return float(max(payoffs) - value)
    m = np.array([[float(e) for e in row] for row in matrix])
    payoffs = m @ strategy.probs
    return float(payoffs.max() - strategy.probs @ payoffs)


def cmd_backmap_symmetric(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    profile = _load_profile(args.profile, inputs)
    x_star = _single_strategy(profile)
    gap = float(_frac(args.gap))
    inputs["gap"] = repr(gap)
    bound = symmetric_backmap(matrix, x_star, gap)
    measured = _max_vi_residual(matrix, x_star)
    satisfied = measured <= bound + SLACK
    if args.output:
        fileio.save_profile(MixedProfile((x_star,)), args.output)
    bounds = [BoundRecord("symmetric_vi", bound, measured, satisfied)]
    data = {"strategy": _strategy_obj(x_star), "output": args.output}
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_backmap_median(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    x_star, y_star = _pair(_load_profile(args.profile, inputs))
    gap = float(_frac(args.gap))
    delta = float(_frac(args.delta))
    inputs["gap"] = repr(gap)
    inputs["delta"] = repr(delta)
    median, bound = median_backmap(matrix, x_star, y_star, gap, delta)
    target = BimatrixGame(matrix, transpose(matrix), (MAXIMIZE, MAXIMIZE))
    cert = epsilon_ne_report(target, MixedProfile((median, median)), bound)
    measured = max(cert.regrets)
    satisfied = measured <= bound + SLACK
    if args.output:
        fileio.save_profile(MixedProfile((median,)), args.output)
    bounds = [BoundRecord("median_regret", bound, measured, satisfied)]
    data = {"strategy": _strategy_obj(median), "output": args.output}
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_backmap_team3v3(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    profile = _load_profile(args.profile, inputs)
    eps = _frac(args.eps)
    inputs["eps"] = str(eps)
    instance = team3v3_gadget(matrix, eps)
    report = team3v3_audit_and_backmap(instance, profile, float(eps))
    target = BimatrixGame(matrix, transpose(matrix), (MAXIMIZE, MAXIMIZE))
    cert = epsilon_ne_report(
        target, MixedProfile((report.strategy, report.strategy)), report.bound
    )
    measured = max(cert.regrets)
    satisfied = measured <= report.bound + SLACK
    if args.output:
        fileio.save_profile(MixedProfile((report.strategy,)), args.output)
    bounds = [
        BoundRecord("pair_gap", report.pair_bound, report.max_pair_gap,
                    report.max_pair_gap <= report.pair_bound + SLACK),
        BoundRecord("mirror_mass", report.mirror_bound, report.max_mirror_mass,
                    report.max_mirror_mass <= report.mirror_bound + SLACK),
        BoundRecord("team3v3_backmap", report.bound, measured, satisfied),
    ]
    data = {"strategy": _strategy_obj(report.strategy), "output": args.output}
    code = 0 if all(b.satisfied for b in bounds) else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


# ---------------------------------------------------------------------------
# audit


def cmd_audit_gadget_structure(args) -> int:
    inputs: dict = {}
    matrix = _tensor_matrix(_load_game(args.game, inputs))
    profile = _load_profile(args.profile, inputs)
    eps = _frac(args.eps)
    inputs["eps"] = str(eps)
    instance = team_gadget(matrix, eps)
    try:
        report = gadget_structure_audit(instance, profile, float(eps))
        bounds = [
            BoundRecord("pair_gap", report.pair_bound, report.max_pair_gap, True),
            BoundRecord("mirror_mass", report.mirror_bound, report.max_mirror_mass, True),
        ]
        code = 0
    except BoundViolationError as exc:
        e = float(eps)
        x, y, z = (profile[p].probs for p in range(3))
        pair = float(np.abs(x - y).max())
        mirror = float(z[: 2 * instance.n].max())
        bounds = [
            BoundRecord("pair_gap", 2 * e, pair, pair <= 2 * e + SLACK),
            BoundRecord("mirror_mass", 9 * e, mirror, mirror <= 9 * e + SLACK),
        ]
        code = 1
        print(f"violation: {exc}", file=sys.stderr)
    return _emit(args, make_report(args.command, inputs, bounds, code))


def cmd_audit_nashgap(args) -> int:
    inputs: dict = {}
    graph = _load_graph(args.graph, inputs)
    try:
        report = nashgap_audit(graph)
    except BoundViolationError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        bounds = [BoundRecord("nashgap_gap", None, None, False)]
        data = {"detail": str(exc)}
        return _emit(args, make_report(args.command, inputs, bounds, 1, data))
    k = report.k
    bounds = [
        BoundRecord(
            "nashgap_max", float(Fraction(-1, k)), float(report.max_value),
            report.max_value == Fraction(-1, k),
        )
    ]
    if report.nonclique_bound is not None:
        measured = (
            float(report.best_nonclique_value)
            if report.best_nonclique_value is not None
            else None
        )
        ok = (
            report.best_nonclique_value is None
            or report.best_nonclique_value <= report.nonclique_bound
        )
        bounds.append(
            BoundRecord("nashgap_gap", float(report.nonclique_bound), measured, ok)
        )
    data = {
        "k": k,
        "max_value": str(report.max_value),
        "max_cliques": [[v + 1 for v in c] for c in report.max_cliques],
        "clique_form_count": report.clique_form_count,
        "equilibria": [
            {
                "probs": [str(p) for p in eq.probs],
                "value": str(eq.value),
                "support": [v + 1 for v in eq.support],
            }
            for eq in report.equilibria
        ],
    }
    code = 0 if all(b.satisfied for b in bounds) else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_audit_wsne_value(args) -> int:
    inputs: dict = {}
    graph = _load_graph(args.graph, inputs)
    regime = _default_regime(graph, args.k, args.delta, args.eps)
    resolution = _frac(args.resolution)
    inputs["regime"] = {
        "n": regime.n, "k": regime.k,
        "delta": str(regime.delta), "eps": str(regime.epsilon),
    }
    inputs["resolution"] = str(resolution)
    try:
        report = wsne_value_audit(graph, regime, resolution)
    except BoundViolationError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        bounds = [BoundRecord("wsne_clique_value", None, None, False)]
        return _emit(
            args, make_report(args.command, inputs, bounds, 1, {"detail": str(exc)})
        )
    base = 1 - Fraction(1, regime.k) + regime.delta / regime.k
    bounds = [
        BoundRecord(
            "wsne_clique_value", float(base),
            float(report.min_clique_value) if report.min_clique_value is not None else None,
            True,
        ),
        BoundRecord(
            "wsne_nonclique_value",
            float(base - 2 * regime.delta / (regime.n**2 * regime.k**4)),
            float(report.max_other_value) if report.max_other_value is not None else None,
            True,
        ),
        BoundRecord("wsne_closeness", None, None, True),
    ]
    data = {"k": report.k, "candidates": report.candidates}
    return _emit(args, make_report(args.command, inputs, bounds, 0, data))


def cmd_audit_classify(args) -> int:
    inputs: dict = {}
    game = _as_bimatrix(_load_game(args.game, inputs))
    profile = _load_profile(args.profile, inputs)
    x_hat = _single_strategy(profile)
    eps = float(_frac(args.eps)) if args.eps is not None else 0.0
    inputs["eps"] = repr(eps)
    inputs["k"] = args.k
    inputs["well_supported"] = bool(args.wsne)
    graph = graph_from_bordered_game(game)
    delta = game.row_payoff[0][0]
    regime = ParameterRegime(
        n=graph.n,
        k=args.k,
        delta=delta if 0 < delta < 1 else Fraction(1, 2),
        epsilon=_frac(args.eps) if args.eps else Fraction(1, 10**9),
        strict=False,
    )
    result = classify_symmetric_profile(
        game, args.k, regime, x_hat, eps, well_supported=bool(args.wsne)
    )
    satisfied = result.form != OTHER
    bounds = [BoundRecord("classify_distance", result.bound, result.distance, satisfied)]
    data = {
        "form": result.form,
        "clique": [v + 1 for v in result.clique] if result.clique is not None else None,
        "distance": result.distance,
    }
    code = 0 if satisfied else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_audit_mass_bound(args) -> int:
    inputs: dict = {}
    game = _load_game(args.game, inputs)
    profile = _load_profile(args.profile, inputs)
    eps = float(_frac(args.eps))
    inputs["eps"] = repr(eps)
    violations = mass_bound_audit(game, profile, eps)
    worst = max((v.mass - v.bound for v in violations), default=0.0)
    bounds = [BoundRecord("mass_bound", 0.0, worst, not violations)]
    data = {
        "violations": [
            {"player": v.player, "action": v.action, "mass": v.mass,
             "gap": v.gap, "bound": v.bound}
            for v in violations
        ]
    }
    code = 0 if not violations else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


# ---------------------------------------------------------------------------
# solve


def cmd_solve_enumerate(args) -> int:
    inputs: dict = {}
    game = _load_game(args.game, inputs)
    matrix = _tensor_matrix(game)
    if game.orientation[0] != game.orientation[1]:
        raise FormatError(
            "symmetric enumeration needs both players oriented the same way"
        )
    equilibria = symmetric_support_enumeration(matrix, game.orientation[0])
    data = {
        "equilibria": [
            {
                "probs": [str(p) for p in eq.probs],
                "value": str(eq.value),
                "value_float": float(eq.value),
                "support": [v + 1 for v in eq.support],
            }
            for eq in equilibria
        ]
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_solve_grid(args) -> int:
    inputs: dict = {}
    game = _load_game(args.game, inputs)
    resolution = _frac(args.resolution)
    eps = _frac(args.eps)
    inputs["resolution"] = str(resolution)
    inputs["eps"] = str(eps)
    hits = grid_ne_search(game, resolution, eps, cap=args.cap)
    data = {
        "hits": [
            {
                "strategies": [_strategy_obj(s) for s in profile.strategies],
                "max_regret": regret,
            }
            for profile, regret in hits
        ]
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_solve_refine(args) -> int:
    inputs: dict = {}
    game = _load_game(args.game, inputs)
    start = _load_profile(args.profile, inputs)
    target = float(_frac(args.target))
    inputs["target"] = repr(target)
    result = local_ne_refine(
        game, start, target, max_iters=args.max_iters, damping=args.damping
    )
    if args.output:
        fileio.save_profile(result.profile, args.output)
    bounds = [BoundRecord("refine_target", target, result.max_regret, result.converged)]
    data = {
        "iterations": result.iterations,
        "converged": result.converged,
        "strategies": [_strategy_obj(s) for s in result.profile.strategies],
        "output": args.output,
    }
    code = 0 if result.converged else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


def cmd_solve_2x2(args) -> int:
    inputs: dict = {}
    game = _load_game(args.game, inputs)
    matrix = _tensor_matrix(game)
    if game.orientation != (MINIMIZE, MAXIMIZE):
        raise FormatError("the closed form fixes orientation [minimize, maximize]")
    value, x, z = solve_2x2(matrix)
    data = {
        "value": str(value),
        "value_float": float(value),
        "row_strategy": [str(p) for p in x],
        "col_strategy": [str(p) for p in z],
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_solve_max_clique(args) -> int:
    inputs: dict = {}
    graph = _load_graph(args.graph, inputs)
    size, clique = max_clique(graph)
    data = {"size": size, "clique": [v + 1 for v in clique]}
    return _emit(args, make_report(args.command, inputs, [], 0, data))


# ---------------------------------------------------------------------------
# dynamics and analytic


def cmd_dynamics_run(args) -> int:
    inputs: dict = {}
    problem = _require_problem(_load_game(args.problem, inputs, "problem"))
    init = None
    if args.init:
        init = _pair(_load_profile(args.init, inputs, "init"))
    stepsize = float(_frac(args.stepsize))
    inputs["algo"] = args.algo
    inputs["steps"] = args.steps
    inputs["stepsize"] = repr(stepsize)
    config = DynamicsConfig(
        algorithm=ALGO_NAMES[args.algo],
        stepsize=stepsize,
        horizon=args.steps,
        init=init,
    )
    trajectory = run_dynamics(problem, config)
    if args.output:
        fileio.save_trajectory(trajectory, args.output)
    data = {
        "algorithm": config.algorithm,
        "final_gap": trajectory.gaps[-1],
        "min_gap": min(trajectory.gaps),
        "max_drift": max(trajectory.drifts),
        "final_utility": trajectory.utilities[-1],
        "output": args.output,
    }
    return _emit(args, make_report(args.command, inputs, [], 0, data))


def cmd_analytic_irrational(args) -> int:
    inputs: dict = {"verify": bool(args.verify)}
    game = irrational_game()
    profile = irrational_equilibrium()
    if args.output:
        fileio.save_game(game, args.output)

    def surd_obj(s):
        return {"p": str(s.p), "q": str(s.q)}

    data = {
        "profile": [[surd_obj(c) for c in coords] for coords in profile],
        "float_profile": [[float(c) for c in coords] for coords in profile],
        "output": args.output,
    }
    bounds = []
    code = 0
    if args.verify:
        report = verify_irrational_equilibrium()
        measured = max(report.certificate.regrets)
        bounds = [
            BoundRecord("irrational_exact", 0.0, 0.0, report.exact),
            BoundRecord("irrational_regret", 1e-9, measured, measured <= 1e-9),
        ]
        data["regrets"] = list(report.certificate.regrets)
        data["value"] = surd_obj(report.game_value)
        data["value_float"] = float(report.game_value)
        code = 0 if all(b.satisfied for b in bounds) else 1
    return _emit(args, make_report(args.command, inputs, bounds, code, data))


# ---------------------------------------------------------------------------
# parser


def _add_common(sub, report=True, output=False):
    if output:
        sub.add_argument("-o", "--output", default=None, help="artifact output path")
    if report:
        sub.add_argument("--report", default=None, help="report JSON path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minmaxlab",
        description="gadget builders, equilibrium checkers, and lemma audits",
    )
    top = parser.add_subparsers(dest="group", required=True)

    gadget = top.add_parser("gadget", help="build reduction instances").add_subparsers(
        dest="kind", required=True
    )
    g = gadget.add_parser("team", help="two team players vs one adversary")
    g.add_argument("--game", required=True)
    g.add_argument("--eps", required=True)
    _add_common(g, output=True)
    g.set_defaults(func=cmd_gadget_team, command="gadget team")

    g = gadget.add_parser("quadratic", help="antisymmetric quadratic min-max")
    g.add_argument("--game", required=True)
    _add_common(g, output=True)
    g.set_defaults(func=cmd_gadget_quadratic, command="gadget quadratic")

    g = gadget.add_parser("coupled", help="quadratic gadget on the coupled domain")
    g.add_argument("--game", required=True)
    g.add_argument("--delta", default=None)
    g.add_argument("--eps", default=None)
    _add_common(g, output=True)
    g.set_defaults(func=cmd_gadget_coupled, command="gadget coupled")

    g = gadget.add_parser("team3v3", help="three-vs-three polymatrix gadget")
    g.add_argument("--game", required=True)
    g.add_argument("--eps", required=True)
    _add_common(g, output=True)
    g.set_defaults(func=cmd_gadget_team3v3, command="gadget team3v3")

    g = gadget.add_parser("clique", help="clique-detection payoff families")
    g.add_argument("--graph", required=True)
    g.add_argument("--variant", required=True, choices=["base", "delta", "unique", "robust"])
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--delta", default=None)
    g.add_argument("--eps", default=None)
    _add_common(g, output=True)
    g.set_defaults(func=cmd_gadget_clique, command="gadget clique")

    check = top.add_parser("check", help="certificates for a given profile").add_subparsers(
        dest="kind", required=True
    )
    for name, func in [
        ("ne", cmd_check_ne),
        ("wsne", cmd_check_wsne),
        ("fone", cmd_check_fone),
        ("gap", cmd_check_gap),
    ]:
        c = check.add_parser(name)
        c.add_argument("--game", required=True)
        c.add_argument("--profile", required=True)
        c.add_argument("--eps", default=None)
        if name == "gap":
            c.add_argument("--stepsize", default="1")
        _add_common(c)
        c.set_defaults(func=func, command=f"check {name}")

    backmap = top.add_parser("backmap", help="pull gadget solutions back").add_subparsers(
        dest="kind", required=True
    )
    b = backmap.add_parser("team")
    b.add_argument("--game", required=True)
    b.add_argument("--eps", required=True)
    b.add_argument("--profile", required=True)
    _add_common(b, output=True)
    b.set_defaults(func=cmd_backmap_team, command="backmap team")

    b = backmap.add_parser("symmetric")
    b.add_argument("--game", required=True)
    b.add_argument("--profile", required=True)
    b.add_argument("--gap", required=True)
    _add_common(b, output=True)
    b.set_defaults(func=cmd_backmap_symmetric, command="backmap symmetric")

    b = backmap.add_parser("median")
    b.add_argument("--game", required=True)
    b.add_argument("--profile", required=True)
    b.add_argument("--gap", required=True)
    b.add_argument("--delta", required=True)
    _add_common(b, output=True)
    b.set_defaults(func=cmd_backmap_median, command="backmap median")

    b = backmap.add_parser("team3v3")
    b.add_argument("--game", required=True)
    b.add_argument("--eps", required=True)
    b.add_argument("--profile", required=True)
    _add_common(b, output=True)
    b.set_defaults(func=cmd_backmap_team3v3, command="backmap team3v3")

    audit = top.add_parser("audit", help="lemma-level structure audits").add_subparsers(
        dest="kind", required=True
    )
    a = audit.add_parser("gadget-structure")
    a.add_argument("--game", required=True)
    a.add_argument("--eps", required=True)
    a.add_argument("--profile", required=True)
    _add_common(a)
    a.set_defaults(func=cmd_audit_gadget_structure, command="audit gadget-structure")

    a = audit.add_parser("nashgap")
    a.add_argument("--graph", required=True)
    _add_common(a)
    a.set_defaults(func=cmd_audit_nashgap, command="audit nashgap")

    a = audit.add_parser("wsne-value")
    a.add_argument("--graph", required=True)
    a.add_argument("--k", type=int, default=None)
    a.add_argument("--delta", default=None)
    a.add_argument("--eps", default=None)
    a.add_argument("--resolution", default="1/6")
    _add_common(a)
    a.set_defaults(func=cmd_audit_wsne_value, command="audit wsne-value")

    a = audit.add_parser("classify")
    a.add_argument("--game", required=True)
    a.add_argument("--profile", required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--eps", default=None)
    a.add_argument("--wsne", action="store_true", help="input is well-supported")
    _add_common(a)
    a.set_defaults(func=cmd_audit_classify, command="audit classify")

    a = audit.add_parser("mass-bound")
    a.add_argument("--game", required=True)
    a.add_argument("--profile", required=True)
    a.add_argument("--eps", required=True)
    _add_common(a)
    a.set_defaults(func=cmd_audit_mass_bound, command="audit mass-bound")

    solve = top.add_parser("solve", help="oracles and closed forms").add_subparsers(
        dest="kind", required=True
    )
    s = solve.add_parser("enumerate")
    s.add_argument("--game", required=True)
    _add_common(s)
    s.set_defaults(func=cmd_solve_enumerate, command="solve enumerate")

    s = solve.add_parser("grid")
    s.add_argument("--game", required=True)
    s.add_argument("--resolution", required=True)
    s.add_argument("--eps", required=True)
    s.add_argument("--cap", type=int, default=100_000_000)
    _add_common(s)
    s.set_defaults(func=cmd_solve_grid, command="solve grid")

    s = solve.add_parser("refine")
    s.add_argument("--game", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--max-iters", type=int, default=100_000)
    s.add_argument("--damping", type=float, default=0.1)
    _add_common(s, output=True)
    s.set_defaults(func=cmd_solve_refine, command="solve refine")

    s = solve.add_parser("2x2")
    s.add_argument("--game", required=True)
    _add_common(s)
    s.set_defaults(func=cmd_solve_2x2, command="solve 2x2")

    s = solve.add_parser("max-clique")
    s.add_argument("--graph", required=True)
    _add_common(s)
    s.set_defaults(func=cmd_solve_max_clique, command="solve max-clique")

    dynamics = top.add_parser("dynamics", help="learning trajectories").add_subparsers(
        dest="kind", required=True
    )
    d = dynamics.add_parser("run")
    d.add_argument("--problem", required=True)
    d.add_argument("--algo", required=True, choices=sorted(ALGO_NAMES))
    d.add_argument("--steps", type=int, default=100)
    d.add_argument("--stepsize", default="0.1")
    d.add_argument("--init", default=None)
    _add_common(d, output=True)
    d.set_defaults(func=cmd_dynamics_run, command="dynamics run")

    analytic = top.add_parser("analytic", help="closed-form exhibits").add_subparsers(
        dest="kind", required=True
    )
    an = analytic.add_parser("irrational")
    an.add_argument("--verify", action="store_true")
    _add_common(an, output=True)
    an.set_defaults(func=cmd_analytic_irrational, command="analytic irrational")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundViolationError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 1
    except (
        FormatError,
        DimensionError,
        PreconditionError,
        DegenerateGameError,
        UnsupportedDomainError,
        CapExceededError,
        OverflowError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
