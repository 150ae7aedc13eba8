"""Command-line harness.

    feedgame solve SCENARIO            best-response solve, print the equilibrium
    feedgame simulate SCENARIO         gossip simulation, emit trajectory CSV
    feedgame interference SCENARIO     print the interference graph edge list
    feedgame reconstruct SPEC          enumerate topologies matching a target NE
    feedgame validate SCENARIO         run all structural checks

Exit codes: 0 ok, 1 validation failure, 2 solver non-convergence,
3 I/O error, 4 interference mismatch, 5 reconstruction unsatisfiable.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import gossip, model, solvers
from .digraph import save_edge_list
from .reconstruct import load_reconstruction_spec, reconstruct
from .scenario import ScenarioError, build_game, load_scenario

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NO_CONVERGENCE = 2
EXIT_IO = 3
EXIT_INTERFERENCE_MISMATCH = 4
EXIT_RECONSTRUCT_EMPTY = 5


def _fmt(v: float) -> str:
    return format(v, ".9g")


def cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    game = build_game(scenario)
    report = solvers.best_response_iteration(
        game, [1.0] * game.n,
        tol=scenario.solver.tol,
        max_sweeps=scenario.solver.max_sweeps,
        residual_tol=scenario.solver.residual_tol,
    )
    print("player  action")
    for i in range(1, game.n + 1):
        print(f"{i:>6}  {report.profile[i - 1]:.6f}")
    print(f"residual   {_fmt(report.residual)}")
    print(f"br_gap     {_fmt(report.br_gap)}")
    print(f"sweeps     {report.iterations}")
    print(f"converged  {report.converged}")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def write_trajectory_csv(traj: gossip.Trajectory, n: int, out) -> None:
    """Fixed column order, LF terminators, 9 significant digits."""
    cols = ["iter"] + [f"x{i}" for i in range(1, n + 1)] + [
        "consensus_error", "residual", "dist_to_ref",
    ]
    out.write(",".join(cols) + "\n")
    for rec in traj.records:
        row = [str(rec.iteration)]
        row.extend(_fmt(v) for v in rec.actions)
        row.append(_fmt(rec.consensus_error))
        row.append(_fmt(rec.residual))
        row.append("" if rec.dist_to_reference is None else _fmt(rec.dist_to_reference))
        out.write(",".join(row) + "\n")


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    game = build_game(scenario)
    config = scenario.gossip
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.iters is not None:
        config = replace(config, max_iterations=args.iters)
    if config.reference is None:
        # distance column defaults to distance from the oracle equilibrium
        oracle = solvers.best_response_iteration(
            game, [1.0] * game.n,
            tol=scenario.solver.tol,
            max_sweeps=scenario.solver.max_sweeps,
            residual_tol=scenario.solver.residual_tol,
        )
        config = replace(config, reference=tuple(float(v) for v in oracle.profile))
    traj = gossip.run(game, [1.0] * game.n, config)
    if args.out == "-":
        write_trajectory_csv(traj, game.n, sys.stdout)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                write_trajectory_csv(traj, game.n, fh)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    final = traj.final
    print(
        f"final iter={final.iteration} "
        f"dist_to_ref={'' if final.dist_to_reference is None else _fmt(final.dist_to_reference)} "
        f"consensus_error={_fmt(final.consensus_error)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_interference(args) -> int:
    scenario = load_scenario(args.scenario)
    game = build_game(scenario)
    sys.stdout.write(save_edge_list(game.g_i))
    subset = set(game.g_c.edges) <= set(game.g_i.edges)
    print(f"G_C subset of G_I: {'yes' if subset else 'no'}")
    if args.check:
        observed = model.finite_difference_dependencies(game)
        declared = set(game.g_i.edges)
        if observed != declared:
            missing = sorted(declared - observed)
            extra = sorted(observed - declared)
            print(f"dependence check: MISMATCH (unobserved: {missing}, undeclared: {extra})")
            return EXIT_INTERFERENCE_MISMATCH
        print("dependence check: ok")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    spec = load_reconstruction_spec(args.spec)
    result = reconstruct(spec)
    print(f"candidates checked: {result.candidates_checked}")
    print(f"survivors: {len(result.survivors)}")
    for edges in result.survivors:
        print("  " + " ".join(f"{u}->{v}" for u, v in edges))
    if not result.survivors:
        print("no topology satisfies the constraints and target profile")
        return EXIT_RECONSTRUCT_EMPTY
    print("edges forced in every survivor: "
          + " ".join(f"{u}->{v}" for u, v in sorted(result.forced_edges)))
    if result.free_edges:
        print("edges varying across survivors: "
              + " ".join(f"{u}->{v}" for u, v in sorted(result.free_edges)))
    return EXIT_OK


def cmd_validate(args) -> int:
    checks: list[tuple[str, bool]] = []
    try:
        scenario = load_scenario(args.scenario)
        game = build_game(scenario)
    except ScenarioError as exc:
        print(f"load: FAIL ({exc})")
        return EXIT_VALIDATION
    checks.append(("scenario loads and parameters positive", True))

    from .digraph import is_strongly_connected

    checks.append(("G_C strongly connected", is_strongly_connected(game.g_c)))
    checks.append(("G_I strongly connected", is_strongly_connected(game.g_i)))
    checks.append(("G_C subset of G_I", set(game.g_c.edges) <= set(game.g_i.edges)))

    # analytic gradient vs central differences at random interior points
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(10):
        x = rng.uniform(0.5, 3.0, game.n)
        i = int(rng.integers(1, game.n + 1))
        an = model.own_gradient(game, i, x)
        dx = 1e-6
        hi, lo = x.copy(), x.copy()
        hi[i - 1] += dx
        lo[i - 1] -= dx
        fd = (model.total_cost(game, i, hi) - model.total_cost(game, i, lo)) / (2 * dx)
        if abs(fd - an) > 1e-6 * max(1.0, abs(an)):
            ok = False
    checks.append(("own-gradient matches finite differences (10 points)", ok))

    all_ok = True
    for name, passed in checks:
        print(f"{name}: {'ok' if passed else 'FAIL'}")
        all_ok &= passed
    return EXIT_OK if all_ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feedgame",
        description="Information-production games: equilibrium solvers and gossip simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve for the Nash equilibrium (best-response sweeps)")
    p.add_argument("scenario", help="scenario JSON file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="run the gossip simulation, write trajectory CSV")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--iters", type=int, default=None, help="override max iterations")
    p.add_argument("--out", default="-", help="CSV output path ('-' for stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("interference", help="print the interference graph")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--check", action="store_true",
                   help="cross-check against finite-difference dependencies")
    p.set_defaults(func=cmd_interference)

    p = sub.add_parser("reconstruct", help="enumerate topologies matching a target equilibrium")
    p.add_argument("spec", help="reconstruction spec JSON file")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("validate", help="run all structural checks on a scenario")
    p.add_argument("scenario", help="scenario JSON file")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
