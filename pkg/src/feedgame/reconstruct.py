"""Topology reconstruction from partial constraints and a target equilibrium.

An account of an experiment often names some players' followers and everyone's
follower counts without giving the graph itself. This module enumerates every
completion of the partially known out-edge sets that honors the out-degree
constraints, keeps strong connectivity, and whose solved equilibrium matches
the target profile at the stated rounding. The survivor set makes the
residual ambiguity explicit; the intersection of all survivors gives the
edges the observed numbers actually force.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .digraph import Digraph, is_strongly_connected
from .model import GameInstance, GameParams
from .scenario import ScenarioError
from .solvers import best_response_iteration


@dataclass
class ReconstructionSpec:
    """Known out-edges, exact out-degrees, parameters, and the target profile."""

    n: int
    known_out: dict[int, set[int]]
    out_degree: dict[int, int]
    h: list[float]
    L: list[float]
    default_q: float
    edge_q: dict[tuple[int, int], float]  # overrides on known edges
    x_max: float
    target: list[float]
    decimals: int

    def validate(self) -> None:
        for i in range(1, self.n + 1):
            known = self.known_out.get(i, set())
            degree = self.out_degree.get(i, len(known))
            if len(known) > degree:
                raise ScenarioError(
                    f"reconstruction: node {i} has {len(known)} known out-edges "
                    f"but out-degree constraint {degree}"
                )
            if i in known:
                raise ScenarioError(f"reconstruction: node {i} lists itself as a follower")
        for (u, v) in self.edge_q:
            if v not in self.known_out.get(u, set()):
                raise ScenarioError(f"reconstruction: weight on unknown edge ({u}, {v})")
        if len(self.target) != self.n:
            raise ScenarioError("reconstruction: target profile length mismatch")


@dataclass
class ReconstructionResult:
    survivors: list[tuple[tuple[int, int], ...]]
    forced_edges: set[tuple[int, int]]   # in every survivor
    free_edges: set[tuple[int, int]]     # in some but not all survivors
    candidates_checked: int


def load_reconstruction_spec(path: str | Path) -> ReconstructionSpec:
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: not valid JSON: {exc}") from None
    try:
        spec = ReconstructionSpec(
            n=int(d["n"]),
            known_out={int(k): set(map(int, v)) for k, v in d.get("known_out", {}).items()},
            out_degree={int(k): int(v) for k, v in d.get("out_degree", {}).items()},
            h=[float(v) for v in d["h"]],
            L=[float(v) for v in d["L"]],
            default_q=float(d.get("default_q", 1.0)),
            edge_q={(int(e[0]), int(e[1])): float(e[2]) for e in d.get("edge_q", [])},
            x_max=float(d.get("x_max", 10.0)),
            target=[float(v) for v in d["target"]],
            decimals=int(d.get("decimals", 2)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: bad reconstruction spec: {exc}") from None
    spec.validate()
    return spec


def enumerate_completions(spec: ReconstructionSpec):
    """Yield candidate edge sets honoring known edges, degrees, no self-loops."""
    per_node_choices = []
    for i in range(1, spec.n + 1):
        known = sorted(spec.known_out.get(i, set()))
        degree = spec.out_degree.get(i, len(known))
        free = degree - len(known)
        pool = [v for v in range(1, spec.n + 1) if v != i and v not in known]
        options = [
            tuple((i, v) for v in known) + tuple((i, v) for v in extra)
            for extra in itertools.combinations(pool, free)
        ]
        per_node_choices.append(options)
    for combo in itertools.product(*per_node_choices):
        yield tuple(sorted(e for edges in combo for e in edges))


def reconstruct(spec: ReconstructionSpec) -> ReconstructionResult:
    """Filter completions by strong connectivity and equilibrium match.

    The equilibrium oracle is a best-response solve from the all-ones start;
    a candidate survives when the solve converges and the profile, rounded to
    spec.decimals, equals the target.
    """
    spec.validate()
    survivors: list[tuple[tuple[int, int], ...]] = []
    checked = 0
    for edges in enumerate_completions(spec):
        checked += 1
        g = Digraph(spec.n, edges)
        if not is_strongly_connected(g):
            continue
        params = GameParams(
            cost_per_unit=tuple(spec.h),
            utility_scale=tuple(spec.L),
            interest={e: spec.edge_q.get(e, spec.default_q) for e in edges},
            x_max=spec.x_max,
        )
        game = GameInstance(g, params)
        report = best_response_iteration(game, [1.0] * spec.n)
        if not report.converged:
            continue
        rounded = [round(float(v), spec.decimals) for v in report.profile]
        if all(abs(r - t) < 1e-9 for r, t in zip(rounded, spec.target)):
            survivors.append(edges)
    if survivors:
        forced = set(survivors[0])
        union = set(survivors[0])
        for edges in survivors[1:]:
            forced &= set(edges)
            union |= set(edges)
        free = union - forced
    else:
        forced, free = set(), set()
    return ReconstructionResult(
        survivors=survivors,
        forced_edges=forced,
        free_edges=free,
        candidates_checked=checked,
    )
