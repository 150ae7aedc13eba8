"""Scenario files: the JSON schema tying a follower graph to game parameters.

Schema (explicit keys, diff-friendly):

    {
      "n": 5,
      "h": [2, 2, 2, 2, 2],              # per-player production cost
      "L": [1.5, 1.5, 1.5, 1.5, 1.5],    # per-player utility scale
      "default_q": 1.0,                  # interest weight for plain edges
      "edges": [[4, 1, 1.75], [1, 3]],   # [from, to] or [from, to, q]
      "x_max": 10.0,
      "solver": {"tol": 1e-10, "max_sweeps": 200, "residual_tol": 1e-8},
      "gossip": {"mode": "asynchronous-edge", "step_a": 1.0, "step_b": 10.0,
                 "step_tau": 0.7, "max_iterations": 200000,
                 "record_every": 100, "seed": 42},
      "reference": null                  # optional profile for distance metrics
    }

"solver", "gossip" and "reference" are optional; missing keys take the
defaults above. Load errors name the offending field.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .digraph import Digraph
from .gossip import GossipConfig
from .model import GameInstance, GameParams


class ScenarioError(ValueError):
    """Raised when a scenario file violates the schema or an invariant."""


@dataclass(frozen=True)
class SolverSettings:
    tol: float = 1e-10
    max_sweeps: int = 200
    residual_tol: float = 1e-8


@dataclass
class Scenario:
    n: int
    h: list[float]
    L: list[float]
    default_q: float
    edges: list[tuple[int, int, float | None]]
    x_max: float = 10.0
    solver: SolverSettings = field(default_factory=SolverSettings)
    gossip: GossipConfig = field(default_factory=GossipConfig)
    reference: list[float] | None = None


def _require(d: dict, key: str, types, where: str):
    if key not in d:
        raise ScenarioError(f"{where}: missing field '{key}'")
    v = d[key]
    if not isinstance(v, types):
        raise ScenarioError(f"{where}: field '{key}' has wrong type {type(v).__name__}")
    return v


def _num_list(d: dict, key: str, n: int, where: str) -> list[float]:
    v = _require(d, key, list, where)
    if len(v) != n:
        raise ScenarioError(f"{where}: field '{key}' must have length {n}, got {len(v)}")
    out = []
    for k, item in enumerate(v):
        if not isinstance(item, (int, float)) or isinstance(item, bool):
            raise ScenarioError(f"{where}: field '{key}[{k}]' must be a number")
        out.append(float(item))
    return out


def scenario_from_dict(d: dict, where: str = "scenario") -> Scenario:
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: top level must be an object")
    n = _require(d, "n", int, where)
    if n < 1:
        raise ScenarioError(f"{where}: field 'n' must be >= 1")
    h = _num_list(d, "h", n, where)
    L = _num_list(d, "L", n, where)
    default_q = float(_require(d, "default_q", (int, float), where))
    raw_edges = _require(d, "edges", list, where)
    edges: list[tuple[int, int, float | None]] = []
    for k, e in enumerate(raw_edges):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise ScenarioError(f"{where}: field 'edges[{k}]' must be [from, to] or [from, to, q]")
        u, v = e[0], e[1]
        if not isinstance(u, int) or not isinstance(v, int):
            raise ScenarioError(f"{where}: field 'edges[{k}]' endpoints must be integers")
        q = None
        if len(e) == 3:
            if not isinstance(e[2], (int, float)) or isinstance(e[2], bool):
                raise ScenarioError(f"{where}: field 'edges[{k}]' weight must be a number")
            q = float(e[2])
        edges.append((u, v, q))
    x_max = float(d.get("x_max", 10.0))

    sv = d.get("solver", {})
    if not isinstance(sv, dict):
        raise ScenarioError(f"{where}: field 'solver' must be an object")
    try:
        solver = SolverSettings(
            tol=float(sv.get("tol", 1e-10)),
            max_sweeps=int(sv.get("max_sweeps", 200)),
            residual_tol=float(sv.get("residual_tol", 1e-8)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: field 'solver': {exc}") from None

    gs = d.get("gossip", {})
    if not isinstance(gs, dict):
        raise ScenarioError(f"{where}: field 'gossip' must be an object")
    ref = d.get("reference")
    if ref is not None:
        ref = _num_list(d, "reference", n, where)
    try:
        gossip = GossipConfig(
            mode=gs.get("mode", "asynchronous-edge"),
            step_a=float(gs.get("step_a", 1.0)),
            step_b=float(gs.get("step_b", 10.0)),
            step_tau=float(gs.get("step_tau", 0.7)),
            max_iterations=int(gs.get("max_iterations", 200_000)),
            record_every=int(gs.get("record_every", 100)),
            seed=int(gs.get("seed", 42)),
            reference=None if ref is None else tuple(ref),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: field 'gossip': {exc}") from None

    return Scenario(
        n=n, h=h, L=L, default_q=default_q, edges=edges, x_max=x_max,
        solver=solver, gossip=gossip, reference=ref,
    )


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "n": s.n,
        "h": s.h,
        "L": s.L,
        "default_q": s.default_q,
        "edges": [[u, v] if q is None else [u, v, q] for u, v, q in s.edges],
        "x_max": s.x_max,
        "solver": asdict(s.solver),
        "gossip": {
            "mode": s.gossip.mode,
            "step_a": s.gossip.step_a,
            "step_b": s.gossip.step_b,
            "step_tau": s.gossip.step_tau,
            "max_iterations": s.gossip.max_iterations,
            "record_every": s.gossip.record_every,
            "seed": s.gossip.seed,
        },
        "reference": s.reference,
    }


def build_game(s: Scenario) -> GameInstance:
    """Construct and fully validate the game a scenario describes."""
    where = "scenario"
    try:
        g_c = Digraph(s.n, [(u, v) for u, v, _ in s.edges])
    except ValueError as exc:
        raise ScenarioError(f"{where}: field 'edges': {exc}") from None
    interest = {
        (u, v): (s.default_q if q is None else q) for u, v, q in s.edges
    }
    try:
        params = GameParams(
            cost_per_unit=tuple(s.h),
            utility_scale=tuple(s.L),
            interest=interest,
            x_max=s.x_max,
        )
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None
    try:
        return GameInstance(g_c, params)
    except ValueError as exc:
        if "strongly connected" in str(exc):
            raise ScenarioError(f"{where}: field 'edges': G_C not strongly connected") from None
        raise ScenarioError(f"{where}: {exc}") from None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: not valid JSON: {exc}") from None
    scenario = scenario_from_dict(data, where=str(path))
    build_game(scenario)  # surface invariant violations at load time
    return scenario


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


def bundled_data_path(filename: str) -> Path:
    """Path of any data file shipped with the package."""
    return Path(str(resources.files("feedgame").joinpath("data", filename)))


def bundled_scenario_path(name: str = "fig2") -> Path:
    """Path of a scenario or reconstruction spec shipped with the package."""
    return bundled_data_path(f"{name}.json")


def fig2_scenario() -> Scenario:
    """The bundled 5-user experiment scenario."""
    return load_scenario(bundled_scenario_path("fig2"))
