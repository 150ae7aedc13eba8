"""Distributed equilibrium seeking under partial-decision information.

No player sees the others' actions. Each maintains a private estimate of the
full action vector; communication neighbors repeatedly average their estimate
vectors (randomly activated edges, or synchronous rounds with Metropolis
weights), and every participant then descends his own cost along his own
action, evaluated at his current estimates, with a diminishing step.

The follower graph doubles as the communication graph; its edges are treated
as bidirectional channels for the exchange even though the feed relation
stays directed inside the cost model.

``run`` drives the whole simulation through the selected kernel backend and
records a Trajectory; ``gossip_step`` / ``synchronous_round`` are the
single-step reference implementations used by unit tests.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import model, solvers
from ._backend import kernels
from .model import GameInstance


@dataclass(frozen=True)
class GossipConfig:
    """Simulation settings.

    mode: "asynchronous-edge" (one random communication edge per iteration,
        both endpoints update, per-player step counters) or "synchronous"
        (all players every round, a shared global counter).
    step_a, step_b, step_tau: diminishing step schedule a/(b+k)^tau.
    record_every: trajectory sampling stride in iterations.
    reference: optional profile for the distance column of the trajectory.
    """

    mode: str = "asynchronous-edge"
    step_a: float = 1.0
    step_b: float = 10.0
    step_tau: float = 0.7
    max_iterations: int = 200_000
    record_every: int = 100
    seed: int = 42
    reference: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.mode not in ("asynchronous-edge", "synchronous"):
            raise ValueError(f"unknown mode {self.mode!r}")
        # delegate schedule validation (a > 0, b >= 0, tau in (0.5, 1])
        solvers.StepSchedule(self.step_a, self.step_b, self.step_tau)
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    def schedule(self) -> solvers.StepSchedule:
        return solvers.StepSchedule(self.step_a, self.step_b, self.step_tau)


@dataclass
class PlayerState:
    """One player's local view: his action, his estimate of everyone, his clock."""

    id: int
    own_action: float
    estimates: np.ndarray
    update_count: int = 0


@dataclass(frozen=True)
class TrajectoryRecord:
    iteration: int
    actions: np.ndarray
    consensus_error: float
    residual: float
    dist_to_reference: float | None


@dataclass
class Trajectory:
    """Time-sampled records of a simulation run."""

    records: list[TrajectoryRecord]

    @property
    def final(self) -> TrajectoryRecord:
        return self.records[-1]


def init_states(game: GameInstance, x0: Sequence[float]) -> list[PlayerState]:
    """Every player starts with the full start profile as his estimate."""
    x = model.as_profile(game, x0)
    return [
        PlayerState(id=i, own_action=float(x[i - 1]), estimates=x.copy(), update_count=0)
        for i in range(1, game.n + 1)
    ]


def consensus_error(states: Sequence[PlayerState]) -> float:
    """Worst disagreement between any estimate entry and the true action it tracks."""
    actual = [s.own_action for s in states]
    return max(
        abs(float(s.estimates[m]) - actual[m])
        for s in states
        for m in range(len(actual))
    )


def communication_edges(game: GameInstance) -> list[tuple[int, int]]:
    """Undirected support of the follower graph, canonically sorted (u < v)."""
    return sorted({(min(u, v), max(u, v)) for u, v in game.g_c.edges})


def metropolis_weights(game: GameInstance) -> np.ndarray:
    """Doubly stochastic averaging weights on the undirected communication graph.

    w_uv = 1/(1 + max(deg_u, deg_v)) for neighbors, diagonal absorbs the rest.
    """
    n = game.n
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in communication_edges(game):
        nbrs[u - 1].add(v - 1)
        nbrs[v - 1].add(u - 1)
    w = np.zeros((n, n))
    for i in range(n):
        for j in nbrs[i]:
            w[i, j] = 1.0 / (1.0 + max(len(nbrs[i]), len(nbrs[j])))
    for i in range(n):
        w[i, i] = 1.0 - w[i].sum()
    return w


def _step_action(game: GameInstance, state: PlayerState, config: GossipConfig) -> None:
    # shared by both reference step functions: local clock tick + projected step
    state.update_count += 1
    g = model.own_gradient(game, state.id, state.estimates)
    alpha = config.step_a / (config.step_b + state.update_count) ** config.step_tau
    xn = state.own_action - alpha * g
    if xn < 0.0:
        xn = 0.0
    elif xn > game.params.x_max:
        xn = game.params.x_max
    state.own_action = xn
    state.estimates[state.id - 1] = xn


def gossip_step(
    states: Sequence[PlayerState],
    edge: tuple[int, int],
    game: GameInstance,
    config: GossipConfig,
) -> Sequence[PlayerState]:
    """One asynchronous activation of a communication edge (reference path).

    The endpoints average estimate vectors (each keeps his own coordinate),
    then both take local gradient steps, lower id first.
    """
    i, j = edge
    pair = (min(i, j), max(i, j))
    if pair not in set(communication_edges(game)):
        raise ValueError(f"({i}, {j}) is not a communication edge")
    si, sj = states[pair[0] - 1], states[pair[1] - 1]
    n = game.n
    for m in range(n):
        au = float(si.estimates[m])
        av = float(sj.estimates[m])
        avg = (au + av) / 2.0
        if m != si.id - 1:
            si.estimates[m] = avg
        if m != sj.id - 1:
            sj.estimates[m] = avg
    _step_action(game, si, config)
    _step_action(game, sj, config)
    return states


def synchronous_round(
    states: Sequence[PlayerState],
    game: GameInstance,
    config: GossipConfig,
) -> Sequence[PlayerState]:
    """One synchronous round (reference path): Metropolis averaging, then a
    simultaneous gradient step; the lockstep update counters act as the
    global round clock."""
    n = game.n
    w = metropolis_weights(game)
    old = np.stack([s.estimates for s in states])
    for i, s in enumerate(states):
        mixed = np.empty(n)
        for m in range(n):
            acc = 0.0
            for j in range(n):
                acc += w[i, j] * float(old[j, m])
            mixed[m] = acc
        mixed[i] = s.own_action
        s.estimates = mixed
    for s in states:
        _step_action(game, s, config)
    return states


def run(
    game: GameInstance,
    x0: Sequence[float],
    config: GossipConfig,
    averaging_only: bool = False,
    initial_estimates: np.ndarray | None = None,
) -> Trajectory:
    """Simulate up to config.max_iterations, recording every record_every steps.

    Deterministic for a fixed seed and config: the whole activation sequence
    is drawn up front from a seeded generator. ``averaging_only`` disables the
    gradient steps (ablation: isolates the consensus half of the scheme).
    ``initial_estimates`` (row i = player i's estimate vector) overrides the
    default everyone-starts-at-x0 estimates; diagonal entries are forced to
    x0 to keep the own-coordinate invariant. Non-convergence shows up in the
    trajectory, never as an exception.
    """
    x = model.as_profile(game, x0)
    t = game.tables()
    n = game.n

    actions = x.copy()
    if initial_estimates is None:
        est = np.tile(x, (n, 1))
    else:
        est = np.array(initial_estimates, dtype=np.float64)
        if est.shape != (n, n):
            raise ValueError(f"initial_estimates must be ({n}, {n})")
        if est.min() < 0.0 or est.max() > t.x_max:
            raise ValueError("initial_estimates outside [0, x_max]")
        est[np.arange(n), np.arange(n)] = actions
    counts = np.zeros(n, dtype=np.int64)

    ref = None if config.reference is None else np.asarray(config.reference, dtype=np.float64)

    sync = config.mode == "synchronous"
    if sync:
        weights = metropolis_weights(game)
    else:
        comm = communication_edges(game)
        edge_u = np.array([u - 1 for u, _ in comm], dtype=np.int64)
        edge_v = np.array([v - 1 for _, v in comm], dtype=np.int64)
        rng = np.random.default_rng(config.seed)
        activations = rng.integers(0, len(comm), size=config.max_iterations, dtype=np.int64)

    records: list[TrajectoryRecord] = []

    def record(iteration: int) -> None:
        assert np.all(actions >= 0.0) and np.all(actions <= t.x_max)
        assert np.all(est >= 0.0) and np.all(est <= t.x_max)
        assert all(est[i, i] == actions[i] for i in range(n))
        cons = float(np.max(np.abs(est - actions[np.newaxis, :])))
        records.append(
            TrajectoryRecord(
                iteration=iteration,
                actions=actions.copy(),
                consensus_error=cons,
                residual=solvers.ne_residual(game, actions),
                dist_to_reference=None if ref is None else float(np.max(np.abs(actions - ref))),
            )
        )

    record(0)
    done = 0
    while done < config.max_iterations:
        chunk = min(config.record_every, config.max_iterations - done)
        if sync:
            kernels.sync_rounds(
                actions, est, counts, weights, chunk,
                t.in_ptr, t.in_idx, t.in_q, t.out_ptr, t.out_idx, t.out_q,
                t.h, t.scale,
                config.step_a, config.step_b, config.step_tau,
                t.x_max, model.GRAD_GUARD,
                not averaging_only,
            )
        else:
            kernels.gossip_chunk(
                actions, est, counts,
                edge_u, edge_v, activations[done:done + chunk],
                t.in_ptr, t.in_idx, t.in_q, t.out_ptr, t.out_idx, t.out_q,
                t.h, t.scale,
                config.step_a, config.step_b, config.step_tau,
                t.x_max, model.GRAD_GUARD,
                not averaging_only,
            )
        done += chunk
        if done % config.record_every == 0 or done == config.max_iterations:
            record(done)
    return Trajectory(records=records)
