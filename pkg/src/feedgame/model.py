"""The information-production game on a follower digraph.

Each user i posts x_i units of information at linear cost, gains a concave
(square-root) utility from the weighted mass of information in his own feed,
and gains an attention utility equal to the total feed-utility his followers
would lose if his posts vanished. The per-player cost is

    cost_i(x) = unit_cost_i * x_i  -  feed_utility_i(x)  -  attention_utility_i(x)

All public operations take 1-based player ids and a length-n action vector.
Evaluation functions are pure; GameInstance is immutable after construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .digraph import Digraph, build_interference, is_strongly_connected

# Guard for the square-root singularity in the gradient: the derivative of
# sqrt(feed mass) blows up as the mass -> 0+, so denominators use
# max(mass, GRAD_GUARD). Equilibria with positive feed masses are unaffected.
GRAD_GUARD = 1e-12


@dataclass(frozen=True)
class GameParams:
    """Per-player parameters plus per-follower-edge interest weights.

    cost_per_unit: what producing one unit of information costs each player.
    utility_scale: scales each player's feed utility (and therefore the
        attention his feed pays back to producers).
    interest: weight of edge (producer, follower): how much the follower
        cares about that producer's posts. Defined exactly on the follower
        graph's edge set; querying a non-edge is an error, not zero.
    x_max: common upper bound of the action interval [0, x_max].
    """

    cost_per_unit: tuple[float, ...]
    utility_scale: tuple[float, ...]
    interest: Mapping[tuple[int, int], float]
    x_max: float = 10.0

    def __post_init__(self):
        for name, vals in (("cost_per_unit", self.cost_per_unit), ("utility_scale", self.utility_scale)):
            for k, v in enumerate(vals, start=1):
                if not v > 0:
                    raise ValueError(f"{name}[{k}] must be positive, got {v}")
        for edge, q in self.interest.items():
            if not q > 0:
                raise ValueError(f"interest weight on edge {edge} must be positive, got {q}")
        if not self.x_max > 0:
            raise ValueError(f"x_max must be positive, got {self.x_max}")


@dataclass(frozen=True)
class KernelTables:
    """Flat CSR-style views of a game, shared by the compiled and pure kernels.

    Iteration order inside every sum is ascending node id; the kernels and the
    reference implementations rely on this to produce bit-identical floats.
    """

    n: int
    h: np.ndarray          # cost_per_unit, float64[n]
    scale: np.ndarray      # utility_scale, float64[n]
    in_ptr: np.ndarray     # int64[n+1]; feeders of node l+1 at in_idx[in_ptr[l]:in_ptr[l+1]]
    in_idx: np.ndarray     # int64, 0-based producer indices
    in_q: np.ndarray       # float64, interest weights aligned with in_idx
    out_ptr: np.ndarray    # int64[n+1]; followers of player i+1
    out_idx: np.ndarray    # int64, 0-based follower indices
    out_q: np.ndarray      # float64, interest weights aligned with out_idx
    x_max: float


class GameInstance:
    """A validated game: follower graph, derived interference graph, parameters."""

    __slots__ = ("g_c", "g_i", "params", "_tables")

    def __init__(self, g_c: Digraph, params: GameParams):
        if len(params.cost_per_unit) != g_c.n or len(params.utility_scale) != g_c.n:
            raise ValueError("parameter vectors must have one entry per player")
        if not is_strongly_connected(g_c):
            raise ValueError("follower graph must be strongly connected")
        if set(params.interest.keys()) != set(g_c.edges):
            missing = set(g_c.edges) - set(params.interest.keys())
            extra = set(params.interest.keys()) - set(g_c.edges)
            raise ValueError(
                f"interest weights must cover exactly the follower edges "
                f"(missing {sorted(missing)}, extra {sorted(extra)})"
            )
        self.g_c = g_c
        self.g_i = build_interference(g_c)
        self.params = params
        self._tables: KernelTables | None = None

    @property
    def n(self) -> int:
        return self.g_c.n

    def interest(self, producer: int, follower: int) -> float:
        """Interest weight on follower edge producer -> follower; KeyError off-edge."""
        try:
            return self.params.interest[(producer, follower)]
        except KeyError:
            raise KeyError(
                f"({producer}, {follower}) is not a follower edge; interest is undefined off-edge"
            ) from None

    def tables(self) -> KernelTables:
        """Build (once) the flat arrays the numeric kernels consume."""
        if self._tables is None:
            n = self.n
            in_ptr = np.zeros(n + 1, dtype=np.int64)
            in_idx, in_q = [], []
            for l in range(1, n + 1):
                for j in self.g_c.in_list(l):
                    in_idx.append(j - 1)
                    in_q.append(self.params.interest[(j, l)])
                in_ptr[l] = len(in_idx)
            out_ptr = np.zeros(n + 1, dtype=np.int64)
            out_idx, out_q = [], []
            for i in range(1, n + 1):
                for l in self.g_c.out_list(i):
                    out_idx.append(l - 1)
                    out_q.append(self.params.interest[(i, l)])
                out_ptr[i] = len(out_idx)
            self._tables = KernelTables(
                n=n,
                h=np.asarray(self.params.cost_per_unit, dtype=np.float64),
                scale=np.asarray(self.params.utility_scale, dtype=np.float64),
                in_ptr=in_ptr,
                in_idx=np.asarray(in_idx, dtype=np.int64),
                in_q=np.asarray(in_q, dtype=np.float64),
                out_ptr=out_ptr,
                out_idx=np.asarray(out_idx, dtype=np.int64),
                out_q=np.asarray(out_q, dtype=np.float64),
                x_max=self.params.x_max,
            )
        return self._tables

    def __repr__(self) -> str:
        return f"GameInstance(n={self.n}, follower_edges={len(self.g_c.edges)})"


def as_profile(game: GameInstance, x: Sequence[float]) -> np.ndarray:
    """Validate an action profile: length n, every entry in [0, x_max]."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (game.n,):
        raise ValueError(f"profile must have shape ({game.n},), got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > game.params.x_max):
        raise ValueError(f"profile entries must be finite and lie in [0, {game.params.x_max}]")
    return arr


def feed_mass(game: GameInstance, l: int, x: Sequence[float]) -> float:
    """Weighted information mass in node l's news feed."""
    s = 0.0
    for j in game.g_c.in_list(l):
        s += game.params.interest[(j, l)] * x[j - 1]
    return s


def _feed_mass_excluding(game: GameInstance, l: int, x: Sequence[float], skip: int) -> float:
    # Reduced sum rather than subtraction: exact when x[skip-1] is the sole feeder.
    s = 0.0
    for j in game.g_c.in_list(l):
        if j != skip:
            s += game.params.interest[(j, l)] * x[j - 1]
    return s


def production_cost(game: GameInstance, i: int, x_i: float) -> float:
    """Linear cost of producing x_i units."""
    return game.params.cost_per_unit[i - 1] * x_i


def info_utility(game: GameInstance, i: int, x: Sequence[float]) -> float:
    """Concave utility player i gets from his own feed: scale * sqrt(feed mass)."""
    return game.params.utility_scale[i - 1] * math.sqrt(feed_mass(game, i, x))


def attention_utility(game: GameInstance, i: int, x: Sequence[float]) -> float:
    """Attention player i receives: the total feed utility his followers
    would lose were his posts removed from their feeds."""
    total = 0.0
    for l in game.g_c.out_list(i):
        full = feed_mass(game, l, x)
        reduced = _feed_mass_excluding(game, l, x, i)
        total += game.params.utility_scale[l - 1] * (math.sqrt(full) - math.sqrt(reduced))
    return total


def total_cost(game: GameInstance, i: int, x: Sequence[float]) -> float:
    """Player i's cost: production cost minus both utilities."""
    return (
        production_cost(game, i, x[i - 1])
        - info_utility(game, i, x)
        - attention_utility(game, i, x)
    )


def own_gradient(game: GameInstance, i: int, x: Sequence[float]) -> float:
    """d(total_cost_i)/dx_i.

    Own feed utility does not depend on x_i (no self-loops), so only the
    production cost and the attention terms contribute. Feed masses are
    guarded by GRAD_GUARD against the sqrt singularity at zero.
    """
    g = game.params.cost_per_unit[i - 1]
    for l in game.g_c.out_list(i):
        s = feed_mass(game, l, x)
        if s < GRAD_GUARD:
            s = GRAD_GUARD
        g -= game.params.utility_scale[l - 1] * game.params.interest[(i, l)] / (2.0 * math.sqrt(s))
    return g


def finite_difference_dependencies(
    game: GameInstance,
    x: Sequence[float] | None = None,
    delta: float = 1e-3,
    threshold: float = 1e-9,
) -> set[tuple[int, int]]:
    """Detect cost dependencies numerically: (j, i) iff nudging x_j moves cost_i.

    Probes every ordered pair at an interior profile (a fixed varied one by
    default). Used to cross-check the interference graph construction.
    """
    n = game.n
    if x is None:
        # deterministic interior profile with distinct, non-degenerate entries
        x = np.array([1.0 + 0.3 * ((7 * k) % 5) for k in range(n)])
    x = np.asarray(x, dtype=np.float64)
    deps: set[tuple[int, int]] = set()
    base = [total_cost(game, i, x) for i in range(1, n + 1)]
    for j in range(1, n + 1):
        bumped = x.copy()
        bumped[j - 1] += delta
        for i in range(1, n + 1):
            if i == j:
                continue
            if abs(total_cost(game, i, bumped) - base[i - 1]) > threshold:
                deps.add((j, i))
    return deps
