import numpy as np
import pytest

from feedgame import model, scenario
from feedgame.digraph import Digraph, is_strongly_connected
from feedgame.model import GameInstance, GameParams
from feedgame.scenario import build_game, fig2_scenario


@pytest.fixture(scope="session")
def fig2_game() -> GameInstance:
    return build_game(fig2_scenario())


def random_sc_digraph(rng: np.random.Generator, n: int, extra_p: float = 0.3) -> Digraph:
    """Random strongly connected digraph: a Hamiltonian cycle plus extras."""
    perm = rng.permutation(n) + 1
    edges = {(int(perm[k]), int(perm[(k + 1) % n])) for k in range(n)}
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v and rng.random() < extra_p:
                edges.add((u, v))
    g = Digraph(n, sorted(edges))
    assert is_strongly_connected(g)
    return g


def random_game(rng: np.random.Generator, n: int | None = None,
                extra_p: float = 0.3) -> GameInstance:
    """Random game on a random strongly connected digraph, q in [0.5, 2]."""
    if n is None:
        n = int(rng.integers(2, 7))
    g = random_sc_digraph(rng, n, extra_p)
    params = GameParams(
        cost_per_unit=tuple(rng.uniform(1.0, 3.0, n)),
        utility_scale=tuple(rng.uniform(0.5, 2.5, n)),
        interest={e: float(rng.uniform(0.5, 2.0)) for e in g.edges},
        x_max=10.0,
    )
    return GameInstance(g, params)


def central_diff_gradient(game: GameInstance, i: int, x, dx: float = 1e-6) -> float:
    hi = np.asarray(x, dtype=np.float64).copy()
    lo = hi.copy()
    hi[i - 1] += dx
    lo[i - 1] -= dx
    return (model.total_cost(game, i, hi) - model.total_cost(game, i, lo)) / (2 * dx)


def grid_best_response(game: GameInstance, i: int, x, points: int = 300,
                       rounds: int = 3) -> float:
    """Grid-search argmin of the true cost over [0, x_max], refined per round.

    Independent of the analytic solver: evaluates total_cost directly.
    Final resolution ~ x_max * (2/points)^rounds, far below 1e-4.
    """
    x = np.asarray(x, dtype=np.float64).copy()
    lo, hi = 0.0, game.params.x_max
    best = 0.0
    for _ in range(rounds):
        grid = np.linspace(lo, hi, points + 1)
        costs = np.empty_like(grid)
        for k, t in enumerate(grid):
            x[i - 1] = t
            costs[k] = model.total_cost(game, i, x)
        best = float(grid[int(np.argmin(costs))])
        span = (hi - lo) / points
        lo = max(0.0, best - span)
        hi = min(game.params.x_max, best + span)
    return best


@pytest.fixture()
def tmp_scenario_path(tmp_path):
    """Writable copy of the bundled scenario for CLI tests."""
    import shutil

    dst = tmp_path / "fig2.json"
    shutil.copy(scenario.bundled_scenario_path(), dst)
    return dst
