"""Compare the compiled kernels against the pure-Python twins.

Usage: python benchmarks/bench_kernels.py [--iters N] [--repeats R]

Runs the three hot loops (asynchronous gossip, synchronous rounds, projected
gradient) on the bundled five-player game and on a denser random 20-player
game, reporting the best wall time of R repeats per backend and the speedup.
The outputs of both backends are also compared bit for bit.
"""
import argparse
import time

import numpy as np

from feedgame import _kernels_py
from feedgame.gossip import communication_edges, metropolis_weights
from feedgame.model import GRAD_GUARD, GameInstance, GameParams
from feedgame.scenario import build_game, fig2_scenario

try:
    from feedgame import _kernels
except ImportError:
    _kernels = None

from feedgame.digraph import Digraph


def random_dense_game(n: int, seed: int) -> GameInstance:
    rng = np.random.default_rng(seed)
    edges = {(k, k % n + 1) for k in range(1, n + 1)}
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v and rng.random() < 0.4:
                edges.add((u, v))
    g = Digraph(n, sorted(edges))
    params = GameParams(
        cost_per_unit=tuple(rng.uniform(1.0, 3.0, n)),
        utility_scale=tuple(rng.uniform(0.5, 2.5, n)),
        interest={e: float(rng.uniform(0.5, 2.0)) for e in g.edges},
    )
    return GameInstance(g, params)


def bench_one(backend, game: GameInstance, kind: str, iters: int, repeats: int):
    t = game.tables()
    n = game.n
    rng = np.random.default_rng(0)
    x0 = rng.uniform(0.5, 3.0, n)
    comm = communication_edges(game)
    edge_u = np.array([u - 1 for u, _ in comm], dtype=np.int64)
    edge_v = np.array([v - 1 for _, v in comm], dtype=np.int64)
    activations = rng.integers(0, len(comm), size=iters, dtype=np.int64)
    weights = metropolis_weights(game)
    tables = (t.in_ptr, t.in_idx, t.in_q, t.out_ptr, t.out_idx, t.out_q,
              t.h, t.scale)

    best = np.inf
    out = None
    for _ in range(repeats):
        actions = x0.copy()
        est = np.tile(x0, (n, 1))
        counts = np.zeros(n, dtype=np.int64)
        start = time.perf_counter()
        if kind == "gossip":
            backend.gossip_chunk(actions, est, counts, edge_u, edge_v,
                                 activations, *tables,
                                 1.0, 10.0, 0.7, t.x_max, GRAD_GUARD, True)
        elif kind == "sync":
            backend.sync_rounds(actions, est, counts, weights, iters // 10,
                                *tables,
                                1.0, 10.0, 0.7, t.x_max, GRAD_GUARD, True)
        else:
            backend.pg_run(actions, iters, *tables,
                           1.0, 10.0, 0.7, t.x_max, GRAD_GUARD)
        best = min(best, time.perf_counter() - start)
        out = actions.copy()
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--iters", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not built; nothing to compare")
        return

    games = [
        ("fig2 (n=5)", build_game(fig2_scenario())),
        ("dense random (n=20)", random_dense_game(20, seed=1)),
    ]
    print(f"{args.iters} iterations (sync: /10 rounds), best of {args.repeats}\n")
    header = f"{'case':<42}{'compiled':>12}{'pure':>12}{'speedup':>10}  identical"
    print(header)
    print("-" * len(header))
    for label, game in games:
        for kind in ("gossip", "sync", "pg"):
            tc, out_c = bench_one(_kernels, game, kind, args.iters, args.repeats)
            tp, out_p = bench_one(_kernels_py, game, kind, args.iters, args.repeats)
            same = np.array_equal(out_c, out_p)
            print(f"{label + ' ' + kind:<42}{tc:>10.3f}s{tp:>10.3f}s"
                  f"{tp / tc:>9.1f}x  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
