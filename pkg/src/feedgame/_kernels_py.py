"""Pure-Python simulation kernels.

Fallback twin of the compiled extension ``feedgame._kernels``; selected at
import time by ``feedgame._backend`` when the extension is unavailable.

Both backends must produce bit-identical results, so every arithmetic
expression, every accumulation order (ascending node id), and the clamp
branches are written exactly as in the .pyx file. State arrays are mutated
in place.
"""
from __future__ import annotations

from math import sqrt

COMPILED = False


def _gradient(i, x, in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale, guard):
    # d(cost_i)/dx_i at profile x (any indexable of floats), 0-based i
    g = h[i]
    for t in range(out_ptr[i], out_ptr[i + 1]):
        l = out_idx[t]
        s = 0.0
        for r in range(in_ptr[l], in_ptr[l + 1]):
            s += in_q[r] * x[in_idx[r]]
        if s < guard:
            s = guard
        g -= scale[l] * out_q[t] / (2.0 * sqrt(s))
    return g


def gossip_chunk(
    actions, est, counts,
    edge_u, edge_v, activations,
    in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale,
    step_a, step_b, step_tau, x_max, guard,
    use_gradient=True,
):
    """Run one batch of asynchronous edge activations in place.

    Per activation: the two endpoints average their estimate vectors
    coordinate-wise (each keeps his own coordinate), then each takes a
    projected gradient step on his own action using his local step counter,
    lower endpoint first.
    """
    n = len(actions)
    acts = [float(v) for v in actions]
    e = [[float(v) for v in row] for row in est]
    cnt = [int(v) for v in counts]
    in_ptr = [int(v) for v in in_ptr]
    in_idx = [int(v) for v in in_idx]
    in_q = [float(v) for v in in_q]
    out_ptr = [int(v) for v in out_ptr]
    out_idx = [int(v) for v in out_idx]
    out_q = [float(v) for v in out_q]
    h = [float(v) for v in h]
    scale = [float(v) for v in scale]

    for a in activations:
        u = int(edge_u[a])
        v = int(edge_v[a])
        eu = e[u]
        ev = e[v]
        for m in range(n):
            au = eu[m]
            av = ev[m]
            avg = (au + av) / 2.0
            if m != u:
                eu[m] = avg
            if m != v:
                ev[m] = avg
        for p in (u, v):
            cnt[p] += 1
            ep = e[p]
            xn = ep[p]
            if use_gradient:
                g = _gradient(p, ep, in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale, guard)
                alpha = step_a / (step_b + cnt[p]) ** step_tau
                xn = xn - alpha * g
                if xn < 0.0:
                    xn = 0.0
                elif xn > x_max:
                    xn = x_max
            acts[p] = xn
            ep[p] = xn

    actions[:] = acts
    for i in range(n):
        est[i, :] = e[i]
    counts[:] = cnt


def sync_rounds(
    actions, est, counts,
    weights, rounds,
    in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale,
    step_a, step_b, step_tau, x_max, guard,
    use_gradient=True,
):
    """Run synchronous consensus+gradient rounds in place.

    Each round: every player averages his estimate vector with all
    communication neighbors under the given doubly stochastic weights
    (keeping his own coordinate), then all players take the same-indexed
    gradient step (counts advance in lockstep, serving as the global clock).
    """
    n = len(actions)
    acts = [float(v) for v in actions]
    e = [[float(v) for v in row] for row in est]
    w = [[float(v) for v in row] for row in weights]
    cnt = [int(v) for v in counts]
    in_ptr = [int(v) for v in in_ptr]
    in_idx = [int(v) for v in in_idx]
    in_q = [float(v) for v in in_q]
    out_ptr = [int(v) for v in out_ptr]
    out_idx = [int(v) for v in out_idx]
    out_q = [float(v) for v in out_q]
    h = [float(v) for v in h]
    scale = [float(v) for v in scale]

    for _ in range(rounds):
        mixed = [[0.0] * n for _ in range(n)]
        for i in range(n):
            wi = w[i]
            mi = mixed[i]
            for m in range(n):
                s = 0.0
                for j in range(n):
                    s += wi[j] * e[j][m]
                mi[m] = s
            mi[i] = acts[i]
        e = mixed
        for i in range(n):
            cnt[i] += 1
            ei = e[i]
            xn = ei[i]
            if use_gradient:
                g = _gradient(i, ei, in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale, guard)
                alpha = step_a / (step_b + cnt[i]) ** step_tau
                xn = xn - alpha * g
                if xn < 0.0:
                    xn = 0.0
                elif xn > x_max:
                    xn = x_max
            acts[i] = xn
            ei[i] = xn

    actions[:] = acts
    for i in range(n):
        est[i, :] = e[i]
    counts[:] = cnt


def pg_run(
    x, iters,
    in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale,
    step_a, step_b, step_tau, x_max, guard,
):
    """Simultaneous projected gradient descent in place, k = 1..iters."""
    n = len(x)
    xs = [float(v) for v in x]
    in_ptr = [int(v) for v in in_ptr]
    in_idx = [int(v) for v in in_idx]
    in_q = [float(v) for v in in_q]
    out_ptr = [int(v) for v in out_ptr]
    out_idx = [int(v) for v in out_idx]
    out_q = [float(v) for v in out_q]
    h = [float(v) for v in h]
    scale = [float(v) for v in scale]
    grads = [0.0] * n

    for k in range(1, iters + 1):
        alpha = step_a / (step_b + k) ** step_tau
        for i in range(n):
            grads[i] = _gradient(i, xs, in_ptr, in_idx, in_q, out_ptr, out_idx, out_q, h, scale, guard)
        for i in range(n):
            xn = xs[i] - alpha * grads[i]
            if xn < 0.0:
                xn = 0.0
            elif xn > x_max:
                xn = x_max
            xs[i] = xn

    x[:] = xs
