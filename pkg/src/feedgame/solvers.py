"""Centralized full-information equilibrium solvers and NE certificates.

Two independent routes to the equilibrium (cyclic best-response sweeps and
simultaneous projected gradient) plus two certificates (a KKT residual in
gradient units and a best-response gap in action units). Each player's cost
is strictly convex in his own action whenever he has a follower, so the 1-D
best response is unique; follower-less players best-respond with zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import model
from ._backend import kernels
from .model import GameInstance

BR_BISECTION_TOL = 1e-10     # absolute tolerance on the 1-D minimizer
DEFAULT_SWEEP_TOL = 1e-10    # max per-sweep action change
DEFAULT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class StepSchedule:
    """Diminishing step sizes alpha(k) = a / (b + k)^tau.

    tau in (0.5, 1] makes the schedule non-summable but square-summable.
    """

    a: float = 1.0
    b: float = 10.0
    tau: float = 0.7

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"step numerator must be positive, got {self.a}")
        if self.b < 0:
            raise ValueError(f"step offset must be nonnegative, got {self.b}")
        if not 0.5 < self.tau <= 1.0:
            raise ValueError(f"step exponent must lie in (0.5, 1], got {self.tau}")

    def alpha(self, k: int) -> float:
        return self.a / (self.b + k) ** self.tau


@dataclass
class NEReport:
    """Outcome of a solver run.

    residual: KKT violation at the returned profile (gradient units).
    br_gap: largest action change any single player could make by
        best-responding (action units).
    """

    profile: np.ndarray
    residual: float
    br_gap: float
    iterations: int
    converged: bool


def best_response(game: GameInstance, i: int, x: Sequence[float]) -> float:
    """Minimize player i's cost over [0, x_max], opponents fixed at x.

    Closed form when i has exactly one follower; otherwise bisection on the
    monotone own-action gradient.
    """
    params = game.params
    followers = game.g_c.out_list(i)
    if not followers:
        # cost is cost_per_unit * x_i plus terms independent of x_i
        return 0.0
    if len(followers) == 1:
        l = followers[0]
        q_il = params.interest[(i, l)]
        others = model._feed_mass_excluding(game, l, x, i)
        target_mass = (params.utility_scale[l - 1] * q_il / (2.0 * params.cost_per_unit[i - 1])) ** 2
        t = (target_mass - others) / q_il
        return min(max(t, 0.0), params.x_max)

    y = np.array(x, dtype=np.float64)

    def g(t: float) -> float:
        y[i - 1] = t
        return model.own_gradient(game, i, y)

    if g(0.0) >= 0.0:
        return 0.0
    if g(params.x_max) <= 0.0:
        return params.x_max
    lo, hi = 0.0, params.x_max
    while hi - lo > BR_BISECTION_TOL:
        mid = (lo + hi) / 2.0
        if g(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def ne_residual(game: GameInstance, x: Sequence[float]) -> float:
    """KKT violation: worst first-order optimality breach over all players.

    Interior actions need zero gradient; actions at a bound only need the
    gradient to point out of the feasible interval.
    """
    x = np.asarray(x, dtype=np.float64)
    x_max = game.params.x_max
    worst = 0.0
    for i in range(1, game.n + 1):
        g = model.own_gradient(game, i, x)
        xi = x[i - 1]
        if xi <= 0.0:
            v = max(0.0, -g)
        elif xi >= x_max:
            v = max(0.0, g)
        else:
            v = abs(g)
        worst = max(worst, v)
    return worst


def br_gap(game: GameInstance, x: Sequence[float]) -> float:
    """Largest |x_i - best_response_i(x)|: an NE certificate in action units."""
    x = np.asarray(x, dtype=np.float64)
    return max(abs(x[i - 1] - best_response(game, i, x)) for i in range(1, game.n + 1))


def best_response_iteration(
    game: GameInstance,
    x0: Sequence[float],
    tol: float = DEFAULT_SWEEP_TOL,
    max_sweeps: int = 200,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> NEReport:
    """Cyclic Gauss-Seidel best-response sweeps (ascending player id).

    Stops when the largest action change in a sweep drops below tol.
    Non-convergence is reported via the flag, not an exception.
    """
    x = model.as_profile(game, x0).copy()
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        change = 0.0
        for i in range(1, game.n + 1):
            new = best_response(game, i, x)
            change = max(change, abs(new - x[i - 1]))
            x[i - 1] = new
        if change < tol:
            converged = True
            break
    residual = ne_residual(game, x)
    return NEReport(
        profile=x,
        residual=residual,
        br_gap=br_gap(game, x),
        iterations=sweeps,
        converged=converged and residual <= residual_tol,
    )


def full_info_projected_gradient(
    game: GameInstance,
    x0: Sequence[float],
    schedule: StepSchedule = StepSchedule(),
    iters: int = 100_000,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> NEReport:
    """Simultaneous projected-gradient baseline with diminishing steps.

    All players step at once against the true profile (full information):
    x_i <- clamp(x_i - alpha(k) * grad_i(x)). The hot loop runs in the
    selected kernel backend.
    """
    x = model.as_profile(game, x0).copy()
    t = game.tables()
    kernels.pg_run(
        x, iters,
        t.in_ptr, t.in_idx, t.in_q, t.out_ptr, t.out_idx, t.out_q,
        t.h, t.scale,
        schedule.a, schedule.b, schedule.tau,
        t.x_max, model.GRAD_GUARD,
    )
    residual = ne_residual(game, x)
    return NEReport(
        profile=x,
        residual=residual,
        br_gap=br_gap(game, x),
        iterations=iters,
        converged=residual <= residual_tol,
    )
