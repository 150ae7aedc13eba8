# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels.

Hot loops of the gossip simulator and the projected-gradient solver.
Mirror of ``feedgame._kernels_py``: every arithmetic expression and
accumulation order matches the pure-Python twin so results are
bit-identical (the build also disables FP contraction).
"""
from libc.math cimport sqrt, pow
from libc.stdint cimport int64_t

import numpy as np

COMPILED = True


cdef inline double _gradient(
    Py_ssize_t i, double* x,
    int64_t[::1] in_ptr, int64_t[::1] in_idx, double[::1] in_q,
    int64_t[::1] out_ptr, int64_t[::1] out_idx, double[::1] out_q,
    double[::1] h, double[::1] scale, double guard,
) nogil:
    cdef double g = h[i]
    cdef double s
    cdef Py_ssize_t t, r, l
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
    double[::1] actions, double[:, ::1] est, int64_t[::1] counts,
    int64_t[::1] edge_u, int64_t[::1] edge_v, int64_t[::1] activations,
    int64_t[::1] in_ptr, int64_t[::1] in_idx, double[::1] in_q,
    int64_t[::1] out_ptr, int64_t[::1] out_idx, double[::1] out_q,
    double[::1] h, double[::1] scale,
    double step_a, double step_b, double step_tau, double x_max, double guard,
    bint use_gradient=True,
):
    """Run one batch of asynchronous edge activations in place."""
    cdef Py_ssize_t n = actions.shape[0]
    cdef Py_ssize_t t, m, u, v, p, side
    cdef double au, av, avg, g, alpha, xn
    with nogil:
        for t in range(activations.shape[0]):
            u = edge_u[activations[t]]
            v = edge_v[activations[t]]
            for m in range(n):
                au = est[u, m]
                av = est[v, m]
                avg = (au + av) / 2.0
                if m != u:
                    est[u, m] = avg
                if m != v:
                    est[v, m] = avg
            for side in range(2):
                p = u if side == 0 else v
                counts[p] += 1
                xn = est[p, p]
                if use_gradient:
                    g = _gradient(p, &est[p, 0], in_ptr, in_idx, in_q,
                                  out_ptr, out_idx, out_q, h, scale, guard)
                    alpha = step_a / pow(step_b + counts[p], step_tau)
                    xn = xn - alpha * g
                    if xn < 0.0:
                        xn = 0.0
                    elif xn > x_max:
                        xn = x_max
                actions[p] = xn
                est[p, p] = xn


def sync_rounds(
    double[::1] actions, double[:, ::1] est, int64_t[::1] counts,
    double[:, ::1] weights, Py_ssize_t rounds,
    int64_t[::1] in_ptr, int64_t[::1] in_idx, double[::1] in_q,
    int64_t[::1] out_ptr, int64_t[::1] out_idx, double[::1] out_q,
    double[::1] h, double[::1] scale,
    double step_a, double step_b, double step_tau, double x_max, double guard,
    bint use_gradient=True,
):
    """Run synchronous consensus+gradient rounds in place."""
    cdef Py_ssize_t n = actions.shape[0]
    mixed_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] mixed = mixed_arr
    cdef Py_ssize_t rd, i, m, j
    cdef double s, g, alpha, xn
    with nogil:
        for rd in range(rounds):
            for i in range(n):
                for m in range(n):
                    s = 0.0
                    for j in range(n):
                        s += weights[i, j] * est[j, m]
                    mixed[i, m] = s
                mixed[i, i] = actions[i]
            for i in range(n):
                for m in range(n):
                    est[i, m] = mixed[i, m]
            for i in range(n):
                counts[i] += 1
                xn = est[i, i]
                if use_gradient:
                    g = _gradient(i, &est[i, 0], in_ptr, in_idx, in_q,
                                  out_ptr, out_idx, out_q, h, scale, guard)
                    alpha = step_a / pow(step_b + counts[i], step_tau)
                    xn = xn - alpha * g
                    if xn < 0.0:
                        xn = 0.0
                    elif xn > x_max:
                        xn = x_max
                actions[i] = xn
                est[i, i] = xn


def pg_run(
    double[::1] x, Py_ssize_t iters,
    int64_t[::1] in_ptr, int64_t[::1] in_idx, double[::1] in_q,
    int64_t[::1] out_ptr, int64_t[::1] out_idx, double[::1] out_q,
    double[::1] h, double[::1] scale,
    double step_a, double step_b, double step_tau, double x_max, double guard,
):
    """Simultaneous projected gradient descent in place, k = 1..iters."""
    cdef Py_ssize_t n = x.shape[0]
    grads_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] grads = grads_arr
    cdef Py_ssize_t k, i
    cdef double alpha, xn
    with nogil:
        for k in range(1, iters + 1):
            alpha = step_a / pow(step_b + k, step_tau)
            for i in range(n):
                grads[i] = _gradient(i, &x[0], in_ptr, in_idx, in_q,
                                     out_ptr, out_idx, out_q, h, scale, guard)
            for i in range(n):
                xn = x[i] - alpha * grads[i]
                if xn < 0.0:
                    xn = 0.0
                elif xn > x_max:
                    xn = x_max
                x[i] = xn
