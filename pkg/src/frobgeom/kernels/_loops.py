"""Explicit index-loop kernels, compiled with numba when it is available.

Index conventions shared by every kernel:

* ``T[i, j, l]`` with the *last* slot lowered is raised to ``Tup[k, i, j]``.
* ``dg[m, i, j]`` is the partial of ``g_ij`` along coordinate ``m``.
* ``gamma[k, i, j]`` is the Christoffel symbol with upper index ``k``.
* ``dgamma[m, k, i, j]`` is its partial along coordinate ``m``.
* ``R[l, i, j, k]`` follows ``dG_i G^l_jk - dG_j G^l_ik + G^l_is G^s_jk - G^l_js G^s_ik``.
"""

import math

import numpy as np

from .._accel import njit


@njit(cache=True)
def polylog_series(s, log_eta, kmax, rel_tol):
    """Neumaier-compensated partial sum of ``sum_k eta**k / k**s``.

    Returns ``(value, terms_used, converged)``. Stops once the geometric tail
    bound beyond the current term drops below ``rel_tol * value``.
    """
    eta = math.exp(log_eta)
    total = 0.0
    comp = 0.0
    k = 1
    while k <= kmax:
        term = math.exp(k * log_eta - s * math.log(k))
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        # largest ratio term_{j+1}/term_j for j >= k
        if s < 0.0:
            r = eta * (1.0 + 1.0 / k) ** (-s)
        else:
            r = eta
        if r < 1.0 and term * r / (1.0 - r) <= rel_tol * abs(total + comp):
            return total + comp, k, True
        k += 1
    return total + comp, kmax, False


@njit(cache=True)
def raise_last(g_inv, T):
    n = g_inv.shape[0]
    out = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for l in range(n):
                    acc += g_inv[k, l] * T[i, j, l]
                out[k, i, j] = acc
    return out


@njit(cache=True)
def inverse_metric_derivative(g_inv, dg):
    """``d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}``."""
    n = g_inv.shape[0]
    out = np.zeros((n, n, n))
    for m in range(n):
        for k in range(n):
            for l in range(n):
                acc = 0.0
                for a in range(n):
                    for b in range(n):
                        acc += g_inv[k, a] * dg[m, a, b] * g_inv[b, l]
                out[m, k, l] = -acc
    return out


@njit(cache=True)
def raise_last_derivative(g_inv, dg, T, dT):
    """Partial ``d_m`` of ``g^{kl} T_ijl`` given ``dT[m, i, j, l]``."""
    n = g_inv.shape[0]
    dginv = inverse_metric_derivative(g_inv, dg)
    out = np.zeros((n, n, n, n))
    for m in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    acc = 0.0
                    for l in range(n):
                        acc += dginv[m, k, l] * T[i, j, l] + g_inv[k, l] * dT[m, i, j, l]
                    out[m, k, i, j] = acc
    return out


@njit(cache=True)
def christoffel_first_kind(dg, ddg):
    """``L_ijl = (d_i g_jl + d_j g_il - d_l g_ij) / 2`` and its partials."""
    n = dg.shape[0]
    L = np.zeros((n, n, n))
    dL = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for l in range(n):
                L[i, j, l] = 0.5 * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j])
                for m in range(n):
                    dL[m, i, j, l] = 0.5 * (ddg[m, i, j, l] + ddg[m, j, i, l] - ddg[m, l, i, j])
    return L, dL


@njit(cache=True)
def riemann(gamma, dgamma):
    n = gamma.shape[0]
    R = np.zeros((n, n, n, n))
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for s in range(n):
                        acc += gamma[l, i, s] * gamma[s, j, k] - gamma[l, j, s] * gamma[s, i, k]
                    R[l, i, j, k] = acc
    return R


@njit(cache=True)
def yukawa_parts(g_inv, C):
    """Return ``(C_ijk C^ijk, C_i C^i)``."""
    n = g_inv.shape[0]
    # raise one slot at a time: O(n^4)
    A = np.zeros((n, n, n))
    for i in range(n):
        for b in range(n):
            for c in range(n):
                acc = 0.0
                for a in range(n):
                    acc += g_inv[i, a] * C[a, b, c]
                A[i, b, c] = acc
    B = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for c in range(n):
                acc = 0.0
                for b in range(n):
                    acc += g_inv[j, b] * A[i, b, c]
                B[i, j, c] = acc
    full = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                up = 0.0
                for c in range(n):
                    up += g_inv[k, c] * B[i, j, c]
                full += C[i, j, k] * up
    trace = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            for l in range(n):
                acc += g_inv[j, l] * C[i, j, l]
        trace[i] = acc
    tr = 0.0
    for i in range(n):
        for j in range(n):
            tr += trace[i] * g_inv[i, j] * trace[j]
    return full, tr


@njit(cache=True)
def wdvv_defect(g_inv, C):
    """``max |C_ija g^ab C_bkl - C_jka g^ab C_bil|`` over all index tuples."""
    n = g_inv.shape[0]
    CG = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for b in range(n):
                acc = 0.0
                for a in range(n):
                    acc += C[i, j, a] * g_inv[a, b]
                CG[i, j, b] = acc
    X = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = 0.0
                    for b in range(n):
                        acc += CG[i, j, b] * C[b, k, l]
                    X[i, j, k, l] = acc
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    d = abs(X[i, j, k, l] - X[j, k, i, l])
                    if d > worst:
                        worst = d
    return worst


@njit(cache=True)
def transport_rhs(gamma, velocity, V):
    """Parallel-transport velocity ``-G^k_ij xdot^i V^j``."""
    n = gamma.shape[0]
    out = np.zeros(n)
    for k in range(n):
        acc = 0.0
        for i in range(n):
            for j in range(n):
                acc += gamma[k, i, j] * velocity[i] * V[j]
        out[k] = -acc
    return out
