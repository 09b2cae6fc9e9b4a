"""Pure-numpy counterparts of the loop kernels (same signatures, same results)."""

import math

import numpy as np

_FIRST_CHUNK = 128
_CHUNK = 1 << 18


def polylog_series(s, log_eta, kmax, rel_tol):
    eta = math.exp(log_eta)
    total = 0.0
    comp = 0.0
    start = 1
    size = _FIRST_CHUNK
    while start <= kmax:
        stop = min(start + size, kmax + 1)
        size = min(2 * size, _CHUNK)
        k = np.arange(start, stop, dtype=np.float64)
        terms = np.exp(k * log_eta - s * np.log(k))
        # tail bound against the running partial sum at every index of the chunk
        running = (total + comp) + np.cumsum(terms)
        r = eta * (1.0 + 1.0 / k) ** (-s) if s < 0.0 else np.full(k.shape, eta)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(r < 1.0, terms * r / (1.0 - r), np.inf)
        ok = np.nonzero(tail <= rel_tol * np.abs(running))[0]
        used = terms if not ok.size else terms[: int(ok[0]) + 1]
        chunk = float(np.sum(used))
        t = total + chunk
        if abs(total) >= abs(chunk):
            comp += (total - t) + chunk
        else:
            comp += (chunk - t) + total
        total = t
        if ok.size:
            return total + comp, start + int(ok[0]), True
        start = stop
    return total + comp, kmax, False


def raise_last(g_inv, T):
    return np.einsum("kl,ijl->kij", g_inv, T)


def inverse_metric_derivative(g_inv, dg):
    return -np.einsum("ka,mab,bl->mkl", g_inv, dg, g_inv)


def raise_last_derivative(g_inv, dg, T, dT):
    dginv = inverse_metric_derivative(g_inv, dg)
    return np.einsum("mkl,ijl->mkij", dginv, T) + np.einsum("kl,mijl->mkij", g_inv, dT)


def christoffel_first_kind(dg, ddg):
    L = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    dL = 0.5 * (ddg + ddg.transpose(0, 2, 1, 3) - ddg.transpose(0, 2, 3, 1))
    return L, dL


def riemann(gamma, dgamma):
    deriv = np.einsum("iljk->lijk", dgamma)
    quad = np.einsum("lis,sjk->lijk", gamma, gamma)
    return deriv - deriv.transpose(0, 2, 1, 3) + quad - quad.transpose(0, 2, 1, 3)


def yukawa_parts(g_inv, C):
    Cup = np.einsum("ia,jb,kc,abc->ijk", g_inv, g_inv, g_inv, C, optimize=True)
    full = float(np.einsum("ijk,ijk->", C, Cup))
    trace = np.einsum("jl,ijl->i", g_inv, C)
    return full, float(trace @ g_inv @ trace)


def wdvv_defect(g_inv, C):
    X = np.einsum("ija,ab,bkl->ijkl", C, g_inv, C, optimize=True)
    return float(np.max(np.abs(X - X.transpose(1, 2, 0, 3))))


def transport_rhs(gamma, velocity, V):
    return -np.einsum("kij,i,j->k", gamma, velocity, V)
