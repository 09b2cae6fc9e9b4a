"""Real polylogarithms on the unit interval, plus the zeta values they need.

``Li_s(eta)`` is evaluated by its defining power series for small ``eta`` and,
close to the branch point ``eta = 1``, by the expansion in ``gamma = -ln eta``::

    Li_s(e^-g) = Gamma(1-s) g^(s-1) + sum_k zeta(s-k) (-g)^k / k!

(with the usual harmonic-number correction when ``s`` is a positive integer).
The expansion converges for ``g < 2 pi``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from . import kernels
from .errors import DomainError

SUPPORTED_ORDERS = (-1.5, -0.5, 0.5, 1.0, 1.5, 2.5)
SERIES_CUTOFF = 0.6
SERIES_MAX_TERMS = 2_000_000_000
_SERIES_REL_TOL = 1e-17
_BRANCH_MAX_TERMS = 150


def _acceleration_weights(n: int) -> tuple[float, ...]:
    # Borwein's d_k for the accelerated alternating series
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(n * math.factorial(n + i - 1) * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    return tuple(float(x) for x in d)


_ETA_TERMS = 40
_ETA_WEIGHTS = _acceleration_weights(_ETA_TERMS)


def dirichlet_eta(s: float) -> float:
    """Alternating zeta ``sum (-1)^(k-1) / k^s`` for ``s > 0`` via series acceleration."""
    if not s > 0.0:
        raise DomainError(f"dirichlet_eta needs s > 0, got {s}")
    d = _ETA_WEIGHTS
    dn = d[-1]
    acc = 0.0
    for k in range(_ETA_TERMS):
        sign = -1.0 if k % 2 else 1.0
        acc += sign * (d[k] - dn) / (k + 1) ** s
    return -acc / dn


@lru_cache(maxsize=4096)
def zeta(s: float) -> float:
    """Riemann zeta on the real line (``s != 1``)."""
    s = float(s)
    if s == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    if s == 0.0:
        return -0.5
    if s < 0.0:
        if s == math.floor(s) and int(s) % 2 == 0:
            return 0.0
        # functional equation onto s' = 1 - s > 1
        return (
            2.0**s
            * math.pi ** (s - 1.0)
            * math.sin(0.5 * math.pi * s)
            * math.gamma(1.0 - s)
            * zeta(1.0 - s)
        )
    return dirichlet_eta(s) / -math.expm1((1.0 - s) * math.log(2.0))


def _is_positive_integer(s: float) -> bool:
    return s >= 1.0 and s == math.floor(s)


@lru_cache(maxsize=256)
def _branch_coefficients(s: float) -> tuple[float, ...]:
    coeffs = []
    for k in range(_BRANCH_MAX_TERMS):
        if s - k == 1.0:
            coeffs.append(0.0)  # pole absorbed in the logarithmic lead term
        else:
            coeffs.append(zeta(s - k) / math.factorial(k))
    return tuple(coeffs)


def branch_expansion(s: float, gamma: float) -> float:
    """``Li_s(e^-gamma)`` from the expansion about the branch point."""
    s = float(s)
    gamma = float(gamma)
    if not 0.0 < gamma < 2.0 * math.pi:
        raise DomainError(f"branch expansion needs 0 < gamma < 2*pi, got {gamma}")
    if _is_positive_integer(s):
        n = int(s)
        harmonic = math.fsum(1.0 / j for j in range(1, n))
        total = (-gamma) ** (n - 1) / math.factorial(n - 1) * (harmonic - math.log(gamma))
    else:
        total = math.gamma(1.0 - s) * gamma ** (s - 1.0)
    power = 1.0
    quiet = 0
    for c in _branch_coefficients(s):
        term = c * power
        total += term
        power *= -gamma
        if abs(term) <= _SERIES_REL_TOL * abs(total):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise DomainError(f"branch expansion did not converge for s={s}, gamma={gamma}")


def power_series(s: float, eta: float, max_terms: int = SERIES_MAX_TERMS) -> float:
    """Direct compensated summation of ``sum eta^k / k^s`` (``0 <= eta < 1``)."""
    if not 0.0 <= eta < 1.0:
        raise DomainError(f"power series needs 0 <= eta < 1, got {eta}")
    if eta == 0.0:
        return 0.0
    return _series_from_log(float(s), math.log(eta), max_terms)


def _series_from_log(s: float, log_eta: float, max_terms: int = SERIES_MAX_TERMS) -> float:
    value, _, converged = kernels.polylog_series(s, log_eta, max_terms, _SERIES_REL_TOL)
    if not converged:
        raise DomainError(f"power series for Li_{s} did not converge in {max_terms} terms")
    return float(value)


def _check_method(method: str) -> None:
    if method not in ("auto", "series", "branch"):
        raise ValueError(f"unknown polylog method {method!r}")


def _evaluate(s: float, eta: float, gamma: float, method: str) -> float:
    if method == "auto":
        if s == 1.0:
            return -math.log(-math.expm1(-gamma))
        if s == 0.0:
            return 1.0 / math.expm1(gamma)
        method = "series" if eta <= SERIES_CUTOFF else "branch"
    if method == "series":
        return _series_from_log(s, -gamma)
    return branch_expansion(s, gamma)


def polylog(s: float, eta: float, method: str = "auto") -> float:
    """Polylogarithm ``Li_s(eta)`` for real ``s`` and ``eta`` in ``[0, 1]``.

    ``eta = 1`` is accepted only for ``s > 1`` where the value is ``zeta(s)``.
    ``method`` forces the power series or the branch-point expansion; the
    default picks the series for ``eta <= 0.6``.
    """
    _check_method(method)
    s = float(s)
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"polylog needs 0 <= eta <= 1, got {eta}")
    if eta == 1.0:
        if s > 1.0:
            return zeta(s)
        raise DomainError(f"Li_{s}(1) diverges for s <= 1")
    if eta == 0.0:
        return 0.0
    return _evaluate(s, eta, -math.log(eta), method)


def polylog_exp(s: float, gamma: float, method: str = "auto") -> float:
    """``Li_s(e^-gamma)`` taking ``gamma = -ln eta`` directly.

    Preferred near condensation: no precision is lost forming ``eta`` first.
    """
    _check_method(method)
    s = float(s)
    gamma = float(gamma)
    if math.isnan(gamma) or gamma < 0.0:
        raise DomainError(f"polylog_exp needs gamma >= 0, got {gamma}")
    if gamma == 0.0:
        if s > 1.0:
            return zeta(s)
        raise DomainError(f"Li_{s}(1) diverges for s <= 1")
    if math.isinf(gamma):
        return 0.0
    return _evaluate(s, math.exp(-gamma), gamma, method)


def polylog_derivative(s: float, eta: float, limit: bool = False) -> float:
    """``d Li_s / d eta = Li_{s-1}(eta) / eta`` on ``0 < eta < 1``.

    At ``eta = 0`` the quotient's limit 1 is returned only with ``limit=True``.
    """
    eta = float(eta)
    if eta == 0.0 and limit:
        return 1.0
    if not 0.0 < eta < 1.0:
        raise DomainError(f"polylog_derivative needs 0 < eta < 1, got {eta}")
    return polylog(float(s) - 1.0, eta) / eta


def polylog_asymptotic(s: float, gamma: float) -> float:
    """Leading singular term ``Gamma(1-s) gamma^(s-1)`` of ``Li_s(e^-gamma)``, ``s < 1``."""
    s = float(s)
    gamma = float(gamma)
    if not s < 1.0:
        raise DomainError(f"asymptotic form applies for s < 1, got {s}")
    if not gamma > 0.0:
        raise DomainError(f"asymptotic form needs gamma > 0, got {gamma}")
    return math.gamma(1.0 - s) * gamma ** (s - 1.0)


def fugacity(gamma: float) -> float:
    return math.exp(-gamma)


def gamma_from_fugacity(eta: float) -> float:
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"fugacity must lie in (0, 1], got {eta}")
    return -math.log(eta)
