"""Pointwise tensor calculus on a Hessian manifold.

In the flat coordinates of a potential ``psi`` the metric is ``g_ij = psi_ij``,
its derivatives are the third partials ``C_ijk = psi_ijk`` and the fourth
partials give the second derivatives of ``g``. Everything here is assembled
from those three tensors.

Connections are stored as ``gamma[k, i, j]`` (upper index first) with the
partials ``dgamma[m, k, i, j]``. The alpha pencil is ``LC + alpha * C`` with
``C`` raised on its last slot, so the flat pair sits at ``alpha = -1/2`` and
``alpha = +1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError, TransportError
from .models import PotentialModel

DUAL_DRIFT_LIMIT = 1e-3
STEPS_PER_UNIT_LENGTH = 200


@dataclass(frozen=True, eq=False)
class MetricTensor:
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray | None = None
    ddg: np.ndarray | None = None

    @classmethod
    def from_array(cls, g, dg=None, ddg=None, sym_tol: float = 1e-12) -> "MetricTensor":
        g = np.array(g, dtype=float)
        scale = max(1.0, float(np.max(np.abs(g))))
        if np.max(np.abs(g - g.T)) > sym_tol * scale:
            raise DomainError("metric is not symmetric")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise DomainError("metric is not positive-definite") from None
        return cls(g, np.linalg.inv(g), dg, ddg)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def inner(self, X, Y) -> float:
        return float(np.asarray(X) @ self.g @ np.asarray(Y))

    def determinant(self) -> float:
        return float(np.linalg.det(self.g))


@dataclass(frozen=True, eq=False)
class SymmetricThirdTensor:
    C: np.ndarray
    dC: np.ndarray | None = None

    def asymmetry(self) -> float:
        """Largest deviation from total symmetry over the six index permutations."""
        return max(float(np.max(np.abs(self.C - self.C.transpose(p)))) for p in permutations(range(3)))

    def is_symmetric(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.C))))
        return self.asymmetry() <= tol * scale


@dataclass(frozen=True, eq=False)
class StructuralConstants:
    """Product constants ``Cup[k, i, j]``: ``e_i o e_j = Cup[k, i, j] e_k``."""

    Cup: np.ndarray
    dCup: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class ConnectionField:
    gamma: np.ndarray
    dgamma: np.ndarray | None = None

    def __add__(self, other: "ConnectionField") -> "ConnectionField":
        return ConnectionField(self.gamma + other.gamma, _add_opt(self.dgamma, other.dgamma))

    def scaled(self, factor: float) -> "ConnectionField":
        return ConnectionField(factor * self.gamma, None if self.dgamma is None else factor * self.dgamma)

    def torsion(self) -> float:
        return float(np.max(np.abs(self.gamma - self.gamma.transpose(0, 2, 1))))

    def lowered(self, metric: MetricTensor) -> np.ndarray:
        """``Gamma_ijk = g_kl Gamma^l_ij`` as ``out[i, j, k]``."""
        return np.einsum("kl,lij->ijk", metric.g, self.gamma)


def _add_opt(a, b):
    if a is None or b is None:
        return None
    return a + b


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    R: np.ndarray

    def norm(self) -> float:
        return float(np.max(np.abs(self.R)))

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.R + self.R.transpose(0, 2, 1, 3))))


@dataclass(frozen=True, eq=False)
class PointGeometry:
    """Metric, AC tensor and Levi-Civita connection at one point of a model."""

    point: np.ndarray
    metric: MetricTensor
    ac: SymmetricThirdTensor
    product: StructuralConstants = field(repr=False)
    levi_civita: ConnectionField = field(repr=False)

    def alpha(self, alpha: float) -> ConnectionField:
        return alpha_connection(self.levi_civita, self.product, alpha)


# --- construction from a model ------------------------------------------------

def metric_at(model: PotentialModel, x) -> MetricTensor:
    """Hessian metric ``g_ij = d_i d_j psi`` (with its first two derivatives)."""
    jet = model.jet(x, order=4)
    return MetricTensor.from_array(jet.hessian, dg=jet.third, ddg=jet.fourth)


def ac_tensor_at(model: PotentialModel, x) -> SymmetricThirdTensor:
    """Amari-Chentsov tensor ``C_ijk = d_i d_j d_k psi`` and its gradient."""
    jet = model.jet(x, order=4)
    return SymmetricThirdTensor(jet.third, jet.fourth)


def structural_constants(metric: MetricTensor, ac: SymmetricThirdTensor) -> StructuralConstants:
    Cup = kernels.raise_last(metric.g_inv, ac.C)
    dCup = None
    if ac.dC is not None and metric.dg is not None:
        dCup = kernels.raise_last_derivative(metric.g_inv, metric.dg, ac.C, ac.dC)
    return StructuralConstants(Cup, dCup)


def levi_civita(metric: MetricTensor) -> ConnectionField:
    """Christoffel symbols from the metric formula; needs ``dg`` (and ``ddg`` for ``dgamma``)."""
    if metric.dg is None:
        raise ValueError("metric derivatives are required for the Levi-Civita connection")
    n = metric.dim
    ddg = metric.ddg if metric.ddg is not None else np.zeros((n,) * 4)
    L, dL = kernels.christoffel_first_kind(metric.dg, ddg)
    gamma = kernels.raise_last(metric.g_inv, L)
    dgamma = None
    if metric.ddg is not None:
        dgamma = kernels.raise_last_derivative(metric.g_inv, metric.dg, L, dL)
    return ConnectionField(gamma, dgamma)


def geometry_at(model: PotentialModel, x) -> PointGeometry:
    jet = model.jet(x, order=4)
    metric = MetricTensor.from_array(jet.hessian, dg=jet.third, ddg=jet.fourth)
    ac = SymmetricThirdTensor(jet.third, jet.fourth)
    return PointGeometry(
        point=jet.point,
        metric=metric,
        ac=ac,
        product=structural_constants(metric, ac),
        levi_civita=levi_civita(metric),
    )


def levi_civita_at(model: PotentialModel, x) -> ConnectionField:
    return levi_civita(metric_at(model, x))


def hessian_levi_civita(metric: MetricTensor, ac: SymmetricThirdTensor) -> ConnectionField:
    """Shortcut valid in flat coordinates: ``LC = Cup / 2``."""
    return ConnectionField(0.5 * kernels.raise_last(metric.g_inv, ac.C))


# --- algebra on the tangent space ---------------------------------------------

def statistical_product(metric: MetricTensor, ac: SymmetricThirdTensor | np.ndarray, X, Y) -> np.ndarray:
    """``(X o Y)^k = g^kl C_ijl X^i Y^j``."""
    C = ac.C if isinstance(ac, SymmetricThirdTensor) else np.asarray(ac)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n = metric.dim
    if X.shape != (n,) or Y.shape != (n,):
        raise ValueError(f"tangent vectors must have shape ({n},)")
    # symmetric outer product keeps X o Y == Y o X bit for bit
    sym = 0.5 * (np.outer(X, Y) + np.outer(Y, X))
    lowered = np.einsum("ijl,ij->l", C, sym)
    return metric.g_inv @ lowered


def yukawa_contractions(metric: MetricTensor, ac: SymmetricThirdTensor | np.ndarray) -> tuple[float, float]:
    """``(C_ijk C^ijk, C_i C^i)`` with ``C_i = g^jl C_ijl``."""
    C = ac.C if isinstance(ac, SymmetricThirdTensor) else np.asarray(ac)
    full, trace = kernels.yukawa_parts(metric.g_inv, np.ascontiguousarray(C))
    return float(full), float(trace)


def yukawa_term(metric: MetricTensor, ac: SymmetricThirdTensor | np.ndarray) -> float:
    full, trace = yukawa_contractions(metric, ac)
    return full - trace


# --- connection pencil ----------------------------------------------------------

def alpha_connection(lc: ConnectionField, product: StructuralConstants, alpha: float) -> ConnectionField:
    """``LC + alpha * Cup``; identical to the Dubrovin connection ``LC + alpha (X o Y)``."""
    if alpha == 0.0:
        return lc
    dgamma = None
    if lc.dgamma is not None and product.dCup is not None:
        dgamma = lc.dgamma + alpha * product.dCup
    return ConnectionField(lc.gamma + alpha * product.Cup, dgamma)


def dual_connection(conn: ConnectionField, lc: ConnectionField) -> ConnectionField:
    """Metric dual ``2 LC - Gamma``."""
    dgamma = None
    if conn.dgamma is not None and lc.dgamma is not None:
        dgamma = 2.0 * lc.dgamma - conn.dgamma
    return ConnectionField(2.0 * lc.gamma - conn.gamma, dgamma)


def contravariant_connection(conn: ConnectionField, metric: MetricTensor) -> np.ndarray:
    """``out[i, j, k] = -g^is Gamma^j_sk``."""
    return -np.einsum("is,jsk->ijk", metric.g_inv, conn.gamma)


def riemann_curvature(conn: ConnectionField) -> CurvatureTensor:
    if conn.dgamma is None:
        raise ValueError("curvature needs the connection's partial derivatives")
    return CurvatureTensor(kernels.riemann(np.ascontiguousarray(conn.gamma), np.ascontiguousarray(conn.dgamma)))


def pencil_curvature(model: PotentialModel, x, alpha: float) -> CurvatureTensor:
    return riemann_curvature(geometry_at(model, x).alpha(alpha))


# --- parallel transport -------------------------------------------------------

Curve = Callable[[float], tuple[np.ndarray, np.ndarray]]
ConnectionSpec = float | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class StraightLine:
    start: np.ndarray
    end: np.ndarray

    def __call__(self, t: float):
        start = np.asarray(self.start, dtype=float)
        end = np.asarray(self.end, dtype=float)
        return start + t * (end - start), end - start

    @property
    def length(self) -> float:
        return float(np.linalg.norm(np.asarray(self.end, float) - np.asarray(self.start, float)))


def straight_line(start, end) -> StraightLine:
    return StraightLine(np.asarray(start, dtype=float), np.asarray(end, dtype=float))


def _connection_getter(model: PotentialModel, spec: ConnectionSpec):
    if callable(spec):
        return spec
    weight = 0.5 + float(spec)

    def gamma_at(x):
        # flat coordinates: LC + alpha * Cup = (1/2 + alpha) * Cup
        jet = model.jet(x, order=3)
        return weight * kernels.raise_last(np.linalg.inv(jet.hessian), jet.third)

    return gamma_at


def pairing_drift(model: PotentialModel, conn_x: ConnectionSpec, conn_y: ConnectionSpec, curve: Curve,
                  X0, Y0, steps: int | None = None, dual: bool | None = None) -> float:
    """Transport ``X0`` under ``conn_x`` and ``Y0`` under ``conn_y``; return the worst
    ``|g(X(t), Y(t)) - g(X0, Y0)|`` over the step checkpoints.

    Connections are pencil parameters ``alpha`` or callables ``x -> gamma``.
    A pair of alphas summing to zero is treated as dual; a dual pair drifting
    more than ``1e-3`` raises :class:`TransportError`.
    """
    if steps is None:
        length = getattr(curve, "length", 1.0)
        steps = max(1, int(np.ceil(STEPS_PER_UNIT_LENGTH * max(length, 1e-12))))
    if dual is None:
        dual = not callable(conn_x) and not callable(conn_y) and float(conn_x) == -float(conn_y)
    gx = _connection_getter(model, conn_x)
    gy = _connection_getter(model, conn_y)
    X = np.asarray(X0, dtype=float).copy()
    Y = np.asarray(Y0, dtype=float).copy()
    x0, _ = curve(0.0)
    reference = float(X @ model.jet(x0, order=3).hessian @ Y)

    def rhs(t, X, Y):
        x, v = curve(t)
        return kernels.transport_rhs(gx(x), v, X), kernels.transport_rhs(gy(x), v, Y)

    h = 1.0 / steps
    worst = 0.0
    for step in range(steps):
        t = step * h
        k1 = rhs(t, X, Y)
        k2 = rhs(t + h / 2, X + h / 2 * k1[0], Y + h / 2 * k1[1])
        k3 = rhs(t + h / 2, X + h / 2 * k2[0], Y + h / 2 * k2[1])
        k4 = rhs(t + h, X + h * k3[0], Y + h * k3[1])
        X = X + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        Y = Y + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        x, _ = curve(t + h)
        worst = max(worst, abs(float(X @ model.jet(x, order=3).hessian @ Y) - reference))
    if dual and worst > DUAL_DRIFT_LIMIT:
        raise TransportError(f"dual pair drifted by {worst:.3e} > {DUAL_DRIFT_LIMIT}")
    return worst
