import itertools

import numpy as np
import pytest

from frobgeom.errors import DomainError, TransportError
from frobgeom.geometry import (
    MetricTensor,
    alpha_connection,
    contravariant_connection,
    dual_connection,
    geometry_at,
    hessian_levi_civita,
    levi_civita_at,
    pairing_drift,
    pencil_curvature,
    riemann_curvature,
    statistical_product,
    straight_line,
    yukawa_contractions,
    yukawa_term,
)
from frobgeom.kernels import vectorized

from ._oracles import metric_only_christoffel, oracle_riemann
from .conftest import GAS_GRID

POINTS = [(0.5, 0.1), (1.0, 0.5), (1.5, 1.0), (2.0, 3.0)]


def test_metric_validation():
    with pytest.raises(DomainError):
        MetricTensor.from_array([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(DomainError):
        MetricTensor.from_array([[1.0, 0.5], [0.0, 1.0]])
    m = MetricTensor.from_array(np.diag([2.0, 3.0]))
    assert m.determinant() == pytest.approx(6.0)
    assert m.inner([1, 1], [1, 2]) == 8.0


def test_product_is_commutative_and_invariant(gas, rng):
    for x in POINTS:
        geo = geometry_at(gas, x)
        for _ in range(100):
            X, Y, Z = rng.standard_normal((3, 2))
            XY = statistical_product(geo.metric, geo.ac, X, Y)
            assert np.array_equal(XY, statistical_product(geo.metric, geo.ac, Y, X))
            scale = np.max(np.abs(geo.ac.C)) * np.linalg.norm(X) * np.linalg.norm(Y) * np.linalg.norm(Z)
            YZ = statistical_product(geo.metric, geo.ac, Y, Z)
            assert abs(geo.metric.inner(XY, Z) - geo.metric.inner(X, YZ)) <= 1e-10 * scale


def test_product_structure_constants(bose):
    geo = geometry_at(bose, (1.0, 0.5))
    e = np.eye(2)
    for i, j in itertools.product(range(2), repeat=2):
        np.testing.assert_allclose(statistical_product(geo.metric, geo.ac, e[i], e[j]), geo.product.Cup[:, i, j],
                                   rtol=1e-13)
    with pytest.raises(ValueError):
        statistical_product(geo.metric, geo.ac, np.ones(3), np.ones(2))


def test_ac_tensor_is_totally_symmetric(gas):
    for x in GAS_GRID:
        assert geometry_at(gas, x).ac.is_symmetric(1e-12)


def test_levi_civita_is_half_the_raised_ac_tensor(gas):
    for x in POINTS:
        geo = geometry_at(gas, x)
        np.testing.assert_allclose(geo.levi_civita.gamma, 0.5 * geo.product.Cup, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(geo.levi_civita.gamma, hessian_levi_civita(geo.metric, geo.ac).gamma, rtol=1e-12)
        np.testing.assert_allclose(geo.levi_civita.dgamma, 0.5 * geo.product.dCup, rtol=1e-10, atol=1e-12)
        assert geo.levi_civita.torsion() == 0.0


def test_levi_civita_from_metric_only(bose):
    x = (1.2, 0.8)
    np.testing.assert_allclose(levi_civita_at(bose, x).gamma, metric_only_christoffel(bose, x), rtol=1e-6)


def test_dual_pair_identities(gas):
    for x in POINTS:
        geo = geometry_at(gas, x)
        primal, dual = geo.alpha(-0.5), geo.alpha(0.5)
        assert np.max(np.abs(primal.gamma)) <= 1e-15
        np.testing.assert_allclose(dual_connection(primal, geo.levi_civita).gamma, dual.gamma, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(dual.lowered(geo.metric) - primal.lowered(geo.metric), geo.ac.C,
                                   rtol=1e-10, atol=1e-12)
        # the dual of the dual is the original connection
        back = dual_connection(dual_connection(geo.alpha(0.3), geo.levi_civita), geo.levi_civita)
        np.testing.assert_allclose(back.gamma, geo.alpha(0.3).gamma, rtol=1e-12, atol=1e-14)


def test_alpha_pencil_is_linear(bose):
    geo = geometry_at(bose, (1.0, 0.5))
    a = alpha_connection(geo.levi_civita, geo.product, 0.7)
    b = geo.levi_civita + geo.alpha(1.0).scaled(0.7) + geo.levi_civita.scaled(-0.7)
    np.testing.assert_allclose(a.gamma, b.gamma, rtol=1e-13)
    np.testing.assert_allclose(a.dgamma, b.dgamma, rtol=1e-12)


def test_pencil_curvature_is_quadratic_in_alpha(bose):
    # R(alpha) = (alpha^2 - 1/4) R_assoc for a Hessian metric in flat coordinates
    x = (1.0, 0.5)
    base = riemann_curvature(geometry_at(bose, x).alpha(0.0)).R / -0.25
    for a in (-1.0, 0.25, 0.9, 2.0):
        np.testing.assert_allclose(pencil_curvature(bose, x, a).R, (a * a - 0.25) * base, rtol=1e-9, atol=1e-12)


def test_curvature_matches_metric_only_oracle(bose):
    x = (1.0, 0.5)
    _, R_oracle = oracle_riemann(bose, x)
    R = riemann_curvature(geometry_at(bose, x).levi_civita)
    scale = np.max(np.abs(R_oracle))
    assert scale > 1e-4
    assert np.max(np.abs(R.R - R_oracle)) <= 1e-5 * scale
    assert R.antisymmetry_defect() <= 1e-12 * scale


def test_classical_gas_is_flat_for_every_alpha(classical):
    for x in POINTS:
        geo = geometry_at(classical, x)
        for a in (-1.0, 0.0, 0.3, 2.0):
            conn = geo.alpha(a)
            assert riemann_curvature(conn).norm() <= 1e-9 * (1 + np.max(np.abs(conn.gamma)) ** 2)


def test_curvature_needs_derivatives(bose):
    geo = geometry_at(bose, (1.0, 1.0))
    with pytest.raises(ValueError):
        riemann_curvature(hessian_levi_civita(geo.metric, geo.ac))


def test_contravariant_connection_sign(bose):
    """Compare with the covariant derivative of a constant 1-form obtained through the metric."""
    x = np.array([1.1, 0.6])
    omega = np.array([0.7, -1.3])
    geo = geometry_at(bose, x)
    lc = geo.levi_civita
    h = 1e-5
    dV = np.empty((2, 2))  # dV[s, l] = d_s (g^-1 omega)^l
    for s in range(2):
        e = np.zeros(2)
        e[s] = h
        vp = np.linalg.solve(bose.jet(x + e, order=3).hessian, omega)
        vm = np.linalg.solve(bose.jet(x - e, order=3).hessian, omega)
        dV[s] = (vp - vm) / (2 * h)
    V = geo.metric.g_inv @ omega
    nabla_V = dV + np.einsum("lsm,m->sl", lc.gamma, V)  # [s, l]
    expected = np.einsum("is,kl,sl->ik", geo.metric.g_inv, geo.metric.g, nabla_V)
    got = np.einsum("ijk,j->ik", contravariant_connection(lc, geo.metric), omega)
    np.testing.assert_allclose(got, expected, rtol=1e-7, atol=1e-9)


def test_yukawa_contractions_classical(classical):
    for beta, gamma in GAS_GRID:
        geo = geometry_at(classical, (beta, gamma))
        full, trace = yukawa_contractions(geo.metric, geo.ac)
        expected = 20 / 3 * (beta**1.5 / (2 * np.pi) ** 1.5) * np.exp(gamma)
        assert full == pytest.approx(expected, rel=1e-12)
        assert abs(full - trace) <= 1e-12 * expected


def test_yukawa_matches_reference_einsum(bose):
    geo = geometry_at(bose, (0.7, 0.2))
    full, trace = vectorized.yukawa_parts(geo.metric.g_inv, geo.ac.C)
    assert yukawa_term(geo.metric, geo.ac) == pytest.approx(full - trace, rel=1e-12)


# parallel transport ------------------------------------------------------------

def test_dual_transport_preserves_pairing(gas):
    curve = straight_line((1.0, 0.5), (1.5, 1.5))
    drift = pairing_drift(gas, 0.5, -0.5, curve, [1.0, 0.3], [-0.2, 1.0])
    assert drift <= 1e-6


def test_single_connection_transport_drifts(bose):
    curve = straight_line((1.0, 0.5), (1.5, 1.5))
    assert pairing_drift(bose, -0.5, -0.5, curve, [1.0, 0.3], [-0.2, 1.0]) > 1e-3
    assert pairing_drift(bose, 0.0, 0.0, curve, [1.0, 0.3], [-0.2, 1.0]) <= 1e-6  # LC is metric


def test_flat_quadratic_has_no_drift(quad):
    curve = straight_line((-1.0, 0.5), (2.0, 1.0))
    assert pairing_drift(quad, -0.5, -0.5, curve, [1.0, 0.0], [0.3, 1.0]) <= 1e-14


def test_transport_error_for_broken_dual_pair(bose):
    curve = straight_line((1.0, 0.5), (1.5, 1.5))

    def wrong(x):
        jet = bose.jet(x, order=3)
        return 3.0 * np.einsum("kl,ijl->kij", np.linalg.inv(jet.hessian), jet.third)

    with pytest.raises(TransportError):
        pairing_drift(bose, wrong, lambda x: np.zeros((2, 2, 2)), curve, [1.0, 0.3], [-0.2, 1.0], dual=True)
