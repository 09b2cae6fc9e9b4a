"""Named check suites reported as PASS / FAIL / SKIP with the measured value."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .analysis import bose_yukawa_closed_form, positivity_series, wdvv_defect
from .errors import DomainError, TransportError
from .geometry import (
    dual_connection,
    geometry_at,
    pairing_drift,
    riemann_curvature,
    statistical_product,
    straight_line,
    yukawa_contractions,
    yukawa_term,
)
from .models import IdealGasModel, PotentialModel, classical_ideal_gas

GAS_POINTS = ((0.5, 0.1), (1.0, 0.5), (1.5, 1.0), (2.0, 3.0))
GAS_CURVE = ((1.0, 0.5), (1.5, 1.5))


@dataclass
class CheckResult:
    name: str
    model: str
    status: str
    measured: float | None = None
    tolerance: float | None = None
    detail: str = ""

    def line(self) -> str:
        meas = "" if self.measured is None else f" measured={self.measured:.3e}"
        tol = "" if self.tolerance is None else f" tol={self.tolerance:.1e}"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{self.status:<4} {self.name} [{self.model}]{meas}{tol}{extra}"

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOLERANCES = {
    "frobenius-axioms": 1e-10,
    "prop3-identities": 1e-10,
    "dual-transport": 1e-6,
    "flat-alpha": 1e-6,
    "wdvv-2d": 1e-9,
    "yukawa-consistency": 1e-8,
    "series-positivity": 0.0,
    "classical-limit": 1e-3,
    "nonflat-nonassociative": 1e-8,
}


def sample_points(model: PotentialModel) -> list[np.ndarray]:
    if isinstance(model, IdealGasModel):
        return [np.array(p) for p in GAS_POINTS]
    box = getattr(model, "box", None) or getattr(getattr(model, "spec", None), "box", None)
    n = model.dim
    if box is None:
        centre, width = np.zeros(n), np.ones(n)
    else:
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        centre, width = 0.5 * (lo + hi), 0.5 * (hi - lo)
    offsets = [np.zeros(n), 0.3 * width * np.linspace(1.0, -0.5, n), -0.25 * width * np.linspace(0.2, 1.0, n)]
    return [centre + o for o in offsets]


def _test_curve(model: PotentialModel):
    if isinstance(model, IdealGasModel):
        return straight_line(*GAS_CURVE)
    pts = sample_points(model)
    return straight_line(pts[1], pts[2])


def check_frobenius_axioms(model, tol, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    commutes = True
    for x in sample_points(model):
        geo = geometry_at(model, x)
        cmax = float(np.max(np.abs(geo.ac.C)))
        worst = max(worst, geo.ac.asymmetry() / max(cmax, 1e-300))
        for _ in range(100):
            X, Y, Z = rng.standard_normal((3, model.dim))
            XY = statistical_product(geo.metric, geo.ac, X, Y)
            commutes &= bool(np.array_equal(XY, statistical_product(geo.metric, geo.ac, Y, X)))
            YZ = statistical_product(geo.metric, geo.ac, Y, Z)
            scale = max(cmax * np.linalg.norm(X) * np.linalg.norm(Y) * np.linalg.norm(Z), 1e-300)
            gap = abs(geo.metric.inner(XY, Z) - geo.metric.inner(X, YZ))
            worst = max(worst, gap / scale)
    ok = commutes and worst <= tol
    return ok, worst, "" if commutes else "product not exactly commutative"


def check_prop3(model, tol):
    worst = 0.0
    for x in sample_points(model):
        geo = geometry_at(model, x)
        lc = geo.levi_civita
        primal, dual = geo.alpha(-0.5), geo.alpha(0.5)
        scale = max(1.0, float(np.max(np.abs(geo.ac.C))))
        worst = max(
            worst,
            float(np.max(np.abs(dual_connection(primal, lc).gamma - dual.gamma))) / scale,
            float(np.max(np.abs((dual.lowered(geo.metric) - primal.lowered(geo.metric)) - geo.ac.C))) / scale,
            float(np.max(np.abs(lc.gamma - 0.5 * geo.product.Cup))) / scale,
        )
    return worst <= tol, worst, ""


def check_dual_transport(model, tol):
    curve = _test_curve(model)
    X0 = np.linspace(1.0, 0.3, model.dim)
    Y0 = np.linspace(-0.2, 1.0, model.dim)
    try:
        drift = pairing_drift(model, 0.5, -0.5, curve, X0, Y0)
    except TransportError as exc:
        return False, float("nan"), str(exc)
    single = pairing_drift(model, -0.5, -0.5, curve, X0, Y0)
    return drift <= tol, drift, f"single-connection drift {single:.3e}"


def check_flat_alpha(model, tol):
    worst = 0.0
    for x in sample_points(model):
        geo = geometry_at(model, x)
        for a in (-0.5, 0.5):
            conn = geo.alpha(a)
            bound = 1.0 + float(np.max(np.abs(conn.gamma))) ** 2
            worst = max(worst, riemann_curvature(conn).norm() / bound)
    return worst <= tol, worst, ""


def check_wdvv_2d(model, tol):
    if model.dim != 2:
        return None, None, f"dimension {model.dim} != 2"
    worst = 0.0
    for x in sample_points(model):
        geo = geometry_at(model, x)
        worst = max(worst, wdvv_defect(geo.metric.g_inv, geo.ac.C).normalized)
    return worst <= tol, worst, ""


def check_yukawa_consistency(model, tol):
    if not isinstance(model, IdealGasModel):
        return None, None, "closed form only for the gas models"
    worst = 0.0
    for beta in np.linspace(0.5, 2.0, 10):
        for gamma in np.linspace(0.1, 3.0, 10):
            x = (beta, gamma)
            geo = geometry_at(model, x)
            lam3 = model.lambda_cubed(x)
            if model.kind == "bose":
                ref = bose_yukawa_closed_form(beta, gamma, model.units)
                worst = max(worst, abs(yukawa_term(geo.metric, geo.ac) - ref) / abs(ref))
            else:
                full, trace = yukawa_contractions(geo.metric, geo.ac)
                expected = 20.0 / 3.0 * lam3 * math.exp(gamma)
                worst = max(worst, abs(full - expected) / expected, abs(full - trace) / expected)
    return worst <= tol, worst, ""


def check_series_positivity(N=12):
    A, bracket = positivity_series(N)
    bounds = {6: 0.33, 7: 1.29, 8: 2.85}
    ok = all(bracket[k] > v for k, v in bounds.items())
    ok &= A[2] == 2.0 and A[3] > 2.2
    ok &= bool(np.all(A.coefficients[2:] > 0) and np.all(bracket.coefficients[6:] > 0))
    ok &= bool(np.all(np.abs(bracket.coefficients[:6]) <= 1e-12))
    margin = min(bracket[6] - 0.33, bracket[7] - 1.29, bracket[8] - 2.85, A[3] - 2.2)
    detail = f"a6={bracket[6]:.5f} a7={bracket[7]:.5f} a8={bracket[8]:.5f} A2={A[2]:g} A3={A[3]:.5f}"
    return ok, margin, detail


def check_classical_limit(model, tol):
    if not (isinstance(model, IdealGasModel) and model.kind == "bose"):
        return None, None, "applies to the Bose gas"
    classical = classical_ideal_gas(model.units)
    worst = 0.0
    for beta in (0.5, 1.0, 2.0):
        for gamma in (8.0, 10.0, 12.0):
            jb = model.jet((beta, gamma), order=3)
            jc = classical.jet((beta, gamma), order=3)
            for tb, tc in ((jb.hessian, jc.hessian), (jb.third, jc.third)):
                worst = max(worst, float(np.max(np.abs(tb / tc - 1.0))))
    x = (1.0, 10.0)
    geo = geometry_at(model, x)
    yuk = yukawa_term(geo.metric, geo.ac) / model.lambda_cubed(x)
    ok = worst <= tol and yuk <= 1e-6
    detail = f"component ratio gap {worst:.2e} (tol {tol:g}); Yukawa/lambda^3 at gamma=10 is {yuk:.6f} (tol 1e-6)"
    return ok, worst, detail


def check_nonflat_nonassociative(model, tol):
    """At every sample point: WDVV violated iff some pencil member away from +-1/2 is curved."""
    mismatches = 0
    alphas = (-1.0, 0.0, 0.25, 1.0)
    for x in sample_points(model):
        geo = geometry_at(model, x)
        wd = wdvv_defect(geo.metric.g_inv, geo.ac.C).normalized
        curved = any(
            riemann_curvature(geo.alpha(a)).norm() / (1.0 + float(np.max(np.abs(geo.alpha(a).gamma))) ** 2) > tol
            for a in alphas
        )
        mismatches += (wd > tol) != curved
    return mismatches == 0, float(mismatches), "count of points where the equivalence fails"


_MODEL_CHECKS: dict[str, Callable] = {
    "frobenius-axioms": check_frobenius_axioms,
    "prop3-identities": check_prop3,
    "dual-transport": check_dual_transport,
    "flat-alpha": check_flat_alpha,
    "wdvv-2d": check_wdvv_2d,
    "yukawa-consistency": check_yukawa_consistency,
    "classical-limit": check_classical_limit,
    "nonflat-nonassociative": check_nonflat_nonassociative,
}
CHECK_NAMES = (*_MODEL_CHECKS, "series-positivity")


def run_checks(models: Sequence[PotentialModel], checks: Sequence[str] | None = None,
               tolerances: dict | None = None, series_order: int = 12) -> list[CheckResult]:
    checks = list(CHECK_NAMES if checks is None else checks)
    unknown = [c for c in checks if c not in CHECK_NAMES]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; available: {', '.join(CHECK_NAMES)}")
    tols = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    results = []
    for model in models:
        for name in checks:
            if name not in _MODEL_CHECKS:
                continue
            try:
                ok, measured, detail = _MODEL_CHECKS[name](model, tols[name])
            except DomainError as exc:
                ok, measured, detail = False, None, f"domain error: {exc}"
            status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
            results.append(CheckResult(name, model.name, status, measured, None if ok is None else tols[name], detail))
    if "series-positivity" in checks:
        ok, margin, detail = check_series_positivity(series_order)
        results.append(CheckResult("series-positivity", "-", "PASS" if ok else "FAIL", margin, None, detail))
    return results
