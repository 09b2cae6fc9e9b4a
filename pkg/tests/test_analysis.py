import csv
import io
import json
import math

import numpy as np
import pytest

from frobgeom.analysis import (
    Axis,
    ScanGrid,
    bec_asymptote,
    bose_yukawa_closed_form,
    point_report,
    positivity_series,
    scan,
    wdvv_defect,
    wdvv_residual,
)
from frobgeom.errors import DomainError
from frobgeom.geometry import geometry_at, yukawa_term
from frobgeom.models import REDUCED, Units
from frobgeom.special_functions import polylog, zeta

from .conftest import GAS_GRID


def test_wdvv_vanishes_for_quadratic(quad):
    assert wdvv_residual(quad, (0.3, -1.0)).residual == 0.0


def test_wdvv_violated_for_cubic3d(cubic3d):
    for x in [(0.1, 0.2, -0.3), (-0.2, 0.15, 0.05), (0.3, -0.3, 0.2)]:
        wd = wdvv_residual(cubic3d, x)
        assert wd.residual > 1e-3 * wd.scale


def test_wdvv_holds_for_associative_diagonal_model():
    # C = e1^3 + e2^3 + e3^3 with identity metric is an associative product
    g_inv = np.eye(3)
    C = np.zeros((3, 3, 3))
    for i in range(3):
        C[i, i, i] = 1.0 + i
    assert wdvv_defect(g_inv, C).residual == 0.0


def test_wdvv_classical_gas_is_associative(classical):
    for x in GAS_GRID:
        assert wdvv_residual(classical, x).normalized <= 1e-12


def test_closed_form_matches_contraction(bose):
    for beta, gamma in GAS_GRID:
        geo = geometry_at(bose, (beta, gamma))
        ref = bose_yukawa_closed_form(beta, gamma)
        assert yukawa_term(geo.metric, geo.ac) == pytest.approx(ref, rel=1e-10)


def test_closed_form_domain():
    with pytest.raises(DomainError):
        bose_yukawa_closed_form(1.0, 0.0)
    with pytest.raises(DomainError):
        bec_asymptote(-1.0, 0.1)


def test_asymptote_scaling():
    assert bec_asymptote(1.0, 0.25e-4) == pytest.approx(2.0 * bec_asymptote(1.0, 1e-4), rel=1e-14)
    assert bec_asymptote(4.0, 1e-4) == pytest.approx(8.0 * bec_asymptote(1.0, 1e-4), rel=1e-14)
    expected = 2 * zeta(1.5) * REDUCED.lambda_cubed(1.0) / (5 * math.sqrt(math.pi) * zeta(2.5) * 1e-2)
    assert bec_asymptote(1.0, 1e-4) == pytest.approx(expected, rel=1e-15)


def test_closed_form_approaches_asymptote():
    ratios = [bose_yukawa_closed_form(1.0, g) / bec_asymptote(1.0, g) for g in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))
    assert abs(ratios[2] - 1) < 2e-3


def test_yukawa_scales_with_lambda_cubed():
    units = Units(h=1.7, m=0.4, k_B=2.0)
    for beta, gamma in [(0.6, 0.3), (1.9, 2.0)]:
        ratio = bose_yukawa_closed_form(beta, gamma, units) / bose_yukawa_closed_form(beta, gamma)
        assert ratio == pytest.approx(units.lambda_cubed(beta) / REDUCED.lambda_cubed(beta), rel=1e-13)


# series ---------------------------------------------------------------------

def test_series_leading_coefficients():
    A, bracket = positivity_series(12)
    assert A[0] == 0.0 and A[1] == 0.0 and A[2] == 2.0
    assert A[3] == pytest.approx(5 * (2**-2.5 + 2**-0.5) - 6 * 2**-1.5, rel=1e-15)
    assert bracket.leading_index() == 6
    assert bracket[6] > 0.33 and bracket[7] > 1.29 and bracket[8] > 2.85
    assert np.all(A.coefficients[2:] > 0) and np.all(bracket.coefficients[6:] > 0)
    assert A.order == 12 and len(bracket) == 13


def test_series_reproduce_polylog_expression():
    A, bracket = positivity_series(20)
    eta = 0.05
    l52, l32, l12, lm12 = (polylog(s, eta) for s in (2.5, 1.5, 0.5, -0.5))
    A_direct = 5 * l52 * l12 - 3 * l32**2
    assert A(eta) == pytest.approx(A_direct, rel=1e-12)
    gamma = -math.log(eta)
    via_closed_form = bose_yukawa_closed_form(1.0, gamma) * A_direct**3 / (20 * REDUCED.lambda_cubed(1.0))
    assert bracket(eta) == pytest.approx(via_closed_form, rel=1e-6)


def test_series_order_bounds():
    with pytest.raises(ValueError):
        positivity_series(0)


# scans -----------------------------------------------------------------------

def test_axis_parsing():
    assert Axis.parse("beta=0.5:2:4").values().tolist() == [0.5, 1.0, 1.5, 2.0]
    assert Axis.parse("gamma=1.5").count == 1
    for bad in ("beta", "beta=1:2", "beta=a:b:3", "beta=0:1:0"):
        with pytest.raises(ValueError):
            Axis.parse(bad)
    with pytest.raises(ValueError):
        ScanGrid.from_specs(["beta=1:2:2"], ("beta", "gamma"))


def _grid(nb=4, ng=3, glo=0.1):
    return ScanGrid.from_specs([f"beta=0.5:2:{nb}", f"gamma={glo}:3:{ng}"], ("beta", "gamma"))


def test_scan_layout_and_order(bose):
    result = scan(bose, _grid(), alphas=(0.0, 0.5))
    assert result.columns == ("beta", "gamma", "yukawa", "wdvv_residual", "wdvv_scaled",
                              "curv_alpha_0", "curv_alpha_0.5", "det_g", "status")
    assert [r[:2] for r in result.rows] == _grid().points()
    assert result.rows[0][:2] == (0.5, 0.1) and result.rows[1][:2] == (0.5, 1.55)
    assert all(r[-1] == "ok" for r in result.rows)
    assert np.all(result.column("yukawa") >= -1e-10)


def test_scan_is_deterministic_across_workers(bose):
    serial = scan(bose, _grid(5, 5))
    threaded = scan(bose, _grid(5, 5), workers=4)
    assert serial.to_csv() == threaded.to_csv()
    assert serial.to_json() == threaded.to_json()


def test_scan_marks_out_of_domain_points(bose):
    result = scan(bose, _grid(2, 3, glo=-1.0))
    status = [r[-1] for r in result.rows]
    assert status.count("ok") == 4
    bad = [r for r in result.rows if r[-1] != "ok"]
    assert all(r[-1].startswith("error:") and math.isnan(r[2]) for r in bad)
    rec = result.records()
    assert rec[0]["yukawa"] is None
    assert result.summary()["ok_rows"] == 4


def test_scan_exports_round_trip(classical, tmp_path):
    result = scan(classical, _grid())
    parsed = list(csv.reader(io.StringIO(result.to_csv())))
    assert tuple(parsed[0]) == result.columns
    for row, original in zip(parsed[1:], result.rows):
        assert [float(v) for v in row[:-1]] == list(original[:-1])
    data = json.loads(result.to_json())
    assert json.dumps(data, indent=2) + "\n" == result.to_json()
    result.write(tmp_path / "out.json", "json")
    assert (tmp_path / "out.json").read_text() == result.to_json()
    with pytest.raises(ValueError):
        result.write(tmp_path / "x", "xml")


def test_scan_rejects_mismatched_axes(quad):
    with pytest.raises(ValueError):
        scan(quad, _grid())


def test_point_report_keys(bose):
    rep = point_report(bose, (1.0, 0.5), alphas=(0.0,))
    assert set(rep) == {"point", "metric", "ac_tensor", "yukawa", "wdvv", "curvature", "det_g"}
    assert rep["curvature"][0.0] > 1e-4
