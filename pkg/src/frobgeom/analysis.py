"""Scans and scalar diagnostics built on the pointwise geometry."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DomainError
from .geometry import geometry_at, riemann_curvature, yukawa_term
from .models import REDUCED, PotentialModel, Units
from .special_functions import polylog_exp, zeta

DEFAULT_ALPHAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
DEFAULT_SERIES_ORDER = 12


class WDVVResidual(NamedTuple):
    residual: float
    scale: float
    normalized: float


def wdvv_defect(g_inv: np.ndarray, C: np.ndarray) -> WDVVResidual:
    residual = float(kernels.wdvv_defect(np.ascontiguousarray(g_inv), np.ascontiguousarray(C)))
    scale = float(np.max(np.abs(C)) ** 2 * np.max(np.abs(g_inv)))
    normalized = residual / scale if scale > 0.0 else residual
    return WDVVResidual(residual, scale, normalized)


def wdvv_residual(model: PotentialModel, x) -> WDVVResidual:
    """Largest violation of ``C_ija g^ab C_bkl = C_jka g^ab C_bil`` at ``x``.

    ``scale`` is ``max|C|^2 * max|g^-1|`` and ``normalized = residual / scale``.
    """
    jet = model.jet(x, order=3)
    try:
        np.linalg.cholesky(jet.hessian)
    except np.linalg.LinAlgError:
        raise DomainError(f"{model.name}: Hessian not positive-definite at {jet.point}") from None
    return wdvv_defect(np.linalg.inv(jet.hessian), jet.third)


def _check_gas_point(beta: float, gamma: float) -> None:
    if not beta > 0.0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be > 0, got {gamma}")


def bose_yukawa_closed_form(beta: float, gamma: float, units: Units = REDUCED) -> float:
    """Yukawa scalar of the Bose gas from the five-term polylog expression."""
    _check_gas_point(beta, gamma)
    l52 = polylog_exp(2.5, gamma)
    l32 = polylog_exp(1.5, gamma)
    l12 = polylog_exp(0.5, gamma)
    lm12 = polylog_exp(-0.5, gamma)
    A = 5.0 * l52 * l12 - 3.0 * l32**2
    if abs(A) < 1e-300:
        raise ArithmeticError(f"A underflows at gamma={gamma}")
    bracket = (
        5.0 * l52**2 * l32 * l12 * lm12
        - 10.0 * l52**2 * l12**3
        - 3.0 * l52 * l32**3 * lm12
        + 11.0 * l52 * l32**2 * l12**2
        - 3.0 * l32**4 * l12
    )
    return 20.0 * units.lambda_cubed(beta) / A**3 * bracket


def bec_asymptote(beta: float, gamma: float, units: Units = REDUCED) -> float:
    """Leading ``gamma^(-1/2)`` divergence of the Bose-gas Yukawa scalar."""
    _check_gas_point(beta, gamma)
    lam3 = units.lambda_cubed(beta)
    return 2.0 * zeta(1.5) * lam3 / (5.0 * math.sqrt(math.pi) * zeta(2.5) * math.sqrt(gamma))


# --- Taylor coefficients in the fugacity ------------------------------------

@dataclass(frozen=True, eq=False)
class SeriesCoefficients:
    """Coefficients ``a_0 .. a_N`` of a truncated power series in ``eta``."""

    coefficients: np.ndarray

    def __getitem__(self, k):
        return self.coefficients[k]

    def __len__(self):
        return len(self.coefficients)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def leading_index(self, tol: float = 1e-12) -> int:
        scale = max(1.0, float(np.max(np.abs(self.coefficients))))
        nz = np.nonzero(np.abs(self.coefficients) > tol * scale)[0]
        return int(nz[0]) if nz.size else len(self.coefficients)

    def __call__(self, eta: float) -> float:
        return float(np.polynomial.polynomial.polyval(eta, self.coefficients))


def _li_series(s: float, N: int) -> np.ndarray:
    k = np.arange(N + 1, dtype=float)
    out = np.zeros(N + 1)
    out[1:] = k[1:] ** (-s)
    return out


def _mul(*series: np.ndarray) -> np.ndarray:
    N = len(series[0]) - 1
    out = series[0]
    for s in series[1:]:
        out = np.convolve(out, s)[: N + 1]
    return out


def positivity_series(N: int = DEFAULT_SERIES_ORDER) -> tuple[SeriesCoefficients, SeriesCoefficients]:
    """Taylor coefficients of ``A`` and of the bracket ``C A^3 / (20 lambda^3)`` in ``eta``."""
    if not 1 <= N <= 30:
        raise ValueError("series order must be in 1..30")
    L52, L32, L12, Lm12 = (_li_series(s, N) for s in (2.5, 1.5, 0.5, -0.5))
    A = 5.0 * _mul(L52, L12) - 3.0 * _mul(L32, L32)
    bracket = (
        5.0 * _mul(L52, L52, L32, L12, Lm12)
        - 10.0 * _mul(L52, L52, L12, L12, L12)
        - 3.0 * _mul(L52, L32, L32, L32, Lm12)
        + 11.0 * _mul(L52, L32, L32, L12, L12)
        - 3.0 * _mul(L32, L32, L32, L32, L12)
    )
    return SeriesCoefficients(A), SeriesCoefficients(bracket)


# --- grid scans ---------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count)

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name=lo:hi:n`` (``n`` defaults to 1 with ``name=value``)."""
        try:
            name, rng = text.split("=", 1)
            parts = rng.split(":")
            if len(parts) == 1:
                lo = hi = float(parts[0])
                count = 1
            else:
                lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except (ValueError, IndexError):
            raise ValueError(f"bad grid axis {text!r}; expected name=lo:hi:n") from None
        if count < 1:
            raise ValueError(f"axis {name!r} needs at least one point")
        return cls(name.strip(), lo, hi, count)


@dataclass(frozen=True)
class ScanGrid:
    axes: tuple[Axis, ...]

    @classmethod
    def from_specs(cls, specs: Sequence[str], names: Sequence[str]) -> "ScanGrid":
        parsed = {a.name: a for a in map(Axis.parse, specs)}
        missing = [n for n in names if n not in parsed]
        extra = [n for n in parsed if n not in names]
        if missing or extra:
            raise ValueError(f"grid axes must be exactly {list(names)} (missing {missing}, unknown {extra})")
        return cls(tuple(parsed[n] for n in names))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    @property
    def size(self) -> int:
        return math.prod(a.count for a in self.axes)

    def points(self) -> list[tuple[float, ...]]:
        """Grid points in lexicographic index order (first axis slowest)."""
        return [tuple(float(v) for v in p) for p in product(*(a.values() for a in self.axes))]


def _alpha_label(alpha: float) -> str:
    return f"curv_alpha_{alpha:g}"


@dataclass
class ScanResult:
    columns: tuple[str, ...]
    rows: list[tuple]
    model: str = ""

    @property
    def ok_rows(self) -> list[tuple]:
        i = self.columns.index("status")
        return [r for r in self.rows if r[i] == "ok"]

    def column(self, name: str, ok_only: bool = True) -> np.ndarray:
        i = self.columns.index(name)
        rows = self.ok_rows if ok_only else self.rows
        return np.array([r[i] for r in rows], dtype=float)

    def summary(self) -> dict:
        ok = self.ok_rows
        out = {"model": self.model, "rows": len(self.rows), "ok_rows": len(ok)}
        if ok:
            y = self.column("yukawa")
            out.update(
                yukawa_min=float(np.min(y)),
                yukawa_max=float(np.max(y)),
                yukawa_absmax=float(np.max(np.abs(y))),
                wdvv_residual_max=float(np.max(self.column("wdvv_residual"))),
                wdvv_scaled_max=float(np.max(self.column("wdvv_scaled"))),
            )
        return out

    def records(self) -> list[dict]:
        out = []
        for row in self.rows:
            rec = {}
            for name, v in zip(self.columns, row):
                if isinstance(v, float) and not math.isfinite(v):
                    v = None
                rec[name] = v
            out.append(rec)
        return out

    def to_json(self) -> str:
        return json.dumps(self.records(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def write(self, path: str | Path, fmt: str = "csv") -> None:
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {fmt!r}")
        text = self.to_csv() if fmt == "csv" else self.to_json()
        Path(path).write_text(text)


def point_report(model: PotentialModel, x, alphas: Sequence[float] = DEFAULT_ALPHAS) -> dict:
    """All pointwise diagnostics at ``x``: tensors, Yukawa scalar, WDVV residual, curvatures."""
    geo = geometry_at(model, x)
    wd = wdvv_defect(geo.metric.g_inv, geo.ac.C)
    return {
        "point": geo.point,
        "metric": geo.metric.g,
        "ac_tensor": geo.ac.C,
        "yukawa": yukawa_term(geo.metric, geo.ac),
        "wdvv": wd,
        "curvature": {a: riemann_curvature(geo.alpha(a)).norm() for a in alphas},
        "det_g": geo.metric.determinant(),
    }


def _scan_row(model, x, alphas):
    try:
        rep = point_report(model, x, alphas)
    except (DomainError, ArithmeticError) as exc:
        nan = float("nan")
        return (*x, nan, nan, nan, *(nan for _ in alphas), nan, f"error: {exc}")
    curv = rep["curvature"]
    return (
        *x,
        float(rep["yukawa"]),
        rep["wdvv"].residual,
        rep["wdvv"].normalized,
        *(curv[a] for a in alphas),
        rep["det_g"],
        "ok",
    )


def scan(model: PotentialModel, grid: ScanGrid, alphas: Sequence[float] = DEFAULT_ALPHAS,
         workers: int = 1) -> ScanResult:
    """Evaluate every grid point; failures become marked rows, never exceptions."""
    if grid.names != model.coordinate_names:
        raise ValueError(f"grid axes {grid.names} do not match model coordinates {model.coordinate_names}")
    alphas = tuple(float(a) for a in alphas)
    columns = (
        *grid.names, "yukawa", "wdvv_residual", "wdvv_scaled",
        *(_alpha_label(a) for a in alphas), "det_g", "status",
    )
    points = grid.points()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: _scan_row(model, p, alphas), points))
    else:
        rows = [_scan_row(model, p, alphas) for p in points]
    return ScanResult(columns, rows, model.name)
