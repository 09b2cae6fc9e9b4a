"""Command-line entry point: ``frobgeom {point,scan,verify,bec-asymptote,series}``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis
from .errors import DomainError
from .models import HELIUM4_SI, REDUCED, IdealGasModel, Units, model_from_id
from .verify import CHECK_NAMES, run_checks


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _tol_spec(text: str) -> tuple[str | None, float]:
    if "=" in text:
        name, value = text.split("=", 1)
        return name.strip(), _positive(value)
    return None, _positive(text)


def _units(args) -> Units:
    if args.units == "reduced":
        return REDUCED
    return Units(h=args.h, m=args.m, k_B=args.kB)


def _add_common(p: argparse.ArgumentParser, model_default: str | None = "classical") -> None:
    p.add_argument("--model", default=model_default,
                   help="classical | bose | synthetic:<config file>")
    p.add_argument("--units", choices=("reduced", "physical"), default="reduced")
    p.add_argument("--h", type=_positive, default=HELIUM4_SI.h, help="Planck constant (physical units)")
    p.add_argument("--m", type=_positive, default=HELIUM4_SI.m, help="particle mass (physical units)")
    p.add_argument("--kB", type=_positive, default=HELIUM4_SI.k_B, help="Boltzmann constant (physical units)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", help="output file (default: stdout)")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, float)):
        return float(v) if np.isfinite(v) else None
    return v


def _resolve_point(args, model) -> np.ndarray:
    if args.x is not None:
        if args.beta is not None or args.gamma is not None:
            raise ValueError("give either --x or --beta/--gamma, not both")
        return np.array(args.x)
    if isinstance(model, IdealGasModel):
        if args.beta is None or args.gamma is None:
            raise ValueError("gas models need --beta and --gamma (or --x beta,gamma)")
        return np.array([args.beta, args.gamma])
    raise ValueError("synthetic models need --x")


def cmd_point(args) -> int:
    model = model_from_id(args.model, _units(args))
    x = _resolve_point(args, model)
    rep = analysis.point_report(model, x, args.alphas)
    out = {
        "model": model.name,
        "coordinates": dict(zip(model.coordinate_names, map(float, rep["point"]))),
        "metric": _jsonable(rep["metric"]),
        "ac_tensor": _jsonable(rep["ac_tensor"]),
        "yukawa": rep["yukawa"],
        "wdvv_residual": rep["wdvv"].residual,
        "wdvv_scaled": rep["wdvv"].normalized,
        "curvature": {f"{a:g}": v for a, v in rep["curvature"].items()},
        "det_g": rep["det_g"],
    }
    if isinstance(model, IdealGasModel):
        beta, gamma = map(float, x)
        out["lambda_cubed"] = model.lambda_cubed(x)
        if model.kind == "bose":
            out["yukawa_closed_form"] = analysis.bose_yukawa_closed_form(beta, gamma, model.units)
            out["bec_asymptote"] = analysis.bec_asymptote(beta, gamma, model.units)
    if args.format == "json":
        _emit(_dumps(out), args.out)
        return 0
    lines = [f"model: {out['model']}", "coordinates: " + ", ".join(f"{k}={v:g}" for k, v in out["coordinates"].items())]
    with np.printoptions(precision=10):
        lines.append(f"metric g_ij:\n{rep['metric']}")
        lines.append(f"AC tensor C_ijk:\n{rep['ac_tensor']}")
    lines.append(f"yukawa: {out['yukawa']:.12g}")
    for key in ("yukawa_closed_form", "bec_asymptote", "lambda_cubed"):
        if key in out:
            lines.append(f"{key}: {out[key]:.12g}")
    lines.append(f"wdvv_residual: {out['wdvv_residual']:.6e} (scaled {out['wdvv_scaled']:.3e})")
    for a, v in out["curvature"].items():
        lines.append(f"curvature max|R| at alpha={a}: {v:.6e}")
    lines.append(f"det_g: {out['det_g']:.12g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_scan(args) -> int:
    model = model_from_id(args.model, _units(args))
    if not args.grid:
        raise ValueError("scan needs --grid axis=lo:hi:n for every coordinate")
    grid = analysis.ScanGrid.from_specs(args.grid, model.coordinate_names)
    result = analysis.scan(model, grid, args.alphas, workers=args.workers)
    fmt = "json" if args.format == "json" else "csv"
    text = result.to_json() if fmt == "json" else result.to_csv()
    _emit(text, args.out)
    summary = result.summary()
    stream = sys.stderr if args.out is None else sys.stdout
    stream.write(" ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in summary.items()) + "\n")
    if summary["ok_rows"] == 0:
        sys.stderr.write("error: no grid point lies in the model domain\n")
        return 1
    return 0


def cmd_verify(args) -> int:
    units = _units(args)
    ids = [args.model] if args.model else ["classical", "bose"]
    models = [model_from_id(m, units) for m in ids]
    checks = None
    if args.check:
        checks = [c.strip() for spec in args.check for c in spec.split(",") if c.strip()]
    tolerances = {}
    for name, value in args.tol or ():
        if name is None:
            tolerances.update({c: value for c in (checks or CHECK_NAMES)})
        else:
            tolerances[name] = value
    results = run_checks(models, checks, tolerances, series_order=args.order)
    if args.format == "json":
        _emit(_dumps([_jsonable_dict(r.as_dict()) for r in results]), args.out)
    else:
        _emit("".join(r.line() + "\n" for r in results), args.out)
    return 1 if any(r.status == "FAIL" for r in results) else 0


def _jsonable_dict(d: dict) -> dict:
    return {k: _jsonable(v) for k, v in d.items()}


def cmd_bec_asymptote(args) -> int:
    units = _units(args)
    rows = []
    for gamma in args.gamma:
        closed = analysis.bose_yukawa_closed_form(args.beta, gamma, units)
        asym = analysis.bec_asymptote(args.beta, gamma, units)
        rows.append({"beta": args.beta, "gamma": gamma, "yukawa": closed, "asymptote": asym, "ratio": closed / asym})
    if args.format == "json":
        _emit(_dumps(rows), args.out)
    else:
        lines = [f"{'gamma':>12} {'yukawa':>20} {'asymptote':>20} {'ratio':>12}"]
        lines += [f"{r['gamma']:12.4g} {r['yukawa']:20.12g} {r['asymptote']:20.12g} {r['ratio']:12.8f}" for r in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_series(args) -> int:
    A, bracket = analysis.positivity_series(args.order)
    out = {
        "order": args.order,
        "A": A.coefficients.tolist(),
        "bracket": bracket.coefficients.tolist(),
        "A_positive_from_2": bool(np.all(A.coefficients[2:] > 0)),
        "bracket_positive_from_6": bool(np.all(bracket.coefficients[6:] > 0)),
    }
    if args.format == "json":
        _emit(_dumps(out), args.out)
    else:
        lines = [f"{'k':>3} {'A_k':>16} {'bracket_k':>16}"]
        lines += [f"{k:3d} {a:16.10f} {b:16.10f}" for k, (a, b) in enumerate(zip(out["A"], out["bracket"]))]
        lines.append(f"A_k > 0 for k >= 2: {out['A_positive_from_2']}")
        lines.append(f"bracket_k > 0 for k >= 6: {out['bracket_positive_from_6']}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if out["A_positive_from_2"] and out["bracket_positive_from_6"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobgeom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="tensors and scalars at a single point")
    _add_common(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--x", type=_float_list, help="coordinates, comma separated")
    p.add_argument("--alphas", type=_float_list, default=list(analysis.DEFAULT_ALPHAS))
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("scan", help="grid scan exported as CSV or JSON")
    _add_common(p)
    p.add_argument("--grid", action="append", help="axis=lo:hi:n (repeat per coordinate)")
    p.add_argument("--alphas", type=_float_list, default=list(analysis.DEFAULT_ALPHAS))
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run named check suites")
    _add_common(p, model_default=None)
    p.add_argument("--check", action="append", help=f"check name(s): {', '.join(CHECK_NAMES)}")
    p.add_argument("--tol", action="append", type=_tol_spec, help="tolerance override: value or check=value")
    p.add_argument("--order", type=int, default=analysis.DEFAULT_SERIES_ORDER, help="series order N")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bec-asymptote", help="Bose-gas Yukawa scalar against its condensation asymptote")
    _add_common(p, model_default="bose")
    p.add_argument("--beta", type=_positive, default=1.0)
    p.add_argument("--gamma", type=_float_list, default=[1e-2, 1e-4, 1e-6])
    p.set_defaults(func=cmd_bec_asymptote)

    p = sub.add_parser("series", help="Taylor coefficients of A and of the Yukawa bracket")
    _add_common(p, model_default=None)
    p.add_argument("--order", type=int, default=analysis.DEFAULT_SERIES_ORDER)
    p.set_defaults(func=cmd_series)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
