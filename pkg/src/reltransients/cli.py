"""Command-line front end.

    reltransients regime --E 10 --V 0.5
    reltransients evolve --preset fig4a -o fig4a.csv
    reltransients delay --E 1.5 --V 3 --x 10
    reltransients beats --preset fig5a
    reltransients nonrel-check --k 0.2 0.1 0.05

Series are written as CSV (``#`` header lines carry the full run config),
analysis reports as JSON. Exit codes: 0 ok, 2 usage, 3 series truncation,
4 analysis failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .analysis import (
    FlatSignal,
    InsufficientPeriods,
    NoPeak,
    extract_beats,
    measure_delay,
    predict_delay_class,
)
from .kernel import DEFAULT_POLICY, TruncationFailure
from .nonrel import REST_PHASE_CONVENTION, schrodinger_density
from .runs import SOLVERS, RunConfig, evolve
from .source import psi_source
from .units import PhysicalSetup, Regime, classify_regime, z_plus_minus, zbw_frequency

OUTPUT_DIR_ENV = "RELTRANSIENTS_OUTPUT_DIR"

EXIT_USAGE, EXIT_TRUNCATION, EXIT_ANALYSIS = 2, 3, 4

PRESETS = {
    "fig2a": dict(solver="source", E=1.6, V=0.2, x=10.0, t_start=9.0, t_end=60.0, n_samples=2048),
    "fig2b": dict(solver="source", E=1.6, V=0.2, x=10.0, t_start=9.0, t_end=60.0, n_samples=4096),
    "fig2c": dict(solver="source", E=5.0, V=0.5, x=10.0, t_start=9.0, t_end=60.0, n_samples=4096),
    "fig3a": dict(solver="source", E=1.8, V=3.0, x=10.0, t_start=9.0, t_end=80.0, n_samples=4096),
    "fig3b": dict(solver="source", E=1.2, V=3.0, x=10.0, t_start=9.0, t_end=80.0, n_samples=4096),
    "fig3c": dict(solver="source", E=1.5, V=3.0, x=10.0, t_start=9.0, t_end=80.0, n_samples=4096),
    "fig4a": dict(solver="source", E=10.0, V=0.5, x=10.0, t_start=30.0, t_end=200.0, n_samples=4096),
    "fig5a": dict(solver="kg_shutter", E=10.0, V=0.0, x=10.0, t_start=30.0, t_end=200.0, n_samples=4096),
    "fig5b": dict(solver="dirac_shutter", E=10.0, V=0.0, x=10.0, t_start=30.0, t_end=200.0, n_samples=4096),
}


class UsageError(Exception):
    pass


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split("..")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START..END, got {text!r}") from None


def _read_config_file(path: str) -> dict:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    for line in text.splitlines():
        if line.startswith("# config:"):
            return json.loads(line[len("# config:"):])
    raise UsageError(f"{path}: no JSON config found")


def build_config(args) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        base.update(_read_config_file(args.config))
    if getattr(args, "preset", None):
        base.update(PRESETS[args.preset])
    for name in ("solver", "E", "V", "x"):
        val = getattr(args, name, None)
        if val is not None:
            base[name] = val
    if getattr(args, "t", None) is not None:
        base["t_start"], base["t_end"] = args.t
    if getattr(args, "n", None) is not None:
        base["n_samples"] = args.n
    if getattr(args, "format", None) is not None:
        base["format"] = args.format
    pol = dict(base.pop("policy", None) or {})
    pol.pop("force", None)
    for name in ("rel_tol", "max_terms", "front_guard"):
        val = getattr(args, name, None)
        if val is not None:
            pol[name] = val
    if "E" not in base:
        raise UsageError("--E is required (or use --preset/--config)")
    base.setdefault("solver", "source")
    base.setdefault("V", 0.0)
    base.setdefault("t_start", max(0.0, base.get("x", 10.0) - 1.0))
    base.setdefault("t_end", base["t_start"] + 100.0)
    try:
        return RunConfig(policy=replace(DEFAULT_POLICY, **pol), **base)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _output_path(name: str | None, default_name: str) -> Path | None:
    if name == "-":
        return None
    if name is None:
        outdir = os.environ.get(OUTPUT_DIR_ENV)
        if not outdir:
            return None
        return Path(outdir) / default_name
    path = Path(name)
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir and not path.is_absolute() and path.parent == Path("."):
        path = Path(outdir) / path
    return path


def _emit(text: str, path: Path | None):
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def format_series_csv(config: RunConfig, series) -> str:
    lines = [
        "# reltransients evolve",
        "# config: " + json.dumps(config.to_dict(), sort_keys=True),
        f"# x: {series.x!r}",
    ]
    if "rest_phase" in series.setup_tag:
        lines.append(f"# rest_phase: {series.setup_tag['rest_phase']}")
    cols = ["t", "re_psi", "im_psi", "rho"]
    dirac = series.psi2 is not None
    if dirac:
        cols = ["t", "re_psi1", "im_psi1", "re_psi2", "im_psi2", "rho"]
    lines.append(",".join(cols))
    t = series.t
    for i in range(series.n):
        row = [t[i], series.psi[i].real, series.psi[i].imag]
        if dirac:
            row += [series.psi2[i].real, series.psi2[i].imag]
        row.append(series.rho[i])
        lines.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def format_series_json(config: RunConfig, series) -> str:
    out = {"config": config.to_dict(), "x": series.x, "t": series.t.tolist(), "rho": series.rho.tolist()}
    out["psi"] = [[v.real, v.imag] for v in series.psi]
    if series.psi2 is not None:
        out["psi2"] = [[v.real, v.imag] for v in series.psi2]
    return json.dumps(out, sort_keys=True) + "\n"


def regime_report(E: float, V: float) -> dict:
    setup = PhysicalSetup(E, V)
    rc = classify_regime(setup)
    zp, zm = z_plus_minus(setup, rc.k)
    pred = predict_delay_class(setup)
    return {
        "E": E,
        "V": V,
        "epsilon": setup.epsilon,
        "mu": setup.mu,
        "regime": rc.regime.value,
        "k": [rc.k.real, rc.k.imag],
        "z_plus": [complex(zp).real, complex(zp).imag],
        "z_minus": [complex(zm).real, complex(zm).imag],
        "Omega": zbw_frequency(setup),
        "predicted_delay": pred.value,
        "super_klein": rc.regime is Regime.KLEIN and math.isclose(abs(setup.epsilon), V / 2.0, rel_tol=1e-9),
    }


def _json_out(obj, args):
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", _output_path(getattr(args, "output", None), "report.json"))


def cmd_regime(args):
    _json_out(regime_report(args.E, args.V), args)


def cmd_evolve(args):
    config = build_config(args)
    series = evolve(config, workers=args.workers)
    text = format_series_csv(config, series) if config.format == "csv" else format_series_json(config, series)
    _emit(text, _output_path(args.output, f"{config.solver}.{config.format}"))


def delay_report(config: RunConfig, workers: int = 1, zero_tol: float | None = None) -> dict:
    step = evolve(config, workers)
    free = evolve(replace(config, V=0.0), workers)
    m = measure_delay(free, step, zero_tol)
    report = {k: (v.value if hasattr(v, "value") else v) for k, v in asdict(m).items()}
    report["predicted"] = predict_delay_class(PhysicalSetup(config.E, config.V)).value
    report["config"] = config.to_dict()
    return report


def cmd_delay(args):
    config = build_config(args)
    if config.solver != "source":
        raise UsageError("delay compares point-source runs; use --solver source")
    _json_out(delay_report(config, args.workers, args.zero_tol), args)


def beats_report(config: RunConfig, t_min: float, workers: int = 1) -> dict:
    series = evolve(config, workers)
    b = extract_beats(series, t_min)
    out = asdict(b)
    out["carrier_peaks"] = list(b.carrier_peaks)
    out["config"] = config.to_dict()
    out["t_min"] = t_min
    return out


_SYNTH_ENV = {"np": np, "sin": np.sin, "cos": np.cos, "exp": np.exp, "pi": math.pi, "sqrt": np.sqrt}


def synthetic_series(expr: str, t_start: float, t_end: float, n: int):
    from .analysis import TimeSeries

    t = np.linspace(t_start, t_end, n)
    src = expr.replace("^", "**")
    # implicit products such as "2t" are not supported; write 2*t
    try:
        y = eval(src, {"__builtins__": {}}, dict(_SYNTH_ENV, t=t))  # noqa: S307 - local expression only
    except Exception as exc:
        raise UsageError(f"cannot evaluate synthetic expression {expr!r}: {exc}") from None
    y = np.broadcast_to(np.asarray(y, dtype=float), t.shape)
    return TimeSeries.from_grid(0.0, t, y, setup_tag={"synthetic": expr})


def cmd_beats(args):
    if args.synthetic:
        t_start, t_end = args.t or (50.0, 200.0)
        series = synthetic_series(args.synthetic, t_start, t_end, args.n or 4096)
        b = extract_beats(series, args.t_min if args.t_min is not None else t_start, stationary=0.0)
        out = asdict(b)
        out["carrier_peaks"] = list(b.carrier_peaks)
        out["synthetic"] = args.synthetic
        _json_out(out, args)
        return
    config = build_config(args)
    t_min = args.t_min if args.t_min is not None else max(config.t_start, 50.0 / (PhysicalSetup(config.E).mu))
    _json_out(beats_report(config, t_min, args.workers), args)


def nonrel_report(ks, x: float = 1.0, t_start: float = 10.0, t_end: float = 100.0, n: int = 181) -> dict:
    t = np.linspace(t_start, t_end, n)
    rows = []
    for k in ks:
        # matched non-relativistic kinetic energy k^2 / 2 mu with mu = 1
        setup = PhysicalSetup(1.0 + 0.5 * k * k, 0.0)
        rho_kg = np.array([psi_source(x, tt, setup).rho for tt in t])
        rho_s = np.array([schrodinger_density(x, tt, setup) for tt in t])
        diff = np.abs(rho_kg - rho_s)
        rows.append({"k": k, "max_abs_discrepancy": float(diff.max()), "max_schrodinger_density": float(rho_s.max())})
    d = [r["max_abs_discrepancy"] for r in rows]
    ordered = sorted(zip(ks, d), key=lambda p: -p[0])
    monotone = all(b < a for (_, a), (_, b) in zip(ordered, ordered[1:]))
    return {
        "x": x,
        "t_range": [t_start, t_end],
        "n_samples": n,
        "energy_matching": "eps = mu + k^2/(2 mu)",
        "rest_phase_convention": REST_PHASE_CONVENTION,
        "results": rows,
        "strictly_decreasing_with_k": monotone,
    }


def cmd_nonrel(args):
    _json_out(nonrel_report(args.k, args.x, args.t[0], args.t[1], args.n), args)


def _add_run_options(p, solver=True):
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", help="JSON config file, or a CSV written by evolve")
    if solver:
        p.add_argument("--solver", choices=SOLVERS)
    p.add_argument("--E", type=float)
    p.add_argument("--V", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--t", type=_parse_range, help="time window START..END")
    p.add_argument("--n", type=int, help="number of samples")
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--max-terms", dest="max_terms", type=int)
    p.add_argument("--front-guard", dest="front_guard", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", help=f"output file ('-' for stdout; relative names go under ${OUTPUT_DIR_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reltransients", description="Relativistic point-source and shutter transients")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regime", help="classify a source/step configuration")
    p.add_argument("--E", type=float, required=True)
    p.add_argument("--V", type=float, default=0.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("evolve", help="write rho(t) and psi(t) at fixed x")
    _add_run_options(p)
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("delay", help="wavefront delay of the stepped source against V = 0")
    _add_run_options(p, solver=False)
    p.add_argument("--zero-tol", dest="zero_tol", type=float)
    p.set_defaults(func=cmd_delay, solver=None)

    p = sub.add_parser("beats", help="beat frequency and envelope decay of the long-time density")
    _add_run_options(p)
    p.add_argument("--t-min", dest="t_min", type=float)
    p.add_argument("--synthetic", help='analyse an expression in t instead, e.g. "t^-1.5*cos(2*t)"')
    p.set_defaults(func=cmd_beats)

    p = sub.add_parser("nonrel-check", help="Klein-Gordon against Schroedinger at small momentum")
    p.add_argument("--k", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--t", type=_parse_range, default=(10.0, 100.0))
    p.add_argument("--n", type=int, default=181)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_nonrel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationFailure as exc:
        print(f"numerical failure: {exc} (residual {exc.residual:.3g})", file=sys.stderr)
        return EXIT_TRUNCATION
    except (NoPeak, InsufficientPeriods, FlatSignal) as exc:
        print(f"analysis failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
