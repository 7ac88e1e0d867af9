"""Command-line front end emitting reproducible tables, trajectories and figures.

Subcommands::

    hydroclosure dispersion --tau 0.1 --k-min 0.1 --k-max 12.5 --n-points 200 --out disp.csv
    hydroclosure greens     --x-min -3 --x-max 3 --n-points 601 --out greens.csv
    hydroclosure spectrum   --k 5 --tau 0.1 --n 200 --out spec.json --format json
    hydroclosure evolve     --model closure_exact --tau 0.1 --t-end 1 --dt 0.05 --out traj.csv
    hydroclosure ce         --order 5 --out ce.csv

Every command writes its delimited output (CSV or JSON per ``--format``) and,
unless ``--no-plot`` is given, renders a matplotlib figure to the same path
with a ``.png`` suffix.  Identical configurations produce byte-identical
delimited outputs; floats carry 17 significant digits.

Exit codes: 0 success, 2 validation error, 3 numeric/convergence error, each
failure accompanied by a one-line JSON error record on stderr.  A flat
``key = value`` config file may seed any command's options via ``--config``;
explicit flags override file values.  No environment variables are read.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .ce import ce_recursion
from .dispersion import DispersionQuery, k_crit, lambda_series, lambda_star
from .errors import (
    AccuracyError,
    ConditioningError,
    ConfigError,
    ConvergenceError,
    DomainError,
    NoDiscreteSpectrumError,
    ResourceLimitError,
)
from .evolution import (
    EvolveConfig,
    MomentState,
    SpectralField,
    attraction_report,
    ce_evolve,
    closure_evolve,
    kinetic_evolve,
)
from .operators import build_truncated, ritz_values
from .serialize import csv_text, json_text, write_text
from .specfun import erfcx

_VALIDATION_ERRORS = (ConfigError, DomainError, ResourceLimitError)
_NUMERIC_ERRORS = (ConvergenceError, ConditioningError, AccuracyError)

_MOMENT_DENSITY_SCALE = (2.0 * math.pi) ** 0.25  # rho = (2 pi)^{1/4} f_0


def _emit_record(kind: str, payload: dict) -> None:
    import json as _json

    sys.stderr.write(_json.dumps({kind: payload}, sort_keys=True) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_record("error", {"type": "usage", "message": message})
        raise SystemExit(2)


# --- option plumbing ---------------------------------------------------------

def _positive_float(name):
    def conv(s: str) -> float:
        v = float(s)
        if not (math.isfinite(v) and v > 0.0):
            raise ConfigError(f"--{name} must be positive and finite, got {s!r}")
        return v
    return conv


def _finite_float(name):
    def conv(s: str) -> float:
        v = float(s)
        if not math.isfinite(v):
            raise ConfigError(f"--{name} must be finite, got {s!r}")
        return v
    return conv


def _positive_int(name):
    def conv(s: str) -> int:
        v = int(s)
        if v < 1:
            raise ConfigError(f"--{name} must be a positive integer, got {s!r}")
        return v
    return conv


def _choice(name, options):
    def conv(s: str) -> str:
        if s not in options:
            raise ConfigError(f"--{name} must be one of {options}, got {s!r}")
        return s
    return conv


_COMMON = [
    ("out", str, None, True, "output file path"),
    ("format", _choice("format", ("csv", "json")), "csv", False, "output format"),
    ("config", str, None, False, "flat key = value config file; flags override"),
    ("no-plot", None, False, False, "skip the companion PNG figure"),
]

_SPECS = {
    "dispersion": _COMMON + [
        ("tau", _positive_float("tau"), None, True, "relaxation time"),
        ("k-min", _finite_float("k-min"), None, True, "sweep start"),
        ("k-max", _finite_float("k-max"), None, True, "sweep end"),
        ("n-points", _positive_int("n-points"), None, True, "number of samples"),
    ],
    "greens": _COMMON + [
        ("x-min", _finite_float("x-min"), None, True, "range start"),
        ("x-max", _finite_float("x-max"), None, True, "range end"),
        ("n-points", _positive_int("n-points"), None, True, "number of samples"),
    ],
    "spectrum": _COMMON + [
        ("k", _finite_float("k"), None, True, "wave number"),
        ("tau", _positive_float("tau"), None, True, "relaxation time"),
        ("n", _positive_int("n"), 100, False, "truncation size"),
    ],
    "evolve": _COMMON + [
        ("model", _choice("model", ("closure_exact", "ce_order1", "ce_order3", "ce_order5", "kinetic_truncated")), None, True, "evolution model"),
        ("tau", _positive_float("tau"), None, True, "relaxation time"),
        ("t-end", _positive_float("t-end"), None, True, "final time"),
        ("dt", _positive_float("dt"), None, True, "step / sampling interval"),
        ("grid", _positive_int("grid"), 64, False, "grid points (power of two)"),
        ("length", _positive_float("length"), 2.0 * math.pi, False, "domain length"),
        ("profile", _choice("profile", ("constant", "cosine", "gaussian")), "cosine", False, "initial profile"),
        ("amp", _finite_float("amp"), 0.1, False, "profile amplitude"),
        ("mode-index", _positive_int("mode-index"), 1, False, "cosine mode index"),
        ("center", _finite_float("center"), None, False, "gaussian bump centre (default L/2)"),
        ("width", _positive_float("width"), None, False, "gaussian bump width (default L/16)"),
        ("n-moments", _positive_int("n-moments"), 32, False, "kinetic truncation size"),
        ("supercritical-policy", _choice("supercritical-policy", ("damp_essential", "zero_mode")), "damp_essential", False, "closure policy beyond k_crit"),
        ("store-every", _positive_int("store-every"), 1, False, "kinetic snapshot stride"),
    ],
    "ce": _COMMON + [
        ("order", _positive_int("order"), 5, False, "highest tau power (<= 7)"),
    ],
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="hydroclosure", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hydroclosure {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, opts in _SPECS.items():
        p = sub.add_parser(cmd)
        for name, conv, default, required, help_text in opts:
            if conv is None:  # boolean flag
                p.add_argument(f"--{name}", dest=name.replace("-", "_"),
                               action="store_true", default=None, help=help_text)
            else:
                p.add_argument(f"--{name}", dest=name.replace("-", "_"),
                               type=str, default=None, help=help_text)
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _merge_options(command: str, ns: argparse.Namespace) -> dict:
    spec = _SPECS[command]
    known = {name for name, *_ in spec}
    file_values: dict[str, str] = {}
    if ns.config is not None:
        file_values = _read_config_file(ns.config)
        unknown = set(file_values) - known
        if unknown:
            raise ConfigError(f"config file sets unknown option(s): {sorted(unknown)}")
    merged: dict = {}
    for name, conv, default, required, _ in spec:
        attr = name.replace("-", "_")
        cli_value = getattr(ns, attr)
        if conv is None:  # boolean flag
            if cli_value is not None:
                merged[attr] = bool(cli_value)
            elif name in file_values:
                merged[attr] = file_values[name].lower() in ("1", "true", "yes")
            else:
                merged[attr] = default
            continue
        if cli_value is not None:
            merged[attr] = conv(cli_value)
        elif name in file_values:
            merged[attr] = conv(file_values[name])
        elif required:
            raise ConfigError(f"missing required option --{name} for {command}")
        else:
            merged[attr] = default
    return merged


def _meta(command: str, opts: dict, warnings: list[str]) -> dict:
    config_echo = {
        key.replace("_", "-"): val for key, val in opts.items() if key != "config"
    }
    meta = {
        "command": command,
        "artifact_version": __version__,
        "config": config_echo,
    }
    if warnings:
        meta["warnings"] = list(warnings)
    return meta


def _figure_path(out: str) -> str:
    stem, _ = os.path.splitext(out)
    return stem + ".png"


# --- commands ----------------------------------------------------------------

def _cmd_dispersion(opts: dict) -> None:
    tau = opts["tau"]
    kc = k_crit(tau)
    lo, hi = opts["k_min"], opts["k_max"]
    if lo > hi:
        raise ConfigError(f"--k-min {lo:g} exceeds --k-max {hi:g}")
    warnings = []
    eps_edge = 1e-9 * kc
    lo_eff = max(lo, eps_edge)
    hi_eff = min(hi, kc - eps_edge)
    if lo_eff > lo or hi_eff < hi:
        warnings.append(
            f"sweep clipped to the subcritical interval ({lo_eff:.9g}, {hi_eff:.9g}); "
            f"k_crit = {kc:.9g}"
        )
        _emit_record("warning", {"message": warnings[-1]})
    if lo_eff > hi_eff:
        raise ConfigError(
            f"requested range [{lo:g}, {hi:g}] has empty intersection with the "
            f"subcritical interval (0, {kc:.6g})"
        )
    ks = np.linspace(lo_eff, hi_eff, opts["n_points"])
    results = [lambda_star(DispersionQuery(float(k), tau)) for k in ks]
    rows = [
        [float(k), r.x_star, r.lambda_star, r.residual]
        for k, r in zip(ks, results)
    ]
    if opts["format"] == "csv":
        text = csv_text(["k", "x_star", "lambda_star", "residual"], rows)
    else:
        text = json_text(
            _meta("dispersion", opts, warnings),
            {
                "k": [row[0] for row in rows],
                "x_star": [row[1] for row in rows],
                "lambda_star": [row[2] for row in rows],
                "residual": [row[3] for row in rows],
                "k_crit": kc,
            },
        )
    write_text(opts["out"], text)
    if not opts["no_plot"]:
        from . import figures

        fig = figures.dispersion_figure(ks, np.array([r.lambda_star for r in results]), tau, kc)
        figures.save(fig, _figure_path(opts["out"]))


def _cmd_greens(opts: dict) -> None:
    lo, hi = opts["x_min"], opts["x_max"]
    if lo > hi:
        raise ConfigError(f"--x-min {lo:g} exceeds --x-max {hi:g}")
    xs = np.linspace(lo, hi, opts["n_points"])
    rows = []
    for x in xs:
        if x == 0.0:
            rows.append([0.0, float("nan")])  # jump discontinuity gap marker
        else:
            rows.append([float(x), math.copysign(erfcx(abs(x)), x)])
    if opts["format"] == "csv":
        text = csv_text(["x", "g_tilde"], rows)
    else:
        text = json_text(
            _meta("greens", opts, []),
            {"x": [r[0] for r in rows], "g_tilde": [r[1] for r in rows]},
        )
    write_text(opts["out"], text)
    if not opts["no_plot"]:
        from . import figures

        arr = np.array(rows)
        keep = ~np.isnan(arr[:, 1])
        fig = figures.greens_figure(arr[keep, 0], arr[keep, 1])
        figures.save(fig, _figure_path(opts["out"]))


def _cmd_spectrum(opts: dict) -> None:
    k, tau, n = opts["k"], opts["tau"], opts["n"]
    kc = k_crit(tau)
    eigenvalues: list[complex] = []
    essential_re = None
    if k == 0.0:
        eigenvalues = [0.0 + 0.0j, complex(-1.0 / tau)]
    else:
        if abs(k) >= kc:
            raise NoDiscreteSpectrumError(k, tau, kc)
        eigenvalues = [complex(lambda_star(DispersionQuery(k, tau)).lambda_star)]
        essential_re = -1.0 / tau
    ritz = np.sort_complex(ritz_values(build_truncated(k, tau, n)))
    rows = [["eigenvalue", lam.real, lam.imag] for lam in eigenvalues]
    if essential_re is not None:
        rows.append(["essential_line", essential_re, float("nan")])
    rows.extend(["ritz", float(z.real), float(z.imag)] for z in ritz)
    if opts["format"] == "csv":
        text = csv_text(["kind", "re", "im"], rows)
    else:
        text = json_text(
            _meta("spectrum", opts, []),
            {
                "eigenvalues": [[lam.real, lam.imag] for lam in eigenvalues],
                "essential_line_re": essential_re,
                "ritz": [[float(z.real), float(z.imag)] for z in ritz],
                "k_crit": kc,
            },
        )
    write_text(opts["out"], text)
    if not opts["no_plot"]:
        from . import figures

        fig = figures.spectrum_figure(eigenvalues, ritz, tau, k)
        figures.save(fig, _figure_path(opts["out"]))


def _build_profile(opts: dict) -> SpectralField:
    n, length = opts["grid"], opts["length"]
    x = np.arange(n) * (length / n)
    kind = opts["profile"]
    if kind == "constant":
        samples = np.full(n, 1.0 if opts["amp"] is None else opts["amp"])
    elif kind == "cosine":
        samples = 1.0 + opts["amp"] * np.cos(2.0 * math.pi * opts["mode_index"] * x / length)
    else:
        center = length / 2.0 if opts["center"] is None else opts["center"]
        width = length / 16.0 if opts["width"] is None else opts["width"]
        samples = 1.0 + opts["amp"] * np.exp(-((x - center) ** 2) / (2.0 * width**2))
    return SpectralField.from_samples(length, samples)


def _kinetic_density_trajectory(field0: SpectralField, cfg: EvolveConfig):
    """Evolve every populated mode's moment system; reassemble density modes."""
    modes0 = field0.modes
    tol = 1e-14 * max(1.0, float(np.max(np.abs(modes0))))
    kk = field0.wavenumbers()
    times = None
    mode_hist = None
    for j, amp in enumerate(modes0):
        if abs(amp) <= tol:
            continue
        f0 = np.zeros(cfg.n_moments, dtype=complex)
        f0[0] = amp / _MOMENT_DENSITY_SCALE
        traj = kinetic_evolve(MomentState(k=float(kk[j]), n=cfg.n_moments, coeffs=f0), cfg)
        if times is None:
            times = traj.times
            mode_hist = np.zeros((len(times), field0.n_grid), dtype=complex)
        mode_hist[:, j] = _MOMENT_DENSITY_SCALE * traj.coeffs[:, 0]
    if times is None:  # identically zero field
        times = np.array([0.0, cfg.t_end])
        mode_hist = np.zeros((2, field0.n_grid), dtype=complex)
    fields = [SpectralField.from_modes(field0.length, m) for m in mode_hist]
    from .evolution import FieldTrajectory

    return FieldTrajectory(times=times, fields=fields)


def _cmd_evolve(opts: dict) -> None:
    field0 = _build_profile(opts)
    cfg = EvolveConfig(
        model=opts["model"],
        tau=opts["tau"],
        dt=opts["dt"],
        t_end=opts["t_end"],
        n_moments=opts["n_moments"] if opts["model"] == "kinetic_truncated" else 0,
        supercritical_policy=opts["supercritical_policy"],
        store_every=opts["store_every"],
    )
    warnings: list[str] = []
    if opts["model"] in ("ce_order1", "ce_order3", "ce_order5"):
        order = int(opts["model"][-1])
        growing = sorted({
            abs(float(k))
            for k, a in zip(field0.wavenumbers(), field0.modes)
            if k != 0.0 and abs(a) > 1e-14
            and lambda_series(DispersionQuery(float(k), cfg.tau), order) > 0.0
        })
        if growing:
            warnings.append(
                f"unstable local closure: multiplier positive for |k| in {growing}"
            )
            _emit_record("warning", {"message": warnings[-1]})

    if opts["model"] == "closure_exact":
        traj = closure_evolve(field0, cfg)
    elif opts["model"] == "kinetic_truncated":
        traj = _kinetic_density_trajectory(field0, cfg)
    else:
        traj = ce_evolve(field0, cfg)

    grid = field0.grid()
    if opts["format"] == "csv":
        header = (["t"] + [f"x_{j}" for j in range(field0.n_grid)]
                  + [f"rho_{j}" for j in range(field0.n_grid)])
        rows = [
            [float(t)] + [float(v) for v in grid] + [float(v) for v in fld.samples]
            for t, fld in zip(traj.times, traj.fields)
        ]
        text = csv_text(header, rows)
    else:
        text = json_text(
            _meta("evolve", opts, warnings),
            {
                "times": [float(t) for t in traj.times],
                "x": [float(v) for v in grid],
                "fields": [[float(v) for v in fld.samples] for fld in traj.fields],
                "modes": [[complex(c) for c in fld.modes] for fld in traj.fields],
            },
        )
    write_text(opts["out"], text)

    if opts["model"] == "kinetic_truncated":
        rows = attraction_report(field0, cfg.tau, cfg.n_moments, cfg.t_end)
        stem, ext = os.path.splitext(opts["out"])
        side_path = f"{stem}.attraction{ext if ext else '.csv'}"
        header = ["k", "lambda_star", "gap", "fitted_rate", "rho_mismatch_rel", "excluded", "note"]
        table = [
            [r.k, r.lambda_star, r.gap, r.fitted_rate, r.rho_mismatch_rel, r.excluded, r.note]
            for r in rows
        ]
        if opts["format"] == "csv":
            write_text(side_path, csv_text(header, table))
        else:
            write_text(side_path, json_text(
                _meta("evolve.attraction", opts, []),
                {name: [row[i] for row in table] for i, name in enumerate(header)},
            ))

    if not opts["no_plot"]:
        from . import figures

        profiles = np.array([fld.samples for fld in traj.fields])
        fig = figures.evolve_figure(traj.times, grid, profiles, opts["model"])
        figures.save(fig, _figure_path(opts["out"]))


def _cmd_ce(opts: dict) -> None:
    order = opts["order"]
    mult = ce_recursion(order)
    rows = [[tp, kp, c.numerator, c.denominator] for tp, kp, c in mult.terms]
    if opts["format"] == "csv":
        text = csv_text(["tau_power", "k_power", "numerator", "denominator"], rows)
    else:
        text = json_text(
            _meta("ce", opts, []),
            {"terms": [
                {"tau_power": tp, "k_power": kp, "numerator": num, "denominator": den}
                for tp, kp, num, den in rows
            ]},
        )
    write_text(opts["out"], text)
    if not opts["no_plot"]:
        from . import figures

        fig = figures.ce_figure(list(mult.terms), order)
        figures.save(fig, _figure_path(opts["out"]))


_HANDLERS = {
    "dispersion": _cmd_dispersion,
    "greens": _cmd_greens,
    "spectrum": _cmd_spectrum,
    "evolve": _cmd_evolve,
    "ce": _cmd_ce,
}


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        opts = _merge_options(ns.command, ns)
        _HANDLERS[ns.command](opts)
    except _VALIDATION_ERRORS as exc:
        _emit_record("error", {"type": type(exc).__name__, "message": str(exc)})
        return 2
    except _NUMERIC_ERRORS as exc:
        _emit_record("error", {"type": type(exc).__name__, "message": str(exc)})
        return 3
    except FloatingPointError as exc:
        _emit_record("error", {"type": "FloatingPointError", "message": str(exc)})
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
