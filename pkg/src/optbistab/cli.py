"""Command-line interface.

Commands: curve, solve, spectrum, g2, squeeze, scatter, preset. Parameters
come from a JSON file (--params) or inline flags; exactly one source. Output
is CSV (default) or JSON with the resolved parameters and tool version
embedded, so reruns reproduce files byte-for-byte at a fixed seed.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 regime-validity
hard error. Warnings go to stderr for CSV runs and into a "warnings" array
for JSON runs.
"""

import argparse
import sys
import warnings as _warnings

import numpy as np

from . import correlations, output, params as params_mod, presets, scattering
from . import spectra, steady_state
from .covariance import UnstableDriftError
from .numerics import NumericsError
from .params import ParameterError
from .spectra import UnstableOperatingPointError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_REGIME = 4


class UsageError(Exception):
    pass


def _add_param_flags(sub):
    sub.add_argument("--params", help="JSON parameter file")
    sub.add_argument("--C", type=float, help="cooperativity")
    sub.add_argument("--xi", type=float, help="decay-rate ratio 2 kappa/gamma")
    sub.add_argument("--N", type=int, help="atom number")
    sub.add_argument("--g-mhz", type=float, dest="g_mhz", help="g / 2pi in MHz")
    sub.add_argument("--kappa-mhz", type=float, dest="kappa_mhz")
    sub.add_argument("--gamma-mhz", type=float, dest="gamma_mhz")


def _add_io_flags(sub):
    sub.add_argument("--out", help="output path (or stem for multi-series runs)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--seed", type=int, default=0)


def resolve_params(args, need_N=False):
    """Build SystemParams from --params or inline flags (exactly one source)."""
    inline_dimless = args.C is not None or args.xi is not None
    inline_rates = any(
        getattr(args, k) is not None for k in ("g_mhz", "kappa_mhz", "gamma_mhz")
    )
    sources = sum([args.params is not None, inline_dimless, inline_rates])
    if sources == 0:
        raise UsageError("no parameter source: use --params or inline flags")
    if sources > 1:
        raise UsageError("choose exactly one parameter source")
    if args.params:
        return params_mod.params_from_file(args.params)
    if inline_rates:
        if args.N is None or args.g_mhz is None \
                or args.kappa_mhz is None or args.gamma_mhz is None:
            raise UsageError("rate parameters need --g-mhz --kappa-mhz --gamma-mhz --N")
        return params_mod.from_raw_rates(
            args.g_mhz, args.kappa_mhz, args.gamma_mhz, args.N, unit="MHz"
        )
    if args.C is None or args.xi is None:
        raise UsageError("dimensionless parameters need --C and --xi")
    if args.N is None:
        if need_N:
            raise UsageError("this command needs --N")
        return params_mod.SystemParams(C=args.C, xi=args.xi, N=1)
    return params_mod.SystemParams(C=args.C, xi=args.xi, N=args.N)


def _params_meta(p):
    meta = {"C": p.C, "xi": p.xi, "N": p.N}
    if p.has_rates:
        meta.update({"g": p.g, "kappa": p.kappa, "gamma": p.gamma, "n_sc": p.n_sc})
    return meta


def _emit_series(args, label_series, columns_of, rows_of, warn_msgs,
                 always_suffix=False):
    """Write one file per (label, series); returns list of paths."""
    stem = args.out or "out"
    paths = []
    multi = always_suffix or len(label_series) > 1
    for label, series in label_series:
        if multi:
            path = f"{stem}_{label}.{args.format}"
        else:
            path = stem if stem.endswith(f".{args.format}") else f"{stem}.{args.format}"
        meta = output.series_meta(series, seed=args.seed)
        all_warn = list(getattr(series, "warnings", ())) + list(warn_msgs)
        if args.format == "csv":
            output.write_csv(path, columns_of(series), rows_of(series), meta=meta,
                             warnings_list=all_warn)
            for w in all_warn:
                print(f"warning: {w}", file=sys.stderr)
        else:
            payload = {
                "meta": meta,
                "columns": columns_of(series),
                "rows": [list(r) for r in rows_of(series)],
                "warnings": list(all_warn),
            }
            output.write_json(path, payload)
        paths.append(path)
        print(path)
    return paths


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_curve(args):
    if args.y is not None:
        return _solve_common(args, args.y, command="curve")
    if args.xmax is None or args.xmax <= 0:
        raise UsageError("curve needs --xmax > 0 (or --y)")
    C = args.C
    if C is None:
        raise UsageError("curve needs --C")
    rows, tp = steady_state.curve_points(C, args.xmax, n=args.points)
    meta = {"C": C, "command": "curve", "seed": args.seed}
    if tp.exists or tp.degenerate:
        meta.update({"X_minus": tp.X_minus, "X_plus": tp.X_plus,
                     "Y_minus": tp.Y_minus, "Y_plus": tp.Y_plus,
                     "bistable": tp.exists, "degenerate": tp.degenerate})
    else:
        meta.update({"bistable": False, "summary": "monostable"})
    path = args.out or "curve"
    path = path if path.endswith(f".{args.format}") else f"{path}.{args.format}"
    if args.format == "csv":
        output.write_csv(path, ("X", "Y", "branch"), rows, meta=meta)
    else:
        output.write_json(path, {"meta": meta, "columns": ["X", "Y", "branch"],
                                 "rows": [list(r) for r in rows], "warnings": []})
    print(path)
    return EXIT_OK


def _solve_common(args, Y, command="solve"):
    C = args.C
    if C is None:
        raise UsageError("solving the state equation needs --C")
    if Y < 0:
        raise UsageError("the drive Y must be nonnegative")
    points = steady_state.solve_state_equation(C, Y)
    rows = [(pt.X, pt.Y, pt.branch) for pt in points]
    meta = {"C": C, "Y": Y, "command": command, "seed": args.seed}
    path = args.out or "solve"
    path = path if path.endswith(f".{args.format}") else f"{path}.{args.format}"
    if args.format == "csv":
        output.write_csv(path, ("X", "Y", "branch"), rows, meta=meta)
    else:
        output.write_json(path, {"meta": meta, "columns": ["X", "Y", "branch"],
                                 "rows": [list(r) for r in rows], "warnings": []})
    print(path)
    return EXIT_OK


def cmd_solve(args):
    if args.y is None:
        raise UsageError("solve needs --y")
    return _solve_common(args, args.y)


def _pick_operating_point(params, args):
    """Amplitude from --X directly or from --Y plus a branch selector."""
    if args.X is not None:
        return args.X
    if args.Y is None:
        raise UsageError("give --X or --Y")
    points = steady_state.solve_state_equation(params.C, args.Y)
    stable = [p for p in points if p.branch in ("lower", "upper", "monostable")]
    if len(points) > 1:
        if args.branch not in ("lower", "upper"):
            raise UsageError("multiple roots: disambiguate with --branch lower|upper")
        matches = [p for p in points if p.branch == args.branch]
        if not matches:
            raise UsageError(f"no {args.branch} root at Y={args.Y:g}")
        return matches[0].X
    if not stable:
        raise UnstableOperatingPointError(
            "linearization invalid on the unstable branch"
        )
    return points[0].X


def cmd_spectrum(args):
    if args.preset:
        return cmd_preset(args)
    if args.method == "upper-branch":
        # the upper-branch shape depends only on X
        try:
            params = resolve_params(args)
        except UsageError:
            params = None
    else:
        params = resolve_params(args)
    if args.branch == "unstable-middle":
        raise UnstableOperatingPointError("linearization invalid on the unstable branch")
    grid = np.linspace(-args.ymax, args.ymax, args.points)
    if args.method == "numeric":
        X = _pick_operating_point(params, args)
        series = spectra.spectrum_numeric(params, X, args.kind, grid)
        check = spectra.verify_unit_area(None, f"numeric-{args.kind}", params, X)
        norm_note = [f"unit-area check: {check['area']:.6f} "
                     f"(tail bound {check['tail_bound']:.2e})"]
    else:
        X = args.X
        if args.method in ("upper-branch", "upper-forward-bad-cavity") and X is None:
            if params is None:
                raise UsageError(f"--method {args.method} needs --X (or --Y with params)")
            X = _pick_operating_point(params, args)
        series = spectra.spectrum_closed_form(args.method, params, X=X, y_grid=grid)
        norm_note = []
    if series.validity_window is not None and not args.full_range:
        lo, hi = series.validity_window
        keep = (series.y >= lo) & (series.y <= hi)
        series = spectra.SpectrumSeries(
            y=series.y[keep], values=series.values[keep], kind=series.kind,
            method=series.method, params=series.params,
            validity_window=series.validity_window, warnings=series.warnings,
        )
    return _emit_series(
        args, [(args.method, series)],
        columns_of=lambda s: ("y", "T"),
        rows_of=lambda s: list(zip(s.y, s.values)),
        warn_msgs=norm_note,
    ) and EXIT_OK


def cmd_g2(args):
    if args.preset:
        return cmd_preset(args)
    params = resolve_params(args, need_N=True)
    grid = np.linspace(0.0, args.taumax, args.points)
    if args.variant == "numeric":
        if args.X is None:
            raise UsageError("g2 --variant numeric needs --X")
        series = correlations.g2_numeric(params, args.X, grid)
    else:
        series = correlations.g2_closed_form(args.variant, params, X=args.X,
                                             tau_bar_grid=grid)
    return _emit_series(
        args, [(args.variant, series)],
        columns_of=lambda s: ("tau_bar", "g2"),
        rows_of=lambda s: list(zip(s.tau_bar, s.values)),
        warn_msgs=[],
    ) and EXIT_OK


def cmd_squeeze(args):
    params = resolve_params(args)
    if args.X is None:
        raise UsageError("squeeze needs --X")
    qv = correlations.quadrature_variances(params, args.X)
    payload = {
        "meta": {**_params_meta(params), "X": args.X, "command": "squeeze",
                 "seed": args.seed},
        "var_J0": qv.var_J0,
        "var_Jpi2": qv.var_Jpi2,
        "squeezed": qv.squeezed,
        "ratio": qv.ratio,
        "method": qv.method,
        "warnings": [],
    }
    path = args.out or "squeeze"
    if args.format == "json":
        path = path if path.endswith(".json") else f"{path}.json"
        output.write_json(path, payload)
    else:
        path = path if path.endswith(".csv") else f"{path}.csv"
        output.write_csv(
            path, ("var_J0", "var_Jpi2", "squeezed", "ratio", "method"),
            [(qv.var_J0, qv.var_Jpi2, qv.squeezed, qv.ratio, qv.method)],
            meta=payload["meta"],
        )
    print(path)
    return EXIT_OK


def cmd_scatter(args):
    if args.phase_sum:
        if args.geometry is not None:
            geom = scattering.load_geometry(args.geometry, rng_seed=args.seed)
            source = {"geometry_file": args.geometry, "N": len(geom.positions)}
        else:
            if args.N is None or args.N < 2:
                raise UsageError("--phase-sum needs --N >= 2 (or --geometry FILE)")
            positions = scattering.sample_positions_cube(args.N, args.cube,
                                                         seed=args.seed)
            geom = scattering.ScatterGeometry(positions=positions,
                                              rng_seed=args.seed)
            source = {"N": args.N, "cube_side_lambda": args.cube}
        stats = scattering.phase_sum_monte_carlo(geom, args.trials)
        payload = {"meta": {"command": "scatter-phase-sum", **source,
                            "trials": args.trials, "seed": args.seed},
                   **stats.to_json_dict(), "warnings": []}
        path = args.out or "phase_sum"
        if args.format == "json":
            path = path if path.endswith(".json") else f"{path}.json"
            output.write_json(path, payload)
        else:
            path = path if path.endswith(".csv") else f"{path}.csv"
            output.write_csv(
                path, ("mean_abs", "max_abs", "coherent_bound", "trials", "seed"),
                [(stats.mean_abs, stats.max_abs, stats.coherent_bound,
                  stats.trials, stats.seed)],
                meta=payload["meta"],
            )
        print(path)
        return EXIT_OK
    # incoherent side flux
    params = resolve_params(args)
    if args.X is None:
        raise UsageError("scatter flux needs --X")
    res = scattering.side_flux(params, args.X, args.theta, args.solid_angle)
    payload = {"meta": {**_params_meta(params), "X": args.X, "theta": args.theta,
                        "solid_angle": args.solid_angle, "command": "scatter-flux",
                        "seed": args.seed},
               "flux": res.flux, "weak_flux": res.weak_flux,
               "R_gamma_over_gammaN": res.R_gamma_over_gammaN, "warnings": []}
    path = args.out or "side_flux"
    if args.format == "json":
        path = path if path.endswith(".json") else f"{path}.json"
        output.write_json(path, payload)
    else:
        path = path if path.endswith(".csv") else f"{path}.csv"
        output.write_csv(path, ("flux", "weak_flux", "R_gamma_over_gammaN"),
                         [(res.flux, res.weak_flux, res.R_gamma_over_gammaN)],
                         meta=payload["meta"])
    print(path)
    return EXIT_OK


def cmd_preset(args):
    name = args.preset
    if name not in presets.PRESET_NAMES:
        raise UsageError(f"unknown preset {name!r}; choose from {presets.PRESET_NAMES}")
    label_series = presets.run_preset(name, seed=args.seed)
    if args.out is None:
        args.out = name
    if hasattr(label_series[0][1], "y"):
        return _emit_series(
            args, label_series,
            columns_of=lambda s: ("y", "T"),
            rows_of=lambda s: list(zip(s.y, s.values)),
            warn_msgs=[], always_suffix=True,
        ) and EXIT_OK
    return _emit_series(
        args, label_series,
        columns_of=lambda s: ("tau_bar", "g2"),
        rows_of=lambda s: list(zip(s.tau_bar, s.values)),
        warn_msgs=[], always_suffix=True,
    ) and EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="optbistab",
        description="Linearized fluctuations in absorptive optical bistability",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="bistability curve with turning points")
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--xmax", type=float)
    p.add_argument("--y", type=float, help="solve the state equation at this drive")
    p.add_argument("--points", type=int, default=400)
    _add_io_flags(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("solve", help="roots of the state equation at a drive")
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    _add_io_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="incoherent spectra")
    _add_param_flags(p)
    p.add_argument("--kind", choices=("atomic", "forward"), default="atomic")
    p.add_argument("--method", default="numeric",
                   choices=("numeric",) + spectra.CLOSED_FORM_VARIANTS)
    p.add_argument("--X", type=float)
    p.add_argument("--Y", type=float)
    p.add_argument("--branch", choices=("lower", "upper", "unstable-middle"))
    p.add_argument("--ymax", type=float, default=30.0)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--preset", choices=presets.PRESET_NAMES)
    p.add_argument("--full-range", action="store_true",
                   help="do not truncate series to their validity window")
    _add_io_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("g2", help="second-order correlation functions")
    _add_param_flags(p)
    p.add_argument("--variant", default="numeric",
                   choices=("numeric",) + correlations.G2_VARIANTS)
    p.add_argument("--X", type=float)
    p.add_argument("--taumax", type=float, default=6.0)
    p.add_argument("--points", type=int, default=1201)
    p.add_argument("--preset", choices=presets.PRESET_NAMES)
    _add_io_flags(p)
    p.set_defaults(func=cmd_g2)

    p = sub.add_parser("squeeze", help="quadrature variances and squeezing")
    _add_param_flags(p)
    p.add_argument("--X", type=float, required=True)
    _add_io_flags(p)
    p.set_defaults(func=cmd_squeeze)

    p = sub.add_parser("scatter", help="side flux and phase-sum Monte Carlo")
    _add_param_flags(p)
    p.add_argument("--phase-sum", action="store_true", dest="phase_sum")
    p.add_argument("--geometry", help="JSON file with [x, y, z] positions in "
                   "wavelength units")
    p.add_argument("--cube", type=float, default=50.0,
                   help="cube side in wavelengths for sampled positions")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--X", type=float)
    p.add_argument("--theta", type=float, default=np.pi / 2)
    p.add_argument("--solid-angle", type=float, default=1e-3, dest="solid_angle")
    _add_io_flags(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("preset", help="run a named figure preset")
    p.add_argument("preset", choices=presets.PRESET_NAMES)
    _add_io_flags(p)
    p.set_defaults(func=cmd_preset)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        with _warnings.catch_warnings():
            _warnings.simplefilter("always")
            rc = args.func(args)
        return rc if isinstance(rc, int) else EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnstableDriftError, UnstableOperatingPointError) as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME


if __name__ == "__main__":
    sys.exit(main())
