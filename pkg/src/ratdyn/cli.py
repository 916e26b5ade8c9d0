"""Command-line interface.

Subcommands: analyze, orbit, period2, lyapunov, scan, basin, conjectures,
tables.  Inputs come from a JSON config document and/or flags (flags win);
outputs are machine-readable JSON/CSV/PGM, with optional matplotlib figures
rendered next to them via --plot.  Exit codes: 0 success, 2 usage or
degenerate input, 3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import random
import sys
from typing import Optional

from . import refdata
from .coremap import OrbitState, Params, ToleranceConfig, iterate
from .equilibria import equilibria, special_case_alpha_eq_beta
from .errors import (
    ConfigError,
    DegenerateError,
    NoDistinctCycleError,
    OrbitDiedError,
    RatdynError,
)
from .io import (
    FORMATS,
    RunConfig,
    dumps_json,
    fmt15,
    fmt15c,
    load_config,
    write_orbit_csv,
    write_raster_csv,
    write_raster_pgm,
    write_series_csv,
)
from .lyapunov import CHAOS_THRESHOLD, DEFAULT_N_STEPS, lyapunov_max
from .period_two import classify_two_cycle, two_cycle, verify_cycle_dynamically
from .scan import (
    OBJECTIVES,
    SLICES,
    ScanGrid,
    basin_raster,
    condition_check,
    conjecture_chaos_harness,
    conjecture_p3_harness,
    find_extremum,
)

_TOL_FIELDS = [f.name for f in dataclasses.fields(ToleranceConfig)]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config document")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=FORMATS, help="output format")
    p.add_argument("--seed", type=int, help="seed for any randomized choice")
    p.add_argument("--iters", type=int, help="alias for --max-iters")
    p.add_argument("--alpha", nargs=2, type=float, metavar=("RE", "IM"), help="parameter a")
    p.add_argument("--beta", nargs=2, type=float, metavar=("RE", "IM"), help="parameter b")
    p.add_argument("--z-prev", nargs=2, type=float, metavar=("RE", "IM"), help="initial z[n-1]")
    p.add_argument("--z-curr", nargs=2, type=float, metavar=("RE", "IM"), help="initial z[n]")
    for name in _TOL_FIELDS:
        flag = "--" + name.replace("_", "-")
        p.add_argument(flag, type=float, dest=f"tol_{name}", help=f"override ToleranceConfig.{name}")
    p.add_argument(
        "--plot",
        nargs="?",
        const="",
        default=None,
        metavar="PATH",
        help="also render a matplotlib figure (default path derives from --out)",
    )


def _resolve(args: argparse.Namespace, need_params: bool = True) -> RunConfig:
    """Merge the config document with flag overrides (flags win)."""
    cfg: Optional[RunConfig] = load_config(args.config) if args.config else None

    if args.alpha is not None or args.beta is not None:
        if args.alpha is None or args.beta is None:
            raise ConfigError("--alpha and --beta must be given together")
        params = Params(alpha=complex(*args.alpha), beta=complex(*args.beta))
    elif cfg is not None:
        params = cfg.params
    elif need_params:
        raise ConfigError("parameters required: pass --config or --alpha/--beta")
    else:
        params = Params(alpha=0j, beta=0j)

    initial = cfg.initial if cfg else None
    if args.z_prev is not None or args.z_curr is not None:
        if args.z_prev is None or args.z_curr is None:
            raise ConfigError("--z-prev and --z-curr must be given together")
        initial = OrbitState(z_prev=complex(*args.z_prev), z_curr=complex(*args.z_curr))

    tol = cfg.tolerances if cfg else ToleranceConfig()
    overrides = {}
    for name in _TOL_FIELDS:
        val = getattr(args, f"tol_{name}")
        if val is not None:
            overrides[name] = int(val) if name in (
                "converge_window", "max_period", "max_iters", "transient_discard"
            ) else float(val)
    if args.iters is not None:
        overrides["max_iters"] = int(args.iters)
    if "max_iters" in overrides and "transient_discard" not in overrides:
        # a shortened run implies a shortened transient unless stated otherwise
        overrides["transient_discard"] = min(tol.transient_discard, overrides["max_iters"] // 2)
    if overrides:
        try:
            tol = dataclasses.replace(tol, **overrides)
        except ValueError as exc:
            raise ConfigError(f"invalid tolerance override: {exc}") from exc

    return RunConfig(
        params=params,
        initial=initial,
        tolerances=tol,
        seed=args.seed if args.seed is not None else (cfg.seed if cfg else 0),
        output_path=args.out if args.out is not None else (cfg.output_path if cfg else None),
        output_format=args.format if args.format is not None else (cfg.output_format if cfg else "json"),
    )


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {path}")


def _plot_path(args: argparse.Namespace, fallback: str) -> Optional[str]:
    if args.plot is None:
        return None
    if args.plot:
        return args.plot
    if args.out:
        base = args.out.rsplit(".", 1)[0]
        return base + ".png"
    return fallback


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    rc = _resolve(args)
    reports = equilibria(rc.params)
    doc = {
        "params": rc.params,
        "equilibria": list(reports),
        "condition": condition_check(rc.params),
    }
    if rc.params.alpha == rc.params.beta:
        sc = special_case_alpha_eq_beta(rc.params.alpha)
        doc["equal_parameter_case"] = {
            "condition_lower": sc.condition_lower,
            "condition_upper": sc.condition_upper,
            "condition_holds": sc.condition_holds,
        }
    _emit(dumps_json(doc), rc.output_path)
    return 0


def cmd_orbit(args: argparse.Namespace) -> int:
    rc = _resolve(args)
    if rc.initial is None:
        raise ConfigError("orbit needs an initial pair: config 'initial' or --z-prev/--z-curr")
    orbit = iterate(rc.params, rc.initial, rc.tolerances)
    fmt = args.format or (rc.output_format if args.config else "csv")
    if fmt == "json":
        _emit(dumps_json(orbit), rc.output_path)
    else:
        import io as _io

        buf = _io.StringIO()
        write_orbit_csv(orbit, buf)
        _emit(buf.getvalue(), rc.output_path)
    ppath = _plot_path(args, "orbit.png")
    if ppath:
        from .plotting import save_orbit_figure

        save_orbit_figure(orbit, ppath)
        print(f"wrote {ppath}")
    return 0


def cmd_period2(args: argparse.Namespace) -> int:
    rc = _resolve(args)
    cyc = two_cycle(rc.params)
    stab = classify_two_cycle(rc.params, cyc)
    verified = verify_cycle_dynamically(rc.params, cyc, rc.tolerances)
    doc = {
        "params": rc.params,
        "phi": cyc.phi,
        "psi": cyc.psi,
        "chi": stab.chi,
        "det": stab.det,
        "chi_mod": abs(stab.chi),
        "det_mod": abs(stab.det),
        "eigen_moduli": list(stab.eigen_moduli),
        "verdict": stab.verdict.value,
        "jury_consistent": stab.jury_consistent,
        "dynamically_verified": verified,
    }
    _emit(dumps_json(doc), rc.output_path)
    return 0


def cmd_lyapunov(args: argparse.Namespace) -> int:
    rc = _resolve(args)
    initial = rc.initial
    if initial is None:
        rng = random.Random(rc.seed)
        initial = OrbitState(
            z_prev=complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            z_curr=complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
        )
    est = lyapunov_max(rc.params, initial, rc.tolerances, n_steps=args.steps)
    doc = {"params": rc.params, "initial": initial, "estimate": est}
    _emit(dumps_json(doc), rc.output_path)
    if args.series_out:
        with open(args.series_out, "w", encoding="utf-8") as fh:
            write_series_csv(est, fh)
        print(f"wrote {args.series_out}")
    ppath = _plot_path(args, "lyapunov.png")
    if ppath:
        from .plotting import save_lyapunov_figure

        save_lyapunov_figure(est, ppath)
        print(f"wrote {ppath}")
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    rc = _resolve(args, need_params=False)
    result = find_extremum(
        args.objective,
        alpha_mod_max=args.alpha_max_mod,
        beta_mod_max=args.beta_max_mod,
        budget=args.budget,
        seed=rc.seed,
    )
    _emit(dumps_json(result), rc.output_path)
    return 0


def cmd_basin(args: argparse.Namespace) -> int:
    rc = _resolve(args)
    grid = ScanGrid(
        center=complex(*args.center),
        half_width=args.half_width,
        resolution=args.resolution,
    )
    raster = basin_raster(
        rc.params,
        grid,
        rc.tolerances,
        fixed_partner=args.slice,
        partner_value=complex(*args.fixed_value),
    )
    fmt = args.format or (rc.output_format if args.config else "pgm")
    if fmt == "pgm":
        import io as _io

        buf = _io.StringIO()
        legend = write_raster_pgm(raster, buf)
        _emit(buf.getvalue(), rc.output_path)
        legend_path = (rc.output_path or "basin") + ".legend.json"
        _emit(dumps_json({"legend": legend, "grid": raster.grid}), legend_path)
    elif fmt == "csv":
        import io as _io

        buf = _io.StringIO()
        write_raster_csv(raster, buf)
        _emit(buf.getvalue(), rc.output_path)
    else:
        _emit(dumps_json(raster), rc.output_path)
    ppath = _plot_path(args, "basin.png")
    if ppath:
        from .plotting import save_basin_figure

        save_basin_figure(raster, ppath)
        print(f"wrote {ppath}")
    return 0


def cmd_conjectures(args: argparse.Namespace) -> int:
    rc = _resolve(args, need_params=False)
    doc: dict = {}
    if args.mode in ("periods", "both"):
        doc["periods"] = conjecture_p3_harness(
            n_samples=args.samples,
            param_box=args.param_box,
            cfg=rc.tolerances,
            seed=rc.seed,
        )
    if args.mode in ("chaos", "both"):
        doc["chaos"] = conjecture_chaos_harness(
            n_samples=args.samples,
            cfg=rc.tolerances,
            seed=rc.seed,
            param_box=args.param_box,
            threshold=args.threshold,
            n_steps=args.le_steps,
            extra_params=[row.params for row in refdata.chaotic_rows()] if args.fixtures else (),
        )
    _emit(dumps_json(doc), rc.output_path)
    return 0


def cmd_tables(args: argparse.Namespace) -> int:
    rc = _resolve(args, need_params=False)
    lines = ["table,row,quantity,reference,computed,abs_diff"]
    plot_rows = []
    if args.which in ("two-cycles", "both"):
        for i, row in enumerate(refdata.two_cycle_rows()):
            cyc = two_cycle(row.params)
            # match computed pair to the reference ordering
            if abs(cyc.phi - row.phi) + abs(cyc.psi - row.psi) <= abs(cyc.phi - row.psi) + abs(
                cyc.psi - row.phi
            ):
                phi, psi = cyc.phi, cyc.psi
            else:
                phi, psi = cyc.psi, cyc.phi
            plot_rows.append((row, phi, psi))
            for name, ref, got in (
                ("phi_re", row.phi.real, phi.real),
                ("phi_im", row.phi.imag, phi.imag),
                ("psi_re", row.psi.real, psi.real),
                ("psi_im", row.psi.imag, psi.imag),
            ):
                lines.append(
                    f"two-cycles,{i},{name},{fmt15(ref)},{fmt15(got)},{fmt15(abs(got - ref))}"
                )
    if args.which in ("chaotic", "both"):
        rng = random.Random(rc.seed)
        for i, row in enumerate(refdata.chaotic_rows()):
            initial = OrbitState(
                z_prev=complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                z_curr=complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            )
            try:
                est = lyapunov_max(row.params, initial, rc.tolerances, n_steps=args.le_steps)
                got = est.lambda_max
                lines.append(
                    f"chaotic,{i},lyapunov,{fmt15(row.lyapunov)},{fmt15(got)},{fmt15(abs(got - row.lyapunov))}"
                )
            except OrbitDiedError as exc:
                lines.append(f"chaotic,{i},lyapunov,{fmt15(row.lyapunov)},died-at-{exc.step},")
    _emit("\n".join(lines) + "\n", rc.output_path)
    ppath = _plot_path(args, "tables.png")
    if ppath and plot_rows:
        from .plotting import save_two_cycle_figure

        save_two_cycle_figure(plot_rows, ppath)
        print(f"wrote {ppath}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ratdyn",
        description="analysis toolkit for z[n+1] = (a + z[n-1]) / (b z[n] + z[n-1]) over the complex numbers",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="equilibria, linearization, stability, condition check")
    _add_common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("orbit", help="iterate one orbit and classify its outcome")
    _add_common(p)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("period2", help="period-two pair, stability, dynamic verification")
    _add_common(p)
    p.set_defaults(fn=cmd_period2)

    p = sub.add_parser("lyapunov", help="largest Lyapunov exponent along one orbit")
    _add_common(p)
    p.add_argument("--steps", type=int, default=DEFAULT_N_STEPS, help="post-transient steps")
    p.add_argument("--series-out", help="also write the running series as CSV")
    p.set_defaults(fn=cmd_lyapunov)

    p = sub.add_parser("scan", help="seeded extremum search over the parameter disks")
    _add_common(p)
    p.add_argument("--objective", choices=OBJECTIVES, required=True)
    p.add_argument("--alpha-max-mod", type=float, default=1.0)
    p.add_argument("--beta-max-mod", type=float, default=1.0)
    p.add_argument("--budget", type=int, default=100000)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("basin", help="raster of orbit fates over sliced initial conditions")
    _add_common(p)
    p.add_argument("--center", nargs=2, type=float, default=(0.0, 0.0), metavar=("RE", "IM"))
    p.add_argument("--half-width", type=float, default=1.0)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--slice", choices=SLICES, default="diagonal")
    p.add_argument("--fixed-value", nargs=2, type=float, default=(0.0, 0.0), metavar=("RE", "IM"))
    p.set_defaults(fn=cmd_basin)

    p = sub.add_parser("conjectures", help="higher-period and chaos-condition evidence harnesses")
    _add_common(p)
    p.add_argument("--mode", choices=("periods", "chaos", "both"), default="both")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--param-box", type=float, default=3.0)
    p.add_argument("--threshold", type=float, default=CHAOS_THRESHOLD)
    p.add_argument("--le-steps", type=int, default=20000)
    p.add_argument("--fixtures", action=argparse.BooleanOptionalAction, default=True,
                   help="include the bundled chaotic-parameter rows in the chaos harness")
    p.set_defaults(fn=cmd_conjectures)

    p = sub.add_parser("tables", help="regenerate the bundled reference tables with comparisons")
    _add_common(p)
    p.add_argument("--which", choices=("two-cycles", "chaotic", "both"), default="both")
    p.add_argument("--le-steps", type=int, default=DEFAULT_N_STEPS)
    p.set_defaults(fn=cmd_tables)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, DegenerateError, NoDistinctCycleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OrbitDiedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RatdynError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # never crash on fuzzed configs
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
