"""Command line entry point: ``chemofront {run,analytic,compare,speed1d,sweep}``.

Exit status is 0 on success, 1 on usage or input errors and 2 on
numerical failure (blow-up, missing root, no contour).
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analytic, fronts, solver
from .errors import ChemofrontError, NumericalFailure
from .grid import cross_section, load_snapshot, write_profile_csv
from .params import TABLE1, Parameters, RunConfig, parse_config, validate
from .scenarios import T2_LONG_T_END, get_scenario

log = logging.getLogger("chemofront")

PAPER_SCALE_N = 256
_PARAM_NAMES = ("Du", "Dv", "lam", "beta", "delta", "chi0", "u_star", "v_star", "A", "omega")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_config(args) -> RunConfig:
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
    else:
        cfg = RunConfig()
    changes = {}
    if args.scenario:
        changes["scenario"] = args.scenario.upper()
    scenario_name = changes.get("scenario", cfg.scenario)
    if scenario_name == "custom":
        raise UsageError("run needs a T1/T2/T3 scenario to build initial data")
    scen = get_scenario(scenario_name)
    changes["params"] = scen.params(cfg.params)
    if args.paper_scale:
        changes["grid_n"] = PAPER_SCALE_N
        if scen.name == "T2" and args.t_end is None:
            changes["t_end"] = T2_LONG_T_END
    if args.grid is not None:
        changes["grid_n"] = args.grid
    if args.t_end is not None:
        changes["t_end"] = args.t_end
    if args.snapshots:
        changes["snapshot_times"] = tuple(float(t) for t in args.snapshots.split(","))
    if args.out:
        changes["output_dir"] = args.out
    cfg = cfg.replace(**changes)
    cfg = cfg.replace(snapshot_times=tuple(t for t in cfg.snapshot_times if t <= cfg.t_end))
    problems = cfg.problems()
    if problems:
        raise UsageError("; ".join(problems))
    return cfg


def cmd_run(args) -> int:
    cfg = _build_config(args)
    scen = get_scenario(cfg.scenario)
    ic = scen.initial_condition(cfg.grid_n)
    out = Path(cfg.output_dir)
    manifest = solver.run(cfg, ic, out, threads=args.threads)
    final = load_snapshot(out / manifest["final_snapshot"])
    for name in ("u", "v", "c"):
        prof = cross_section(getattr(final, name), cfg.cross_section_axis, cfg.cross_section_offset)
        write_profile_csv(prof, out / f"section_{name}.csv")
    print(f"{manifest['steps']} steps, final snapshot {manifest['final_snapshot']} in {out}")
    return 0


def _params_from(args, base=TABLE1) -> Parameters:
    changes = {}
    for name in _PARAM_NAMES:
        value = getattr(args, name, None)
        if value is not None:
            changes[name] = value
    params = base.replace(**changes)
    problems = validate(params)
    if problems:
        raise UsageError("; ".join(problems))
    return params


def _write_rows(rows, header, out):
    lines = [header] + [",".join(_fmt(x) for x in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    sys.stdout.write(text)


def _fmt(x):
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def cmd_analytic(args) -> int:
    params = _params_from(args)
    rows = analytic.analytic_report(params)
    out = Path(args.out) / "analytic.csv" if args.out else None
    _write_rows(rows, "quantity,value", out)
    return 0


def _params_from_manifest(manifest) -> Parameters:
    return Parameters(**{k: float(manifest[f"param.{k}"]) for k in _PARAM_NAMES})


def cmd_compare(args) -> int:
    run_dir = Path(args.run)
    try:
        manifest = solver.read_manifest(run_dir / "manifest.txt")
    except OSError as exc:
        raise UsageError(f"cannot read manifest in {run_dir}: {exc}") from None
    params = _params_from_manifest(manifest)
    s = analytic.steady_state(params)
    eq = analytic.equilibrium_radius(params, s)
    scen_name = manifest.get("scenario", "T1")
    centers = get_scenario(scen_name).centers if scen_name != "custom" else ((0.5, 0.5),)
    out = Path(args.out) if args.out else run_dir
    out.mkdir(parents=True, exist_ok=True)
    report = fronts.compare_to_analytic(run_dir, s, eq, params, centers[0])
    if len(centers) > 1:
        final = load_snapshot(run_dir / manifest["final_snapshot"])
        for k, center in enumerate(centers):
            contour, est, _ = fronts.measure_front(final.u, s, params, center, eq.R0)
            report.add(f"R0_colony{k}", est.mean_radius, eq.R0)
            report.contours[f"colony{k}"] = contour
    report.to_csv(out / "report.csv")
    for name, contour in report.contours.items():
        fronts.write_contour_csv(contour, out / f"contour_{name}.csv")
    if report.c_profile is not None:
        np.savetxt(out / "c_profile.csv", report.c_profile, delimiter=",",
                   header="x,r,numeric,analytic", comments="", fmt="%.17g")
    sys.stdout.write((out / "report.csv").read_text())
    return 0


def cmd_speed1d(args) -> int:
    params = _params_from(args)
    res = solver.front_speed_1d(params, args.length, args.n, args.t_measure, delta_c=args.delta_c)
    u1, u2 = analytic.shifted_equilibria(args.delta_c, params.lam, params.chi0, params.u_star)
    predicted = analytic.nagumo_speed(u1, u2, params.lam, params.Du)
    _write_rows([("measured", res.speed), ("fit_residual", res.residual), ("predicted", predicted)],
                "quantity,value", None)
    return 0


def cmd_sweep(args) -> int:
    if args.param not in _PARAM_NAMES:
        raise UsageError(f"unknown parameter {args.param!r}; choose from {', '.join(_PARAM_NAMES)}")
    base = _params_from(args)
    rows = []
    for value in np.linspace(args.start, args.stop, args.steps):
        params = base.replace(**{args.param: float(value)})
        R1 = float("nan")
        if validate(params):
            rows.append((value, R1, R1, R1, 0, 0, "invalid"))
            continue
        try:
            s = analytic.steady_state(params)
            R1 = s.R1
            eq = analytic.equilibrium_radius(params, s)
            rows.append((value, R1, eq.R0, eq.radial_rate, int(eq.stable), len(eq.roots), "ok"))
        except NumericalFailure as exc:
            rows.append((value, R1, float("nan"), float("nan"), 0, 0, type(exc).__name__))
    out = Path(args.out) / "sweep.csv" if args.out else None
    _write_rows(rows, f"{args.param},R1,R0,radial_rate,stable,n_roots,status", out)
    return 0


def _add_param_flags(p):
    p.add_argument("--A", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--chi0", type=float)
    p.add_argument("--Du", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--u-star", dest="u_star", type=float)
    p.add_argument("--v-star", dest="v_star", type=float)


def build_parser():
    parser = _Parser(prog="chemofront", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("run", help="simulate a scenario")
    p.add_argument("--config")
    p.add_argument("--scenario", choices=["t1", "t2", "t3", "T1", "T2", "T3"])
    p.add_argument("--grid", type=int)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--snapshots", help="comma separated snapshot times")
    p.add_argument("--out")
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analytic", help="print the analytic report")
    _add_param_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("compare", help="compare a finished run with the analytic state")
    p.add_argument("--run", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("speed1d", help="measure the 1D front speed")
    _add_param_flags(p)
    p.add_argument("--delta-c", dest="delta_c", type=float, default=0.0)
    p.add_argument("--length", type=float, default=2.0)
    p.add_argument("--n", type=int, default=1001)
    p.add_argument("--t-measure", dest="t_measure", type=float, default=2.0)
    p.set_defaults(func=cmd_speed1d)

    p = sub.add_parser("sweep", help="equilibrium radius and stability over a parameter range")
    _add_param_flags(p)
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    # numba complains about an old TBB even though it falls back cleanly
    warnings.filterwarnings("ignore", message="The TBB threading layer")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; try --help")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ChemofrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
