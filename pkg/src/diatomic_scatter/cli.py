"""Command-line front end: ``diatomic-scatter {solve,sweep,converge,born,limits}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.
"""
import argparse
import logging
import math
import sys
import warnings

from .born import born_coefficients, single_particle_RT
from .exceptions import ScatteringError
from .kinematics import IncidentSpec, SystemParams, channel_momenta, critical_momentum, critical_omega
from .plotting import PlotSpec, emit_svg
from .sweep import (SWEEP_PARAMETERS, RunConfig, SweepRow, SweepSpec, emit_csv, run_convergence,
                    run_single, run_sweep, sweep_values, apply_parameter)

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("diatomic_scatter")

# CLI defaults reproduce the truncation-study parameters (K0=4, omega=3, gamma1=1).
DEFAULTS = dict(m1=1.0, m2=1.0, gamma1=1.0, gamma2=0.0, omega=3.0, k0=4.0, l=0, hbar=1.0,
                nmodes=None, tol=1e-6, param=None, start=None, stop=None, steps=21,
                scale="linear", csv=None, svg=None, markers=False, nmax=None, workers=1)

_FILE_KEYS = {"from": "start", "to": "stop", "paper-defaults": "paper_defaults"}
_TYPES = dict(m1=float, m2=float, gamma1=float, gamma2=float, omega=float, k0=float, l=int,
              hbar=float, nmodes=int, tol=float, param=str, start=float, stop=float, steps=int,
              scale=str, csv=str, svg=str, nmax=int, workers=int)
_BOOLS = ("markers", "paper_defaults")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path):
    """Flat ``key = value`` file whose keys mirror the long CLI flags."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, value = (s.strip() for s in line.split("=", 1))
            else:
                key, value = line, "true"
            key = key.lstrip("-")
            key = _FILE_KEYS.get(key, key.replace("-", "_"))
            if key in _BOOLS:
                values[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in _TYPES:
                try:
                    values[key] = _TYPES[key](value)
                except ValueError:
                    raise UsageError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
            else:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _common(p):
    g = p.add_argument_group("system")
    g.add_argument("--m1", type=float, help="mass of particle 1")
    g.add_argument("--m2", type=float, help="mass of particle 2")
    g.add_argument("--gamma1", type=float, help="delta strength acting on particle 1")
    g.add_argument("--gamma2", type=float, help="delta strength acting on particle 2")
    g.add_argument("--omega", type=float, help="binding frequency")
    g.add_argument("--k0", type=float, help="incident centre-of-mass momentum")
    g.add_argument("--l", type=int, help="incident internal mode")
    g.add_argument("--hbar", type=float, help=argparse.SUPPRESS)
    g.add_argument("--nmodes", type=int, help="channel truncation N (default n_c + 8)")
    g.add_argument("--tol", type=float, help="conservation tolerance (default 1e-6)")
    g.add_argument("--paper-defaults", action="store_true", default=None,
                   help="pin m1 = m2 = 1 (hbar = 1, M = 2)")
    g.add_argument("--config", metavar="PATH", help="key = value file; flags override it")
    o = p.add_argument_group("output")
    o.add_argument("--csv", metavar="PATH", help="write rows as CSV")
    o.add_argument("--svg", metavar="PATH", help="write an SVG line plot")
    o.add_argument("-v", "--verbose", action="store_true")


def _sweep_args(p, required=False):
    g = p.add_argument_group("sweep")
    g.add_argument("--param", choices=SWEEP_PARAMETERS, help="swept parameter")
    g.add_argument("--from", dest="start", type=float, help="first value")
    g.add_argument("--to", dest="stop", type=float, help="last value")
    g.add_argument("--steps", type=int, help="number of points (default 21)")
    g.add_argument("--scale", choices=("linear", "log"))
    g.add_argument("--markers", action="store_true", default=None,
                   help="draw threshold lines on the SVG (K0 and omega sweeps)")
    g.add_argument("--workers", type=int, help="parallel worker processes")


def build_parser():
    parser = _Parser(prog="diatomic-scatter",
                     description="Coupled-channel scattering of a harmonically bound pair on delta potentials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one configuration")
    _common(p)

    p = sub.add_parser("sweep", help="sweep one parameter")
    _common(p)
    _sweep_args(p)

    p = sub.add_parser("converge", help="truncation study over N")
    _common(p)
    p.add_argument("--nmax", type=int, help="largest N (default n_c + 12)")

    p = sub.add_parser("born", help="Born approximation next to the mode-matching result")
    _common(p)
    _sweep_args(p)

    p = sub.add_parser("limits", help="single-particle delta-barrier limits")
    _common(p)
    return parser


def _resolve(args):
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    for key, value in vars(args).items():
        if value is not None:
            values[key] = value
    if values.get("paper_defaults"):
        values["m1"] = values["m2"] = 1.0
        values["hbar"] = 1.0
    return argparse.Namespace(**values)


def _config(a):
    system = SystemParams(a.m1, a.m2, a.gamma1, a.gamma2, a.omega, a.hbar)
    incident = IncidentSpec(a.k0, a.l)
    return RunConfig(system, incident, a.nmodes, a.tol)


def _sweep_spec(a):
    if a.param is None or a.start is None or a.stop is None:
        raise UsageError("a sweep needs --param, --from and --to")
    return SweepSpec(a.param, a.start, a.stop, a.steps, a.scale)


def _markers(cfg, spec):
    p, inc = cfg.system, cfg.incident
    lo, hi = spec.start, spec.stop
    xs, labels = [], []
    n = inc.l + 1
    while n < inc.l + 64:
        if spec.parameter == "K0":
            x = critical_momentum(p, inc.l, n)
            if x > hi:
                break
            label = f"K0c({n})"
        elif spec.parameter == "omega":
            x = critical_omega(p, inc, n)
            if x < lo:
                break
            label = f"wc({n})"
        else:
            break
        if lo <= x <= hi:
            xs.append(x)
            labels.append(label)
        n += 1
    return xs, labels


def _plot(a, rows, spec, cfg, ylabel="j"):
    if not a.svg:
        return
    markers, labels = _markers(cfg, spec) if a.markers else ([], None)
    emit_svg(rows, a.svg, PlotSpec(xlabel=spec.parameter, ylabel=ylabel, log_x=spec.scale == "log",
                                   markers=markers, marker_labels=labels))


def _print_rows(rows, out):
    for r in rows:
        line = f"{r.param:<14.8g} j_total={r.j_total:<20.15g} residual={r.residual:.3e} n_c={r.n_c} {r.status}"
        if not math.isnan(r.max_change):
            line += f" max_change={r.max_change:.3e}"
        if r.error:
            line += f" ({r.error})"
        print(line, file=out)


def cmd_solve(a, out):
    cfg = _config(a)
    report = run_single(cfg)
    print(report.summary(), file=out)
    if a.csv:
        t = report.table
        emit_csv([SweepRow(a.k0, t.j_re, t.j_tr, t.j_total, report.residual_norm, t.n_c, report.status)],
                 a.csv)
    return EXIT_OK


def cmd_sweep(a, out):
    cfg, spec = _config(a), _sweep_spec(a)
    rows = run_sweep(cfg, spec, workers=a.workers)
    _print_rows(rows, out)
    if a.csv:
        emit_csv(rows, a.csv)
    _plot(a, rows, spec, cfg)
    return EXIT_OK


def cmd_converge(a, out):
    cfg = _config(a)
    n_max = a.nmax if a.nmax is not None else cfg.n_c + 12
    rows = run_convergence(cfg, n_max)
    _print_rows(rows, out)
    if a.csv:
        emit_csv(rows, a.csv)
    if a.svg:
        emit_svg(rows, a.svg, PlotSpec(xlabel="N", ylabel="j"))
    return EXIT_OK


def _born_row(cfg):
    p, inc = cfg.system, cfg.incident
    ch = channel_momenta(p, inc, cfg.N)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        b = born_coefficients(p, inc, ch)
    j_re, j_tr = b.j_re, b.j_tr
    return b, SweepRow(inc.K0, j_re, j_tr, float(j_re.sum() + j_tr.sum()), math.nan, ch.n_c, "born")


def cmd_born(a, out):
    cfg = _config(a)
    if cfg.incident.l != 0:
        raise UsageError("the Born reference is defined for --l 0 only")
    if a.param is None:
        b, _ = _born_row(cfg)
        report = run_single(cfg)
        t = report.table
        print(f"{'n':>3} {'born j_re':>14} {'numeric j_re':>14} {'born j_tr':>14} {'numeric j_tr':>14}", file=out)
        for n in range(t.n_c + 1):
            print(f"{n:>3} {b.j_re[n]:>14.8g} {t.j_re[n]:>14.8g} {b.j_tr[n]:>14.8g} {t.j_tr[n]:>14.8g}", file=out)
        return EXIT_OK
    spec = _sweep_spec(a)
    rows = []
    for v in sweep_values(spec):
        point = apply_parameter(cfg, spec.parameter, v)
        _, row = _born_row(point)
        rows.append(SweepRow(float(v), row.j_re, row.j_tr, row.j_total, math.nan, row.n_c, "born"))
    _print_rows(rows, out)
    if a.csv:
        emit_csv(rows, a.csv)
    _plot(a, rows, spec, cfg, ylabel="j (Born)")
    return EXIT_OK


def cmd_limits(a, out):
    cfg = _config(a)
    p, inc = cfg.system, cfg.incident
    R, T = single_particle_RT(p.M, p.gamma1, inc.K0, p.hbar)
    report = run_single(cfg)
    t = report.table
    print(f"single particle (M={p.M:g}, gamma={p.gamma1:g}, K0={inc.K0:g}): R={R:.12g} T={T:.12g}", file=out)
    print(f"composite j_0^re={t.j_re[0]:.12g} j_0^tr={t.j_tr[0]:.12g} "
          f"(differences {t.j_re[0] - R:+.3e}, {t.j_tr[0] - T:+.3e})", file=out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "converge": cmd_converge,
            "born": cmd_born, "limits": cmd_limits}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        a = _resolve(args)
        return COMMANDS[args.command](a, out)
    except UsageError as exc:
        print(f"diatomic-scatter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScatteringError as exc:
        print(f"diatomic-scatter: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"diatomic-scatter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"diatomic-scatter: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
