"""Single solves, parameter sweeps, truncation studies and CSV output."""
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from .exceptions import ScatteringError
from .kinematics import IncidentSpec, SystemParams, cutoff_index
from .matching import EXTRA_MODES, scattering_solution
from .observables import DEFAULT_CONSERVATION_TOL, coefficients, conservation_check

__all__ = [
    "RunConfig",
    "SweepSpec",
    "SweepRow",
    "SolveReport",
    "SWEEP_PARAMETERS",
    "run_single",
    "run_sweep",
    "run_convergence",
    "sweep_values",
    "apply_parameter",
    "emit_csv",
    "csv_header",
]

log = logging.getLogger(__name__)

SWEEP_PARAMETERS = ("gamma1", "gamma2", "gamma_both", "K0", "omega", "mass_ratio", "n_modes")


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    incident: IncidentSpec
    n_modes: int = None
    conservation_tol: float = DEFAULT_CONSERVATION_TOL
    quadrature_tol: float = 1e-10

    def __post_init__(self):
        if not self.conservation_tol > 0:
            raise ValueError(f"conservation_tol must be positive, got {self.conservation_tol!r}")
        if not self.quadrature_tol > 0:
            raise ValueError(f"quadrature_tol must be positive, got {self.quadrature_tol!r}")
        if self.n_modes is not None and self.n_modes <= self.n_c:
            raise ValueError(f"n_modes={self.n_modes} must exceed n_c={self.n_c}")

    @property
    def n_c(self):
        return cutoff_index(self.system, self.incident)

    @property
    def N(self):
        return self.n_c + EXTRA_MODES if self.n_modes is None else self.n_modes


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(f"parameter must be one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if not self.start < self.stop:
            raise ValueError(f"sweep needs start < stop, got {self.start} >= {self.stop}")
        if self.steps < 2:
            raise ValueError(f"steps must be at least 2, got {self.steps}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ValueError("log scale requires a positive start value")


@dataclass(frozen=True)
class SweepRow:
    param: float
    j_re: np.ndarray
    j_tr: np.ndarray
    j_total: float
    residual: float
    n_c: int
    status: str
    max_change: float = math.nan
    error: str = field(default=None, compare=False)


@dataclass(frozen=True)
class SolveReport:
    config: RunConfig
    table: object
    channels: object
    amplitudes: object
    conservation: object

    @property
    def residual_norm(self):
        return self.amplitudes.residual_norm

    @property
    def status(self):
        return "converged" if self.conservation.passed else "unconverged"

    def summary(self):
        p, inc = self.config.system, self.config.incident
        lines = [
            f"m1={p.m1:g} m2={p.m2:g} gamma1={p.gamma1:g} gamma2={p.gamma2:g} "
            f"omega={p.omega:g} K0={inc.K0:g} l={inc.l}",
            f"N={self.channels.N} n_c={self.channels.n_c} E={self.channels.E_total:.10g}",
            f"{'n':>3} {'K_n':>24} {'j_re':>14} {'j_tr':>14}",
        ]
        for ch in self.channels.channels:
            K = f"{ch.K.real:.10g}" if ch.propagating else f"{ch.K.imag:.10g}i"
            if ch.propagating:
                lines.append(f"{ch.n:>3} {K:>24} {self.table.j_re[ch.n]:>14.8g} {self.table.j_tr[ch.n]:>14.8g}")
            else:
                lines.append(f"{ch.n:>3} {K:>24} {'(closed)':>14}")
        lines.append(f"j_total={self.table.j_total:.12g} deviation={self.conservation.deviation:.3e} "
                     f"residual={self.residual_norm:.3e} status={self.status}")
        return "\n".join(lines)


def run_single(cfg):
    """Solve one configuration and gather the observables."""
    try:
        ch, amps = scattering_solution(cfg.system, cfg.incident, cfg.N, cfg.quadrature_tol)
    except ScatteringError as exc:
        raise type(exc)(f"{exc} [config: {cfg.system}, {cfg.incident}, N={cfg.N}]") from exc
    table = coefficients(ch, amps, cfg.incident)
    return SolveReport(cfg, table, ch, amps, conservation_check(table, cfg.conservation_tol))


def _row(param, report):
    t = report.table
    return SweepRow(param, t.j_re, t.j_tr, t.j_total, report.residual_norm, t.n_c, report.status)


def _failed_row(param, cfg, exc):
    try:
        n_c = cfg.n_c
    except ValueError:
        n_c = 0
    return SweepRow(param, np.zeros(0), np.zeros(0), math.nan, math.nan, n_c, "unconverged",
                    error=str(exc))


def sweep_values(spec):
    if spec.scale == "log":
        values = np.geomspace(spec.start, spec.stop, spec.steps)
    else:
        values = np.linspace(spec.start, spec.stop, spec.steps)
    if spec.parameter == "n_modes":
        values = np.unique(np.round(values).astype(int))
    return values


def apply_parameter(cfg, parameter, value):
    p, inc = cfg.system, cfg.incident
    if parameter == "gamma1":
        p = replace(p, gamma1=value)
    elif parameter == "gamma2":
        p = replace(p, gamma2=value)
    elif parameter == "gamma_both":
        p = replace(p, gamma1=value, gamma2=value)
    elif parameter == "omega":
        p = replace(p, omega=value)
    elif parameter == "mass_ratio":
        M = p.M
        p = replace(p, m1=value * M, m2=(1.0 - value) * M)
    elif parameter == "K0":
        inc = replace(inc, K0=value)
    elif parameter == "n_modes":
        return replace(cfg, n_modes=int(value))
    else:
        raise ValueError(f"unknown sweep parameter {parameter!r}")
    n_modes = cfg.n_modes
    if n_modes is not None and n_modes <= cutoff_index(p, inc):
        n_modes = None
    return RunConfig(p, inc, n_modes, cfg.conservation_tol, cfg.quadrature_tol)


def _evaluate(args):
    cfg, parameter, value = args
    try:
        point = apply_parameter(cfg, parameter, value)
        return _row(float(value), run_single(point))
    except (ScatteringError, ValueError, np.linalg.LinAlgError) as exc:
        log.warning("sweep point %s=%r failed: %s", parameter, value, exc)
        return _failed_row(float(value), cfg, exc)


def run_sweep(cfg, spec, workers=None):
    """Evaluate the configuration across ``spec``; rows keep sweep order.

    A fixed ``cfg.n_modes`` that a point's cutoff index outgrows falls back to
    the default truncation for that point.  Failing points become
    ``unconverged`` rows and the sweep carries on.
    """
    tasks = [(cfg, spec.parameter, v) for v in sweep_values(spec)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate, tasks))
    return [_evaluate(t) for t in tasks]


def _max_change(prev, report):
    if prev is None:
        return math.nan
    n = min(len(prev.table.j_re), len(report.table.j_re))
    a0, a1 = prev.amplitudes, report.amplitudes
    diffs = np.concatenate([np.abs(a1.alpha[:n] - a0.alpha[:n]), np.abs(a1.beta[:n] - a0.beta[:n])])
    return float(diffs.max())


def run_convergence(cfg, n_max):
    """Rows for truncations N = n_c+1 .. n_max.

    ``max_change`` on each row is the largest change of an open-channel
    amplitude relative to the previous N (nan on the first row).
    """
    n_c = cfg.n_c
    if n_max <= n_c + 1:
        raise ValueError(f"n_max={n_max} must exceed n_c+1={n_c + 1}")
    rows, prev = [], None
    for N in range(n_c + 1, n_max + 1):
        point = replace(cfg, n_modes=N)
        try:
            report = run_single(point)
        except ScatteringError as exc:
            log.warning("truncation N=%d failed: %s", N, exc)
            rows.append(_failed_row(float(N), point, exc))
            prev = None
            continue
        rows.append(replace(_row(float(N), report), max_change=_max_change(prev, report)))
        prev = report
    return rows


def csv_header(n_c):
    return (["param"] + [f"j_re_{n}" for n in range(n_c + 1)]
            + [f"j_tr_{n}" for n in range(n_c + 1)] + ["j_total", "residual", "n_c", "status"])


def _fmt(x):
    return format(float(x), ".17g")


def _padded(values, width):
    out = np.zeros(width)
    out[: len(values)] = values
    return out


def emit_csv(rows, path):
    """Write rows as CSV with one j column per channel up to the largest n_c."""
    if not rows:
        raise ValueError("emit_csv needs at least one row")
    n_c = max(r.n_c for r in rows)
    width = n_c + 1
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_header(n_c))
        for r in rows:
            writer.writerow([_fmt(r.param)]
                            + [_fmt(v) for v in _padded(r.j_re, width)]
                            + [_fmt(v) for v in _padded(r.j_tr, width)]
                            + [_fmt(r.j_total), _fmt(r.residual), str(r.n_c), r.status])
    return path
