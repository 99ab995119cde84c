"""Probability currents, reflection/transmission coefficients and unitarity."""
from dataclasses import dataclass
import math

import numpy as np

__all__ = ["CoefficientTable", "ConservationResult", "currents", "coefficients", "conservation_check"]

DEFAULT_CONSERVATION_TOL = 1e-6


@dataclass(frozen=True)
class CoefficientTable:
    """Current-normalized reflection and transmission per open channel 0..n_c."""

    j_re: np.ndarray
    j_tr: np.ndarray
    j_total: float
    n_c: int

    def as_dict(self):
        return {"j_re": self.j_re.tolist(), "j_tr": self.j_tr.tolist(),
                "j_total": self.j_total, "n_c": self.n_c}


@dataclass(frozen=True)
class ConservationResult:
    passed: bool
    deviation: float

    def __bool__(self):
        return self.passed


def _open(ch, amps):
    if ch.N != amps.N:
        raise ValueError(f"channel set (N={ch.N}) and amplitudes (N={amps.N}) disagree")
    return [c for c in ch.channels if c.propagating]


def currents(ch, amps, inc, M, hbar=1.0, channels=None):
    """Incident current and per-channel reflected/transmitted currents.

    ``channels`` restricts the output to the given indices; asking for an
    evanescent channel is an error since it carries no asymptotic current.
    Returns ``(J_in, J_re, J_tr)`` with the arrays indexed like ``channels``.
    """
    open_ = _open(ch, amps)
    if channels is None:
        channels = [c.n for c in open_]
    for n in channels:
        if not ch[n].propagating:
            raise ValueError(f"channel {n} is evanescent and carries no current")
    K = np.array([ch[n].K.real for n in channels])
    alpha = amps.alpha[list(channels)]
    beta = amps.beta[list(channels)]
    j_in = hbar * inc.K0 / (2.0 * math.pi * M)
    j_re = -np.abs(alpha) ** 2 * hbar * K / (2.0 * math.pi * M)
    j_tr = np.abs(beta) ** 2 * hbar * K / (2.0 * math.pi * M)
    return j_in, j_re, j_tr


def coefficients(ch, amps, inc):
    """j_n = |amplitude|**2 K_n / K0 over the open channels."""
    open_ = _open(ch, amps)
    K = np.array([c.K.real for c in open_])
    idx = [c.n for c in open_]
    ratio = K / inc.K0
    j_re = np.abs(amps.alpha[idx]) ** 2 * ratio
    j_tr = np.abs(amps.beta[idx]) ** 2 * ratio
    return CoefficientTable(j_re, j_tr, float(j_re.sum() + j_tr.sum()), ch.n_c)


def conservation_check(table, tol=DEFAULT_CONSERVATION_TOL):
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    deviation = table.j_total - 1.0
    return ConservationResult(abs(deviation) <= tol, deviation)
