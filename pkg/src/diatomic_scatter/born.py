"""Born-approximation reference coefficients and the single-particle barrier.

Matrix elements are taken between free states
phi_{K,n}(X, x) = exp(i K X) psi_n(x) / sqrt(2 pi) for incident mode 0.  The
delta potentials collapse the X integral so each term reduces to a Gaussian
Fourier transform of psi_n psi_0, giving

    <phi_{K',n}|V|phi_{K0,0}> = (gamma1 / 2pi) G_n((K0 - K') r2 / a)
                              + (gamma2 / 2pi) G_n(-(K0 - K') r1 / a)

with a = sqrt(mu omega / hbar) and
G_n(b) = exp(-b**2 / 4) (i b / 2)**n sqrt(2**n / n!).
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .exceptions import ThresholdWarning
from .kinematics import critical_momentum

__all__ = ["BornTable", "born_element", "born_coefficients", "single_particle_RT"]

DEFAULT_GUARD = 0.1


@dataclass(frozen=True)
class BornTable:
    j0_re: float
    j0_tr: float
    jn_re: np.ndarray
    jn_tr: np.ndarray

    @property
    def j_re(self):
        return np.concatenate([[self.j0_re], self.jn_re])

    @property
    def j_tr(self):
        return np.concatenate([[self.j0_tr], self.jn_tr])


def _gaussian_overlap(n, b):
    log_norm = 0.5 * (n * math.log(2.0) - math.lgamma(n + 1))
    return math.exp(-0.25 * b * b + log_norm) * (0.5j * b) ** n


def born_element(p, n, sign, K0, Kn):
    """First-order matrix element from incident (K0, mode 0) to (sign * Kn, mode n).

    ``sign`` is +1 for the transmitted (forward) final state and -1 for the
    reflected one.  Real momenta only.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    a = p.oscillator.a
    dk = K0 - sign * Kn
    term1 = p.gamma1 * _gaussian_overlap(n, dk * p.r2 / a)
    term2 = p.gamma2 * _gaussian_overlap(n, -dk * p.r1 / a)
    return complex(term1 + term2) / (2.0 * math.pi)


def born_coefficients(p, inc, ch, guard=DEFAULT_GUARD):
    """Born estimates of j_n for incident mode 0.

    Elastic transmission includes the second-order optical-theorem term so
    that it is not trivially 1.  Within ``guard`` of an opening threshold the
    estimates diverge; a :class:`ThresholdWarning` is issued and the raw values
    are returned.
    """
    if inc.l != 0:
        raise ValueError("Born reference is only defined for incident mode l=0")
    K0 = inc.K0
    for n in range(1, ch.n_c + 2):
        kc = critical_momentum(p, 0, n)
        if abs(K0 - kc) < guard:
            warnings.warn(f"K0={K0} is within {guard} of the threshold K0c({n})={kc:.6g}; "
                          "Born coefficients diverge there", ThresholdWarning, stacklevel=2)
    pref = (2.0 * math.pi * p.M / p.hbar ** 2) ** 2
    open_ = [c for c in ch.channels if c.propagating]
    re, tr = [], []
    loss = 0.0
    for c in open_:
        Kn = c.K.real
        back = abs(born_element(p, c.n, -1, K0, Kn)) ** 2
        fwd = abs(born_element(p, c.n, 1, K0, Kn)) ** 2
        if Kn > 0:
            re.append(pref * back / (K0 * Kn))
            tr.append(pref * fwd / (K0 * Kn))
            loss += pref * (back + fwd) / (K0 * Kn)
        else:
            re.append(math.inf)
            tr.append(math.inf)
            loss = math.inf
    forward0 = abs(born_element(p, 0, 1, K0, K0)) ** 2
    j0_tr = 1.0 + pref * forward0 / K0 ** 2 - loss
    return BornTable(re[0], j0_tr, np.array(re[1:]), np.array(tr[1:]))


def single_particle_RT(M, gamma, K0, hbar=1.0):
    """Reflection and transmission of mass M on the barrier gamma * delta(X)."""
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma!r}")
    if not K0 > 0:
        raise ValueError(f"K0 must be positive, got {K0!r}")
    kin = hbar ** 4 * K0 ** 2
    pot = M ** 2 * gamma ** 2
    T = kin / (kin + pot)
    return pot / (kin + pot), T
