"""System parameters, channel momenta and excitation thresholds."""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .exceptions import ThresholdWarning
from .oscillator import OscillatorParams

__all__ = [
    "SystemParams",
    "IncidentSpec",
    "Channel",
    "ChannelSet",
    "total_energy",
    "cutoff_index",
    "channel_momenta",
    "critical_momentum",
    "critical_omega",
]


@dataclass(frozen=True)
class SystemParams:
    """Two harmonically bound particles scattering on delta potentials.

    ``gamma1`` acts on particle 1 (mass ``m1``) and ``gamma2`` on particle 2.
    """

    m1: float
    m2: float
    gamma1: float
    gamma2: float
    omega: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m1", "m2", "omega", "hbar"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        for name in ("gamma1", "gamma2"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be non-negative and finite, got {value!r}")

    @property
    def M(self):
        return self.m1 + self.m2

    @property
    def mu(self):
        return self.m1 * self.m2 / self.M

    @property
    def r1(self):
        return self.m1 / self.M

    @property
    def r2(self):
        return self.m2 / self.M

    @property
    def oscillator(self):
        return OscillatorParams(self.mu, self.omega, self.hbar)

    def swapped(self):
        """Same system with the particle labels exchanged."""
        return SystemParams(self.m2, self.m1, self.gamma2, self.gamma1, self.omega, self.hbar)


@dataclass(frozen=True)
class IncidentSpec:
    K0: float
    l: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.K0) and self.K0 > 0):
            raise ValueError(f"K0 must be positive and finite, got {self.K0!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"l must be a non-negative integer, got {self.l!r}")


@dataclass(frozen=True)
class Channel:
    n: int
    K: complex
    kind: str

    @property
    def propagating(self):
        return self.kind == "propagating"


@dataclass(frozen=True)
class ChannelSet:
    channels: tuple
    E_total: float
    n_c: int
    N: int

    @property
    def momenta(self):
        return np.array([ch.K for ch in self.channels], dtype=complex)

    @property
    def open_channels(self):
        return tuple(ch for ch in self.channels if ch.propagating)

    def __getitem__(self, n):
        return self.channels[n]

    def __len__(self):
        return self.N


def total_energy(p, inc):
    """Kinetic plus internal energy of the incident state."""
    return p.hbar ** 2 * inc.K0 ** 2 / (2.0 * p.M) + (inc.l + 0.5) * p.hbar * p.omega


def cutoff_index(p, inc):
    """Highest energetically open internal mode."""
    return int(math.floor(p.hbar * inc.K0 ** 2 / (2.0 * p.M * p.omega))) + int(inc.l)


def _momentum_squared(p, inc, n):
    return inc.K0 ** 2 - 2.0 * p.M * p.omega * (n - inc.l) / p.hbar


def channel_momenta(p, inc, N):
    """Centre-of-mass momenta for channels ``0..N-1`` at the incident energy.

    Open channels get a real positive momentum, closed ones a positive
    imaginary momentum so that both outgoing branches decay away from the
    potentials.  A channel sitting exactly on its threshold is kept open with
    K = 0; it carries no current and a :class:`ThresholdWarning` is issued.
    """
    n_c = cutoff_index(p, inc)
    if N <= n_c:
        raise ValueError(f"N={N} must exceed the cutoff index n_c={n_c}")
    channels = []
    for n in range(N):
        k2 = _momentum_squared(p, inc, n)
        if n <= n_c:
            K = complex(math.sqrt(max(k2, 0.0)), 0.0)
            if K == 0:
                warnings.warn(f"channel {n} is exactly at threshold (K0={inc.K0})",
                              ThresholdWarning, stacklevel=2)
            channels.append(Channel(n, K, "propagating"))
        else:
            channels.append(Channel(n, complex(0.0, math.sqrt(max(-k2, 0.0))), "evanescent"))
    return ChannelSet(tuple(channels), total_energy(p, inc), n_c, N)


def critical_momentum(p, l, n):
    """Incident momentum at which mode ``n`` opens for incident mode ``l``."""
    if n <= l:
        raise ValueError(f"no threshold for n={n} <= l={l}")
    return math.sqrt(2.0 * (n - l) * p.M * p.omega / p.hbar)


def critical_omega(p, inc, n):
    """Stiffness below which mode ``n`` is open at the incident momentum."""
    if n <= inc.l:
        raise ValueError(f"no threshold for n={n} <= l={inc.l}")
    return p.hbar * inc.K0 ** 2 / (2.0 * (n - inc.l) * p.M)
