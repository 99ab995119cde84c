"""Harmonic-oscillator eigenfunctions and their half-line exponential moments.

The moments are

    c(q) = int psi_m(x) exp(q x) psi_n(x) dx
    d(q) = int psi_m(x) exp(q x) psi_n'(x) dx

taken over either the negative or the positive half-line.  For evanescent
channels ``q`` has a real part and the integrand peaks far from the origin
with a magnitude ``exp(Re(q)**2 / (4 a**2))`` that overflows doubles in
extreme mass ratios.  Moments are therefore stored as a mantissa together
with a natural-log scale, ``value = mantissa * exp(log_scale)``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import logging
import math

import numpy as np

from .exceptions import MissingMomentError, QuadratureError

log = logging.getLogger(__name__)

__all__ = [
    "OscillatorParams",
    "MomentKey",
    "MomentValue",
    "MomentTable",
    "eval_psi",
    "eval_psi_prime",
    "half_line_moments",
    "moment_c",
    "moment_d",
    "moment_table",
]

MAX_INDEX = 64
SIDES = ("negative", "positive")

# Gaussian tail margin, in units of 1/a, beyond the classical turning point.
_TAIL_MARGIN = 12.0
_START_ORDER = 48
_MAX_ORDER = 4096


@dataclass(frozen=True)
class OscillatorParams:
    """Relative-motion oscillator: reduced mass, frequency and hbar."""

    mu: float
    omega: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mu", "omega", "hbar"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def a(self):
        """Inverse length scale sqrt(mu * omega / hbar)."""
        return math.sqrt(self.mu * self.omega / self.hbar)


@dataclass(frozen=True)
class MomentKey:
    m: int
    n: int
    q: complex
    side: str
    kind: str = "c"

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.kind not in ("c", "d"):
            raise ValueError(f"kind must be 'c' or 'd', got {self.kind!r}")
        if not (0 <= self.m <= MAX_INDEX and 0 <= self.n <= MAX_INDEX):
            raise ValueError(f"indices must lie in [0, {MAX_INDEX}], got m={self.m}, n={self.n}")


@dataclass(frozen=True)
class MomentValue:
    mantissa: complex
    log_scale: float = 0.0

    @property
    def value(self):
        """The moment itself; may overflow to inf for extreme evanescent channels."""
        m = complex(self.mantissa)
        if self.log_scale == 0.0:
            return m
        with np.errstate(over="ignore"):
            g = np.exp(self.log_scale)
            # scale components separately so a zero part stays zero instead of nan
            return complex(m.real * g if m.real else 0.0, m.imag * g if m.imag else 0.0)


def _check_index(n):
    if n < 0 or n > MAX_INDEX:
        raise ValueError(f"oscillator index must lie in [0, {MAX_INDEX}], got {n}")


def _hermite_functions(nmax, t):
    """Normalized Hermite functions h_0..h_nmax at t, shape (nmax + 1,) + t.shape."""
    t = np.asarray(t, dtype=float)
    h = np.empty((nmax + 1,) + t.shape)
    h[0] = np.pi ** -0.25 * np.exp(-0.5 * t * t)
    if nmax >= 1:
        h[1] = math.sqrt(2.0) * t * h[0]
    for k in range(1, nmax):
        h[k + 1] = math.sqrt(2.0 / (k + 1)) * t * h[k] - math.sqrt(k / (k + 1)) * h[k - 1]
    return h


def _hermite_polynomials(nmax, t):
    """Hermite functions with the Gaussian factor stripped, h_n(t) * exp(t**2 / 2)."""
    t = np.asarray(t, dtype=float)
    P = np.empty((nmax + 1,) + t.shape)
    P[0] = np.pi ** -0.25
    if nmax >= 1:
        P[1] = math.sqrt(2.0) * t * P[0]
    for k in range(1, nmax):
        P[k + 1] = math.sqrt(2.0 / (k + 1)) * t * P[k] - math.sqrt(k / (k + 1)) * P[k - 1]
    return P


def eval_psi(n, x, p):
    """Normalized oscillator eigenfunction psi_n(x).

    Uses the three-term recurrence on Hermite functions, which stays finite
    where H_n(x) * exp(-x**2/2) would overflow.
    """
    _check_index(n)
    a = p.a
    h = _hermite_functions(n, a * np.asarray(x, dtype=float))
    out = math.sqrt(a) * h[n]
    return float(out) if np.ndim(out) == 0 else out


def eval_psi_prime(n, x, p):
    """Derivative psi_n'(x) from the ladder identity."""
    _check_index(n)
    a = p.a
    h = _hermite_functions(n + 1, a * np.asarray(x, dtype=float))
    out = a * math.sqrt(a) * (-math.sqrt((n + 1) / 2.0) * h[n + 1])
    if n > 0:
        out = out + a * math.sqrt(a) * math.sqrt(n / 2.0) * h[n - 1]
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def _gauss_legendre(order):
    return np.polynomial.legendre.leggauss(order)


def _peak(re_p, side):
    """Location of the exp(-t**2 + Re(p) t) maximum, clipped to the half-line."""
    t_peak = 0.5 * re_p
    if side == "positive":
        return max(t_peak, 0.0)
    return min(t_peak, 0.0)


def half_line_moments(q, side, nmax, p, tol=1e-10, fail_tol=1e-9):
    """All c-moments for indices 0..nmax at one exponent on one half-line.

    Returns ``(C, log_scale)`` with ``C[m, n] * exp(log_scale)`` equal to the
    integral of psi_m exp(q x) psi_n over the chosen half-line.  The
    integration runs in the scaled variable t = a x, where the integrand is
    P_m(t) P_n(t) exp(-t**2 + p t) with p = q / a.

    Gauss-Legendre order is doubled until two successive orders agree within
    ``tol`` (relative to max(1, max|C|)).  If the largest order still differs
    from its predecessor by more than ``fail_tol`` a :class:`QuadratureError`
    is raised; a disagreement between the two is accepted and logged.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    if nmax < 0 or nmax > MAX_INDEX + 1:
        raise ValueError(f"nmax must lie in [0, {MAX_INDEX + 1}], got {nmax}")
    pc = complex(q) / p.a
    re_p, im_p = pc.real, pc.imag
    t_star = _peak(re_p, side)
    log_scale = t_star * t_star
    slope = re_p - 2.0 * t_star
    width = _TAIL_MARGIN + math.sqrt(2.0 * nmax + 1.0)
    if side == "positive":
        lo, hi = max(0.0, t_star - width), t_star + width
    else:
        lo, hi = t_star - width, min(0.0, t_star + width)
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)

    def integrate(order):
        nodes, weights = _gauss_legendre(order)
        t = mid + half * nodes
        expo = -(t - t_star) ** 2 + slope * t
        f = half * weights * np.exp(expo + 1j * im_p * t)
        P = _hermite_polynomials(nmax, t)
        return (P * f) @ P.T

    order = _START_ORDER
    prev = integrate(order)
    while True:
        order *= 2
        cur = integrate(order)
        scale = max(1.0, float(np.max(np.abs(cur))))
        err = float(np.max(np.abs(cur - prev)))
        if err <= tol * scale:
            return cur, log_scale
        if order >= _MAX_ORDER:
            if err <= max(fail_tol, tol) * scale:
                log.debug("moments at q=%r (%s) settled at %.2e, above the %.0e target", q, side, err, tol)
                return cur, log_scale
            raise QuadratureError(
                f"half-line moments for q={q!r} ({side}) did not converge: "
                f"orders {order // 2} and {order} differ by {err:.3e}")
        prev = cur


def _ladder(C, a):
    """d-moments from c-moments: d[:, n] = a (sqrt(n/2) c[:, n-1] - sqrt((n+1)/2) c[:, n+1])."""
    nmax = C.shape[1] - 1
    n = np.arange(nmax)
    D = -np.sqrt((n + 1) / 2.0) * C[:, 1:]
    D[:, 1:] += np.sqrt(n[1:] / 2.0) * C[:, :-2]
    return a * D[:nmax, :]


def moment_c(key, p, tol=1e-10):
    """Single c-moment; see :func:`half_line_moments`."""
    if key.kind != "c":
        raise ValueError("moment_c requires a key with kind='c'")
    C, s = half_line_moments(key.q, key.side, max(key.m, key.n), p, tol)
    return MomentValue(complex(C[key.m, key.n]), s)


def moment_d(key, p, tol=1e-10):
    """Single d-moment, built from c-moments with the ladder identity."""
    if key.kind != "d":
        raise ValueError("moment_d requires a key with kind='d'")
    C, s = half_line_moments(key.q, key.side, max(key.m, key.n) + 1, p, tol)
    D = _ladder(C, p.a)
    return MomentValue(complex(D[key.m, key.n]), s)


@dataclass(frozen=True)
class MomentTable:
    """Precomputed c/d moments for indices below ``N`` at a fixed set of exponents."""

    N: int
    params: OscillatorParams
    _c: dict = field(repr=False)
    _d: dict = field(repr=False)
    _scale: dict = field(repr=False)

    @staticmethod
    def _key(q, side):
        return complex(q), side

    def _lookup(self, store, kind, m, n, q, side):
        k = self._key(q, side)
        if k not in store or not (0 <= m < self.N and 0 <= n < self.N):
            raise MissingMomentError(m, n, q, side)
        return MomentValue(complex(store[k][m, n]), self._scale[k])

    def c(self, m, n, q, side):
        return self._lookup(self._c, "c", m, n, q, side)

    def d(self, m, n, q, side):
        return self._lookup(self._d, "d", m, n, q, side)

    def get(self, key):
        store = self._c if key.kind == "c" else self._d
        return self._lookup(store, key.kind, key.m, key.n, key.q, key.side)

    def block(self, kind, q, side):
        """Full ``N x N`` mantissa matrix and its log scale for one exponent."""
        k = self._key(q, side)
        store = self._c if kind == "c" else self._d
        if k not in store:
            raise MissingMomentError(0, 0, q, side)
        return store[k], self._scale[k]

    def __contains__(self, item):
        q, side = item
        return self._key(q, side) in self._c

    @property
    def exponents(self):
        return sorted({k[0] for k in self._c}, key=lambda z: (z.real, z.imag))


def moment_table(N, q_list, p, tol=1e-10):
    """Build a :class:`MomentTable` for indices ``0..N-1`` and every q in ``q_list``."""
    if N < 1 or N > MAX_INDEX:
        raise ValueError(f"N must lie in [1, {MAX_INDEX}], got {N}")
    q_list = list(q_list)
    if not q_list:
        raise ValueError("q_list must be nonempty")
    cs, ds, scales = {}, {}, {}
    for q in q_list:
        for side in SIDES:
            k = MomentTable._key(q, side)
            if k in cs:
                continue
            try:
                C, s = half_line_moments(q, side, N, p, tol)
            except QuadratureError as exc:
                raise QuadratureError(f"moment table entry (N={N}, q={q!r}, {side}): {exc}") from exc
            D = _ladder(C, p.a)
            C = C[:N, :N].copy()
            C.setflags(write=False)
            D.setflags(write=False)
            cs[k], ds[k], scales[k] = C, D, s
    return MomentTable(N, p, cs, ds, scales)
