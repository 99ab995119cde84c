"""Mode-matching equations on the four boundary half-lines and their solution.

Configuration space (x1, x2) is split by the two potential lines into four
regions.  In centre-of-mass/relative coordinates (X, x) the wavefunction in
each region is expanded over exp(+-i K_n X) psi_n(x)::

    region I   (x1<0, x2<0):  incident + sum alpha_n phi(-K_n, n)
    region II  (x1<0, x2>0):  sum mu_n phi(K_n, n) + nu_n phi(-K_n, n)
    region III (x1>0, x2<0):  sum xi_n phi(K_n, n) + eta_n phi(-K_n, n)
    region IV  (x1>0, x2>0):  sum beta_n phi(K_n, n)

The boundary half-lines are L1 (x2=0, x>0), L2 (x1=0, x>0), L3 (x1=0, x<0)
and L4 (x2=0, x<0).  On each one, continuity of the wavefunction and the
derivative jump imposed by the delta potential are projected onto psi_m
over the half-line, giving 8 blocks of N_proj equations in 6 N unknowns.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
import scipy.linalg

from .exceptions import RankDeficiencyWarning, SingularSystemError, ThresholdWarning
from .kinematics import channel_momenta, cutoff_index
from .oscillator import moment_table

__all__ = [
    "MatchSystem",
    "AmplitudeSet",
    "AMPLITUDE_BLOCKS",
    "ROW_BLOCKS",
    "default_n_modes",
    "required_exponents",
    "assemble",
    "solve",
    "scattering_solution",
]

AMPLITUDE_BLOCKS = ("alpha", "mu_amp", "nu", "xi", "eta", "beta")
ROW_BLOCKS = ("L1 continuity", "L1 jump", "L2 continuity", "L2 jump",
              "L3 continuity", "L3 jump", "L4 continuity", "L4 jump")

EXTRA_MODES = 8
RANK_RTOL = 1e-13

_ALPHA, _MU, _NU, _XI, _ETA, _BETA = range(6)


def default_n_modes(p, inc):
    return cutoff_index(p, inc) + EXTRA_MODES


@dataclass(frozen=True)
class MatchSystem:
    """Projected boundary conditions ``matrix @ x = rhs``.

    Columns are stored with a per-column log scale: the physical matrix is
    ``matrix * exp(column_log_scale)`` column-wise, so the solved unknowns
    must be multiplied by ``exp(-column_log_scale)``.  Jump rows are already
    divided by ``row_scale``.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    N: int
    N_proj: int
    column_log_scale: np.ndarray
    row_scale: float
    zero_momentum_channels: int = 0


@dataclass(frozen=True)
class AmplitudeSet:
    alpha: np.ndarray
    mu_amp: np.ndarray
    nu: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    beta: np.ndarray
    residual_norm: float
    N: int
    rank: int

    def as_vector(self):
        return np.concatenate([getattr(self, name) for name in AMPLITUDE_BLOCKS])


def required_exponents(p, inc, ch):
    """Every moment exponent the assembly will look up."""
    qs = []
    for K in list(ch.momenta) + [complex(inc.K0)]:
        for k in (1j * K, -1j * K):
            qs.append(-k * p.r1)
            qs.append(k * p.r2)
    seen, out = set(), []
    for q in qs:
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


class _Line:
    """Projection of exp(k X) psi_n(x) and its jump derivative onto one half-line."""

    def __init__(self, p, moments, line, side, n_proj):
        self.moments = moments
        self.side = side
        self.n_proj = n_proj
        if line == "x2":
            # x2 = 0: X = -r1 x; jump derivative d/dx2 = r2 d/dX + d/dx
            self.q_factor, self.k_factor, self.d_sign = -p.r1, p.r2, 1.0
        else:
            # x1 = 0: X = r2 x; jump derivative d/dx1 = r1 d/dX - d/dx
            self.q_factor, self.k_factor, self.d_sign = p.r2, p.r1, -1.0

    def terms(self, k, n):
        """(value projection, derivative projection, log scale) over m < n_proj."""
        q = k * self.q_factor
        C, s = self.moments.block("c", q, self.side)
        D, _ = self.moments.block("d", q, self.side)
        c = C[: self.n_proj, n]
        d = D[: self.n_proj, n]
        return c, self.k_factor * k * c + self.d_sign * d, s


def assemble(p, inc, ch, moments, n_proj=None):
    """Build the 8-block matching system for the given channels and moments."""
    N = ch.N
    n_proj = N if n_proj is None else n_proj
    if not 1 <= n_proj <= moments.N or moments.N < N:
        raise ValueError(f"moment table of size {moments.N} cannot serve N={N}, N_proj={n_proj}")
    g1 = 2.0 * p.m1 * p.gamma1 / p.hbar ** 2
    g2 = 2.0 * p.m2 * p.gamma2 / p.hbar ** 2
    row_scale = max(1.0, 2.0 * max(p.m1 * p.gamma1, p.m2 * p.gamma2) / p.hbar ** 2)

    L1 = _Line(p, moments, "x2", "positive", n_proj)
    L2 = _Line(p, moments, "x1", "positive", n_proj)
    L3 = _Line(p, moments, "x1", "negative", n_proj)
    L4 = _Line(p, moments, "x2", "negative", n_proj)

    # entries[(column block, n)] -> list of (row block, vector, log scale)
    entries = {}

    def put(col, n, row, vec, s):
        entries.setdefault((col, n), []).append((row, vec, s))

    for n, chan in enumerate(ch.channels):
        kf, kb = 1j * chan.K, -1j * chan.K

        v_f, dv_f, s_f = L1.terms(kf, n)
        v_b, dv_b, s_b = L1.terms(kb, n)
        put(_MU, n, 0, v_f, s_f)
        put(_NU, n, 0, v_b, s_b)
        put(_ALPHA, n, 0, -v_b, s_b)
        put(_MU, n, 1, dv_f - g2 * v_f, s_f)
        put(_NU, n, 1, dv_b - g2 * v_b, s_b)
        put(_ALPHA, n, 1, -dv_b, s_b)

        w_f, dw_f, s_f = L2.terms(kf, n)
        w_b, dw_b, s_b = L2.terms(kb, n)
        put(_BETA, n, 2, w_f, s_f)
        put(_MU, n, 2, -w_f, s_f)
        put(_NU, n, 2, -w_b, s_b)
        put(_BETA, n, 3, dw_f - g1 * w_f, s_f)
        put(_MU, n, 3, -dw_f, s_f)
        put(_NU, n, 3, -dw_b, s_b)

        w_f, dw_f, s_f = L3.terms(kf, n)
        w_b, dw_b, s_b = L3.terms(kb, n)
        put(_XI, n, 4, w_f, s_f)
        put(_ETA, n, 4, w_b, s_b)
        put(_ALPHA, n, 4, -w_b, s_b)
        put(_XI, n, 5, dw_f - g1 * w_f, s_f)
        put(_ETA, n, 5, dw_b - g1 * w_b, s_b)
        put(_ALPHA, n, 5, -dw_b, s_b)

        v_f, dv_f, s_f = L4.terms(kf, n)
        v_b, dv_b, s_b = L4.terms(kb, n)
        put(_BETA, n, 6, v_f, s_f)
        put(_XI, n, 6, -v_f, s_f)
        put(_ETA, n, 6, -v_b, s_b)
        put(_BETA, n, 7, dv_f - g2 * v_f, s_f)
        put(_XI, n, 7, -dv_f, s_f)
        put(_ETA, n, 7, -dv_b, s_b)

    A = np.zeros((8 * n_proj, 6 * N), dtype=complex)
    col_scale = np.zeros(6 * N)
    for (col, n), items in entries.items():
        j = col * N + n
        s_col = max(s for _, _, s in items)
        col_scale[j] = s_col
        for row, vec, s in items:
            A[row * n_proj:(row + 1) * n_proj, j] += vec * math.exp(s - s_col)

    # incident wave exp(i K0 X) psi_l(x), moved to the right-hand side
    k0 = 1j * complex(inc.K0)
    b = np.zeros(8 * n_proj, dtype=complex)
    v, dv, s1 = L1.terms(k0, inc.l)
    w, dw, s3 = L3.terms(k0, inc.l)
    b[0:n_proj] = v * math.exp(s1)
    b[n_proj:2 * n_proj] = dv * math.exp(s1)
    b[4 * n_proj:5 * n_proj] = w * math.exp(s3)
    b[5 * n_proj:6 * n_proj] = dw * math.exp(s3)

    for row in (1, 3, 5, 7):
        A[row * n_proj:(row + 1) * n_proj] /= row_scale
        b[row * n_proj:(row + 1) * n_proj] /= row_scale

    zero_k = sum(1 for chan in ch.channels if chan.K == 0)
    return MatchSystem(A, b, N, n_proj, col_scale, row_scale, zero_k)


def solve(system, rank_rtol=RANK_RTOL, strict=False):
    """Least-squares solution by QR with column pivoting.

    Columns are equilibrated to unit norm first.  The half-line projections
    of the channel basis become nearly linearly dependent as N grows, so a
    numerical rank below 6 N (less two per zero-momentum channel, whose
    forward and backward columns coincide) is normally reported through a
    :class:`RankDeficiencyWarning` and the minimum-norm truncated solution is
    returned.  With ``strict=True`` it raises :class:`SingularSystemError`.
    """
    A, b, N = system.matrix, system.rhs, system.N
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise SingularSystemError(0, 6 * N)
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    As = A / norms
    x, _, rank, _ = scipy.linalg.lstsq(As, b, cond=rank_rtol, lapack_driver="gelsy")
    expected = 6 * N - 2 * system.zero_momentum_channels
    if rank < expected:
        if strict:
            raise SingularSystemError(rank, expected)
        warnings.warn(f"matching system has numerical rank {rank} < {expected}; "
                      "returning the truncated minimum-norm solution",
                      RankDeficiencyWarning, stacklevel=2)
    if system.zero_momentum_channels:
        warnings.warn("solving at an exact channel threshold", ThresholdWarning, stacklevel=2)
    residual = float(np.linalg.norm(As @ x - b))
    with np.errstate(under="ignore"):
        amps = x / norms * np.exp(-system.column_log_scale)
    blocks = {name: amps[i * N:(i + 1) * N].copy() for i, name in enumerate(AMPLITUDE_BLOCKS)}
    return AmplitudeSet(residual_norm=residual, N=N, rank=int(rank), **blocks)


def scattering_solution(p, inc, N=None, quadrature_tol=1e-10, strict=False):
    """Kinematics, moments, assembly and solve in one call."""
    N = default_n_modes(p, inc) if N is None else int(N)
    ch = channel_momenta(p, inc, N)
    moments = moment_table(N, required_exponents(p, inc, ch), p.oscillator, quadrature_tol)
    system = assemble(p, inc, ch, moments)
    return ch, solve(system, strict=strict)
