import math
import warnings

import numpy as np
import pytest
from scipy import integrate
from scipy.special import eval_hermite

from diatomic_scatter import IncidentSpec, OscillatorParams, SystemParams
from diatomic_scatter.exceptions import RankDeficiencyWarning, ThresholdWarning


def psi_explicit(n, x, a):
    """Oscillator eigenfunction from the closed form with physicists' Hermite polynomials."""
    norm = math.sqrt(a / math.sqrt(math.pi) / (2.0 ** n * math.factorial(n)))
    return norm * eval_hermite(n, a * x) * np.exp(-0.5 * (a * x) ** 2)


def psi_prime_fd(n, x, a, h=1e-5):
    return (psi_explicit(n, x + h, a) - psi_explicit(n, x - h, a)) / (2.0 * h)


def quad_moment(m, n, q, side, a, derivative=False):
    """Adaptive quadrature of psi_m e^{qx} psi_n (or psi_n') over one half-line."""
    q = complex(q)

    if derivative:
        def g(x):
            norm = math.sqrt(a / math.sqrt(math.pi) / (2.0 ** n * math.factorial(n)))
            dh = 2 * n * eval_hermite(n - 1, a * x) if n > 0 else 0.0
            return norm * a * (dh - a * x * eval_hermite(n, a * x)) * math.exp(-0.5 * (a * x) ** 2)
    else:
        def g(x):
            return psi_explicit(n, x, a)

    def re(x):
        return psi_explicit(m, x, a) * math.exp(q.real * x) * math.cos(q.imag * x) * g(x)

    def im(x):
        return psi_explicit(m, x, a) * math.exp(q.real * x) * math.sin(q.imag * x) * g(x)

    # finite window around the Gaussian-times-exponential peak keeps exp() in range
    peak = q.real / (2.0 * a * a)
    reach = (40.0 + 2.0 * math.sqrt(max(m, n) + 1)) / a
    if side == "positive":
        lo, hi = 0.0, max(peak, 0.0) + reach
    else:
        lo, hi = min(peak, 0.0) - reach, 0.0
    kw = dict(epsabs=1e-13, epsrel=1e-12, limit=400)
    if lo < peak < hi:
        kw["points"] = [peak]
    return complex(integrate.quad(re, lo, hi, **kw)[0], integrate.quad(im, lo, hi, **kw)[0])


@pytest.fixture
def unit_osc():
    return OscillatorParams(mu=1.0, omega=1.0)


@pytest.fixture
def fig2():
    return SystemParams(1.0, 1.0, 1.0, 0.0, 3.0), IncidentSpec(4.0, 0)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        warnings.simplefilter("ignore", ThresholdWarning)
        yield


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
