"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line that is
printed in the terminal summary, then asserts at the stated tolerance.
"""
import math
import warnings

import numpy as np
import pytest
from scipy import integrate
from scipy.special import eval_hermite

from diatomic_scatter import (IncidentSpec, OscillatorParams, SystemParams, born_coefficients,
                              channel_momenta, coefficients, critical_momentum, critical_omega,
                              cutoff_index, scattering_solution, single_particle_RT)
from diatomic_scatter.exceptions import RankDeficiencyWarning, ThresholdWarning
from diatomic_scatter.oscillator import half_line_moments, _ladder

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance

SEED = 20240611


def report(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def table(p, inc, N=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        warnings.simplefilter("ignore", ThresholdWarning)
        return coefficients(*scattering_solution(p, inc, N), inc)


def far_from_thresholds(p, l, K0, margin):
    kcs = [critical_momentum(p, l, n) for n in range(l + 1, l + 40)]
    return min(abs(K0 - k) for k in kcs) >= margin


def test_1_conservation():
    fig2 = table(SystemParams(1.0, 1.0, 1.0, 0.0, 3.0), IncidentSpec(4.0, 0))
    dev_fig2 = abs(fig2.j_total - 1.0)
    rng = np.random.default_rng(SEED)
    devs = []
    while len(devs) < 50:
        m1 = rng.uniform(0.5, 1.5)
        p = SystemParams(m1, 2.0 - m1, rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(1, 5))
        K0 = rng.uniform(1, 6)
        if not far_from_thresholds(p, 0, K0, 0.1):
            continue
        devs.append(abs(table(p, IncidentSpec(K0, 0)).j_total - 1.0))
    devs = np.array(devs)
    ok = dev_fig2 <= 1e-6 and devs.max() <= 1e-6
    report(1, ok, f"|j_total-1| Fig-2 set {dev_fig2:.2e}; random sets max {devs.max():.2e}, "
                  f"median {np.median(devs):.2e}, {int((devs <= 1e-6).sum())}/50 within 1e-6 (tol 1e-6)")


def test_2_convergence():
    p, inc = SystemParams(1.0, 1.0, 1.0, 0.0, 3.0), IncidentSpec(4.0, 0)
    n_c = cutoff_index(p, inc)
    prev, changes = None, []
    for N in range(n_c + 1, n_c + 11):
        t = table(p, inc, N)
        cur = np.concatenate([t.j_re, t.j_tr])
        if prev is not None:
            changes.append(np.max(np.abs(cur - prev)))
        prev = cur
    last = changes[-1]
    report(2, last <= 1e-6, f"max |j(N) - j(N-1)| at N=n_c+10: {last:.2e} (tol 1e-6); "
                            f"at N=n_c+6..n_c+9: " + ", ".join(f"{c:.1e}" for c in changes[-5:-1]))


def test_3_parity_selection():
    p = SystemParams(1.0, 1.0, 1.0, 1.0, 2.0)
    worst = 0.0
    for l in (0, 1):
        for K0 in np.linspace(1.0, 7.0, 20):
            t = table(p, IncidentSpec(float(K0), l))
            odd = (np.arange(t.n_c + 1) - l) % 2 == 1
            worst = max(worst, np.max(t.j_re[odd], initial=0.0), np.max(t.j_tr[odd], initial=0.0))
    report(3, worst <= 1e-8, f"largest odd-(n-l) coefficient over 2x20 K0 points {worst:.2e} (tol 1e-8)")


def test_4_zero_potential():
    worst = 0.0
    for (K0, omega, l, N) in [(4.0, 3.0, 0, None), (4.5, 2.0, 1, None), (2.2, 1.0, 0, 12),
                              (6.3, 1.7, 2, 14), (1.1, 4.0, 0, 3)]:
        p = SystemParams(1.2, 0.8, 0.0, 0.0, omega)
        t = table(p, IncidentSpec(K0, l), N)
        err = abs(t.j_tr[l] - 1.0)
        others = np.concatenate([t.j_re, np.delete(t.j_tr, l)])
        worst = max(worst, err, np.max(np.abs(others)))
    report(4, worst <= 1e-10, f"max deviation from pure transmission {worst:.2e} (tol 1e-10)")


def test_5_stiff_binding_limit():
    p, inc = SystemParams(1.0, 1.0, 2.0, 0.0, 1e4), IncidentSpec(4.5, 0)
    t = table(p, inc)
    R, T = single_particle_RT(2.0, 2.0, 4.5)
    dr, dt = abs(t.j_re[0] - R), abs(t.j_tr[0] - T)
    report(5, dr <= 1e-3 and dt <= 1e-3,
           f"omega=1e4: |j0re-R|={dr:.2e}, |j0tr-T|={dt:.2e} (tol 1e-3; R={R:.6f}, T={T:.6f})")


def test_6_mass_ratio_limits():
    M = 2.0
    light = table(SystemParams(1e-3 * M, (1 - 1e-3) * M, 2.0, 0.0, 2.0), IncidentSpec(4.5, 0))
    heavy = table(SystemParams(0.999 * M, 0.001 * M, 2.0, 0.0, 2.0), IncidentSpec(4.5, 0))
    R, _ = single_particle_RT(M, 2.0, 4.5)
    d = abs(heavy.j_re[0] - R)
    ok = light.j_tr[0] >= 0.999 and d <= 5e-3
    report(6, ok, f"m1/M=1e-3: j0tr={light.j_tr[0]:.6f} (need >= 0.999); "
                  f"m1/M=0.999: |j0re-R|={d:.2e} (tol 5e-3)")


def test_7_born_agreement():
    p = SystemParams(1.1, 0.9, 0.1, 0.05, 2.0)
    samples = [K0 for K0 in np.round(np.arange(1.0, 7.01, 0.1), 10) if far_from_thresholds(p, 0, K0, 0.5)]
    bad = []
    worst = 0.0
    for K0 in samples:
        inc = IncidentSpec(float(K0), 0)
        mm = table(p, inc)
        ch = channel_momenta(p, inc, mm.n_c + 8)
        b = born_coefficients(p, inc, ch)
        for kind, bv, mv in (("re", b.j_re, mm.j_re), ("tr", b.j_tr, mm.j_tr)):
            for n, (x, y) in enumerate(zip(bv, mv)):
                ratio = abs(x - y) / (0.1 * max(y, 0.01))
                worst = max(worst, ratio)
                if ratio > 1:
                    bad.append(f"K0={K0:g} j{n}{kind}")
    kc = critical_momentum(p, 0, 1)
    approach = []
    for eps in (1e-2, 1e-3, 1e-4):
        inc = IncidentSpec(kc + eps, 0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ThresholdWarning)
            b = born_coefficients(p, inc, channel_momenta(p, inc, 8))
        approach.append(b.jn_re[0] + b.jn_tr[0])
    grows = approach[0] < approach[1] < approach[2] and approach[2] > 10 * approach[0]
    ok = not bad and grows
    report(7, ok, f"{len(samples)} K0 samples in [1,7], worst |B-MM|/(0.1 max(MM,0.01)) = {worst:.2f}; "
                  f"{len(bad)} entries outside ({', '.join(bad[:4])}{'...' if len(bad) > 4 else ''}); "
                  f"divergence at K0c(1)+: {'yes' if grows else 'no'} "
                  f"({approach[0]:.3g} -> {approach[2]:.3g})")


def _oracle_moments(q, side, a, nmax):
    """Brute-force adaptive quadrature of every psi_m e^{qx} psi_n and psi_m e^{qx} psi_n'."""
    q = complex(q)
    n = np.arange(nmax + 1)
    norm = np.sqrt(a / np.sqrt(np.pi) / (2.0 ** n * np.array([math.factorial(k) for k in n])))
    peak = q.real / (2 * a * a)
    reach = 45.0 / a
    lo, hi = (0.0, max(peak, 0.0) + reach) if side == "positive" else (min(peak, 0.0) - reach, 0.0)

    def f(x):
        t = a * x
        H = np.array([eval_hermite(k, t) for k in range(nmax + 2)])
        g = math.exp(-0.5 * t * t)
        psi = norm * H[: nmax + 1] * g
        dH = np.array([2 * k * H[k - 1] if k else 0.0 for k in range(nmax + 1)])
        dpsi = norm * a * (dH - t * H[: nmax + 1]) * g
        w = np.exp(q * x)
        return np.concatenate([np.outer(psi, psi * w).ravel(), np.outer(psi, dpsi * w).ravel()])

    points = [peak] if lo < peak < hi else None
    val, _ = integrate.quad_vec(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=2000, points=points)
    k = (nmax + 1) ** 2
    return val[:k].reshape(nmax + 1, nmax + 1), val[k:].reshape(nmax + 1, nmax + 1)


def test_8_oracle_equivalence():
    osc = SystemParams(1.0, 1.0, 1.0, 0.0, 3.0).oscillator
    a = osc.a
    rng = np.random.default_rng(SEED)
    qs = rng.uniform(-3, 3, 20) + 1j * rng.uniform(-8, 8, 20)
    worst_c = worst_d = 0.0
    for q in qs:
        for side in ("negative", "positive"):
            C, s = half_line_moments(q, side, 10, osc)
            D = _ladder(C, a)
            c_ref, d_ref = _oracle_moments(q, side, a, 9)
            scale = math.exp(s)
            worst_c = max(worst_c, np.max(np.abs(C[:10, :10] * scale - c_ref)))
            worst_d = max(worst_d, np.max(np.abs(D[:10, :10] * scale - d_ref)))
    ok = worst_c <= 1e-9 and worst_d <= 1e-9
    report(8, ok, f"m,n<10 over 20 complex q x 2 half-lines: max |c - oracle| {worst_c:.2e}, "
                  f"max |d(ladder) - oracle| {worst_d:.2e} (tol 1e-9)")


def test_9_exchange_symmetry():
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    for _ in range(20):
        m1 = rng.uniform(0.3, 1.7)
        p = SystemParams(m1, 2.0 - m1, rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(1, 4))
        inc = IncidentSpec(rng.uniform(1, 6), int(rng.integers(0, 2)))
        t1, t2 = table(p, inc), table(p.swapped(), inc)
        worst = max(worst, np.max(np.abs(t1.j_re - t2.j_re)), np.max(np.abs(t1.j_tr - t2.j_tr)))
    report(9, worst <= 1e-9, f"max entry change under (m1,g1)<->(m2,g2) over 20 sets {worst:.2e} (tol 1e-9)")


def test_10_threshold_formulas():
    p = SystemParams(1.0, 1.0, 1.0, 0.0, 2.0)
    kc = critical_momentum(p, 0, 2)
    wc = critical_omega(p, IncidentSpec(5.0, 0), 2)
    exact = kc == 4.0 and wc == 3.125

    def kind(p, K0):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ThresholdWarning)
            return channel_momenta(p, IncidentSpec(K0, 0), 4)[2].kind

    k_flip = (kind(p, np.nextafter(kc, 0)) == "evanescent" and kind(p, kc) == "propagating"
              and kind(p, np.nextafter(kc, 10)) == "propagating")
    below = SystemParams(1.0, 1.0, 1.0, 0.0, float(np.nextafter(wc, 0)))
    above = SystemParams(1.0, 1.0, 1.0, 0.0, float(np.nextafter(wc, 10)))
    at = SystemParams(1.0, 1.0, 1.0, 0.0, wc)
    w_flip = (kind(below, 5.0) == "propagating" and kind(at, 5.0) == "propagating"
              and kind(above, 5.0) == "evanescent")
    ok = exact and k_flip and w_flip
    report(10, ok, f"K0c(2)={kc!r}, omega_c(2)={wc!r}; classification flips at the adjacent floats: "
                   f"K0 {'yes' if k_flip else 'no'}, omega {'yes' if w_flip else 'no'}")
