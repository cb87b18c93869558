"""Self-check suite behind ``thermal-qubit validate``.

Every check compares a library result with an independent evaluation
(brute-force sums, closed forms, regularised integrals or exact identities)
and returns a :class:`CheckResult`. ``run_suite`` collects them.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, replace
from itertools import product

import numpy as np
from scipy.optimize import brentq

from . import _quad
from .continuation import continuation_substitute, delta_shift, gamma_width, transition_matrix_form
from .errors import ThermalQubitError
from .formfactor import FormFactor
from .matsubara import MatsubaraFrequency, Statistics, sum_bose_pair, sum_fermi_pair, truncated_sum_oracle
from .params import SystemParams
from .polarizability import (delta2_correction, delta2_integrand, delta2_zero_T, effective_params,
                             effective_shift, effective_width, partition_ratio_2,
                             partition_ratio_exact, physical_polarizability, slowing_down_temperature,
                             spectrum_sweep, zero_temperature_polarizability)
from .selfenergy import self_energy_2, self_energy_2_bruteforce, transition_matrix_2

LEVELS = ("quick", "full")
FAULTS = ("thermal_factor",)

#: gaps (eV) and reference slowing-down temperatures (K) for a lifetime factor of 10
SLOWDOWN_TABLE = ((50e-3, 1500.0), (167e-6, 4.8), (63e-6, 1.8), (28e-6, 0.8))


@dataclass
class CheckResult:
    name: str
    passed: bool
    metric: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self):
        d = asdict(self)
        d["metric"] = d["metric"] if math.isfinite(d["metric"]) else None
        return d


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        try:
            res = fn(*args, **kwargs)
        except ThermalQubitError as exc:
            res = CheckResult(fn.__name__.removeprefix("check_"), False, math.nan, math.nan,
                              f"raised {type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    return wrapper


def default_formfactors():
    """Gaussian, exponential and tabulated couplings used across the suite."""
    k = np.linspace(0.0, 12.0, 481)
    table = FormFactor.tabulated(k, k / (1.0 + k * k) ** 1.5, coupling=0.1)
    return (FormFactor.gaussian(0.1, 1.0), FormFactor.exponential(0.1, 1.0), table)


# grids -------------------------------------------------------------------------------


def pair_sum_grid(points_per_axis=5):
    """(a, b, beta) triples with a > 0 > b so the pair sums are O(1) quantities."""
    a = np.geomspace(0.1, 5.0, points_per_axis)
    b = -np.geomspace(0.2, 4.0, points_per_axis)
    beta = np.geomspace(0.5, 10.0, points_per_axis)
    return list(product(a.tolist(), b.tolist(), beta.tolist()))


def self_energy_grid(points_per_axis=5):
    n = [0, 1, 3, 10, 50][:points_per_axis]
    m = np.geomspace(0.1, 5.0, points_per_axis).tolist()
    beta = np.geomspace(0.5, 20.0, points_per_axis).tolist()
    return list(product(n, m, beta))


def avoid_resonance_grid(m, ff, n=100, lo=0.2, hi=8.0, gap=0.05):
    """``n`` frequencies in ``[lo, hi] m`` that stay ``gap m`` away from the zero-T resonance."""
    def re_den(w):
        return 4.0 * m * m - w * w - 4.0 * m * delta_shift(w, ff)

    w_res = brentq(re_den, 1.5 * m, 2.5 * m, xtol=1e-14)
    left = (w_res - gap * m) - lo * m
    right = hi * m - (w_res + gap * m)
    nl = max(1, round(n * left / (left + right)))
    grid = np.concatenate([np.linspace(lo * m, w_res - 1.0001 * gap * m, nl),
                           np.linspace(w_res + 1.0001 * gap * m, hi * m, n - nl)])
    return grid, w_res


# oracles -------------------------------------------------------------------------------


def pair_term(a, b):
    def term(w):
        iw = 1j * np.asarray(w)
        return 1.0 / ((iw - a) * (iw - b))
    return term


def complex_epsilon_shift(omega, ff, eps):
    """``Re int g**2/(k**2 - (w + i eps)**2) dk``; tends to the PV shift as ``eps -> 0``.

    ``k = w + eps sinh(u)`` resolves the Lorentzian core near ``k = w``.
    """
    w = float(omega)
    K = ff.k_max

    def kernel(k):
        re = k * k - w * w + eps * eps
        return ff.g_squared(k) * re / (re * re + 4.0 * w * w * eps * eps)

    c = 0.5 * min(w, K - w)
    umax = math.asinh(c / eps)

    def core(u):
        k = w + eps * math.sinh(u)
        return kernel(k) * eps * math.cosh(u)

    total = _quad.quad(core, -umax, umax, rtol=1e-12, atol=1e-16, points=[0.0],
                       limit=1000, label="eps core")
    total += _quad.quad(kernel, 0.0, w - c, rtol=1e-12, atol=1e-16, points=ff.nodes,
                        limit=1000, label="eps left")
    total += _quad.quad(kernel, w + c, K, rtol=1e-12, atol=1e-16, points=ff.nodes,
                        limit=1000, label="eps right")
    return total


def richardson_shift(omega, ff, eps=1e-4):
    """Linear Richardson extrapolation of :func:`complex_epsilon_shift` from ``eps`` and ``eps/10``."""
    f1 = complex_epsilon_shift(omega, ff, eps)
    f2 = complex_epsilon_shift(omega, ff, eps / 10.0)
    return (10.0 * f2 - f1) / 9.0


def bose_tail_correction(p, ff):
    """Leading finite-temperature term ``-(pi**2/6) c/(m beta**2)`` of delta2, ``c = g**2/k**2`` at 0."""
    c = ff.g_squared_over_k2(0.0)
    return -(math.pi ** 2 / 6.0) * c / (p.m * p.beta ** 2)


def extract_thermal_factors(omega, alpha, p, eff):
    """Invert the polarizability for ``(Delta_T, Gamma_T)`` at real ``omega != 0``."""
    m = p.m
    den = 4.0 * m * eff.A_T * p.amplitude_A / alpha
    d_t = (4.0 * m * m - omega * omega - den.real) / (4.0 * m)
    g_t = -den.imag / (4.0 * m * math.copysign(1.0, omega))
    return d_t, g_t


# checks --------------------------------------------------------------------------------


@_timed
def check_slowdown_table():
    worst = 0.0
    for de, ref in SLOWDOWN_TABLE:
        worst = max(worst, abs(slowing_down_temperature(de) - ref) / ref)
    return CheckResult("slowdown_table", worst <= 0.05, worst, 0.05,
                       "relative deviation from the reference gaps table")


@_timed
def check_pair_sums(points_per_axis=5, N=1_000_000):
    worst, n_bad = 0.0, 0
    for a, b, beta in pair_sum_grid(points_per_axis):
        for stat, closed in ((Statistics.FERMI, sum_fermi_pair), (Statistics.BOSE, sum_bose_pair)):
            est = truncated_sum_oracle(pair_term(a, b), stat, beta, N)
            val = closed(a, b, beta)
            diff = abs(est.value - val)
            rel = diff / abs(val)
            worst = max(worst, rel)
            if diff > est.error or rel > 1e-6:
                n_bad += 1
    npts = points_per_axis ** 3
    return CheckResult("pair_sums", n_bad == 0, worst, 1e-6,
                       f"{npts} grid points x 2 statistics, N={N}, {n_bad} outside the oracle bound")


@_timed
def check_self_energy(points_per_axis=5, N=100_000):
    worst = 0.0
    for n, m, beta in self_energy_grid(points_per_axis):
        p = SystemParams(m=m, beta=beta)
        wn = MatsubaraFrequency.bose(n, beta)
        worst = max(worst, abs(self_energy_2_bruteforce(wn, p, N).value - self_energy_2(wn, p).value))
    return CheckResult("self_energy_oracle", worst <= 1e-5, worst, 1e-5,
                       f"{points_per_axis ** 3} (n, m, beta) points, N={N}, absolute")


@_timed
def check_narrowing_law(faults=()):
    """Delta_T/Delta and Gamma_T/Gamma against an independent tanh(beta m/2)."""
    m = 1.0
    worst_direct, worst_extracted = 0.0, 0.0
    for ff in default_formfactors():
        for x in (0.2, 1.0, 3.0, 10.0, 40.0):
            p = SystemParams(m=m, beta=x / m)
            t = math.tanh(0.5 * x)
            eff = effective_params(p, ff)
            if "thermal_factor" in faults:
                eff = replace(eff, thermal_factor=eff.thermal_factor * (1.0 + 1e-6))
            for w in (0.3, 0.9, 1.7, 2.6, 5.0):
                d, g = delta_shift(w, ff), gamma_width(w, ff)
                worst_direct = max(worst_direct, abs(effective_shift(w, p, ff) / d - t) / t,
                                   abs(effective_width(w, p, ff) / g - t) / t)
                d_t, g_t = extract_thermal_factors(w, physical_polarizability(w, p, ff, eff), p, eff)
                worst_extracted = max(worst_extracted, abs(d_t / d - t) / t, abs(g_t / g - t) / t)
    ok = worst_direct <= 4 * np.finfo(float).eps and worst_extracted <= 1e-9
    return CheckResult("narrowing_law", ok, max(worst_direct, worst_extracted), 1e-9,
                       f"direct ratios {worst_direct:.2e} (machine precision), "
                       f"from emitted polarizability {worst_extracted:.2e}")


@_timed
def check_zero_temperature():
    m = 1.0
    ff = FormFactor()
    p = SystemParams(m=m, beta=200.0 / m)
    grid, _ = avoid_resonance_grid(m, ff)
    spec = spectrum_sweep(grid, p, ff)
    ref = np.array([zero_temperature_polarizability(w, m, ff) for w in grid])
    worst = float(np.max(np.abs(spec.alpha - ref) / np.abs(ref)))
    return CheckResult("zero_temperature_recovery", worst <= 1e-6, worst, 1e-6,
                       "beta m = 200 against the zero-temperature formula, 100 points")


@_timed
def check_principal_value():
    ff = FormFactor()
    worst = 0.0
    for w in (0.3, 1.0, 2.5):
        worst = max(worst, abs(delta_shift(w, ff) - richardson_shift(w, ff)))
    static = abs(delta_shift(1e-12, FormFactor.gaussian(1.0, 1.0)) - math.sqrt(math.pi) / 2.0)
    ok = worst <= 1e-6 and static <= 1e-8
    return CheckResult("principal_value", ok, worst, 1e-6,
                       f"complex-eps Richardson oracle; static limit error {static:.2e}")


@_timed
def check_delta2():
    m = 1.0
    ff = FormFactor()
    p = SystemParams(m=m, beta=1.0)
    lo = delta2_integrand(2.0 * m * (1 - 1e-9), p, ff)
    hi = delta2_integrand(2.0 * m * (1 + 1e-9), p, ff)
    probe = abs(hi - lo) / abs(lo)
    cold = SystemParams(m=m, beta=200.0 / m)
    d0 = delta2_zero_T(m, ff)
    expected = d0 + bose_tail_correction(cold, ff)
    limit = abs(delta2_correction(cold, ff) - expected) / abs(d0)
    ok = probe <= 1e-6 and limit <= 1e-4
    return CheckResult("delta2_robustness", ok, max(probe, limit), 1e-6 if probe > 1e-6 else 1e-4,
                       f"probe mismatch {probe:.2e}; beta=200/m vs zero-T "
                       f"plus Bose tail {limit:.2e}")


@_timed
def check_continuation():
    m = 1.0
    ff = FormFactor()
    p = SystemParams(m=m, beta=1.0)
    form = transition_matrix_form(p)
    worst = 0.0
    for n in range(1, 11):
        wn = MatsubaraFrequency.bose(n, p.beta)
        ref = transition_matrix_2(wn, p, ff).value
        worst = max(worst, abs(continuation_substitute(form, 1j * wn.value, ff) - ref) / abs(ref))
    return CheckResult("continuation_consistency", worst <= 1e-8, worst, 1e-8,
                       "continued transition matrix at i w_n, n = 1..10")


@_timed
def check_crossing():
    m = 1.0
    ff = FormFactor()
    worst = 0.0
    for variant in ("physical", "second_quantized"):
        for x in (0.5, 5.0):
            spec = spectrum_sweep(np.linspace(-4.0, 4.0, 41), SystemParams(m=m, beta=x), ff, variant)
            worst = max(worst, spec.crossing_residual())
    return CheckResult("crossing_symmetry", worst <= 1e-14, worst, 1e-14,
                       "emitted spectra, both variants")


@_timed
def check_partition_order():
    p = SystemParams(m=1.0, beta=1.0)

    def residual(lam):
        ff = FormFactor.gaussian(lam, 1.0)
        d2 = delta2_correction(p, ff)
        return abs(partition_ratio_exact(p, ff, d2) - partition_ratio_2(p, ff, d2))

    ratio = residual(0.1) / residual(0.05)
    return CheckResult("partition_ratio_order", abs(ratio - 16.0) <= 3.2, ratio, 3.2,
                       "residual ratio lambda=0.1 vs 0.05, expected 16")


def run_suite(level="quick", faults=()):
    """Run every check; ``level='full'`` uses the large Matsubara oracles."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    unknown = set(faults) - set(FAULTS)
    if unknown:
        raise ValueError(f"unknown fault(s) {sorted(unknown)}")
    full = level == "full"
    return [
        check_slowdown_table(),
        check_pair_sums(5 if full else 3, 1_000_000 if full else 100_000),
        check_self_energy(5 if full else 3),
        check_narrowing_law(faults),
        check_zero_temperature(),
        check_principal_value(),
        check_delta2(),
        check_continuation(),
        check_crossing(),
        check_partition_order(),
    ]


def report(results, level):
    return {"level": level, "passed": all(r.passed for r in results),
            "n_checks": len(results), "n_failed": sum(not r.passed for r in results),
            "checks": [r.as_dict() for r in results]}
