"""Physical polarizability of the two-level atom at second order.

The continued transition matrix gives the second-quantized response::

    alpha2(w) = 4 m A / ((4 m**2 - w**2) coth(beta m/2) - 4 m [Delta(w) + i sign(w) Gamma(w)])

which lives in the four-state (zero, one, two electron) Fock space. Rescaling
by the partition-function ratio Z/Z_hat projects it onto the one-electron
(qubit) sector and yields::

    a2(w) = 4 m A_T A / (4 m**2 - w**2 - 4 m [Delta_T(w) + i sign(w) Gamma_T(w)])

    A_T     = tanh(beta m) [1 + (1 - tanh(beta m)/tanh(beta m/2)) delta2]
    Delta_T = Delta tanh(beta m/2)
    Gamma_T = Gamma tanh(beta m/2)
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _quad
from .continuation import delta_shift, gamma_width
from .errors import DomainError, PoleError
from .formfactor import FormFactor
from .params import DEFAULT_UNITS, SystemParams
from .special import coth, csch2, sech, x_coth_x


class Variant(str, enum.Enum):
    SECOND_QUANTIZED = "second_quantized"
    PHYSICAL = "physical"


@dataclass(frozen=True)
class EffectiveResponseParams:
    A_T: float
    thermal_factor: float
    delta2: float
    ratio_free: float


# partition functions ------------------------------------------------------------


def partition_ratio_free(p):
    """``Z0/Z0_hat = tanh(beta m)/tanh(beta m/2) = 1 + sech(beta m)``."""
    return 1.0 + sech(p.beta * p.m)


def _delta2_numerator_ratio(k, m, beta, cbm):
    """``N(k)/(k - 2m)`` with ``N(k) = 2m coth(beta k/2) - k coth(beta m)``.

    ``N`` has a simple zero at ``k = 2m``; inside a relative window of 1e-4 a
    two-term Taylor series replaces the difference quotient.
    """
    d = k - 2.0 * m
    if abs(d) < 1e-4 * 2.0 * m:
        c2 = csch2(beta * m)
        n1 = -m * beta * c2 - cbm
        n2 = m * beta * beta * c2 * cbm
        return n1 + 0.5 * n2 * d
    return (2.0 * m * coth(0.5 * beta * k) - k * cbm) / d


def delta2_integrand(k, p, ff):
    """Integrand of the second-order partition-function correction (without tanh(beta m/2)).

    ``g(k)**2 [2m coth(beta k/2) - k coth(beta m)] / (k (k**2 - 4 m**2))`` with
    both removable singularities (k -> 0 and k = 2m) resolved analytically.
    """
    k = float(k)
    m, beta = p.m, p.beta
    cbm = coth(beta * m)
    if k < 1e-3 * m:
        # k N(k) = (4m/beta) x coth x - k^2 coth(beta m), x = beta k/2
        kN = (4.0 * m / beta) * x_coth_x(0.5 * beta * k) - k * k * cbm
        return ff.g_squared_over_k2(k) * kN / (k * k - 4.0 * m * m)
    return ff.g_squared(k) * _delta2_numerator_ratio(k, m, beta, cbm) / (k * (k + 2.0 * m))


def delta2_correction(p, ff, rtol=1e-10):
    """Second-order correction delta2 to Z = Z0 (1 + delta)."""
    if ff.coupling == 0:
        return 0.0
    m, beta = p.m, p.beta
    K = ff.k_max
    edges = sorted({0.0, K} | {x for x in (2.0 * m, 1.0 / beta, 10.0 / beta) if 0 < x < K})
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += _quad.quad(lambda k: delta2_integrand(k, p, ff), a, b, rtol=rtol,
                            atol=1e-300, points=ff.nodes, label="delta2")
    return math.tanh(0.5 * beta * m) * total


def delta2_zero_T(m, ff, rtol=1e-10):
    """Zero-temperature limit ``-int g**2/(k (2m + k)) dk``; never positive."""
    if not m > 0:
        raise DomainError("m must be positive")
    if ff.coupling == 0:
        return 0.0
    K = ff.k_max
    pts = [x for x in (2.0 * m,) if x < K]
    return -_quad.quad(lambda k: ff.g_squared_over_k2(k) * k / (2.0 * m + k), 0.0, K,
                       rtol=rtol, atol=1e-300, points=list(ff.nodes) + pts,
                       label="delta2 zero T")


def partition_ratio_2(p, ff, delta2=None):
    """Z/Z_hat expanded to second order in the coupling."""
    r0 = partition_ratio_free(p)
    d2 = delta2_correction(p, ff) if delta2 is None else delta2
    return r0 * (1.0 + (1.0 - r0) * d2)


def partition_ratio_exact(p, ff, delta2=None):
    """Unexpanded ratio ``r0 (1 + delta)/(1 + r0 delta)`` with delta truncated at delta2."""
    r0 = partition_ratio_free(p)
    d = delta2_correction(p, ff) if delta2 is None else delta2
    return r0 * (1.0 + d) / (1.0 + r0 * d)


# response functions -----------------------------------------------------------------


def _sign(x):
    return (x > 0) - (x < 0)


def alpha2_second_quantized(omega, p, ff):
    """Second-quantized (four-state) polarizability; auxiliary, not an observable."""
    omega = float(omega)
    m = p.m
    a = abs(omega)
    c = coth(0.5 * p.beta * m)
    dlt = delta_shift(a, ff)
    gam = gamma_width(a, ff) if a > 0 else 0.0
    den = complex((4.0 * m * m - omega * omega) * c - 4.0 * m * dlt,
                  -4.0 * m * _sign(omega) * gam)
    if abs(den) <= 1e-12 * (4.0 * m * m + omega * omega) * c:
        raise PoleError(f"alpha2 pole at omega = {omega!r}", location=omega)
    return 4.0 * m * p.amplitude_A / den


def effective_params(p, ff):
    x = p.beta * p.m
    d2 = delta2_correction(p, ff)
    r0 = partition_ratio_free(p)
    return EffectiveResponseParams(A_T=math.tanh(x) * (1.0 + (1.0 - r0) * d2),
                                   thermal_factor=math.tanh(0.5 * x),
                                   delta2=d2, ratio_free=r0)


def effective_shift(omega, p, ff):
    return delta_shift(abs(float(omega)), ff) * math.tanh(0.5 * p.beta * p.m)


def effective_width(omega, p, ff):
    return gamma_width(omega, ff) * math.tanh(0.5 * p.beta * p.m)


def physical_polarizability(omega, p, ff, eff=None):
    """Physical one-electron polarizability.

    ``eff`` may carry precomputed :class:`EffectiveResponseParams`; sweeps
    pass it so delta2 is integrated once.
    """
    if eff is None:
        eff = effective_params(p, ff)
    omega = float(omega)
    m = p.m
    a = abs(omega)
    t = eff.thermal_factor
    dT = delta_shift(a, ff) * t
    gT = (gamma_width(a, ff) if a > 0 else 0.0) * t
    den = complex(4.0 * m * m - omega * omega - 4.0 * m * dT, -4.0 * m * _sign(omega) * gT)
    if abs(den) <= 1e-12 * (4.0 * m * m + omega * omega):
        raise PoleError(f"physical polarizability pole at omega = {omega!r}", location=omega)
    return 4.0 * m * eff.A_T * p.amplitude_A / den


def zero_temperature_polarizability(omega, m, ff, amplitude_A=1.0):
    """Zero-temperature limit ``4mA/(4m**2 - w**2 - 4m (Delta + i sign(w) Gamma))``."""
    omega = float(omega)
    a = abs(omega)
    gam = gamma_width(a, ff) if a > 0 else 0.0
    den = complex(4.0 * m * m - omega * omega - 4.0 * m * delta_shift(a, ff),
                  -4.0 * m * _sign(omega) * gam)
    if den == 0:
        raise PoleError(f"zero-temperature pole at omega = {omega!r}", location=omega)
    return 4.0 * m * amplitude_A / den


def slowing_down_temperature(delta_E, factor=10.0, units=DEFAULT_UNITS):
    """Temperature (K) at which the excited-state lifetime grows by ``factor``.

    Solves ``tanh(beta m/2) = 1/factor``: ``T_S = delta_E/(4 k_B atanh(1/factor))``.
    """
    if not (delta_E > 0 and math.isfinite(delta_E)):
        raise DomainError(f"delta_E must be positive, got {delta_E!r}")
    if not factor > 1:
        raise DomainError(f"factor must exceed 1, got {factor!r}")
    return delta_E / (4.0 * units.k_B * math.atanh(1.0 / factor))


def slowing_down_scale(factor=10.0):
    """``k_B T_S / delta_E`` for the given lifetime factor."""
    if not factor > 1:
        raise DomainError(f"factor must exceed 1, got {factor!r}")
    return 1.0 / (4.0 * math.atanh(1.0 / factor))


# sweeps -------------------------------------------------------------------------


@dataclass
class PolarizabilitySpectrum:
    omega: np.ndarray
    alpha: np.ndarray
    pole: np.ndarray
    variant: Variant
    params: SystemParams
    formfactor: FormFactor
    effective: EffectiveResponseParams | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.omega)

    def crossing_residual(self):
        """Max ``|a(-w) - conj(a(w))|`` over mirrored grid pairs (0 if none)."""
        index = {w: i for i, w in enumerate(self.omega.tolist())}
        worst = 0.0
        for i, w in enumerate(self.omega.tolist()):
            j = index.get(-w)
            if j is None or self.pole[i] or self.pole[j]:
                continue
            worst = max(worst, abs(self.alpha[j] - np.conj(self.alpha[i])))
        return worst


def _point(args):
    omega, p, ff, variant, eff = args
    try:
        if variant is Variant.PHYSICAL:
            return physical_polarizability(omega, p, ff, eff), False
        return alpha2_second_quantized(omega, p, ff), False
    except PoleError:
        return complex("nan"), True


def frequency_grid(omega_min, omega_max, points):
    """Evenly spaced grid that is exactly antisymmetric when ``omega_min = -omega_max``.

    ``numpy.linspace`` rounds mirrored nodes differently, which would break
    crossing symmetry at the last digit.
    """
    points = int(points)
    if points < 1:
        raise DomainError("points must be >= 1")
    lo, hi = float(omega_min), float(omega_max)
    if points == 1:
        return np.array([lo])
    c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    s = (2.0 * np.arange(points) - (points - 1)) / (points - 1)
    w = c + h * s
    w[0], w[-1] = lo, hi
    return w


def spectrum_sweep(omega_grid, p, ff, variant=Variant.PHYSICAL, workers=None):
    """Evaluate a polarizability variant on a sorted grid.

    Points that land on a pole are flagged in ``pole`` and carry NaN. Each
    ``|w|`` is computed once and mirrored, so crossing symmetry is exact.
    """
    variant = Variant(variant)
    omega = np.asarray(omega_grid, dtype=float).ravel()
    if omega.size and (not np.all(np.isfinite(omega)) or np.any(np.diff(omega) < 0)):
        raise DomainError("omega grid must be finite and sorted")
    eff = effective_params(p, ff) if variant is Variant.PHYSICAL else None
    mags = sorted(set(np.abs(omega).tolist()))
    jobs = [(w, p, ff, variant, eff) for w in mags]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_point(j) for j in jobs]
    table = dict(zip(mags, results))
    alpha = np.empty(omega.size, dtype=complex)
    pole = np.zeros(omega.size, dtype=bool)
    for i, w in enumerate(omega.tolist()):
        val, flag = table[abs(w)]
        alpha[i] = np.conj(val) if w < 0 else val
        pole[i] = flag
    return PolarizabilitySpectrum(omega=omega, alpha=alpha, pole=pole, variant=variant,
                                  params=p, formfactor=ff, effective=eff)
