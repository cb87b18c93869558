r"""Continuation of Matsubara closed forms to real frequencies.

The retarded function is obtained from a temperature object by
``w_n -> -i w + 0`` for ``w > 0``; negative frequencies follow from
crossing, ``F(-w) = conj(F(w))``.

Under that substitution ``w_n**2 + k**2 -> k**2 - (w + i0)**2`` and the
photon loop integral ``h(w_n) = -int g**2/(w_n**2 + k**2) dk`` becomes
``-(Delta(w) + i Gamma(w))`` with::

    Delta(w) = PV int_0^inf g(k)**2/(k**2 - w**2) dk
    Gamma(w) = (pi/2) g(|w|)**2 / |w|

:func:`continue_h` returns ``Delta + i Gamma``, the combination that enters
the polarizability denominators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _quad
from .errors import DomainError, PoleError
from .formfactor import Family
from .matsubara import MatsubaraFrequency
from .selfenergy import _bose, h_tilde_value, transition_denominator
from .special import tanh

#: relative half-width of the window around k = w where the subtracted
#: integrand is replaced by its derivative limit
_PATCH = 1e-6


@dataclass(frozen=True)
class RetardedResponse:
    omega: float
    value: complex


def _atol(ff):
    if ff.family is Family.TABULATED:
        _, gv = ff._table_arrays
        scale = ff.coupling ** 2 * float(np.max(gv ** 2)) / max(ff.k_max, 1e-300)
    else:
        scale = ff.coupling ** 2 * ff.cutoff
    return 1e-13 * max(scale, 1e-300)


def delta_shift(omega, ff, rtol=1e-10):
    """Principal-value shift ``Delta(w) = PV int g**2/(k**2 - w**2) dk``.

    Uses ``PV int_0^inf dk/(k**2 - w**2) = 0`` to subtract ``g(w)**2`` from
    the numerator, which leaves a regular integrand. ``omega = 0`` gives the
    static value ``int g**2/k**2 dk``.
    """
    omega = float(omega)
    if omega < 0 or not math.isfinite(omega):
        raise DomainError(f"delta_shift needs omega >= 0, got {omega!r}")
    if ff.coupling == 0:
        return 0.0
    K = ff.k_max
    atol = _atol(ff)
    nodes = ff.nodes
    if omega == 0.0:
        return _quad.quad(ff.g_squared_over_k2, 0.0, K, rtol=rtol, atol=atol,
                          points=nodes, label="Delta(0)")
    w = omega
    if w > K * (1.0 + 1e-9):
        return _quad.quad(lambda k: ff.g_squared(k) / ((k - w) * (k + w)), 0.0, K,
                          rtol=rtol, atol=atol, points=nodes, label="Delta (off support)")

    g2w = ff.g_squared(w)
    dg2w = ff.g_squared_derivative(w)

    def f(k):
        d = k - w
        if abs(d) < _PATCH * w:
            return dg2w / (k + w)
        return (ff.g_squared(k) - g2w) / (d * (k + w))

    inner = (_quad.quad(f, 0.0, w, rtol=rtol, atol=atol, points=nodes, label="Delta [0, w]")
             + _quad.quad(f, w, K, rtol=rtol, atol=atol, points=nodes, label="Delta [w, K]"))
    # the subtracted constant also lives on [K, inf): -g(w)^2 int_K^inf dk/(k^2 - w^2)
    outer = -g2w * math.log((K + w) / (K - w)) / (2.0 * w) if K > w else 0.0
    return inner + outer


def gamma_width(omega, ff):
    """Line width ``Gamma(w) = (pi/2) g(|w|)**2/|w|``, the on-shell photon value."""
    omega = float(omega)
    if omega == 0.0:
        raise DomainError("gamma_width is not defined at omega = 0")
    a = abs(omega)
    return 0.5 * math.pi * ff.g_squared(a) / a


def continue_h(omega, ff):
    """``Delta(w) + i sign(w) Gamma(w)``; equals ``-h(-i w + 0)`` for ``w > 0``."""
    omega = float(omega)
    if omega == 0.0:
        return complex(delta_shift(0.0, ff), 0.0)
    a = abs(omega)
    return complex(delta_shift(a, ff), math.copysign(gamma_width(a, ff), omega))


def h_retarded(z, ff, rtol=1e-11):
    """``h(z) = -int g**2/(k**2 - z**2) dk``, analytic for ``Im z > 0``.

    On the positive real axis the boundary value ``-(Delta + i Gamma)`` is
    returned; at ``z = i w_n`` this equals ``h_tilde(w_n)``.
    """
    z = complex(z)
    if z.imag == 0.0:
        if z.real < 0:
            return h_retarded(-z.real, ff).conjugate()
        return -continue_h(z.real, ff)
    if z.imag < 0:
        raise DomainError("h_retarded is the upper-half-plane branch; Im z must be >= 0")
    if ff.coupling == 0:
        return 0j
    z2 = z * z
    K = ff.k_max

    def f(k):
        return ff.g_squared(k) / (k * k - z2)

    pts = list(ff.nodes) + [abs(z), 10.0 * abs(z)]
    if z.real:
        # near the real axis the integrand has a Lorentzian core of width Im z at |Re z|
        x, y = abs(z.real), z.imag
        pts += [x + s * c * y for s in (-1.0, 0.0, 1.0) for c in (1.0, 10.0, 100.0)]
    atol = _atol(ff)
    re = _quad.quad(lambda k: f(k).real, 0.0, K, rtol=rtol, atol=atol, points=pts,
                    limit=1000, label="h(z) real part")
    im = _quad.quad(lambda k: f(k).imag, 0.0, K, rtol=rtol, atol=atol, points=pts,
                    limit=1000, label="h(z) imaginary part")
    return -complex(re, im)


# closed forms -----------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    """A temperature object written as ``numerator/denominator`` in ``(w_n**2, h)``.

    ``scale(w2)`` sets the magnitude below which the denominator counts as
    a pole.
    """

    name: str
    numerator: Callable
    denominator: Callable
    scale: Callable
    uses_h: bool = False

    def evaluate(self, w2, h=0.0):
        return self.numerator(w2, h) / self.denominator(w2, h)

    def temperature(self, wn, ff=None):
        """Value at a bosonic Matsubara frequency."""
        w = _bose(wn) if isinstance(wn, MatsubaraFrequency) else float(wn)
        h = h_tilde_value(w, ff) if self.uses_h else 0.0
        return self.evaluate(w * w, h)


def self_energy_form(p):
    m = p.m
    t = tanh(0.5 * p.beta * m)
    return ClosedForm("self_energy_2",
                      numerator=lambda w2, h: -4.0 * m * t,
                      denominator=lambda w2, h: 4.0 * m * m + w2,
                      scale=lambda w2: 4.0 * m * m + abs(w2))


def transition_matrix_form(p):
    m = p.m
    return ClosedForm("transition_matrix_2",
                      numerator=lambda w2, h: -4.0 * m,
                      denominator=lambda w2, h: transition_denominator(w2, h, p),
                      scale=lambda w2: 4.0 * m * m + abs(w2),
                      uses_h=True)


def continuation_substitute(form, omega, ff=None):
    """Continue ``form`` to the frequency ``omega``.

    Real ``omega`` gives the retarded value (``w_n**2 -> -w**2``,
    ``h -> -(Delta + i Gamma)``, crossing for ``omega < 0``). Complex
    ``omega`` in the upper half plane evaluates the analytic continuation
    itself, so ``omega = i w_n`` must reproduce the Matsubara value.
    """
    if form.uses_h and ff is None:
        raise DomainError(f"{form.name} needs a formfactor to continue h")
    z = complex(omega)
    if z.imag == 0.0 and z.real < 0:
        return continuation_substitute(form, -z.real, ff).conjugate()
    if z.imag < 0:
        raise DomainError("continuation is defined on the closed upper half plane")
    w2 = -(z * z)
    if z.imag == 0.0:
        w2 = -(z.real * z.real)
    h = h_retarded(z, ff) if form.uses_h else 0.0
    den = form.denominator(w2, h)
    if abs(den) <= 1e-12 * form.scale(w2):
        raise PoleError(f"{form.name}: pole at omega = {omega!r}", location=omega)
    value = form.numerator(w2, h) / den
    return complex(value)


def retarded_response(form, omega, ff=None):
    return RetardedResponse(float(omega), continuation_substitute(form, float(omega), ff))


def crossing_extend(omega, values):
    """Mirror a strictly positive grid to negative frequencies with conjugated values.

    Returns ``(omega_full, values_full)`` sorted by frequency.
    """
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=complex)
    if omega.shape != values.shape or omega.ndim != 1:
        raise DomainError("omega and values must be 1-d arrays of equal length")
    if omega.size and (np.any(omega <= 0) or np.any(np.diff(omega) <= 0)):
        raise DomainError("crossing_extend needs a strictly positive, increasing grid")
    return (np.concatenate([-omega[::-1], omega]),
            np.concatenate([np.conj(values[::-1]), values]))


__all__ = ["RetardedResponse", "delta_shift", "gamma_width", "continue_h", "h_retarded",
           "ClosedForm", "self_energy_form", "transition_matrix_form",
           "continuation_substitute", "retarded_response", "crossing_extend"]
