"""Second-order photon self-energy, the h-tilde integral and the transition matrix.

At second order the photon self-energy is a single fermion bubble::

    P2(w_n) = -4 m tanh(beta m/2) / (4 m**2 + w_n**2)

and the transition matrix resums the bubble against the free photon line,
``T(w_n) = 1/(1/P2(w_n) - h(w_n))`` with ``h(w_n) = -int g**2/(w_n**2 + k**2) dk``::

    T2(w_n) = -4 m / ((4 m**2 + w_n**2) coth(beta m/2) + 4 m h(w_n))
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _quad
from .errors import DomainError, PoleError
from .matsubara import MatsubaraFrequency, Statistics, SumEstimate, truncated_sum_oracle
from .special import coth


@dataclass(frozen=True)
class SelfEnergyValue:
    wn: MatsubaraFrequency
    value: float


@dataclass(frozen=True)
class TransitionMatrixValue:
    wn: MatsubaraFrequency
    value: float


def _bose(wn, beta=None):
    if not isinstance(wn, MatsubaraFrequency):
        raise DomainError(f"expected a MatsubaraFrequency, got {type(wn).__name__}")
    if wn.statistics is not Statistics.BOSE:
        raise DomainError("photon quantities live on the bosonic lattice")
    if beta is not None and abs(wn.beta - beta) > 1e-12 * beta:
        raise DomainError(f"frequency lattice beta={wn.beta} does not match params beta={beta}")
    return wn.value


def self_energy_2(wn, p):
    w = _bose(wn, p.beta)
    m = p.m
    value = -4.0 * m * math.tanh(0.5 * p.beta * m) / (4.0 * m * m + w * w)
    return SelfEnergyValue(wn, value)


def self_energy_2_bruteforce(wn, p, N=100_000):
    """Sum the bubble over fermionic ``w_n'`` before any resummation.

    Evaluates ``(1/beta) sum_n' [1/((i w' + i w + m)(i w' - m)) + 1/((i w' + i w - m)(i w' + m))]``
    with :func:`truncated_sum_oracle`; the returned estimate converges to
    :func:`self_energy_2` as ``N`` grows.
    """
    w = _bose(wn, p.beta)
    if N < 1000:
        raise DomainError("self_energy_2_bruteforce needs N >= 1000")
    m, beta = p.m, p.beta

    def term(x):
        iw = 1j * x
        return (1.0 / ((iw + 1j * w + m) * (iw - m))
                + 1.0 / ((iw + 1j * w - m) * (iw + m)))

    est = truncated_sum_oracle(term, Statistics.FERMI, beta, N)
    return SumEstimate(value=est.value.real / beta, tail=est.tail / beta,
                       error=est.error / beta, n_max=est.n_max)


def h_tilde_value(w, ff, rtol=1e-11):
    """``-int_0^inf g(k)**2/(w**2 + k**2) dk`` for a real frequency value ``w``."""
    if ff.coupling == 0:
        return 0.0
    w2 = float(w) * float(w)
    if w2 == 0.0:
        f = ff.g_squared_over_k2
    else:
        def f(k):
            return ff.g_squared(k) / (w2 + k * k)
    # the factor k^2/(w^2 + k^2) switches on at k ~ w; resolve it for small w
    pts = list(ff.nodes) + [x * abs(float(w)) for x in (1.0, 10.0)]
    val = _quad.quad(f, 0.0, ff.k_max, rtol=rtol, atol=1e-300, points=pts, label="h_tilde")
    return -val


def h_tilde(wn, ff):
    return h_tilde_value(_bose(wn), ff)


def transition_denominator(w2, h, p):
    """``(4m**2 + w2) coth(beta m/2) + 4 m h``; ``w2`` and ``h`` may be complex."""
    m = p.m
    return (4.0 * m * m + w2) * coth(0.5 * p.beta * m) + 4.0 * m * h


def transition_matrix_2(wn, p, ff):
    w = _bose(wn, p.beta)
    m = p.m
    h = h_tilde_value(w, ff)
    den = transition_denominator(w * w, h, p)
    if abs(den) < 1e-12 * (4.0 * m * m + w * w):
        raise PoleError(f"transition matrix pole at w_n = {w!r}", location=w)
    return TransitionMatrixValue(wn, -4.0 * m / den)


def dyson_series(wn, p, ff, order):
    """Partial sum ``P + P h P + ... + P (h P)**order`` of the resummation."""
    P = self_energy_2(wn, p).value
    h = h_tilde(wn, ff)
    return sum(P * (h * P) ** j for j in range(order + 1))
