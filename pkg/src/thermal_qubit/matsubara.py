r"""Matsubara lattice, the two pair-summation identities and a brute-force oracle.

The identities (summed over all integers ``n``, no ``1/beta`` prefactor)::

    sum_n 1/((i w_n - a)(i w_n - b)) = -(beta/2) [tanh(beta b/2) - tanh(beta a/2)]/(b - a)   (fermi)
    sum_n 1/((i w_n - a)(i w_n - b)) = -(beta/2) [coth(beta b/2) - coth(beta a/2)]/(b - a)   (bose)

with ``w_n = (2n+1) pi/beta`` and ``w_n = 2 n pi/beta`` respectively.
Both closed forms are evaluated through ``tanh y - tanh x = sinh(y-x)/(cosh x cosh y)``
(and the analogous coth identity) so they stay accurate close to ``a = b``
and do not overflow for large ``beta*a``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _quad
from .errors import DomainError, NonConvergentSumError
from .special import sinhc

EPS = np.finfo(float).eps


class Statistics(str, enum.Enum):
    BOSE = "bose"
    FERMI = "fermi"


def _check_beta(beta):
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive and finite, got {beta!r}")


def frequency(stat, n, beta):
    """Matsubara frequency: ``2 n pi/beta`` (bose) or ``(2n+1) pi/beta`` (fermi)."""
    _check_beta(beta)
    stat = Statistics(stat)
    if stat is Statistics.BOSE:
        return 2.0 * n * math.pi / beta
    return (2.0 * n + 1.0) * math.pi / beta


@dataclass(frozen=True)
class MatsubaraFrequency:
    statistics: Statistics
    n: int
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        if int(self.n) != self.n:
            raise DomainError(f"Matsubara index must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        _check_beta(self.beta)

    @classmethod
    def bose(cls, n, beta):
        return cls(Statistics.BOSE, n, beta)

    @classmethod
    def fermi(cls, n, beta):
        return cls(Statistics.FERMI, n, beta)

    @property
    def value(self):
        return frequency(self.statistics, self.n, self.beta)

    def __float__(self):
        return self.value

    def negated(self):
        """The frequency ``-w_n`` on the same lattice."""
        if self.statistics is Statistics.BOSE:
            return MatsubaraFrequency(self.statistics, -self.n, self.beta)
        return MatsubaraFrequency(self.statistics, -self.n - 1, self.beta)


def _deg_threshold(a, b, beta):
    return 1e-8 * max(abs(a), abs(b), 1.0 / beta)


def sum_fermi_pair(a, b, beta):
    """Closed form of ``sum_n 1/((i w_n - a)(i w_n - b))`` over fermionic ``w_n``."""
    _check_beta(beta)
    if abs(b - a) < _deg_threshold(a, b, beta):
        a = b = 0.5 * (a + b)
    x, y = 0.5 * beta * a, 0.5 * beta * b
    z, s = y - x, abs(x) + abs(y)
    # 1/(cosh x cosh y) = 4 exp(-s) / ((1 + e^{-2|x|})(1 + e^{-2|y|}))
    den = (1.0 + math.exp(-2.0 * abs(x))) * (1.0 + math.exp(-2.0 * abs(y)))
    if abs(z) < 1.0:
        ratio = 0.5 * beta * sinhc(z) * 4.0 * math.exp(-s) / den      # (tanh y - tanh x)/(b - a)
    else:
        ratio = 2.0 * (math.exp(z - s) - math.exp(-z - s)) / den / (b - a)
    return -0.5 * beta * ratio


def sum_bose_pair(a, b, beta):
    """Closed form of ``sum_n 1/((i w_n - a)(i w_n - b))`` over bosonic ``w_n``.

    The ``n = 0`` term ``1/(a b)`` is included; ``a`` and ``b`` must be nonzero.
    """
    _check_beta(beta)
    if a == 0 or b == 0:
        raise DomainError("sum_bose_pair: a and b must be nonzero (coth pole at 0)")
    if abs(b - a) < _deg_threshold(a, b, beta):
        a = b = 0.5 * (a + b)
    x, y = 0.5 * beta * a, 0.5 * beta * b
    z, s = y - x, abs(x) + abs(y)
    sign = math.copysign(1.0, x) * math.copysign(1.0, y)
    # 1/(sinh x sinh y) = 4 sign exp(-s) / ((1 - e^{-2|x|})(1 - e^{-2|y|}))
    den = math.expm1(-2.0 * abs(x)) * math.expm1(-2.0 * abs(y))
    if abs(z) < 1.0:
        ratio = 0.5 * beta * sinhc(z) * 4.0 * sign * math.exp(-s) / den   # sinh(z)/((b-a) sinh x sinh y)
    else:
        ratio = 2.0 * sign * (math.exp(z - s) - math.exp(-z - s)) / den / (b - a)
    # coth y - coth x = -sinh(z)/(sinh x sinh y)
    return 0.5 * beta * ratio


@dataclass(frozen=True)
class SumEstimate:
    """Truncated Matsubara sum with tail correction.

    ``value`` already includes ``tail``; ``error`` bounds the remaining
    truncation, quadrature and round-off error.
    """

    value: complex
    tail: complex
    error: float
    n_max: int

    @property
    def real(self):
        return float(np.real(self.value))


def _positive_frequencies(stat, beta, n0, n1):
    n = np.arange(n0, n1 + 1, dtype=float)
    if stat is Statistics.BOSE:
        return 2.0 * n * np.pi / beta
    return (2.0 * n + 1.0) * np.pi / beta


def truncated_sum_oracle(term, stat, beta, N):
    """Brute-force ``sum_n term(w_n)`` over the Matsubara lattice.

    Frequencies are taken symmetrically: ``|n| <= N`` for bosons and
    ``n = -N-1 .. N`` for fermions. ``term`` must accept a numpy array of
    real frequencies and decay at least like ``1/w**2``. The remainder is
    estimated by the midpoint-rule integral of ``term(w) + term(-w)`` past
    the last frequency plus its leading Euler-Maclaurin correction.
    """
    _check_beta(beta)
    stat = Statistics(stat)
    N = int(N)
    if N < 2:
        raise DomainError("truncated_sum_oracle needs N >= 2")

    start = 1 if stat is Statistics.BOSE else 0
    w = _positive_frequencies(stat, beta, start, N)
    tp, tm = np.asarray(term(w)), np.asarray(term(-w))
    pair = tp + tm
    head = np.sum(pair)
    scale = np.sum(np.abs(tp)) + np.sum(np.abs(tm))
    if stat is Statistics.BOSE:
        t0 = complex(np.asarray(term(np.zeros(1)))[0])
        head = head + t0
        scale += abs(t0)

    def p(x):
        return complex(np.asarray(term(np.array([x])))[0] + np.asarray(term(np.array([-x])))[0])

    # decay check: |p| w^1.5 must shrink between w_{N/2} and w_N
    wN, wh = w[-1], w[len(w) // 2]
    pN, ph = abs(p(wN)), abs(p(wh))
    if pN > 0 and pN * wN ** 1.5 >= ph * wh ** 1.5:
        raise NonConvergentSumError(
            f"term decays slower than 1/w^1.5 (|p(w_N)| w_N^1.5 = {pN * wN ** 1.5:.3e} "
            f">= {ph * wh ** 1.5:.3e} at w_N/2)")

    h = 2.0 * np.pi / beta
    x0 = wN + 0.5 * h
    tail = 0.0j
    qerr = 0.0
    if pN > 0 or ph > 0:
        tscale = abs(p(x0)) * x0 + 1e-300
        # x = x0/t maps [x0, inf) onto (0, 1]; a 1/x**2 tail becomes a smooth integrand
        def mapped(t):
            return p(x0 / t) * x0 / (t * t) if t > 0 else 0.0j

        re = _quad.quad(lambda t: mapped(t).real, 0.0, 1.0, rtol=1e-12,
                        atol=1e-14 * tscale, label="oracle tail (real)")
        im = _quad.quad(lambda t: mapped(t).imag, 0.0, 1.0, rtol=1e-12,
                        atol=1e-14 * tscale, label="oracle tail (imag)")
        dx = 1e-3 * x0
        dp = (p(x0 + dx) - p(x0 - dx)) / (2.0 * dx)
        # midpoint rule: sum = integral/h + (h/24) p'(x0) - (7 h^3/5760) p'''(x0) + ...
        corr = (h / 24.0) * dp
        tail = complex(re, im) / h + corr
        # p ~ x^-s with s <= 4 bounds the next term by 10 (h/x0)^2 |corr|
        qerr = (1e-12 * abs(tail) + 2.0 * 1e-14 * tscale / h
                + (1e-5 + 10.0 * (h / x0) ** 2) * abs(corr))
    value = complex(head) + tail
    rounding = EPS * (math.log2(max(len(w), 2)) + 8.0) * scale + 8.0 * EPS * abs(value)
    return SumEstimate(value=value, tail=tail, error=float(qerr + rounding), n_max=N)
