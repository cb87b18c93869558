"""Free temperature propagators of the atom (fermion) and photon fields.

The fermion propagator is diagonal in the sigma_z basis; ``up`` is the
component with eigenvalue ``+m``. Photon propagators are scalar kernels at
coincident momenta: the ``delta(k - k')`` they carry is never materialised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matsubara import MatsubaraFrequency, Statistics


@dataclass(frozen=True)
class DiagonalMatrix2:
    up: complex
    down: complex

    @property
    def trace(self):
        return self.up + self.down

    def component(self, s):
        """Component with sigma_z eigenvalue ``s`` (+1 or -1)."""
        return self.up if s > 0 else self.down

    def as_array(self):
        return np.diag([self.up, self.down])


@dataclass(frozen=True)
class PhotonKernel:
    value: complex


def _frequency(wn, expected):
    if isinstance(wn, MatsubaraFrequency):
        if wn.statistics is not expected:
            raise DomainError(f"expected a {expected.value} Matsubara frequency, "
                              f"got {wn.statistics.value}")
        return wn.value
    return float(wn)


def free_fermion_frequency(wn, m):
    """``1/(i w_n - m sigma_z)`` at a fermionic Matsubara frequency."""
    if isinstance(wn, MatsubaraFrequency) and wn.statistics is not Statistics.FERMI:
        raise DomainError("free_fermion_frequency needs a fermionic frequency")
    w = _frequency(wn, Statistics.FERMI)
    if w == 0:
        raise DomainError("fermionic Matsubara frequencies are never zero")
    return DiagonalMatrix2(up=1.0 / (1j * w - m), down=1.0 / (1j * w + m))


def _fermion_tau_component(energy, tau, beta):
    # -exp(-E tau)/(1 + exp(-E beta)) for 0 < tau < beta, written without overflow
    if energy >= 0:
        return -math.exp(-energy * tau) / (1.0 + math.exp(-energy * beta))
    return -math.exp(energy * (beta - tau)) / (math.exp(energy * beta) + 1.0)


def free_fermion_imaginary_time(tau, m, beta):
    """Free fermion propagator at imaginary time ``tau`` in (-beta, beta), tau != 0.

    For ``tau > 0`` the component with energy ``E = +-m`` is
    ``-exp(-E tau)/(1 + exp(-E beta))``; negative times follow from
    antiperiodicity, ``S(tau) = -S(tau + beta)``.
    """
    if not (beta > 0):
        raise DomainError("beta must be positive")
    if not (-beta < tau < beta) or tau == 0:
        raise DomainError(f"tau must lie in (-beta, beta) without 0, got {tau!r}")
    sign = 1.0
    if tau < 0:
        tau, sign = tau + beta, -1.0
    return DiagonalMatrix2(up=sign * _fermion_tau_component(m, tau, beta),
                           down=sign * _fermion_tau_component(-m, tau, beta))


def free_photon_frequency(k, wn):
    """Scalar temperature kernel ``-1/(w_n**2 + k**2)``."""
    w = _frequency(wn, Statistics.BOSE)
    if k == 0 and w == 0:
        raise DomainError("free photon kernel is singular at k = w_n = 0")
    return PhotonKernel(-1.0 / (w * w + k * k))


def free_photon_retarded(k, k0, eps=1e-12):
    """Retarded photon kernel ``-1/(k**2 - (k0 + i eps)**2)``.

    This is the temperature kernel continued with ``w_n -> -i k0 + eps``; it
    is analytic for ``Im k0 > -eps``, so complex ``k0`` is accepted.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    z = complex(k0) + 1j * eps
    d = k * k - z * z
    if d == 0:
        raise DomainError("retarded kernel evaluated exactly on its pole")
    return PhotonKernel(-1.0 / d)


def fermion_fourier_series(tau, m, beta, n_max):
    """Symmetric partial sum ``(1/beta) sum_n exp(-i w_n tau) S(w_n)``, ``n = -n_max-1..n_max``.

    Only for checking :func:`free_fermion_imaginary_time`; convergence is
    slow (conditionally, like 1/n).
    """
    n = np.arange(-n_max - 1, n_max + 1)
    w = (2 * n + 1) * np.pi / beta
    ph = np.exp(-1j * w * tau)
    up = np.sum(ph / (1j * w - m)) / beta
    down = np.sum(ph / (1j * w + m)) / beta
    return DiagonalMatrix2(complex(up), complex(down))


__all__ = ["DiagonalMatrix2", "PhotonKernel", "free_fermion_frequency",
           "free_fermion_imaginary_time", "free_photon_frequency",
           "free_photon_retarded", "fermion_fourier_series"]
