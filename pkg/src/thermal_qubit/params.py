"""Physical parameters and the eV <-> kelvin boundary.

Everything inside the library works in natural units (hbar = c = 1) with
energies in eV. Kelvin only appears in :func:`params_from_temperature`,
:func:`temperature_kelvin` and the slowing-down temperature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

#: CODATA 2018 Boltzmann constant in eV/K (exact in the 2019 SI).
K_B_EV_PER_K = 8.617333262e-5


@dataclass(frozen=True)
class UnitSystem:
    k_B: float = K_B_EV_PER_K

    def kelvin_to_beta(self, T):
        if not (T > 0 and math.isfinite(T)):
            raise DomainError(f"temperature must be positive and finite, got {T!r}")
        return 1.0 / (self.k_B * T)

    def beta_to_kelvin(self, beta):
        if not (beta > 0 and math.isfinite(beta)):
            raise DomainError(f"beta must be positive and finite, got {beta!r}")
        return 1.0 / (self.k_B * beta)


DEFAULT_UNITS = UnitSystem()


@dataclass(frozen=True)
class SystemParams:
    """Two-level atom parameters.

    Parameters
    ----------
    m : float
        Half of the level gap in eV (the gap is ``2*m``).
    beta : float
        Inverse temperature ``1/(k_B T)`` in 1/eV.
    amplitude_A : float
        Response normalisation; the polarizability is reported in units of A.
    """

    m: float
    beta: float
    amplitude_A: float = 1.0

    def __post_init__(self):
        for name in ("m", "beta", "amplitude_A"):
            raw = getattr(self, name)
            try:
                v = float(raw)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a number, got {raw!r}") from None
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {raw!r}")
            object.__setattr__(self, name, v)
        x = self.beta * self.m
        if not (math.isfinite(x) and x > 0):
            raise DomainError(f"beta*m must be finite and positive, got {x!r}")

    @property
    def thermal_argument(self):
        return self.beta * self.m

    @property
    def delta_E(self):
        return 2.0 * self.m

    def temperature(self, units=DEFAULT_UNITS):
        return units.beta_to_kelvin(self.beta)

    def with_beta(self, beta):
        return SystemParams(self.m, beta, self.amplitude_A)


def params_from_temperature(delta_E, T, amplitude_A=1.0, units=DEFAULT_UNITS):
    """Build :class:`SystemParams` from a level gap in eV and a temperature in K."""
    if not (delta_E > 0 and math.isfinite(delta_E)):
        raise DomainError(f"delta_E must be positive and finite, got {delta_E!r}")
    return SystemParams(m=0.5 * delta_E, beta=units.kelvin_to_beta(T), amplitude_A=amplitude_A)


def thermal_argument(p):
    return p.beta * p.m


def temperature_kelvin(p, units=DEFAULT_UNITS):
    return p.temperature(units)
