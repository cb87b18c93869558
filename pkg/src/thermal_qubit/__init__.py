"""Finite-temperature response of a two-level atom coupled to a scalar photon field."""

__version__ = "0.1.0"

from .errors import DomainError, NonConvergentSumError, PoleError, QuadratureError, ThermalQubitError
from .params import DEFAULT_UNITS, K_B_EV_PER_K, SystemParams, UnitSystem, params_from_temperature
from .formfactor import Family, FormFactor
from .matsubara import (MatsubaraFrequency, Statistics, SumEstimate, frequency, sum_bose_pair,
                        sum_fermi_pair, truncated_sum_oracle)
from .selfenergy import (h_tilde, self_energy_2, self_energy_2_bruteforce, transition_matrix_2)
from .continuation import (continuation_substitute, continue_h, crossing_extend, delta_shift,
                           gamma_width, retarded_response, self_energy_form, transition_matrix_form)
from .polarizability import (EffectiveResponseParams, PolarizabilitySpectrum, Variant,
                             alpha2_second_quantized, delta2_correction, delta2_zero_T,
                             effective_params, frequency_grid, partition_ratio_2, partition_ratio_exact,
                             partition_ratio_free, physical_polarizability, slowing_down_scale,
                             slowing_down_temperature, spectrum_sweep,
                             zero_temperature_polarizability)

__all__ = [name for name in dir() if not name.startswith("_")]
