"""Regenerate zero_T_reference.csv from the zero-temperature closed form."""
from pathlib import Path

from thermal_qubit import FormFactor, frequency_grid, zero_temperature_polarizability

grid = frequency_grid(0.1, 4.0, 40)
ff = FormFactor.gaussian(0.1, 1.0)
lines = ["# zero-temperature polarizability, m = 1 eV, gaussian lambda = 0.1, cutoff = 1 eV",
         "omega_eV,re_alpha,im_alpha"]
for w in grid:
    a = zero_temperature_polarizability(w, 1.0, ff)
    lines.append(f"{w:.17g},{a.real:.17g},{a.imag:.17g}")
Path(__file__).with_name("zero_T_reference.csv").write_text("\n".join(lines) + "\n")
