"""Run configuration: an INI file with sections, overridden by CLI flags.

Example::

    [system]
    delta_e = 2.0        ; eV, or give m = half gap
    temperature = 3000   ; K, or give beta in 1/eV
    amplitude = 1.0

    [formfactor]
    family = gaussian    ; gaussian | exponential | tabulated
    lambda = 0.1
    cutoff = 1.0
    table = g.txt        ; two columns k g, only for tabulated

    [spectrum]
    omega_min = 0.1
    omega_max = 4.0
    points = 201

    [tsweep]
    t_min = 100
    t_max = 20000
    points = 50

    [output]
    format = csv         ; csv | json
    path = out.csv
    variant = physical   ; physical | second_quantized
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import DomainError
from .formfactor import Family, FormFactor
from .params import DEFAULT_UNITS, SystemParams
from .polarizability import Variant


class ConfigError(DomainError):
    pass


@dataclass(frozen=True)
class SystemInput:
    delta_e: float | None = None
    m: float | None = None
    temperature: float | None = None
    beta: float | None = None
    amplitude: float = 1.0

    def half_gap(self):
        if self.delta_e is not None and self.m is not None:
            raise ConfigError("give either delta_e or m, not both")
        if self.delta_e is not None:
            return 0.5 * self.delta_e
        if self.m is not None:
            return self.m
        raise ConfigError("system needs delta_e (or m)")

    def to_params(self):
        m = self.half_gap()
        if self.beta is not None and self.temperature is not None:
            raise ConfigError("give either temperature or beta, not both")
        if self.beta is not None:
            beta = self.beta
        elif self.temperature is not None:
            beta = DEFAULT_UNITS.kelvin_to_beta(self.temperature)
        else:
            raise ConfigError("system needs temperature (or beta)")
        return SystemParams(m=m, beta=beta, amplitude_A=self.amplitude)


@dataclass(frozen=True)
class FormFactorInput:
    family: str = "gaussian"
    coupling: float = 0.1
    cutoff: float = 1.0
    table: str | None = None

    def build(self):
        fam = Family.parse(self.family)
        if fam is Family.TABULATED:
            if not self.table:
                raise ConfigError("tabulated formfactor needs a table path")
            return FormFactor.from_file(self.table, coupling=self.coupling)
        return FormFactor(fam, self.coupling, self.cutoff)


@dataclass(frozen=True)
class OmegaSweep:
    omega_min: float | None = None
    omega_max: float | None = None
    points: int = 201


@dataclass(frozen=True)
class TemperatureSweep:
    t_min: float | None = None
    t_max: float | None = None
    points: int = 50


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    system: SystemInput = field(default_factory=SystemInput)
    formfactor: FormFactorInput = field(default_factory=FormFactorInput)
    spectrum: OmegaSweep = field(default_factory=OmegaSweep)
    tsweep: TemperatureSweep = field(default_factory=TemperatureSweep)
    output: OutputSpec = field(default_factory=OutputSpec)
    variant: str = Variant.PHYSICAL.value

    def validated(self):
        if self.output.format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.output.format!r}")
        if self.variant not in {v.value for v in Variant}:
            raise ConfigError(f"variant must be physical or second_quantized, got {self.variant!r}")
        s = self.spectrum
        if s.points < 1:
            raise ConfigError("spectrum points must be >= 1")
        if s.omega_min is not None and s.omega_max is not None and s.omega_min > s.omega_max:
            raise ConfigError("omega_min must not exceed omega_max")
        t = self.tsweep
        if t.points < 1:
            raise ConfigError("tsweep points must be >= 1")
        if t.t_min is not None and t.t_max is not None and t.t_min > t.t_max:
            raise ConfigError("t_min must not exceed t_max")
        return self


# keys accepted in each section -> (dataclass field, converter)
_SECTIONS = {
    "system": ("system", {"delta_e": ("delta_e", float), "m": ("m", float),
                          "temperature": ("temperature", float), "t": ("temperature", float),
                          "beta": ("beta", float), "amplitude": ("amplitude", float),
                          "a": ("amplitude", float)}),
    "formfactor": ("formfactor", {"family": ("family", str), "lambda": ("coupling", float),
                                  "coupling": ("coupling", float), "cutoff": ("cutoff", float),
                                  "table": ("table", str)}),
    "spectrum": ("spectrum", {"omega_min": ("omega_min", float), "omega_max": ("omega_max", float),
                              "points": ("points", int)}),
    "tsweep": ("tsweep", {"t_min": ("t_min", float), "t_max": ("t_max", float),
                          "points": ("points", int)}),
    "output": ("output", {"format": ("format", str), "path": ("path", str)}),
}


def load_config(path):
    """Parse an INI run configuration; unknown sections or keys are errors."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    path = Path(path)
    try:
        with path.open() as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    cfg = RunConfig()
    for section in parser.sections():
        if section == "output" and parser.has_option(section, "variant"):
            cfg = replace(cfg, variant=parser.get(section, "variant").strip())
        if section not in _SECTIONS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        attr, keys = _SECTIONS[section]
        updates = {}
        for key, raw in parser.items(section):
            if section == "output" and key == "variant":
                continue
            if key not in keys:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            name, conv = keys[key]
            try:
                updates[name] = conv(raw.strip())
            except ValueError:
                raise ConfigError(f"{path}: bad value {raw!r} for {section}.{key}") from None
        if section == "formfactor" and "table" in updates:
            tp = Path(updates["table"])
            if not tp.is_absolute():
                updates["table"] = str((path.parent / tp))
        cfg = replace(cfg, **{attr: replace(getattr(cfg, attr), **updates)})
    return cfg


def apply_overrides(cfg, **flags):
    """Flags win over file values; ``None`` means "not given"."""
    def upd(obj, mapping):
        changes = {k: v for k, v in mapping.items() if v is not None}
        return replace(obj, **changes) if changes else obj

    system = cfg.system
    if flags.get("delta_e") is not None:
        system = replace(system, delta_e=flags["delta_e"], m=None)
    if flags.get("temp") is not None:
        system = replace(system, temperature=flags["temp"], beta=None)
    if flags.get("beta") is not None:
        system = replace(system, beta=flags["beta"], temperature=None)
    system = upd(system, {"amplitude": flags.get("amplitude")})
    ff = upd(cfg.formfactor, {"family": flags.get("family"), "coupling": flags.get("coupling"),
                              "cutoff": flags.get("cutoff"), "table": flags.get("table")})
    spec = upd(cfg.spectrum, {"omega_min": flags.get("omega_min"),
                              "omega_max": flags.get("omega_max"), "points": flags.get("points")})
    ts = upd(cfg.tsweep, {"t_min": flags.get("t_min"), "t_max": flags.get("t_max"),
                          "points": flags.get("t_points")})
    out = upd(cfg.output, {"format": flags.get("format"), "path": flags.get("out")})
    variant = flags.get("variant") or cfg.variant
    return RunConfig(system, ff, spec, ts, out, variant)


def as_dict(cfg):
    def dc(obj):
        return {f.name: getattr(obj, f.name) for f in fields(obj)}
    return {"system": dc(cfg.system), "formfactor": dc(cfg.formfactor),
            "spectrum": dc(cfg.spectrum), "tsweep": dc(cfg.tsweep),
            "output": dc(cfg.output), "variant": cfg.variant}
