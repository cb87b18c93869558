"""``thermal-qubit`` command line.

Exit status: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 validation failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, apply_overrides, load_config
from .errors import DomainError, ThermalQubitError
from .formfactor import Family
from .output import Table, write
from .params import DEFAULT_UNITS
from .polarizability import (Variant, effective_params, frequency_grid, slowing_down_scale,
                             slowing_down_temperature, spectrum_sweep)
from . import validation

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VALIDATION = 0, 1, 2, 3

TOLERANCES = {"quad_rtol": 1e-10, "pole_rel_tol": 1e-12}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# provenance -----------------------------------------------------------------------


def _formfactor_meta(rc, ff):
    d = dict(ff.describe())
    if ff.family is Family.TABULATED:
        d["table"] = rc.formfactor.table
        d["table_sha256"] = hashlib.sha256(np.asarray(ff.table, dtype=float).tobytes()).hexdigest()
    return d


def _base_meta(command):
    return {"tool": "thermal-qubit", "version": __version__, "command": command,
            "k_B_eV_per_K": DEFAULT_UNITS.k_B}


def _system_meta(p):
    return {"m_eV": p.m, "delta_E_eV": p.delta_E, "beta_per_eV": p.beta,
            "temperature_K": DEFAULT_UNITS.beta_to_kelvin(p.beta), "beta_m": p.beta * p.m,
            "amplitude_A": p.amplitude_A}


# commands -------------------------------------------------------------------------


def cmd_spectrum(rc, workers=None):
    """Polarizability on an omega grid; columns omega_eV, re_alpha, im_alpha, pole_flag."""
    s = rc.spectrum
    if s.omega_min is None or s.omega_max is None:
        raise ConfigError("spectrum needs omega_min and omega_max")
    p = rc.system.to_params()
    ff = rc.formfactor.build()
    grid = frequency_grid(s.omega_min, s.omega_max, s.points)
    spec = spectrum_sweep(grid, p, ff, Variant(rc.variant), workers=workers)
    meta = _base_meta("spectrum")
    meta["variant"] = rc.variant
    meta.update(_system_meta(p))
    meta["formfactor"] = _formfactor_meta(rc, ff)
    if spec.effective is not None:
        e = spec.effective
        meta.update({"A_T": e.A_T, "thermal_factor": e.thermal_factor, "delta2": e.delta2})
    meta.update({"omega_min_eV": s.omega_min, "omega_max_eV": s.omega_max, "points": s.points,
                 "n_poles": int(spec.pole.sum())})
    meta["tolerances"] = TOLERANCES
    rows = []
    for w, a, flag in zip(spec.omega.tolist(), spec.alpha.tolist(), spec.pole.tolist()):
        rows.append([w, None, None, 1] if flag else [w, a.real, a.imag, 0])
    return Table(["omega_eV", "re_alpha", "im_alpha", "pole_flag"], rows, meta)


def cmd_temperature_sweep(rc):
    """Amplitude and narrowing factor against temperature."""
    t = rc.tsweep
    if t.t_min is None or t.t_max is None:
        raise ConfigError("tsweep needs t_min and t_max")
    if not t.t_min > 0:
        raise ConfigError("tsweep temperatures must be positive")
    m = rc.system.half_gap()
    ff = rc.formfactor.build()
    base = rc.system
    temps = np.linspace(t.t_min, t.t_max, t.points)
    rows = []
    p = None
    for T in temps.tolist():
        p = type(base)(m=m, temperature=T, amplitude=base.amplitude).to_params()
        e = effective_params(p, ff)
        rows.append([T, e.thermal_factor, e.A_T, e.ratio_free, e.delta2])
    meta = _base_meta("tsweep")
    meta.update({"m_eV": m, "delta_E_eV": 2.0 * m, "amplitude_A": base.amplitude,
                 "t_min_K": t.t_min, "t_max_K": t.t_max, "points": t.points})
    meta["formfactor"] = _formfactor_meta(rc, ff)
    meta["tolerances"] = TOLERANCES
    return Table(["T_kelvin", "thermal_factor", "A_T", "ratio_free", "delta2"], rows, meta)


def cmd_slowdown_table(delta_e, factor=10.0):
    """Slowing-down temperature for each gap (eV)."""
    rows = [[de, slowing_down_temperature(de, factor)] for de in delta_e]
    meta = {"tool": "thermal-qubit", "version": __version__, "command": "slowdown",
            "k_B_eV_per_K": DEFAULT_UNITS.k_B, "factor": float(factor),
            "scale_kT_over_dE": slowing_down_scale(factor)}
    return Table(["delta_E_eV", "T_S_K"], rows, meta)


def cmd_validate(level="quick", faults=()):
    results = validation.run_suite(level, faults)
    rep = validation.report(results, level)
    rep["version"] = __version__
    return rep


# argument parsing -----------------------------------------------------------------


def _common(parser, output=True):
    g = parser.add_argument_group("system and coupling")
    g.add_argument("--config", metavar="PATH", help="INI run configuration (flags override it)")
    g.add_argument("--delta-e", type=float, metavar="eV", help="level splitting 2m")
    g.add_argument("--amplitude", type=float, metavar="A", help="dipole amplitude A")
    g.add_argument("--lambda", dest="coupling", type=float, help="coupling strength")
    g.add_argument("--cutoff", type=float, metavar="eV", help="formfactor cutoff")
    g.add_argument("--family", choices=["gaussian", "exponential", "tabulated"])
    g.add_argument("--table", metavar="PATH", help="two-column (k, g) table")
    if output:
        o = parser.add_argument_group("output")
        o.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        o.add_argument("--format", choices=["csv", "json"])


def build_parser():
    parser = _Parser(prog="thermal-qubit",
                     description="Finite-temperature two-level-atom response calculations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("spectrum", help="polarizability spectrum over an omega grid")
    _common(sp)
    sp.add_argument("--temp", type=float, metavar="K")
    sp.add_argument("--beta", type=float, metavar="1/eV")
    sp.add_argument("--omega-min", type=float, metavar="eV")
    sp.add_argument("--omega-max", type=float, metavar="eV")
    sp.add_argument("--points", type=int)
    sp.add_argument("--variant", choices=[v.value for v in Variant])
    sp.add_argument("--workers", type=int, default=None, help="worker processes for the sweep")

    tp = sub.add_parser("tsweep", help="thermal factor and amplitude against temperature")
    _common(tp)
    tp.add_argument("--t-min", type=float, metavar="K")
    tp.add_argument("--t-max", type=float, metavar="K")
    tp.add_argument("--points", dest="t_points", type=int)

    sd = sub.add_parser("slowdown", help="slowing-down temperature table")
    sd.add_argument("delta_e", nargs="*", type=float, metavar="DELTA_E_eV")
    sd.add_argument("--factor", type=float, default=10.0, help="lifetime growth factor")
    sd.add_argument("--reference", action="store_true",
                    help="append the four reference gaps 50 meV, 167 ueV, 63 ueV, 28 ueV")
    sd.add_argument("--out", metavar="PATH")
    sd.add_argument("--format", choices=["csv", "json"], default="csv")

    vp = sub.add_parser("validate", help="run the self-check suite")
    vp.add_argument("level", nargs="?", choices=validation.LEVELS, default="quick")
    vp.add_argument("--out", metavar="PATH", help="write the JSON report here")
    vp.add_argument("--inject-fault", action="append", default=[], choices=validation.FAULTS,
                    help=argparse.SUPPRESS)
    return parser


def _run_config(args):
    rc = load_config(args.config) if args.config else RunConfig()
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    return apply_overrides(rc, **flags).validated()


def _emit(text_or_table, fmt, path, stdout):
    if isinstance(text_or_table, Table):
        write(text_or_table, fmt, path, stdout)
    elif path is None:
        stdout.write(text_or_table)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text_or_table)


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    try:
        if args.command == "validate":
            rep = cmd_validate(args.level, tuple(args.inject_fault))
            _emit(json.dumps(rep, indent=2) + "\n", "json", args.out, stdout)
            for chk in rep["checks"]:
                if not chk["passed"]:
                    print(f"FAILED {chk['name']}: {chk['detail']}", file=stderr)
            return EXIT_OK if rep["passed"] else EXIT_VALIDATION
        if args.command == "slowdown":
            gaps = list(args.delta_e)
            if args.reference:
                gaps += [de for de, _ in validation.SLOWDOWN_TABLE]
            _emit(cmd_slowdown_table(gaps, args.factor), args.format, args.out, stdout)
            return EXIT_OK
        rc = _run_config(args)
        if args.command == "spectrum":
            table = cmd_spectrum(rc, workers=args.workers)
        else:
            table = cmd_temperature_sweep(rc)
        _emit(table, rc.output.format, rc.output.path, stdout)
        return EXIT_OK
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"thermal-qubit: error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"thermal-qubit: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ThermalQubitError, ArithmeticError) as exc:
        print(f"thermal-qubit: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
