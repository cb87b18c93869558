import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

from thermal_qubit import __version__
from thermal_qubit.cli import main
from thermal_qubit.config import ConfigError, RunConfig, apply_overrides, load_config
from thermal_qubit.output import Table, fmt, read_csv

DATA = Path(__file__).parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# spectrum ---------------------------------------------------------------------------


def test_minimal_config_three_rows():
    code, out, _ = run("spectrum", "--config", str(DATA / "minimal.ini"))
    assert code == 0
    t = read_csv(out)
    assert t.columns == ["omega_eV", "re_alpha", "im_alpha", "pole_flag"]
    assert len(t.rows) == 3
    assert t.metadata["version"] == __version__
    assert out.splitlines()[0].startswith("#")


def test_provenance_complete():
    _, out, _ = run("spectrum", "--config", str(DATA / "minimal.ini"))
    meta = read_csv(out).metadata
    for key in ("tool", "version", "command", "variant", "m_eV", "delta_E_eV", "beta_per_eV",
                "temperature_K", "amplitude_A", "formfactor", "A_T", "thermal_factor", "delta2",
                "omega_min_eV", "omega_max_eV", "points", "tolerances", "k_B_eV_per_K"):
        assert key in meta
    assert json.loads(meta["formfactor"])["family"] == "gaussian_cutoff"


def test_zero_temperature_reference_file():
    ref = np.loadtxt(DATA / "zero_T_reference.csv", delimiter=",", comments="#", skiprows=2)
    code, out, _ = run("spectrum", "--delta-e", "2", "--beta", "200", "--omega-min", "0.1",
                       "--omega-max", "4", "--points", "40", "--variant", "physical")
    assert code == 0
    got = np.array(read_csv(out).rows)
    np.testing.assert_array_equal(got[:, 0], ref[:, 0])
    a = got[:, 1] + 1j * got[:, 2]
    b = ref[:, 1] + 1j * ref[:, 2]
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-6


def test_negative_frequencies_are_crossing_symmetric():
    code, out, _ = run("spectrum", "--delta-e", "2", "--beta", "1.3", "--omega-min", "-3",
                       "--omega-max", "3", "--points", "13", "--variant", "second_quantized")
    assert code == 0
    rows = np.array(read_csv(out).rows)
    n = len(rows)
    for i in range(n):
        j = n - 1 - i
        assert rows[i, 0] == -rows[j, 0]
        assert rows[i, 1] == rows[j, 1]
        assert rows[i, 2] == -rows[j, 2]


def test_pole_rows_have_empty_fields():
    code, out, _ = run("spectrum", "--delta-e", "2", "--beta", "1", "--lambda", "0",
                       "--omega-min", "1", "--omega-max", "3", "--points", "3")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[2] == "2,,,1"
    assert "n_poles = 1" in out


def test_byte_stable(tmp_path):
    args = ["spectrum", "--config", str(DATA / "minimal.ini"), "--points", "25", "--omega-min",
            "-2", "--format", "csv"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*args, "--out", str(a))[0] == 0
    assert run(*args, "--out", str(b), "--variant", "physical")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert run(*args, "--out", str(c), "--workers", "2")[0] == 0
    assert a.read_bytes() == c.read_bytes()


def test_csv_round_trip_lossless():
    _, out, _ = run("spectrum", "--delta-e", "2", "--temp", "5000", "--omega-min", "0.1",
                    "--omega-max", "3.3", "--points", "7", "--format", "csv")
    _, js, _ = run("spectrum", "--delta-e", "2", "--temp", "5000", "--omega-min", "0.1",
                   "--omega-max", "3.3", "--points", "7", "--format", "json")
    csv_rows = read_csv(out).rows
    json_rows = json.loads(js)["rows"]
    for r, s in zip(csv_rows, json_rows):
        assert r == [float(v) for v in s]


def test_json_poles_are_null():
    _, js, _ = run("spectrum", "--delta-e", "2", "--beta", "1", "--lambda", "0", "--omega-min",
                   "2", "--omega-max", "2", "--points", "1", "--format", "json")
    doc = json.loads(js)
    assert doc["rows"] == [[2.0, None, None, 1]]


def test_flags_override_config(tmp_path):
    out = tmp_path / "o.json"
    code, _, _ = run("spectrum", "--config", str(DATA / "minimal.ini"), "--temp", "10000",
                     "--format", "json", "--out", str(out))
    assert code == 0
    meta = json.loads(out.read_text())["metadata"]
    assert meta["temperature_K"] == pytest.approx(10000.0, rel=1e-14)


def test_tabulated_family(tmp_path):
    k = np.linspace(0, 10, 200)
    np.savetxt(tmp_path / "g.txt", np.column_stack([k, k * np.exp(-k * k / 2)]))
    ini = tmp_path / "run.ini"
    ini.write_text("[system]\nm = 1\nbeta = 1\n[formfactor]\nfamily = tabulated\nlambda = 0.1\n"
                   "table = g.txt\n[spectrum]\nomega_min = 0.5\nomega_max = 1\npoints = 2\n")
    code, out, err = run("spectrum", "--config", str(ini))
    assert code == 0, err
    meta = read_csv(out).metadata
    assert "table_sha256" in json.loads(meta["formfactor"])
    _, ref, _ = run("spectrum", "--delta-e", "2", "--beta", "1", "--omega-min", "0.5",
                    "--omega-max", "1", "--points", "2")
    a, b = np.array(read_csv(out).rows), np.array(read_csv(ref).rows)
    np.testing.assert_allclose(a[:, 1:3], b[:, 1:3], rtol=3e-4)


# errors ---------------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["spectrum", "--bogus"],
    ["spectrum", "--delta-e", "2", "--omega-min", "0", "--omega-max", "1"],
    ["spectrum", "--delta-e", "2", "--beta", "1"],
    ["spectrum", "--delta-e", "2", "--beta", "1", "--omega-min", "2", "--omega-max", "1"],
    ["spectrum", "--delta-e", "2", "--beta", "1", "--omega-min", "0", "--omega-max", "1",
     "--points", "0"],
    ["spectrum", "--delta-e", "-2", "--beta", "1", "--omega-min", "0", "--omega-max", "1"],
    ["spectrum", "--config", "/nonexistent.ini"],
    ["tsweep", "--delta-e", "2", "--t-min", "10"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(argv):
    code, _, err = run(*argv)
    assert code == 1
    assert err


def test_unwritable_output_is_usage_error():
    code, _, err = run("slowdown", "1", "--out", "/nonexistent/dir/x.csv")
    assert code == 1 and "error" in err


def test_invalid_config_key(tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text("[system]\ndelta_e = 2\ncolour = blue\n")
    code, _, err = run("spectrum", "--config", str(ini))
    assert code == 1 and "colour" in err


def test_numeric_failure_exit_2(tmp_path):
    k = np.linspace(0, 1, 20)
    np.savetxt(tmp_path / "g.txt", np.column_stack([k, np.where(k < 0.5, 0.0, 1e200)]))
    code, _, err = run("spectrum", "--delta-e", "2", "--beta", "1", "--family", "tabulated",
                       "--table", str(tmp_path / "g.txt"), "--omega-min", "0.6",
                       "--omega-max", "0.7", "--points", "2")
    assert code == 2, err
    assert "numerical failure" in err


def test_help_and_version():
    assert run("--version")[0] == 0
    assert run("spectrum", "--help")[0] == 0


# tsweep -----------------------------------------------------------------------------------


def test_tsweep_two_gaps():
    temps = []
    for de in ("63e-6", "167e-6"):
        code, out, _ = run("tsweep", "--delta-e", de, "--t-min", "0.05", "--t-max", "10",
                           "--points", "400")
        assert code == 0
        t = read_csv(out)
        assert t.columns == ["T_kelvin", "thermal_factor", "A_T", "ratio_free", "delta2"]
        rows = np.array(t.rows)
        assert np.all(np.diff(rows[:, 1]) < 0)
        temps.append(rows[np.argmax(rows[:, 1] < 0.1), 0])
    assert temps[0] < temps[1]
    assert temps[1] == pytest.approx(4.83, abs=0.05)


def test_tsweep_single_point_at_slowdown_temperature():
    T = 83.5e-6 / (8.617333262e-5 * 2 * math.atanh(0.1))
    code, out, _ = run("tsweep", "--delta-e", "167e-6", "--t-min", repr(T), "--t-max", repr(T),
                       "--points", "1")
    assert code == 0
    rows = read_csv(out).rows
    assert len(rows) == 1
    assert rows[0][1] == pytest.approx(0.1, rel=1e-14)


def test_tsweep_cold_row():
    code, out, _ = run("tsweep", "--delta-e", "167e-6", "--t-min", "1e-3", "--t-max", "1",
                       "--points", "2")
    assert code == 0
    rows = read_csv(out).rows
    assert rows[0][1] == 1.0 and rows[0][3] == 1.0


# slowdown -----------------------------------------------------------------------------------


def test_slowdown_reference_table():
    code, out, _ = run("slowdown", "--reference")
    assert code == 0
    t = read_csv(out)
    assert t.columns == ["delta_E_eV", "T_S_K"]
    got = [r[1] for r in t.rows]
    for g, ref in zip(got, (1500, 4.8, 1.8, 0.8)):
        assert abs(g - ref) / ref < 0.05
    assert float(t.metadata["scale_kT_over_dE"]) == pytest.approx(2.4916443, abs=1e-7)


def test_slowdown_empty_list():
    code, out, _ = run("slowdown")
    assert code == 0
    assert read_csv(out).rows == []


def test_slowdown_rejects_nonpositive_gap():
    assert run("slowdown", "--", "-1")[0] == 1


# validate -------------------------------------------------------------------------------------


def test_validate_quick_passes(tmp_path):
    rep_path = tmp_path / "rep.json"
    code, _, err = run("validate", "quick", "--out", str(rep_path))
    assert code == 0, err
    rep = json.loads(rep_path.read_text())
    assert rep["passed"] and rep["n_failed"] == 0
    names = {c["name"] for c in rep["checks"]}
    assert {"pair_sums", "narrowing_law", "crossing_symmetry", "zero_temperature_recovery"} <= names


def test_validate_detects_corrupted_thermal_factor():
    code, out, err = run("validate", "--inject-fault", "thermal_factor")
    assert code == 3
    rep = json.loads(out)
    failed = [c["name"] for c in rep["checks"] if not c["passed"]]
    assert failed == ["narrowing_law"]
    assert "narrowing_law" in err


# config and output units ------------------------------------------------------------------------


def test_config_conflicts(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text("[system]\ndelta_e = 2\nm = 1\nbeta = 1\n")
    with pytest.raises(ConfigError):
        load_config(ini).system.to_params()
    rc = apply_overrides(load_config(ini), delta_e=3.0)
    assert rc.system.to_params().m == 1.5


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(variant="both").validated()
    assert RunConfig().validated().variant == "physical"


def test_fmt_and_table():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(math.pi)) == math.pi
    assert fmt(math.nan) == "" and fmt(None) == "" and fmt(True) == "1"
    t = Table(["a"], [[1.5]], {"x": 1.0})
    assert t.to_csv() == "# x = 1\na\n1.5\n"
    assert json.loads(t.to_json())["rows"] == [[1.5]]
