import io
import json
import subprocess
import sys

import numpy as np
import pytest

from mustates.cli import RunConfig, UsageError, config_from_args, main, parse_complex, run
from mustates.hilbert import ModeSpace, ProductSpace, SpinSpace, StateVector
from mustates.io import (dumps, read_grid, serialize_grid, state_from_json, state_to_json,
                         to_jsonable, write_grid_csv)


# --- serialization

@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize("cplx", [False, True])
def test_small_grid_roundtrip_bit_exact(tmp_path, fmt, cplx, rng):
    x, y = np.array([-0.1, 1 / 3]), np.array([np.pi, -2e-300])
    grid = rng.normal(size=(2, 2))
    if cplx:
        grid = grid + 1j * rng.normal(size=(2, 2))
    path = tmp_path / f"g.{fmt}"
    serialize_grid(grid, (x, y), path, fmt)
    g2, x2, y2 = read_grid(path)
    assert np.array_equal(g2, grid) and np.array_equal(x2, x) and np.array_equal(y2, y)


def test_csv_layout(tmp_path):
    path = tmp_path / "g.csv"
    serialize_grid(np.array([[1.0, 2.0], [3.0, 0.1]]), ([0, 1], [5, 6]), path)
    raw = path.read_bytes()
    assert raw.split(b"\r\n")[0] == b"x\\y,5,6"
    assert b"0.10000000000000001" in raw


def test_grid_rejects_nonfinite(tmp_path):
    for bad in (np.nan, np.inf):
        with pytest.raises(ValueError):
            serialize_grid(np.array([[1.0, bad]]), ([0], [0, 1]), tmp_path / "bad.csv")
    assert not (tmp_path / "bad.csv").exists() or (tmp_path / "bad.csv").read_text() == ""
    with pytest.raises(ValueError):
        dumps({"v": float("nan")})


def test_grid_shape_mismatch():
    with pytest.raises(ValueError):
        write_grid_csv(io.StringIO(), np.zeros((2, 3)), [0, 1], [0, 1])


def test_large_grid_streams_by_row():
    class Counting(io.StringIO):
        writes = 0

        def write(self, s):
            Counting.writes += 1
            return super().write(s)

    ax = np.linspace(-4, 4, 161)
    buf = Counting()
    write_grid_csv(buf, np.ones((161, 161)), ax, ax)
    assert Counting.writes == 162
    assert buf.getvalue().count("\r\n") == 162


def test_state_json_roundtrip():
    for basis in (ModeSpace(3), SpinSpace(3), ProductSpace((ModeSpace(1), SpinSpace(1)))):
        raw = np.arange(1, basis.dim + 1) * (0.3 - 0.7j)
        s = StateVector(basis, raw, captured_norm=0.999)
        back = state_from_json(json.loads(dumps(state_to_json(s))))
        assert back.basis == basis
        assert np.array_equal(back.amplitudes, s.amplitudes)
        assert back.captured_norm == 0.999


def test_complex_json_encoding():
    assert to_jsonable(1 - 2j) == {"re": 1.0, "im": -2.0}
    assert to_jsonable(np.array([1j])) == [{"re": 0.0, "im": 1.0}]


# --- command line

def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(config_from_args(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_complex_forms():
    assert parse_complex("1+i") == 1 + 1j
    assert parse_complex("2") == 2
    assert parse_complex("-0.5-2i") == -0.5 - 2j
    assert parse_complex("i") == 1j


def test_config_defaults_and_validation():
    assert config_from_args(["quadgrid"]).format == "csv"
    assert config_from_args(["ghz", "--n", "3"]).format == "json"
    with pytest.raises(UsageError):
        config_from_args([])
    with pytest.raises(UsageError):
        config_from_args(["frobnicate"])
    with pytest.raises(UsageError):
        RunConfig("state", format="xml")


def test_uncertainty_vacuum_example():
    code, out, _ = call(["uncertainty", "--pair", "x,p", "--lambda", "1"])
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["product"] == pytest.approx(0.25, abs=1e-12)
    assert abs(rep["equality_residual"]) < 1e-9


def test_uncertainty_targeted_eigenvalue():
    code, out, _ = call(["uncertainty", "--lambda", "2", "--z", "0.5+0.2i"])
    d = json.loads(out)
    assert code == 0
    assert d["eigenvalue"] == pytest.approx({"re": 0.5, "im": 0.2}, abs=1e-8)


def test_uncertainty_spin_pair():
    code, out, _ = call(["uncertainty", "--pair", "sx,sy", "--lambda", "0.5", "--two-s", "4",
                         "--seed-check"])
    assert code == 0
    d = json.loads(out)
    assert all(d["seed_check"].values())


def test_uncertainty_bad_pair():
    code, _, err = call(["uncertainty", "--pair", "sx,qq"])
    assert code == 2 and json.loads(err)["error"]["type"] == "usage"


def test_ghz_check_example():
    code, out, _ = call(["ghz", "--n", "6", "--check"])
    assert code == 0
    assert json.loads(out)["fidelity"] == pytest.approx(1, abs=1e-10)


def test_quadgrid_example(tmp_path):
    path = tmp_path / "pair_q0.csv"
    code, _, _ = call(["quadgrid", "--xi", "3", "--q", "0", "--grid", "161", "--out", str(path)])
    assert code == 0
    grid, x, y = read_grid(path)
    assert grid.shape == (161, 161) and x[0] == -4 and y[-1] == 4
    meta = json.loads((tmp_path / "pair_q0.csv.meta.json").read_text())
    assert meta["command"] == "quadgrid" and meta["params"]["grid"] == 161
    assert "created" in meta


def test_outputs_are_byte_identical(tmp_path):
    for argv, name in ((["ramsey", "--n", "5"], "r"), (["catdyn", "--n", "5", "--m", "3"], "c"),
                       (["wigner", "--alpha", "1", "--beta", "0.4", "--grid", "21"], "w")):
        a, b = tmp_path / f"{name}1", tmp_path / f"{name}2"
        assert call(argv + ["--out", str(a)])[0] == 0
        assert call(argv + ["--out", str(b)])[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"created" not in a.read_bytes()


def test_env_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("MUSTATES_OUTPUT_DIR", str(tmp_path / "out"))
    code, out, _ = call(["ghz", "--n", "3"])
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "out" / "ghz.json").read_text())["n"] == 3
    assert (tmp_path / "out" / "ghz.json.meta.json").exists()


@pytest.mark.parametrize("argv", [
    ["state", "--kind", "coherent", "--alpha", "1+i", "--cutoff", "40"],
    ["state", "--kind", "squeezed", "--lambda", "2", "--alpha", "0.3", "--cutoff", "100"],
    ["state", "--kind", "cat", "--alpha", "1.5", "--parity", "odd"],
    ["state", "--kind", "pair", "--xi", "2", "--q", "1", "--cutoff", "30"],
    ["state", "--kind", "atomic-coherent", "--two-s", "5", "--theta", "1", "--phi", "2"],
    ["state", "--kind", "atomic-squeezed", "--two-s", "6", "--eta", "0.3", "--m", "1", "--theta", "0.4"],
    ["wigner", "--alpha", "0.5", "--beta", "0.5", "--format", "json"],
    ["quadgrid", "--grid", "41", "--cutoff", "30"],
    ["catdyn", "--n", "6", "--m", "4"],
    ["catdyn", "--n", "4", "--eta-t", "0.7"],
    ["ghz", "--n", "5"],
    ["ramsey", "--n", "5", "--points", "37"],
])
def test_seed_checks_pass(argv):
    code, out, err = call(argv + ["--seed-check"])
    assert code == 0, err
    if out.lstrip().startswith("{"):
        assert all(json.loads(out)["seed_check"].values())
    else:
        assert all(json.loads(err)["seed_check"].values())


def test_state_json_payload():
    code, out, _ = call(["state", "--kind", "fock", "--n", "2", "--cutoff", "3"])
    d = json.loads(out)
    assert code == 0
    assert d["state"]["basis"] == {"type": "fock", "cutoff": 3}
    assert d["state"]["amplitudes"][2] == {"re": 1.0, "im": 0.0}


def test_ramsey_json_summary():
    code, out, _ = call(["ramsey", "--n", "5", "--format", "json"])
    d = json.loads(out)
    assert code == 0
    assert d["max_gap_mixture"] == pytest.approx(2 ** -5, abs=1e-12)
    assert len(d["columns"]["beta"]) == 361


@pytest.mark.parametrize("argv,code,etype", [
    (["state", "--kind", "coherent", "--alpha", "5", "--cutoff", "20"], 2, "invalid-argument"),
    (["state", "--kind", "coherent", "--alpha", "2", "--cutoff", "16"], 3, "truncation"),
    (["state", "--kind", "cat", "--alpha", "0", "--parity", "odd"], 2, "invalid-argument"),
    (["wigner", "--alpha", "0.2", "--beta", "0.2"], 2, "invalid-argument"),
    (["catdyn", "--n", "4", "--m", "2", "--theta", "0"], 3, "conditioning"),
    (["ghz", "--n", "1"], 2, "invalid-argument"),
    (["state", "--kind", "fock", "--format", "csv"], 2, "usage"),
    (["wigner", "--alpha", "1", "--beta", "1", "--grid", "1"], 2, "usage"),
])
def test_error_exit_codes(argv, code, etype):
    got, out, err = call(argv)
    assert got == code
    assert out == ""
    assert json.loads(err)["error"]["type"] == etype


def test_main_usage_error(capsys):
    assert main(["state"]) == 2
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "usage"


def test_console_entry_point(tmp_path):
    path = tmp_path / "g.json"
    res = subprocess.run([sys.executable, "-m", "mustates", "ghz", "--n", "4", "--out", str(path)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert json.loads(path.read_text())["fidelity"] == pytest.approx(1, abs=1e-10)
