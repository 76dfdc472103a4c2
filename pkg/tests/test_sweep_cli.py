import json
import math
import os
import subprocess
import sys

import pytest

from abring.cli import UsageError, main, parse_cli
from abring.errors import InvalidParameter
from abring.sweep import (
    CSV_HEADER,
    Axis,
    SweepConfig,
    dumps,
    emit,
    parse_number,
    read_csv,
    run_sweep,
)


def run_cli(*args, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "abring", *args], capture_output=True,
                          text=True, env=full_env)


def test_parse_phase_profile_example():
    cfg = parse_cli("sweep --quantity phase_profile --gamma 0.707 --k 1.5708994 --phi 0:1.5708:2001".split())
    assert cfg.quantity == "phase_profile"
    assert len(cfg.phi.values) == 2001 and cfg.phi.values[-1] == 1.5708
    assert cfg.k.values == (1.5708994,) and not cfg.k.swept


def test_parse_three_axis_sweep():
    cfg = parse_cli("--gamma 0:1:10 --phi 0:1:10 --k 0:1:10 --quantity amplitudes".split())
    assert all(len(ax.values) == 10 and ax.swept for ax in cfg.axes())


def test_missing_quantity_is_usage_error():
    with pytest.raises(UsageError):
        parse_cli("sweep --gamma 0.5 --phi 0.3 --k 1".split())


@pytest.mark.parametrize("spec", ["0:1", "0:1:1", "1:0:5", "0:1:x", "a,b", "pi/0"])
def test_malformed_ranges(spec):
    with pytest.raises(InvalidParameter):
        Axis.parse(spec)


def test_number_expressions():
    assert parse_number("pi/2+1e-4") == math.pi / 2 + 1e-4
    assert parse_number("-2*pi") == -2 * math.pi
    with pytest.raises(InvalidParameter):
        parse_number("__import__('os')")


def test_config_file_with_flag_override(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"quantity": "amplitudes", "gamma": "0:1:3", "phi": 0.1, "k": 1.0}))
    cfg = parse_cli(["--config", str(path), "--k", "2.0"])
    assert cfg.k.values == (2.0,) and len(cfg.gamma.values) == 3


def test_quantity_specific_validation():
    with pytest.raises(InvalidParameter):
        SweepConfig.from_mapping({"quantity": "max_phase_shift", "gamma": 1, "phi": 0.1, "k": 1})
    with pytest.raises(InvalidParameter):
        SweepConfig.from_mapping({"quantity": "phase_profile", "gamma": 1, "phi": 0.1, "k": 1})
    with pytest.raises(InvalidParameter):
        SweepConfig.from_mapping({"quantity": "amplitudes", "gamma": 1, "k": 1})


def test_single_point_uniform_chain():
    (row,) = run_sweep(SweepConfig.from_mapping({"quantity": "amplitudes", "gamma": 0, "phi": 0, "k": 1}))
    assert row.abs_t == pytest.approx(1, abs=1e-12) and row.abs_r == pytest.approx(0, abs=1e-12)
    assert row.flag == "ok" and row.det_m_re == pytest.approx(1.0)


def test_rows_in_lexicographic_order():
    cfg = SweepConfig.from_mapping({"quantity": "amplitudes", "gamma": "0.1,0.2", "phi": "0.3,0.4", "k": "1,2"})
    keys = [(r.gamma, r.phi, r.k) for r in run_sweep(cfg)]
    assert keys == sorted(keys) and len(keys) == 8


def test_emit_three_rows(tmp_path):
    cfg = SweepConfig.from_mapping({"quantity": "amplitudes", "gamma": 0.5, "phi": 0.3, "k": "0.5:1.5:3"})
    path = tmp_path / "out.csv"
    emit(run_sweep(cfg), "csv", str(path))
    raw = path.read_bytes()
    assert raw.count(b"\n") == 4 and b"\r" not in raw
    assert raw.decode().splitlines()[0] == ",".join(CSV_HEADER)


def test_csv_round_trip_bit_identical():
    cfg = SweepConfig.from_mapping({"quantity": "amplitudes", "gamma": "0:1.5:7", "phi": "0:pi/2:9", "k": "0.2:3:11"})
    rows = run_sweep(cfg)
    assert read_csv(dumps(rows), is_text=True) == rows


def test_singular_gap_rows():
    cfg = SweepConfig.from_mapping({"quantity": "amplitudes", "gamma": 1, "phi": "0.5,pi/4", "k": "pi/2"})
    rows = run_sweep(cfg)
    assert [r.flag for r in rows] == ["ok", "singular_gap"]
    line = dumps(rows).splitlines()[2].split(",")
    assert line[3:11] == [""] * 8
    data = json.loads(dumps(rows, "json"))
    assert data[1]["re_t"] is None and data[1]["flag"] == "singular_gap"
    assert data[0]["re_t"] is not None


def test_max_phase_shift_rows():
    cfg = SweepConfig.from_mapping({"quantity": "max_phase_shift", "gamma": "0.8,1.3", "k": "pi/2+1e-5"})
    rows = run_sweep(cfg)
    assert dumps(rows).splitlines()[0] == "gamma,k,delta_omega"
    assert rows[0].delta_omega > 3.0 and rows[1].delta_omega < 0.2


def test_threads_env_gives_identical_bytes(tmp_path):
    outputs = []
    for threads in ("1", "8"):
        out = tmp_path / f"t{threads}.csv"
        res = run_cli("sweep", "--quantity", "amplitudes", "--gamma", "0:1.2:5", "--phi", "0:1.5708:401",
                      "--k", "1.5:1.65:7", "-o", str(out), env={"ABRING_THREADS": threads})
        assert res.returncode == 0, res.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_locus_command(capsys):
    assert main(["locus", "--gamma", "1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"phi_c": [0.7853981633974483]}


def test_locus_out_of_range_is_usage_error(capsys):
    assert main(["locus", "--gamma", "2"]) == 1


@pytest.mark.parametrize("suite", ["unitarity", "oracle", "locus"])
def test_verify_suites_pass(suite, capsys):
    assert main(["verify", "--suite", suite]) == 0
    assert json.loads(capsys.readouterr().out)[suite]["passed"] is True


def test_verify_failure_exit_code(monkeypatch, capsys):
    import abring.suites as suites
    monkeypatch.setitem(suites.SUITES, "locus", lambda: {"passed": False})
    assert main(["verify", "locus"]) == 2


def test_equivalence_command(capsys):
    assert main(["equivalence", "--n", "20", "--gamma", "0.5"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_phase_shift_command(capsys):
    assert main(["phase-shift", "--k", "pi/2+1e-4", "--gamma", "0.707"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["lapse_events"]) == 2


def test_state_dump(tmp_path):
    path = tmp_path / "state.json"
    assert main(["state-dump", "--branch", "singular_plus", "--n", "4", "-o", str(path)]) == 0
    records = json.loads(path.read_text())
    assert len(records) == 10 and records[0]["site"] == -4
    assert main(["state-dump", "--branch", "psi1", "--gamma", "0.5", "--phi", "0.3",
                 "--k", "1.2", "--n", "5", "--alpha", "1,1j", "-o", str(path)]) == 0


def test_usage_and_io_exit_codes(tmp_path):
    assert run_cli("sweep", "--gamma", "1").returncode == 1
    assert run_cli("nonsense").returncode == 1
    assert run_cli("sweep", "--quantity", "amplitudes", "--gamma", "0:1", "--phi", "0", "--k", "1").returncode == 1
    missing = tmp_path / "no" / "such" / "dir.csv"
    res = run_cli("sweep", "--quantity", "amplitudes", "--gamma", "0.5", "--phi", "0.3", "--k", "1",
                  "-o", str(missing))
    assert res.returncode == 3
    assert run_cli("sweep", "--config", str(tmp_path / "absent.json")).returncode == 3
