import json
import subprocess
import sys

import pytest

from ecsnet import cli
from ecsnet.scenario import load_bundled, parse_scenario

from test_oracle import faulty_resolve

HCO_RASTER_8 = "N1 #.#.#.#.\nN2 .#.#.#.#\n"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_raster(capsys):
    code, out, _ = run_cli(capsys, "run", "hco.scenario", "--horizon", "8", "--raster")
    assert code == 0
    assert out == HCO_RASTER_8


def test_rhythm(capsys):
    code, out, _ = run_cli(capsys, "run", "lymnaea.scenario", "--horizon", "9", "--rhythm")
    assert code == 0
    assert out == "period=3 pattern=[N1][N2][N3]\n"


def test_no_rhythm(capsys):
    _, out, _ = run_cli(capsys, "run", "lymnaea.scenario", "--horizon", "4", "--rhythm")
    assert out == "no rhythm detected\n"


def test_csv_file_and_default_stdout(capsys, tmp_path):
    target = tmp_path / "trace.csv"
    code, out, _ = run_cli(capsys, "run", "hco.scenario", "--horizon", "4", "--csv", str(target), "--raster")
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[1] == "1,1,0,1.1,0,0,1" and len(lines) == 5
    assert out == "N1 #.#.\nN2 .#.#\n"
    _, out, _ = run_cli(capsys, "run", "hco.scenario", "--horizon", "4")
    assert out == target.read_text()


def test_default_horizon_from_scenario(capsys, tmp_path):
    _, out, _ = run_cli(capsys, "run", "hco.scenario", "--raster")
    assert len(out.splitlines()[0].split()[1]) == 20
    doc = json.loads(load_bundled("hco.scenario"))
    del doc["horizon"]
    path = tmp_path / "nohorizon.scenario"
    path.write_text(json.dumps(doc))
    _, out, _ = run_cli(capsys, "run", str(path), "--raster")
    assert len(out.splitlines()[0].split()[1]) == cli.DEFAULT_HORIZON


def test_missing_file(capsys):
    code, out, err = run_cli(capsys, "run", "missing.scenario")
    assert code == 2 and out == "" and "missing.scenario" in err


def test_unwritable_csv(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "run", "hco.scenario", "--csv", str(tmp_path / "no" / "dir.csv"))
    assert code == 2


def test_validate_bundled(capsys):
    for name in ("hco.scenario", "lymnaea.scenario"):
        code, out, _ = run_cli(capsys, "validate", name)
        assert code == 0 and out == f"{name}: ok\n"


def write_variant(tmp_path, **changes):
    doc = json.loads(load_bundled("hco.scenario"))
    doc["neurons"][0].update(changes)
    path = tmp_path / "bad.scenario"
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_pir_gain(capsys, tmp_path):
    code, out, err = run_cli(capsys, "validate", write_variant(tmp_path, pir_gain="0.5"))
    assert code == 1 and out == ""
    assert "pir_gain must be ≥ 1" in err


def test_validate_undeclared_transmitter(capsys, tmp_path):
    code, _, err = run_cli(capsys, "validate", write_variant(tmp_path, weights={"c": "-1"}))
    assert code == 1 and "undeclared transmitter 'c'" in err


def test_validate_prints_each_violation(capsys, tmp_path):
    path = write_variant(tmp_path, pir_gain="0.5", excitation_threshold="0")
    code, _, err = run_cli(capsys, "validate", path)
    assert code == 1 and len(err.splitlines()) == 2


def test_syntax_error_exit(capsys, tmp_path):
    path = tmp_path / "broken.scenario"
    path.write_text('{"format": 1,,}')
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 1 and "line 1, column 14" in err


def test_verify_zero_cases(capsys):
    code, out, _ = run_cli(capsys, "verify", "--cases", "0")
    assert code == 0 and out.startswith("0 cases")


def test_verify_small(capsys):
    code, out, _ = run_cli(capsys, "verify", "--cases", "25", "--seed", "3")
    assert code == 0 and "50 passed, 0 failed" in out


def test_verify_fault_injection(capsys, monkeypatch):
    monkeypatch.setattr(cli, "resolve_step", faulty_resolve)
    code, out, err = run_cli(capsys, "verify", "--cases", "40")
    assert code == 1
    assert "minimal failing scenario" in err
    reproducer = out.split("\n", 1)[1]
    spec = parse_scenario(reproducer).spec
    assert spec.n >= 1


@pytest.mark.parametrize("attempt", range(2))
def test_raster_byte_stable_via_subprocess(attempt):
    proc = subprocess.run(
        [sys.executable, "-m", "ecsnet", "run", "hco.scenario", "--horizon", "8", "--raster"],
        capture_output=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == HCO_RASTER_8.encode()
