import json

import pytest

from catafl.cli import main


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("# schema=1")
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return header, rows


def test_run_writes_schema_csv_and_metadata(tmp_path):
    out = tmp_path / "exp"
    code = main([
        "run", "--matrix", "6", "5", "7", "6", "--dim", "10",
        "--partition", "r_symmetric", "--steps", "4", "--seed", "3",
        "--out", str(out),
    ])
    assert code == 0
    header, rows = read_csv(out / "trace_N10.csv")
    assert header == ["t", "H", "bound_env", "bound_dim",
                      "bound_saturation", "trace_drift", "wall_ms"]
    assert len(rows) == 5
    assert float(rows[0][1]) == pytest.approx(0.0, abs=1e-12)
    # every H obeys the recorded bounds
    for row in rows:
        h, env, dim = float(row[1]), float(row[2]), float(row[3])
        assert h <= env + 1e-9
        assert h <= dim + 1e-9
    meta = json.loads((out / "trace_N10.meta.json").read_text())
    assert meta["schema"] == 1
    assert meta["partition"]["family"] == "symmetric"
    assert meta["config"]["seed"] == 3
    assert meta["dim"] == 10


def test_rerun_byte_identical_except_wall(tmp_path):
    argv = [
        "run", "--matrix", "2", "1", "3", "2", "--dim", "6",
        "--partition", "random", "--steps", "5", "--seed", "9",
    ]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--out", str(out_a)]) == 0
    assert main(argv + ["--out", str(out_b)]) == 0
    _, rows_a = read_csv(out_a / "trace_N6.csv")
    _, rows_b = read_csv(out_b / "trace_N6.csv")
    for ra, rb in zip(rows_a, rows_b):
        assert ra[:6] == rb[:6]  # all but the wall-time column


def test_incompatible_partition_exit_two(tmp_path, capsys):
    code = main([
        "run", "--matrix", "6", "5", "7", "6", "--dim", "101",
        "--partition", "r_symmetric", "--out", str(tmp_path),
    ])
    assert code == 2
    assert "5 ∤ 101" in capsys.readouterr().err


def test_pseudospin_gate_exit_two(tmp_path, capsys):
    code = main([
        "run", "--matrix", "2", "1", "3", "2", "--dim", "8",
        "--partition", "pseudospin_z", "--out", str(tmp_path),
    ])
    assert code == 2
    assert "4 | 8" in capsys.readouterr().err


def test_commutant_gate_exit_two(tmp_path, capsys):
    code = main([
        "run", "--matrix", "6", "5", "7", "6", "--dim", "10",
        "--partition", "commutant", "--out", str(tmp_path),
    ])
    assert code == 2
    assert "4 ∤ M" in capsys.readouterr().err


def test_zero_steps_single_row(tmp_path):
    out = tmp_path / "z"
    code = main([
        "run", "--matrix", "2", "1", "3", "2", "--dim", "4",
        "--partition", "random", "--steps", "0", "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out / "trace_N4.csv")
    assert len(rows) == 1
    assert int(rows[0][0]) == 0
    assert float(rows[0][1]) == pytest.approx(0.0, abs=1e-12)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(
        "matrix = 6 5 7 6\n"
        "dims = 5\n"
        "partition = random\n"
        "steps = 2\n"
        "seed = 4\n"
        "# comment line\n"
    )
    out = tmp_path / "out"
    code = main(["run", "--config", str(cfg), "--dim", "6", "--out", str(out)])
    assert code == 0
    assert (out / "trace_N6.csv").exists()       # flag wins over the file
    assert not (out / "trace_N5.csv").exists()
    meta = json.loads((out / "trace_N6.meta.json").read_text())
    assert meta["config"]["matrix"] == [6, 5, 7, 6]


def test_json_config(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({
        "matrix": [2, 1, 3, 2], "dims": [4], "partition": "random",
        "steps": 1, "seed": 0,
    }))
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "trace_N4.csv").exists()


def test_single_csv_out_path(tmp_path):
    out = tmp_path / "one.csv"
    code = main([
        "run", "--matrix", "2", "1", "3", "2", "--dim", "4",
        "--partition", "random", "--steps", "1", "--out", str(out),
    ])
    assert code == 0
    assert out.exists()
    assert (tmp_path / "one.meta.json").exists()


def test_bits_log_base(tmp_path):
    out = tmp_path / "bits"
    code = main([
        "run", "--matrix", "2", "1", "3", "2", "--dim", "4",
        "--partition", "random", "--steps", "12", "--seed", "1",
        "--log-base", "bits", "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out / "trace_N4.csv")
    # dimensional bound is 2 log2(4) = 4 bits
    assert float(rows[-1][3]) == pytest.approx(4.0, abs=1e-12)
    assert float(rows[-1][1]) <= 4.0 + 1e-9


def test_quantize_dump(tmp_path):
    out = tmp_path / "u.csv"
    code = main([
        "quantize-dump", "--matrix", "2", "1", "3", "2",
        "--kappa", "0.0", "--dim", "2", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("#")
    first = [float(tok) for tok in lines[1].split(",")]
    assert first[0] == pytest.approx(2 ** -0.5)   # re U[0,0]
    assert first[2] == pytest.approx(-(2 ** -0.5))  # re U[0,1]


def test_classical_orbit(tmp_path):
    out = tmp_path / "orbit.csv"
    code = main([
        "classical-orbit", "--matrix", "2", "1", "3", "2", "--kappa", "0.0",
        "--point", "0.5", "0.25", "--steps", "1", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "q,p"
    assert [float(x) for x in lines[1].split(",")] == [0.5, 0.25]
    assert [float(x) for x in lines[2].split(",")] == [0.25, 0.0]
