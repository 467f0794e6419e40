"""
Secondary acceptance: render the three N=20 partition-comparison CSVs
produced by the experiment CLI (the commutant / shift-symmetric /
inversion-symmetric runs) into one image with four bound lines, headless,
with deterministic pixel dimensions, in under 10 seconds.
"""

import shutil
import struct
import subprocess
import time

import pytest

from plotgen import PlotSpec, render

RUNS = (
    ("commutant", "commutant"),
    ("r_symmetric", "shift-symmetric"),
    ("w_symmetric", "inversion-symmetric"),
)


@pytest.fixture(scope="module")
def experiment_csvs(tmp_path_factory):
    if shutil.which("catafl") is None:
        pytest.skip("experiment CLI not on PATH")
    root = tmp_path_factory.mktemp("runs")
    paths = []
    for family, _ in RUNS:
        out = root / family
        subprocess.run(
            [
                "catafl", "run", "--matrix", "6", "5", "7", "6", "--dim", "20",
                "--partition", family, "--steps", "25", "--seed", "104",
                "--out", str(out),
            ],
            check=True, capture_output=True,
        )
        paths.append(out / "trace_N20.csv")
    return paths


def test_renders_four_bound_lines_quickly(experiment_csvs, tmp_path):
    out = tmp_path / "comparison.png"
    spec = PlotSpec(
        inputs=[str(p) for p in experiment_csvs],
        out=str(out),
        labels=[label for _, label in RUNS],
        dpi=150,
    )
    tic = time.perf_counter()
    info = render(spec)
    render_seconds = time.perf_counter() - tic
    print(f"[{'PASS' if out.exists() else 'FAIL'}] plotgen_render "
          f"({render_seconds:.1f}s): {info['curves']} curves, "
          f"{len(info['bound_lines'])} bound lines")
    assert out.exists()
    assert info["curves"] == 3
    # three saturation bounds plus the shared dimensional 2 log 20 line
    assert len(info["bound_lines"]) == 4
    assert render_seconds < 10.0

    again = tmp_path / "again.png"
    render(PlotSpec(inputs=spec.inputs, out=str(again),
                    labels=spec.labels, dpi=150))
    blob1, blob2 = out.read_bytes()[:24], again.read_bytes()[:24]
    assert struct.unpack(">II", blob1[16:24]) == struct.unpack(">II", blob2[16:24])
    assert struct.unpack(">II", blob1[16:24]) == (960, 720)  # 6.4 x 4.8 in at 150
