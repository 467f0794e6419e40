"""
Headless rendering of entropy-trace CSVs.

Input files must carry the versioned header `# schema=1 columns=...` with
columns t,H,bound_env,bound_dim,bound_saturation,trace_drift,wall_ms.
The renderer is a pure view: it plots H(t) curves plus horizontal bound
lines read straight from the file (each file's saturation bound dashed in
the curve's color, the shared dimensional bound solid black) and never
recomputes an entropy or a bound. Output size is figsize * dpi, so pixel
dimensions are deterministic across reruns.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

SCHEMA_PREFIX = "# schema=1"
COLUMNS = ["t", "H", "bound_env", "bound_dim",
           "bound_saturation", "trace_drift", "wall_ms"]
FIGSIZE = (6.4, 4.8)


class SchemaError(Exception):
    """Input file is not a schema=1 trace CSV."""


@dataclass
class TraceFile:
    path: str
    label: str
    times: list[int]
    entropies: list[float]
    bound_dim: float
    bound_saturation: float


@dataclass
class PlotSpec:
    inputs: list[str]
    out: str
    labels: list[str] | None = None
    dpi: int = 150

    def resolved_labels(self) -> list[str]:
        if self.labels is not None:
            if len(self.labels) != len(self.inputs):
                raise ValueError(
                    f"{len(self.labels)} labels for {len(self.inputs)} inputs"
                )
            return list(self.labels)
        return [os.path.splitext(os.path.basename(p))[0] for p in self.inputs]


def load_trace(path: str, label: str) -> TraceFile:
    """Parse one schema=1 CSV; raises SchemaError on any mismatch."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
        if not first.startswith(SCHEMA_PREFIX):
            raise SchemaError(f"{path}: missing `{SCHEMA_PREFIX}` header line")
        rest = fh.read()
    reader = csv.reader(io.StringIO(rest))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(f"{path}: no column header") from None
    if header != COLUMNS:
        raise SchemaError(f"{path}: columns {header} != {COLUMNS}")
    times, entropies = [], []
    bound_dim = bound_sat = None
    for row in reader:
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise SchemaError(f"{path}: row width {len(row)} != {len(COLUMNS)}")
        times.append(int(row[0]))
        entropies.append(float(row[1]))
        if bound_dim is None:
            bound_dim = float(row[3])
            bound_sat = float(row[4])
    if not times:
        raise SchemaError(f"{path}: empty CSV body")
    return TraceFile(
        path=path, label=label, times=times, entropies=entropies,
        bound_dim=bound_dim, bound_saturation=bound_sat,
    )


def build_figure(spec: PlotSpec):
    """Figure plus a summary of what was drawn (for tests and logging)."""
    traces = [
        load_trace(path, label)
        for path, label in zip(spec.inputs, spec.resolved_labels())
    ]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    bound_lines = []
    for i, trace in enumerate(traces):
        color = colors[i % len(colors)]
        ax.plot(trace.times, trace.entropies, color=color, marker=".",
                label=trace.label)
        ax.axhline(trace.bound_saturation, color=color, linestyle="--",
                   linewidth=1.0)
        bound_lines.append(trace.bound_saturation)
    for value in sorted({round(t.bound_dim, 12) for t in traces}):
        ax.axhline(value, color="black", linestyle="-", linewidth=1.2)
        bound_lines.append(value)
    ax.set_xlabel("t")
    ax.set_ylabel("H(t)")
    ax.legend(loc="lower right", fontsize=8)
    ax.margins(x=0.02)
    info = {"bound_lines": bound_lines, "curves": len(traces)}
    return fig, info


def render(spec: PlotSpec) -> dict:
    """Write the image; returns the drawing summary."""
    fig, info = build_figure(spec)
    try:
        fig.savefig(spec.out, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return info
