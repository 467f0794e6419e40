"""Figure rendering for entropy-trace CSV logs."""

from .render import PlotSpec, SchemaError, TraceFile, build_figure, load_trace, render

__version__ = "0.1.0"
