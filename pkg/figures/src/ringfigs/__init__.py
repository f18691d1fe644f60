"""Figure rendering for the ring-array emission simulator's outputs."""

__version__ = "0.1.0"

from .render import FigureSpec, render
from .schema import (GridData, SchemaError, SpectrumData, TraceData,
                     parse_grid_csv, parse_grid_json, parse_spectrum_csv,
                     parse_trace_csv)

__all__ = ["FigureSpec", "render", "GridData", "SpectrumData", "TraceData",
           "SchemaError", "parse_grid_csv", "parse_grid_json",
           "parse_spectrum_csv", "parse_trace_csv"]
