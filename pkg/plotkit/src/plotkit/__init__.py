"""Comparison figures for zetalab CSV outputs.

Reads the distribution, discrepancy and hunt CSV files emitted by the
zetalab command line (never mutating them), overlays the theoretical curves
recomputed from the run manifest's recorded constant, and writes standard
image files.
"""

from .render import EmptyDataError, PlotSpec, SchemaError, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "render", "SchemaError", "EmptyDataError"]
