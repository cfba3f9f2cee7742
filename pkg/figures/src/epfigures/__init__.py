"""Publication-style figures from exported doublet CSV/JSON files.

This package never imports the core numerical library; everything it draws
comes from the exported artifacts (trajectory/section CSV, model JSON).
"""

from .io import FigureError, load_model_json, load_trajectory
from .render import FigureRequest, render

__version__ = "0.1.0"

__all__ = ["FigureError", "FigureRequest", "load_model_json", "load_trajectory", "render"]
