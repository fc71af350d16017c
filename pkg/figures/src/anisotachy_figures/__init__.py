"""Figure rendering for the anisotachy CLI's CSV outputs.

This package never imports the simulation library; everything it knows
arrives through CSV files and command-line flags, so the two
distributions can evolve independently.
"""

from .render import FIGURE_IDS, SchemaError, render

__version__ = "0.1.0"

__all__ = ["FIGURE_IDS", "SchemaError", "render", "__version__"]
