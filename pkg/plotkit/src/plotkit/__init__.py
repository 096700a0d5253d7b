"""Publication-style figures from rabiholo CSV outputs."""

from .recipes import KINDS, FigureRecipe, Style, Table, load_table
from .render import build_figure, render

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "FigureRecipe",
    "Style",
    "Table",
    "build_figure",
    "load_table",
    "render",
]
