"""Figure regeneration for dswap experiment CSVs."""

__version__ = "0.1.0"

from .figures import KINDS, FigureSpec, build_figure, plot, read_columns

__all__ = ["__version__", "KINDS", "FigureSpec", "build_figure", "plot", "read_columns"]
