"""Figure rendering for linkcap sweep and locations CSV files."""

from linkfigs.figures import FigureError, FigureSpec, RenderResult, render

__all__ = ["FigureError", "FigureSpec", "RenderResult", "render"]
