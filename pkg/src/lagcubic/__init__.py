"""Cubic conditions for Lagrangian torus fibrations and the Calabi-Yau mirror pipeline."""

from .series import FormalSeries, LogSeries

__version__ = "0.1.0"

__all__ = ["FormalSeries", "LogSeries", "__version__"]
