"""Limiting degree distributions of random outerplanar, series-parallel and
planar graphs, with exact small-graph and formal-series validation."""

__version__ = "0.1.0"

from .numerics import Real, SolverConfig  # noqa: F401
from .series import Series, BiSeries  # noqa: F401
