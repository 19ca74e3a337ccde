"""Exact two-row cutting-plane geometry: lattice-free sets, gauges, and
closure approximation bounds over rational arithmetic."""

from .geom2d import Point2, Polygon, Strip, pt, rat
from .gauge import RcpInstance, cut, psi
from .latticefree import Classification, LatticeFreeSet, SlopeParams, classify, is_maximal_lattice_free

__all__ = [
    "Classification", "LatticeFreeSet", "Point2", "Polygon", "RcpInstance", "SlopeParams", "Strip",
    "classify", "cut", "is_maximal_lattice_free", "psi", "pt", "rat",
]
__version__ = "0.1.0"
