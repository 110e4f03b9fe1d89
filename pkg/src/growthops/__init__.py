"""Numerical criteria for weighted composition operators W f = psi (f o phi)
between weighted-type growth spaces of holomorphic functions on the unit ball.
"""

from .errors import ConfigError, DomainError, HypothesisMismatch, QuadratureError, ResourceCapError
from .mobius import MobiusMap
from .quantities import SymbolPair
from .sampling import BallGrid
from .symbols import GapSeries, LacunarySeries, MultiPoly, RaySymbol, SelfMap
from .weights import RadialWeight, standard_weight, tabulated_weight, unit_weight

__version__ = "0.1.0"

__all__ = [
    "BallGrid", "ConfigError", "DomainError", "GapSeries", "HypothesisMismatch", "LacunarySeries",
    "MobiusMap", "MultiPoly", "QuadratureError", "RadialWeight", "RaySymbol", "ResourceCapError",
    "SelfMap", "SymbolPair", "standard_weight", "tabulated_weight", "unit_weight",
]
