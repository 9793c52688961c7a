"""Term life insurance pricing under a stochastic hazard rate with a Sharpe-ratio loading."""

from .discount import DiscountCurve
from .grid import LogGrid
from .hazard import HazardParams, HazardState
from .mc import McConfig, McEstimate, Measure
from .pde import Surface, SurfaceKind
from .pricing import PriceTable, build_table

__all__ = [
    "DiscountCurve",
    "HazardParams",
    "HazardState",
    "LogGrid",
    "McConfig",
    "McEstimate",
    "Measure",
    "PriceTable",
    "Surface",
    "SurfaceKind",
    "build_table",
]
__version__ = "0.1.0"
