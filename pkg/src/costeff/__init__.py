"""Cost-efficient multi-period consumption under Black-Scholes and CEV markets."""

from .copula import ClaytonParams, CopulaSample
from .market import BsParams, CevParams, StatePriceSample
from .optimizer import ConsumptionMatrix, CostResult, FrontierPoint
from .targetdist import TargetDistribution

__all__ = [
    "ClaytonParams",
    "CopulaSample",
    "BsParams",
    "CevParams",
    "StatePriceSample",
    "ConsumptionMatrix",
    "CostResult",
    "FrontierPoint",
    "TargetDistribution",
]

__version__ = "0.1.0"
