"""Minimal Market Model option prices, implied volatility and its limits.

The numerical kernels run from a compiled extension when it is built and
from a pure-Python module otherwise; ``mmmvol.kernels.BACKEND`` says which.
"""

from .asymptotics import (LimitReport, convergence_report, large_time_limit, rr_estimate,
                          rr_estimate_mmm, small_time_limit)
from .blackscholes import BsContext, bs_call, bs_call_mmm, bs_put, bs_vega
from .errors import (DegenerateExpiryError, DegenerateTargetError, DomainError, MmmError,
                     NegativeRadicandError, NonConvergenceError, NonPositiveExcessError,
                     OutOfBoundsError, RangeOverflowError, ZeroVolatilityError)
from .implied import IvResult, implied_vol, implied_vol_mmm
from .kernels import BACKEND
from .mmm import (ModelParams, call_bounds, call_price, call_theta, call_theta2,
                  coordinates, log_call_excess, option_price, phi, put_price, yield_to_maturity,
                  zcb_price, zcb_theta, zcb_theta2)
from .oracle import McEstimate, mc_call_price, sample_terminal
from .specfun import ChiSquareArgs, bessel_i, bessel_i_scaled, ncx2_cdf, ncx2_cdf_oracle, ncx2_pdf
from .surface import SurfaceGrid, generate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BsContext", "ChiSquareArgs", "DegenerateExpiryError", "DegenerateTargetError",
    "DomainError", "IvResult", "LimitReport", "McEstimate", "MmmError", "ModelParams",
    "NegativeRadicandError", "NonConvergenceError", "NonPositiveExcessError", "OutOfBoundsError",
    "RangeOverflowError", "SurfaceGrid", "ZeroVolatilityError", "bessel_i", "bessel_i_scaled",
    "bs_call", "bs_call_mmm", "bs_put", "bs_vega", "call_bounds", "call_price", "call_theta",
    "call_theta2", "convergence_report", "coordinates", "generate", "implied_vol",
    "implied_vol_mmm", "large_time_limit", "log_call_excess", "mc_call_price", "ncx2_cdf",
    "ncx2_cdf_oracle", "ncx2_pdf", "option_price", "phi", "put_price", "rr_estimate",
    "rr_estimate_mmm", "sample_terminal", "small_time_limit", "yield_to_maturity", "zcb_price",
    "zcb_theta", "zcb_theta2",
]
