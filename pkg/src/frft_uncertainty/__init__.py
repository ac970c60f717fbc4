"""Fractional Fourier transforms on R^N and the uncertainty bounds they obey.

Submodules:

* :mod:`.grid` -- sampled functions, quadrature, derivatives, grid files
* :mod:`.transforms` -- N-D Fourier and fractional Fourier transforms
* :mod:`.moments` -- moment vectors, spreads, covariance, absolute covariance
* :mod:`.bounds` -- lower bounds and their evaluation on sampled functions
* :mod:`.chirp` -- closed-form Gaussian-chirp families
* :mod:`.optics` -- spread floors for Fresnel and two-lens systems
* :mod:`.cli` -- command-line front end
"""

from .bounds import (
    BoundReport,
    bound_frft_single,
    bound_ft_classical,
    bound_ft_sharper,
    bound_report,
    bound_two_frft,
    product_identity_check,
    verify,
)
from .chirp import (
    EtaClass,
    ExtremalChirpND,
    GaussianChirp2D,
    chirp2d_frft_spread,
    chirp2d_moments,
    chirp2d_products,
    extremal_moments,
)
from .errors import DomainError, GridDataError, NumericalError
from .grid import Axis, GridFunction, integrate, load_grid, save_grid
from .moments import MomentReport, abs_covariance, covariance, moment_report
from .optics import OpticalSetup, bandwidth_floor, frft_bandwidth_floor, optical_spread_floor
from .transforms import Angle, FrftPlan, frft_nd, ft_nd, inverse_frft

__all__ = [
    "Angle",
    "Axis",
    "BoundReport",
    "DomainError",
    "EtaClass",
    "ExtremalChirpND",
    "FrftPlan",
    "GaussianChirp2D",
    "GridDataError",
    "GridFunction",
    "MomentReport",
    "NumericalError",
    "OpticalSetup",
    "abs_covariance",
    "bandwidth_floor",
    "bound_frft_single",
    "bound_ft_classical",
    "bound_ft_sharper",
    "bound_report",
    "bound_two_frft",
    "chirp2d_frft_spread",
    "chirp2d_moments",
    "chirp2d_products",
    "covariance",
    "extremal_moments",
    "frft_bandwidth_floor",
    "frft_nd",
    "ft_nd",
    "integrate",
    "inverse_frft",
    "load_grid",
    "moment_report",
    "optical_spread_floor",
    "product_identity_check",
    "save_grid",
    "verify",
]
