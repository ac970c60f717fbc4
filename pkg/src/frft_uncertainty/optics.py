"""Spread estimates for optical systems modelled by the FRFT.

Two set-ups are supported, both in terms of a scale parameter ``s``:

* ``FRESNEL``: free-space propagation over distance ``d``, an FRFT with
  ``tan(alpha) = d / s^2``;
* ``LENS``: two lenses of focal length ``z`` separated by ``d``, an FRFT
  with ``sin(alpha) = d / s^2`` and ``tan(alpha / 2) = z / s^2``.

The floors are lower bounds on the output-plane spread given the input
field's moments.  All functions take a
:class:`~frft_uncertainty.moments.MomentReport`, so closed-form and measured
moments go through the same code.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .bounds import classical_constant
from .errors import DomainError
from .moments import MomentReport
from .transforms import AngleLike, as_angle

__all__ = [
    "LENS_TOL",
    "Variant",
    "OpticalSetup",
    "BandwidthFloor",
    "FrftBandwidthFloor",
    "bandwidth_floor",
    "frft_bandwidth_floor",
    "optical_spread_floor",
]

# allowed mismatch between sin(alpha) from the focal length and d / s^2
LENS_TOL = 1e-9


class Variant(enum.Enum):
    FRESNEL = "fresnel"
    LENS = "lens"


@dataclass(frozen=True)
class OpticalSetup:
    """Geometry of one optical FRFT system.

    Build with :meth:`fresnel` or :meth:`lens`; the fields are validated
    either way.  ``alpha`` is the equivalent FRFT angle.
    """

    variant: Variant
    s: float
    dist: float
    focal: Optional[float] = None

    def __post_init__(self):
        variant = Variant(self.variant)
        object.__setattr__(self, "variant", variant)
        for name in ("s", "dist"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a finite positive number, got {v!r}")
            object.__setattr__(self, name, v)
        ratio = self.dist / self.s**2
        if variant is Variant.FRESNEL:
            if self.focal is not None:
                raise ValueError("the Fresnel set-up has no focal length")
            return
        if ratio > 1.0:
            raise DomainError(f"lens set-up needs d <= s^2 (d/s^2 = {ratio!r}); no real angle exists")
        if self.focal is None:
            half = 0.5 * math.asin(ratio)
            object.__setattr__(self, "focal", self.s**2 * math.tan(half))
            return
        z = float(self.focal)
        if not (math.isfinite(z) and z > 0):
            raise ValueError(f"focal must be a finite positive number, got {z!r}")
        object.__setattr__(self, "focal", z)
        mismatch = abs(math.sin(2.0 * math.atan(z / self.s**2)) - ratio)
        if mismatch > LENS_TOL:
            raise DomainError(
                f"inconsistent lens set-up: sin(2 atan(z/s^2)) differs from d/s^2 by {mismatch:.3e}"
            )

    @classmethod
    def fresnel(cls, s: float, d: float) -> "OpticalSetup":
        return cls(Variant.FRESNEL, s, d)

    @classmethod
    def lens(cls, s: float, d: float, z: Optional[float] = None) -> "OpticalSetup":
        """Lens system; ``z`` is derived from ``(s, d)`` when omitted."""
        return cls(Variant.LENS, s, d, z)

    @property
    def alpha(self) -> float:
        if self.variant is Variant.FRESNEL:
            return math.atan(self.dist / self.s**2)
        return 2.0 * math.atan(self.focal / self.s**2)

    def to_dict(self) -> dict:
        return {"variant": self.variant.value, "s": self.s, "d": self.dist, "z": self.focal, "alpha": self.alpha}


class BandwidthFloor(NamedTuple):
    freq_floor: float
    freq_floor_classical: float


class FrftBandwidthFloor(NamedTuple):
    floor_main: float
    floor_real: float
    floor_classical: float


def _spread_x(report: MomentReport) -> float:
    if not report.spread_x > 0:
        raise DomainError("time spread must be positive to bound the other domain")
    return report.spread_x


def bandwidth_floor(report: MomentReport) -> BandwidthFloor:
    """Lower bounds on the frequency spread given the time spread."""
    sx = _spread_x(report)
    c = classical_constant(report.ndim, report.norm_sq)
    return BandwidthFloor((c + report.abs_cov**2) / sx, c / sx)


def frft_bandwidth_floor(report: MomentReport, alpha: AngleLike) -> FrftBandwidthFloor:
    """Lower bounds on the FRFT-domain spread at ``alpha`` given the time spread.

    ``floor_main`` uses both covariances; ``floor_real`` is the weaker form
    valid for real functions; ``floor_classical`` keeps only the constant.
    """
    a = as_angle(alpha).alpha
    sx = _spread_x(report)
    c = classical_constant(report.ndim, report.norm_sq)
    s, co = math.sin(a), math.cos(a)
    cov = report.cov
    main = (c + report.abs_cov**2 - cov * cov) * s * s + (co * sx + s * cov) ** 2
    real = c * s * s + co * co * sx * sx
    return FrftBandwidthFloor(main / sx, real / sx, c * s * s / sx)


def optical_spread_floor(setup: OpticalSetup, report: MomentReport) -> float:
    """Lower bound on the observed-plane spread, written in ``s, d, z``."""
    sx = _spread_x(report)
    top = classical_constant(report.ndim, report.norm_sq) + report.abs_cov**2
    r = setup.dist / setup.s**2
    if setup.variant is Variant.FRESNEL:
        return top / sx / (1.0 + 1.0 / (r * r)) + sx / (1.0 + r * r) + 2.0 / (r + 1.0 / r) * report.cov
    m = setup.dist / setup.focal - 1.0
    return r * r * top / sx + m * m * sx + 2.0 * r * m * report.cov
