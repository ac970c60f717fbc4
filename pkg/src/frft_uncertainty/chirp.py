"""Closed-form Gaussian-chirp families and their samplers.

Two families are provided.

:class:`GaussianChirp2D`
    ``f(x1, x2) = exp(-sum (x_k - x0_k)^2 / (2 zeta_k) + d)
    * exp(2 pi i [(x1 - x0_1)^2 / (2 eps1) - (x2 - x0_2)^2 / (2 eps2) + w0.x + d1])``.
    Note the opposite chirp signs in the two dimensions.

:class:`ExtremalChirpND`
    ``f(x) = exp(-||x - a||^2 / (2 zeta) + d)
    * exp(2 pi i [sum eta_m(x) (x_m - a_m)^2 / (2 eps) + b.x + d_sigma(x)])``
    where each dimension's ``eta_m`` is ``+1``, ``-1``, ``sgn(x_m - a_m)`` or
    ``-sgn(x_m - a_m)`` and ``d_sigma`` is a constant per sign pattern.  These
    are the functions for which the time-frequency bound with absolute
    covariance is an equality when spreads are taken about ``(a, b)``.

All closed forms carry the overall ``||f||^2`` factor, so a non-unit ``d``
scales every spread and covariance accordingly.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError
from .grid import MAX_DIM, Axis, GridFunction
from .moments import CentredFunctionals, MomentReport
from .transforms import STAGE_MIN_SIN, AngleLike, as_angle

__all__ = [
    "GaussianChirp2D",
    "ChirpProducts",
    "EtaClass",
    "ExtremalChirpND",
    "chirp2d_moments",
    "chirp2d_frft_spread",
    "chirp2d_products",
    "extremal_moments",
    "extremal_functionals_about_centre",
    "self_dual_axis",
    "chirp_from_dict",
]

_TWO_PI = 2.0 * math.pi


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")
    return value


def _vector(name: str, value, n: int) -> tuple:
    out = tuple(float(v) for v in value)
    if len(out) != n:
        raise ValueError(f"{name} must have length {n}")
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"{name} must be finite")
    return out


def self_dual_axis(reach: float, *, cover: float = 6.0, max_points: int = 2048, min_points: int = 64) -> Axis:
    """Symmetric axis with ``count * step^2 = 1`` that holds ``cover * reach``
    inside the region every FRFT stage maps without aliasing.

    On such an axis the discrete Fourier matrix is unitary and the same grid
    serves time, frequency and every fractional domain.  ``count`` is clipped
    to ``[min_points, max_points]``.
    """
    half = cover * _positive("reach", reach) / STAGE_MIN_SIN
    count = max(min_points, min(max_points, math.ceil(4.0 * half * half)))
    count += count % 2
    return Axis.symmetric(math.sqrt(count) / 2.0, count)


@dataclass(frozen=True)
class GaussianChirp2D:
    """Two-dimensional Gaussian chirp with per-dimension width and rate."""

    zeta1: float
    zeta2: float
    eps1: float
    eps2: float
    x0: tuple = (0.0, 0.0)
    w0: tuple = (0.0, 0.0)
    d: float = 0.0
    d1: float = 0.0

    def __post_init__(self):
        for name in ("zeta1", "zeta2", "eps1", "eps2"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        object.__setattr__(self, "x0", _vector("x0", self.x0, 2))
        object.__setattr__(self, "w0", _vector("w0", self.w0, 2))
        for name in ("d", "d1"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @classmethod
    def unit_norm(cls, zeta1, zeta2, eps1, eps2, x0=(0.0, 0.0), w0=(0.0, 0.0), d1=0.0) -> "GaussianChirp2D":
        """Choose ``d`` so that ``exp(2d) * pi * sqrt(zeta1 * zeta2) = 1``."""
        z1, z2 = _positive("zeta1", zeta1), _positive("zeta2", zeta2)
        d = -0.5 * math.log(math.pi * math.sqrt(z1 * z2))
        return cls(z1, z2, eps1, eps2, x0, w0, d, d1)

    @property
    def zeta(self) -> tuple:
        return (self.zeta1, self.zeta2)

    @property
    def eps(self) -> tuple:
        return (self.eps1, self.eps2)

    @property
    def norm_sq(self) -> float:
        return math.exp(2.0 * self.d) * math.pi * math.sqrt(self.zeta1 * self.zeta2)

    def __call__(self, x1, x2):
        t1 = np.asarray(x1, dtype=float) - self.x0[0]
        t2 = np.asarray(x2, dtype=float) - self.x0[1]
        amp = np.exp(-t1 * t1 / (2.0 * self.zeta1) - t2 * t2 / (2.0 * self.zeta2) + self.d)
        phase = (
            t1 * t1 / (2.0 * self.eps1)
            - t2 * t2 / (2.0 * self.eps2)
            + self.w0[0] * np.asarray(x1)
            + self.w0[1] * np.asarray(x2)
            + self.d1
        )
        return amp * np.exp(1j * _TWO_PI * phase)

    def sample(self, axes: Optional[Sequence[Axis]] = None) -> GridFunction:
        """Sample on ``axes`` (default 256 points per dimension on [-8, 8])."""
        if axes is None:
            axes = (Axis.symmetric(8.0, 256),) * 2
        return GridFunction.from_callable(self, axes, family="gaussian_chirp_2d")

    def resolved_axes(self, **kw) -> tuple:
        """Per-dimension :func:`self_dual_axis` sized from the closed-form
        time and frequency extents of this chirp."""
        out = []
        for k in range(2):
            sx = math.sqrt(self.zeta[k] / 2.0)
            sw = math.sqrt(self.zeta[k] / 2.0 * (1.0 / (4.0 * math.pi**2 * self.zeta[k] ** 2) + 1.0 / self.eps[k] ** 2))
            reach = math.hypot(abs(self.x0[k]) + sx, abs(self.w0[k]) + sw)
            out.append(self_dual_axis(reach, **kw))
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "zeta": [self.zeta1, self.zeta2],
            "eps": [self.eps1, self.eps2],
            "x0": list(self.x0),
            "w0": list(self.w0),
            "d": self.d,
            "d1": self.d1,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "GaussianChirp2D":
        zeta = _vector("zeta", data["zeta"], 2)
        eps = _vector("eps", data["eps"], 2)
        x0 = data.get("x0", (0.0, 0.0))
        w0 = data.get("w0", (0.0, 0.0))
        d1 = data.get("d1", 0.0)
        if data.get("d") is None:
            return cls.unit_norm(*zeta, *eps, x0=x0, w0=w0, d1=d1)
        return cls(*zeta, *eps, x0=x0, w0=w0, d=data["d"], d1=d1)


def _unit_freq_spread(zeta: float, eps: float) -> float:
    return zeta / 2.0 * (1.0 / (4.0 * math.pi**2 * zeta * zeta) + 1.0 / (eps * eps))


def chirp2d_frft_spread(p: GaussianChirp2D, alpha: AngleLike) -> float:
    """``cos^2 a Dx + sin^2 a Dw + (zeta1/eps1 - zeta2/eps2) sin a cos a``."""
    a = as_angle(alpha).alpha
    s, c = math.sin(a), math.cos(a)
    n = p.norm_sq
    sx = n * (p.zeta1 + p.zeta2) / 2.0
    sw = n * (_unit_freq_spread(p.zeta1, p.eps1) + _unit_freq_spread(p.zeta2, p.eps2))
    cross = n * (p.zeta1 / p.eps1 - p.zeta2 / p.eps2)
    return c * c * sx + s * s * sw + cross * s * c


def chirp2d_moments(p: GaussianChirp2D, alpha: Optional[AngleLike] = None) -> MomentReport:
    """Closed-form :class:`MomentReport`; FRFT fields filled when ``alpha`` given."""
    n = p.norm_sq
    a = u0 = su = None
    if alpha is not None:
        a = as_angle(alpha).alpha
        s, c = math.sin(a), math.cos(a)
        u0 = tuple(c * x + s * w for x, w in zip(p.x0, p.w0))
        su = chirp2d_frft_spread(p, a)
    return MomentReport(
        ndim=2,
        norm_sq=n,
        x0=p.x0,
        w0=p.w0,
        spread_x=n * (p.zeta1 + p.zeta2) / 2.0,
        spread_w=n * (_unit_freq_spread(p.zeta1, p.eps1) + _unit_freq_spread(p.zeta2, p.eps2)),
        cov=n * (p.zeta1 / (2.0 * p.eps1) - p.zeta2 / (2.0 * p.eps2)),
        abs_cov=n * (p.zeta1 / (2.0 * p.eps1) + p.zeta2 / (2.0 * p.eps2)),
        alpha=a,
        u0_alpha=u0,
        spread_u_alpha=su,
    )


@dataclass(frozen=True)
class ChirpProducts:
    xw: float
    xu: float
    uu: float


def chirp2d_products(p: GaussianChirp2D, alpha: AngleLike, beta: AngleLike) -> ChirpProducts:
    """The three spread products in expanded closed form.

    These expansions are algebraically equal to multiplying the individual
    spreads but are evaluated independently, so they serve as a check on
    :func:`chirp2d_moments` and :func:`chirp2d_frft_spread`.
    """
    a = as_angle(alpha).alpha
    b = as_angle(beta).alpha
    z1, z2, e1, e2 = p.zeta1, p.zeta2, p.eps1, p.eps2
    scale = p.norm_sq**2
    xw = (
        (1.0 / z1 + 1.0 / z2) * (z1 + z2) / (16.0 * math.pi**2)
        + z1 * z1 / (4.0 * e1 * e1)
        + z2 * z2 / (4.0 * e2 * e2)
        + (1.0 / (4.0 * e1 * e1) + 1.0 / (4.0 * e2 * e2)) * z1 * z2
    )
    half = (z1 + z2) / 2.0
    bracket_w = _unit_freq_spread(z1, e1) + _unit_freq_spread(z2, e2)
    cross = z1 / e1 - z2 / e2
    sa, ca = math.sin(a), math.cos(a)
    xu = half * half * ca * ca + half * bracket_w * sa * sa + half * cross * sa * ca
    cov = z1 / (2.0 * e1) - z2 / (2.0 * e2)
    inner = half * math.cos(a) * math.cos(b) + bracket_w * math.sin(a) * math.sin(b) + cov * math.sin(a + b)
    uu = (half * bracket_w - cov * cov) * math.sin(a - b) ** 2 + inner * inner
    return ChirpProducts(xw * scale, xu * scale, uu * scale)


class EtaClass(enum.Enum):
    """Sign rule for one dimension's chirp term."""

    PLUS = "+"
    MINUS = "-"
    SGN = "sgn"
    NEG_SGN = "-sgn"

    def sign_of(self, t: np.ndarray) -> np.ndarray:
        """``eta`` as a function of ``t = x - a`` (``t = 0`` counts as positive)."""
        pos = np.where(np.asarray(t) >= 0.0, 1.0, -1.0)
        if self is EtaClass.PLUS:
            return np.ones_like(pos)
        if self is EtaClass.MINUS:
            return -np.ones_like(pos)
        return pos if self is EtaClass.SGN else -pos

    @property
    def switches(self) -> bool:
        return self in (EtaClass.SGN, EtaClass.NEG_SGN)


def _pattern_key(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


@dataclass(frozen=True)
class ExtremalChirpND:
    """N-dimensional chirp with one global width/rate and per-dimension sign rule.

    ``phases`` maps sign patterns such as ``"+-"`` (the realised values of
    ``eta`` per dimension) to constant phase offsets.  An empty mapping means
    every offset is zero; a non-empty mapping must cover every pattern the
    sampler encounters.
    """

    a: tuple
    b: tuple
    zeta: float
    eps: float
    eta: tuple
    d: float = 0.0
    phases: Mapping = field(default_factory=dict)

    def __post_init__(self):
        eta = tuple(e if isinstance(e, EtaClass) else EtaClass(e) for e in self.eta)
        n = len(eta)
        if not 1 <= n <= MAX_DIM:
            raise ValueError(f"dimension must be between 1 and {MAX_DIM}, got {n}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "a", _vector("a", self.a, n))
        object.__setattr__(self, "b", _vector("b", self.b, n))
        object.__setattr__(self, "zeta", _positive("zeta", self.zeta))
        object.__setattr__(self, "eps", _positive("eps", self.eps))
        d = float(self.d)
        if not math.isfinite(d):
            raise ValueError("d must be finite")
        object.__setattr__(self, "d", d)
        phases = {}
        for key, val in dict(self.phases).items():
            if len(key) != n or set(key) - {"+", "-"}:
                raise ValueError(f"phase key {key!r} is not a sign pattern of length {n}")
            phases[key] = float(val)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def unit_norm(cls, a, b, zeta, eps, eta, phases=None) -> "ExtremalChirpND":
        """Choose ``d`` so that ``exp(2d) (pi zeta)^(N/2) = 1``."""
        n = len(tuple(eta))
        d = -0.25 * n * math.log(math.pi * _positive("zeta", zeta))
        return cls(a, b, zeta, eps, eta, d, phases or {})

    @property
    def ndim(self) -> int:
        return len(self.eta)

    @property
    def norm_sq(self) -> float:
        return math.exp(2.0 * self.d) * (math.pi * self.zeta) ** (self.ndim / 2.0)

    def realizable_patterns(self) -> tuple:
        """Every sign pattern ``eta`` can take over R^N."""
        choices = []
        for e in self.eta:
            if e is EtaClass.PLUS:
                choices.append((1,))
            elif e is EtaClass.MINUS:
                choices.append((-1,))
            else:
                choices.append((1, -1))
        return tuple(_pattern_key(c) for c in itertools.product(*choices))

    def sample(self, axes: Optional[Sequence[Axis]] = None) -> GridFunction:
        """Sample on ``axes`` (default 256 points per dimension on [-8, 8])."""
        if axes is None:
            axes = (Axis.symmetric(8.0, 256),) * self.ndim
        axes = tuple(axes)
        if len(axes) != self.ndim:
            raise ValueError(f"expected {self.ndim} axes, got {len(axes)}")
        n = self.ndim
        amp_exp = 0.0
        phase = 0.0
        signs = []
        for k, (ax, e) in enumerate(zip(axes, self.eta)):
            shape = [1] * n
            shape[k] = ax.count
            x = ax.coords.reshape(shape)
            t = x - self.a[k]
            sgn = e.sign_of(t)
            signs.append(sgn)
            amp_exp = amp_exp - t * t / (2.0 * self.zeta)
            phase = phase + sgn * t * t / (2.0 * self.eps) + self.b[k] * x
        offset = np.zeros(tuple(ax.count for ax in axes))
        if self.phases:
            codes = sum(((s > 0).astype(np.int64) << (n - 1 - k)) for k, s in enumerate(signs))
            codes = np.broadcast_to(codes, offset.shape)
            for code in np.unique(codes):
                key = "".join("+" if (int(code) >> (n - 1 - k)) & 1 else "-" for k in range(n))
                if key not in self.phases:
                    raise ValueError(f"no orthant phase given for realised sign pattern {key!r}")
                offset[codes == code] = self.phases[key]
        values = np.exp(amp_exp + self.d) * np.exp(1j * _TWO_PI * (phase + offset))
        return GridFunction(axes, values, {"family": "extremal_chirp_nd"})

    def to_dict(self) -> dict:
        return {
            "a": list(self.a),
            "b": list(self.b),
            "zeta": self.zeta,
            "eps": self.eps,
            "d": self.d,
            "eta": [e.value for e in self.eta],
            "phases": dict(sorted(self.phases.items())),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExtremalChirpND":
        eta = tuple(EtaClass(e) for e in data["eta"])
        phases = data.get("phases") or {}
        if data.get("d") is None:
            return cls.unit_norm(data["a"], data["b"], data["zeta"], data["eps"], eta, phases)
        return cls(data["a"], data["b"], data["zeta"], data["eps"], eta, data["d"], phases)


# E[s |s - E s|] / zeta for s = |t|, t ~ N(0, zeta / 2)
_HALF_NORMAL_ABS_DEV = 0.5 + 1.0 / math.pi - math.erf(1.0 / math.sqrt(math.pi))


def extremal_moments(p: ExtremalChirpND, alpha: Optional[AngleLike] = None) -> MomentReport:
    """Closed-form moments of ``p`` about its own energy centres.

    Dimensions with a switching sign rule shift the frequency centre by
    ``+-sqrt(zeta/pi)/eps``, which lowers their frequency spread and changes
    their covariance terms relative to ``(a, b)``.
    """
    n = p.norm_sq
    z, e = p.zeta, p.eps
    shift = math.sqrt(z / math.pi) / e
    w0 = []
    spread_w = 0.0
    cov = 0.0
    abs_cov = 0.0
    for k, cls in enumerate(p.eta):
        spread_w += _unit_freq_spread(z, e)
        if cls.switches:
            w0.append(p.b[k] + (shift if cls is EtaClass.SGN else -shift))
            spread_w -= z / (math.pi * e * e)
            abs_cov += z * _HALF_NORMAL_ABS_DEV / e
        else:
            w0.append(p.b[k])
            cov += z / (2.0 * e) * (1.0 if cls is EtaClass.PLUS else -1.0)
            abs_cov += z / (2.0 * e)
    w0 = tuple(w0)
    spread_x = n * p.ndim * z / 2.0
    report = dict(
        ndim=p.ndim,
        norm_sq=n,
        x0=p.a,
        w0=w0,
        spread_x=spread_x,
        spread_w=n * spread_w,
        cov=n * cov,
        abs_cov=n * abs_cov,
    )
    if alpha is not None:
        a = as_angle(alpha).alpha
        s, c = math.sin(a), math.cos(a)
        report.update(
            alpha=a,
            u0_alpha=tuple(c * x + s * w for x, w in zip(p.a, w0)),
            spread_u_alpha=c * c * spread_x + s * s * n * spread_w + 2.0 * s * c * n * cov,
        )
    return MomentReport(**report)


def extremal_functionals_about_centre(p: ExtremalChirpND) -> CentredFunctionals:
    """Closed-form spreads and covariances of ``p`` about ``(a, b)``.

    About these centres every dimension contributes ``zeta/(2 eps)`` to the
    absolute covariance regardless of its sign rule.
    """
    n = p.norm_sq
    z, e = p.zeta, p.eps
    cov = sum(
        0.0 if cls.switches else (1.0 if cls is EtaClass.PLUS else -1.0) * z / (2.0 * e) for cls in p.eta
    )
    return CentredFunctionals(
        a=p.a,
        b=p.b,
        norm_sq=n,
        spread_x=n * p.ndim * z / 2.0,
        spread_w=n * p.ndim * _unit_freq_spread(z, e),
        cov=n * cov,
        abs_cov=n * p.ndim * z / (2.0 * e),
    )


def chirp_from_dict(data: Mapping):
    """Build either chirp family from its JSON parameter mapping."""
    if "eta" in data or "a" in data:
        return ExtremalChirpND.from_dict(data)
    if "zeta" in data:
        return GaussianChirp2D.from_dict(data)
    raise DomainError("chirp specification needs either 'zeta' lists or 'a'/'b'/'eta' fields")
