"""Uncertainty lower bounds and their evaluation against sampled functions.

With ``C = N^2 / (16 pi^2) * ||f||^4`` and the spreads/covariances of a
:class:`~frft_uncertainty.moments.MomentReport`:

====================  ==========================================================
``ft_classical``      ``C``
``ft_sharper``        ``C + COV^2``
``frft_sharper``      ``(C + COV^2 - Cov^2) sin^2 a + (cos a Dx + sin a Cov)^2``
``frft_classical``    ``C sin^2 a``
``two_frft_main``     ``(C + COV^2 - Cov^2) sin^2(a-b)``
                      ``+ (cos a cos b Dx + sin a sin b Dw + sin(a+b) Cov)^2``
``two_frft_real_fn``  ``two_frft_main`` with ``Cov = 0`` (``COV`` kept)
``two_frft_zhang``    ``C sin^2(a-b) + (cos a cos b Dx + sin a sin b Dw)^2``
====================  ==========================================================

``Dx``, ``Dw`` are the time and frequency spreads.  The time-frequency
product is bounded by the ``ft_*`` entries, ``Dx * Du_a`` by the
``frft_*`` entries and ``Du_a * Du_b`` by the ``two_frft_*`` entries.
``two_frft_real`` and ``two_frft_zhang`` drop the ``Cov`` terms and are
bounds only when ``Cov = 0``; reports mark them invalid otherwise.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from .grid import Axis, GridFunction, tail_mass
from .moments import TAIL_WARN, UNDERSAMPLED_WARNING, CentredFunctionals, MomentReport, moment_report
from .transforms import AngleLike, as_angle, frft_nd

__all__ = [
    "TOL_BOUND",
    "FORMULAS",
    "BoundEntry",
    "BoundReport",
    "SingleFrftBounds",
    "TwoFrftBounds",
    "classical_constant",
    "bound_ft_classical",
    "bound_ft_sharper",
    "bound_frft_single",
    "bound_two_frft",
    "bound_ft_about",
    "frft_spread_from_moments",
    "product_identity_check",
    "bound_report",
    "verify",
    "reports_to_csv",
]

TOL_BOUND = 1e-3

FORMULAS = {
    "ft_classical": "N^2/(16 pi^2) ||f||^4",
    "ft_sharper": "C + COV^2",
    "frft_sharper": "(C + COV^2 - Cov^2) sin^2(a) + (cos(a) Dx + sin(a) Cov)^2",
    "frft_classical": "C sin^2(a)",
    "two_frft_main": "(C + COV^2 - Cov^2) sin^2(a-b) + (cos(a)cos(b) Dx + sin(a)sin(b) Dw + sin(a+b) Cov)^2",
    "two_frft_real_fn": "(C + COV^2) sin^2(a-b) + (cos(a)cos(b) Dx + sin(a)sin(b) Dw)^2",
    "two_frft_zhang": "C sin^2(a-b) + (cos(a)cos(b) Dx + sin(a)sin(b) Dw)^2",
}


class SingleFrftBounds(NamedTuple):
    sharper: float
    classical: float


class TwoFrftBounds(NamedTuple):
    main: float
    real_fn: float
    zhang: float


def classical_constant(ndim: int, norm_sq: float) -> float:
    """``N^2 / (16 pi^2) * ||f||^4``."""
    return ndim * ndim / (16.0 * math.pi**2) * norm_sq * norm_sq


def _c(report: MomentReport) -> float:
    if not report.norm_sq > 0:
        raise ValueError("norm_sq must be positive")
    return classical_constant(report.ndim, report.norm_sq)


def bound_ft_classical(report: MomentReport) -> float:
    return _c(report)


def bound_ft_sharper(report: MomentReport) -> float:
    return _c(report) + report.abs_cov**2


def _two(c: float, big: float, cov: float, sx: float, sw: float, a: float, b: float) -> float:
    # one expression shared by every two-angle bound so that b = 0 and the
    # swap (a, b) -> (b, a) reproduce the single-angle value bit for bit
    s = math.sin(a - b)
    bracket = math.cos(a) * math.cos(b) * sx + math.sin(a) * math.sin(b) * sw + math.sin(a + b) * cov
    return (c + big) * (s * s) + bracket * bracket


def bound_frft_single(report: MomentReport, alpha: AngleLike) -> SingleFrftBounds:
    a = as_angle(alpha).alpha
    c = _c(report)
    s = math.sin(a)
    sharper = _two(c, report.abs_cov**2 - report.cov**2, report.cov, report.spread_x, report.spread_w, a, 0.0)
    return SingleFrftBounds(sharper, c * (s * s))


def bound_two_frft(report: MomentReport, alpha: AngleLike, beta: AngleLike) -> TwoFrftBounds:
    a = as_angle(alpha).alpha
    b = as_angle(beta).alpha
    c = _c(report)
    sx, sw, cov, big = report.spread_x, report.spread_w, report.cov, report.abs_cov**2
    return TwoFrftBounds(
        main=_two(c, big - cov**2, cov, sx, sw, a, b),
        real_fn=_two(c, big, 0.0, sx, sw, a, b),
        zhang=_two(c, 0.0, 0.0, sx, sw, a, b),
    )


def bound_ft_about(centred: CentredFunctionals, ndim: int) -> tuple:
    """``(product, bound)`` for spreads taken about arbitrary centres.

    ``product = int ||x-a||^2 |f|^2 * int ||w-b||^2 |Ff|^2`` and
    ``bound = C + COV_{a,b}^2``.
    """
    product = centred.spread_x * centred.spread_w
    return product, classical_constant(ndim, centred.norm_sq) + centred.abs_cov**2


def frft_spread_from_moments(report: MomentReport, alpha: AngleLike) -> float:
    """``cos^2 a Dx + sin^2 a Dw + 2 sin a cos a Cov``."""
    a = as_angle(alpha).alpha
    s, c = math.sin(a), math.cos(a)
    return c * c * report.spread_x + s * s * report.spread_w + 2.0 * s * c * report.cov


def product_identity_check(report: MomentReport, alpha: AngleLike, beta: AngleLike) -> float:
    """``Du_a * Du_b`` minus its expansion in ``Dx, Dw, Cov``.

    Both sides are computed from the report; the result vanishes up to
    roundoff for any moments.
    """
    a = as_angle(alpha).alpha
    b = as_angle(beta).alpha
    lhs = frft_spread_from_moments(report, a) * frft_spread_from_moments(report, b)
    sx, sw, cov = report.spread_x, report.spread_w, report.cov
    bracket = math.cos(a) * math.cos(b) * sx + math.sin(a) * math.sin(b) * sw + math.sin(a + b) * cov
    rhs = (sx * sw - cov * cov) * math.sin(a - b) ** 2 + bracket * bracket
    return lhs - rhs


@dataclass(frozen=True)
class BoundEntry:
    """One bound compared with the product it constrains."""

    name: str
    eq: str
    product_name: str
    product: float
    value: float
    valid: bool = True

    @property
    def slack(self) -> float:
        return self.product - self.value

    def violated(self, tol: float = TOL_BOUND) -> bool:
        return self.valid and self.slack < -tol * abs(self.product)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "eq": self.eq,
            "product_name": self.product_name,
            "product": self.product,
            "value": self.value,
            "slack": self.slack,
            "valid": self.valid,
        }


@dataclass(frozen=True)
class BoundReport:
    """Every bound for one angle pair.

    ``product`` is ``Du_a * Du_b``; each entry also carries its own product
    so the time-frequency and single-angle families can be checked from the
    same report.
    """

    product: float
    angles: tuple
    bounds: tuple
    source: MomentReport
    spread_u: tuple
    tol: float = TOL_BOUND
    label: str = ""
    warnings: tuple = field(default=())

    def entry(self, name: str) -> BoundEntry:
        for e in self.bounds:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def violations(self) -> tuple:
        return tuple(e for e in self.bounds if e.violated(self.tol))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "product": self.product,
            "angles": list(self.angles),
            "spread_u": list(self.spread_u),
            "bounds": [e.to_dict() for e in self.bounds],
            "violation": bool(self.violations),
            "warnings": list(self.warnings),
            "source": self.source.to_dict(),
        }


def bound_report(
    report: MomentReport,
    alpha: AngleLike,
    beta: AngleLike,
    *,
    spread_u: Optional[Sequence[float]] = None,
    tol: float = TOL_BOUND,
    label: str = "",
    warnings: Iterable[str] = (),
) -> BoundReport:
    """Evaluate all bound families for ``(alpha, beta)``.

    ``spread_u`` supplies measured FRFT spreads at ``alpha`` and ``beta``;
    when omitted they are derived from the report's time/frequency moments,
    which is exact for closed-form inputs.
    """
    a = as_angle(alpha).alpha
    b = as_angle(beta).alpha
    if spread_u is None:
        su_a, su_b = frft_spread_from_moments(report, a), frft_spread_from_moments(report, b)
    else:
        su_a, su_b = (float(v) for v in spread_u)
    sx, sw = report.spread_x, report.spread_w
    xw, xa, xb, uu = sx * sw, sx * su_a, sx * su_b, su_a * su_b
    single_a = bound_frft_single(report, a)
    single_b = bound_frft_single(report, b)
    two = bound_two_frft(report, a, b)
    scale = math.sqrt(max(sx * sw, 0.0))
    # both cov-free two-angle forms are bounds only when Cov vanishes
    real_valid = abs(report.cov) <= tol * scale

    entries = (
        BoundEntry("ft_classical", FORMULAS["ft_classical"], "xw", xw, bound_ft_classical(report)),
        BoundEntry("ft_sharper", FORMULAS["ft_sharper"], "xw", xw, bound_ft_sharper(report)),
        BoundEntry("frft_sharper_alpha", FORMULAS["frft_sharper"], "xu_alpha", xa, single_a.sharper),
        BoundEntry("frft_classical_alpha", FORMULAS["frft_classical"], "xu_alpha", xa, single_a.classical),
        BoundEntry("frft_sharper_beta", FORMULAS["frft_sharper"], "xu_beta", xb, single_b.sharper),
        BoundEntry("frft_classical_beta", FORMULAS["frft_classical"], "xu_beta", xb, single_b.classical),
        BoundEntry("two_frft_main", FORMULAS["two_frft_main"], "uu", uu, two.main),
        BoundEntry("two_frft_real_fn", FORMULAS["two_frft_real_fn"], "uu", uu, two.real_fn, real_valid),
        BoundEntry("two_frft_zhang", FORMULAS["two_frft_zhang"], "uu", uu, two.zhang, real_valid),
    )
    warns = list(dict.fromkeys(list(report.warnings) + list(warnings)))
    if not real_valid:
        warns.append("two_frft_real_fn and two_frft_zhang are only bounds when Cov = 0; marked invalid")
    out = BoundReport(uu, (a, b), entries, report, (su_a, su_b), tol, label, ())
    for e in out.violations:
        warns.append(
            f"{e.name}: slack {e.slack:.3e} below -{tol:g}*product; "
            "the inequality holds on R^N, so this indicates discretisation or truncation error"
        )
    return BoundReport(uu, (a, b), entries, report, (su_a, su_b), tol, label, tuple(warns))


def verify(
    f: GridFunction,
    angles: Sequence[Sequence[float]],
    *,
    tol: float = TOL_BOUND,
    freq_axes: Optional[Sequence[Axis]] = None,
    frft_axes: Optional[Sequence[Axis]] = None,
    label: str = "",
) -> list:
    """Measure ``f`` and return one :class:`BoundReport` per ``(alpha, beta)``.

    FRFT spreads are measured by transforming ``f``; each distinct angle is
    transformed once.
    """
    report = moment_report(f, freq_axes=freq_axes)
    n = report.norm_sq
    cache = {}

    def measured(alpha: float):
        if alpha not in cache:
            g = frft_nd(f, alpha, frft_axes)
            dens = g.density()
            w = g.cell_volume
            centre = [float((g.coord(k) * dens).sum() * w / n) for k in range(g.ndim)]
            r2 = sum((g.coord(k) - c) ** 2 for k, c in enumerate(centre))
            spread = float((r2 * dens).sum() * w)
            warn = []
            tm = tail_mass(g)
            if tm > TAIL_WARN:
                warn.append(f"FRFT-domain tail mass {tm:.3g} exceeds {TAIL_WARN:g} at alpha={alpha:.6g}")
            cache[alpha] = (spread, warn)
        return cache[alpha]

    if frft_axes is None and any(a.undersampled() for a in f.axes):
        cache_warn = [UNDERSAMPLED_WARNING]
    else:
        cache_warn = []
    out = []
    for pair in angles:
        if len(pair) != 2:
            raise ValueError("each angle entry must be an (alpha, beta) pair")
        a, b = (as_angle(v).alpha for v in pair)
        su_a, wa = measured(a)
        su_b, wb = measured(b)
        warns = list(dict.fromkeys(cache_warn + wa + wb))
        out.append(bound_report(report, a, b, spread_u=(su_a, su_b), tol=tol, label=label, warnings=warns))
    return out


_CSV_FIELDS = ("function", "alpha", "beta", "bound", "eq", "product_name", "product", "value", "slack", "valid")


def reports_to_csv(reports: Iterable[BoundReport], fmt=repr) -> str:
    """One CSV row per (function, alpha, beta, bound)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_CSV_FIELDS)
    for r in reports:
        a, b = r.angles
        for e in r.bounds:
            w.writerow([r.label, fmt(a), fmt(b), e.name, e.eq, e.product_name,
                        fmt(e.product), fmt(e.value), fmt(e.slack), str(e.valid).lower()])
    return buf.getvalue()
