"""Command-line front end.

Subcommands::

    frft       --alpha A --in F [--out G]
    moments    --in F [--alpha A]
    bounds     --in F --angles "a1,b1;a2,b2"
    reproduce  --case paper-2d-a|paper-2d-b
    optics     --variant fresnel|lens --s S --d D [--z Z] --chirp SPEC

``--in`` accepts a grid file (JSON or binary) or a chirp parameter file;
``--chirp`` accepts inline chirp JSON or a path.  Chirps are sampled on
``--points`` samples per dimension over ``[-half_width, half_width]``.
Angles may be written as arithmetic in ``pi`` (``2*pi/3``).

Every flag may also be supplied by ``--config FILE`` (a JSON object keyed by
flag name without dashes); flags given on the command line take precedence.

Exit codes: 0 success, 1 usage or I/O error, 2 bound violation flagged.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bounds as bnd
from .chirp import GaussianChirp2D, chirp2d_moments, chirp2d_products, chirp_from_dict, extremal_moments
from .errors import DomainError, GridDataError, NumericalError
from .grid import Axis, grid_from_dict, grid_to_dict, load_grid, save_grid
from .moments import moment_report
from .optics import OpticalSetup, optical_spread_floor
from .transforms import frft_nd

__all__ = ["main", "build_parser", "parse_angle", "format_json", "CASES"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2

SIG_DIGITS = 15

CASES = {
    "paper-2d-a": dict(zeta=(1.0, 0.5), eps=(2.0, 1.0)),
    "paper-2d-b": dict(zeta=(1.0, 1.0), eps=(2.0, 2.0)),
}
CASE_ANGLES = (2.0 * math.pi / 3.0, math.pi / 6.0)

# analytic products that coincide with their bound to this precision are flagged
EQUALITY_TOL = 1e-12


class UsageError(ValueError):
    """Bad arguments or unreadable input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval_node(node.operand))
    raise ValueError("only numbers, 'pi' and + - * / ** are allowed")


def parse_angle(text) -> float:
    """Parse a number or an arithmetic expression in ``pi``."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        value = _eval_node(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse angle {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise UsageError(f"angle {text!r} is not finite")
    return value


def parse_angle_pairs(spec) -> list:
    """``"a1,b1;a2,b2"`` or a list of pairs into ``[(a1, b1), ...]``."""
    if isinstance(spec, str):
        chunks = [c for c in spec.split(";") if c.strip()]
        pairs = [c.split(",") for c in chunks]
    else:
        pairs = list(spec)
    out = []
    for p in pairs:
        if len(p) != 2:
            raise UsageError(f"angle pair {p!r} must have exactly two entries")
        out.append((parse_angle(p[0]), parse_angle(p[1])))
    if not out:
        raise UsageError("no angle pairs given")
    return out


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def format_json(obj) -> str:
    """Deterministic JSON: insertion order kept, floats at 15 significant digits."""
    return json.dumps(_round(obj), indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    return f"{x:.{SIG_DIGITS}g}" if isinstance(x, float) else str(x)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _grid_axes(args) -> Axis:
    if not args.half_width > 0:
        raise UsageError("--half-width must be positive")
    if args.points < 16:
        raise UsageError("--points must be at least 16")
    return Axis.symmetric(float(args.half_width), int(args.points))


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _chirp_spec(value):
    """Chirp mapping from a dict, inline JSON text or a path."""
    if isinstance(value, dict):
        return value
    text = str(value).strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid inline chirp JSON ({exc})") from None
    return _read_json(text)


def _sample_chirp(spec: dict, args) -> tuple:
    try:
        chirp = chirp_from_dict(spec)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"incomplete chirp specification: missing {exc}") from None
    axis = _grid_axes(args)
    ndim = 2 if isinstance(chirp, GaussianChirp2D) else chirp.ndim
    return chirp, chirp.sample((axis,) * ndim)


def _load_function(args) -> tuple:
    """``(label, GridFunction, chirp_or_None)`` from ``--in`` or ``--chirp``."""
    chirp_arg = getattr(args, "chirp", None)
    if chirp_arg is not None:
        chirp, f = _sample_chirp(_chirp_spec(chirp_arg), args)
        return "chirp", f, chirp
    path = getattr(args, "input", None)
    if path is None:
        raise UsageError("an input is required (--in or --chirp)")
    p = Path(path)
    if not p.exists():
        raise UsageError(f"cannot read {path}: no such file")
    if p.suffix.lower() == ".json":
        data = _read_json(path)
        if isinstance(data, dict) and "axes" in data:
            return str(p), grid_from_dict(data), None
        if isinstance(data, dict):
            chirp, f = _sample_chirp(data, args)
            return str(p), f, chirp
        raise UsageError(f"{path}: expected a JSON object")
    try:
        return str(p), load_grid(p), None
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _emit(text: str, args) -> None:
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    else:
        sys.stdout.write(text)


def cmd_frft(args) -> int:
    if args.alpha is None:
        raise UsageError("--alpha is required")
    label, f, _ = _load_function(args)
    alpha = parse_angle(args.alpha)
    g = frft_nd(f, alpha)
    summary = {
        "input": label,
        "alpha": alpha,
        "angle_kind": g.meta["angle_kind"],
        "snapped": g.meta["snapped"],
        "shape": list(g.shape),
        "norm_sq_in": float((abs(f.values) ** 2).sum() * f.cell_volume),
        "norm_sq_out": float((abs(g.values) ** 2).sum() * g.cell_volume),
        "out": args.out,
    }
    if args.out:
        try:
            save_grid(g, args.out)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from None
        sys.stdout.write(format_json(summary))
    else:
        from .grid import grid_to_dict

        sys.stdout.write(format_json(grid_to_dict(g)))
    return EXIT_OK


def cmd_moments(args) -> int:
    _, f, _ = _load_function(args)
    alpha = None if args.alpha is None else parse_angle(args.alpha)
    rep = moment_report(f, alpha).to_dict()
    if args.format == "csv":
        rows = []
        for key, val in rep.items():
            if isinstance(val, list) and key != "warnings":
                rows.extend((f"{key}[{i}]", v) for i, v in enumerate(val))
            elif key == "warnings":
                rows.extend(("warning", w) for w in val)
            else:
                rows.append((key, "" if val is None else val))
        _emit(_csv(("field", "value"), rows), args)
    else:
        _emit(format_json(rep), args)
    return EXIT_OK


def cmd_bounds(args) -> int:
    label, f, _ = _load_function(args)
    if args.angles is None:
        raise UsageError("--angles is required")
    pairs = parse_angle_pairs(args.angles)
    reports = bnd.verify(f, pairs, label=label)
    if args.format == "csv":
        _emit(bnd.reports_to_csv(reports, fmt=_fmt), args)
    else:
        _emit(format_json([r.to_dict() for r in reports]), args)
    return EXIT_VIOLATION if any(r.violations for r in reports) else EXIT_OK


def reproduce_rows(case: Optional[str], axis: Axis) -> tuple:
    """``(rows, warnings)``: analytic and quadrature values of every reported
    quantity for ``case``, plus the quadrature report's accuracy warnings."""
    if case not in CASES:
        raise UsageError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    p = GaussianChirp2D.unit_norm(*CASES[case]["zeta"], *CASES[case]["eps"])
    alpha, beta = CASE_ANGLES
    exact = bnd.bound_report(chirp2d_moments(p), alpha, beta)
    products = chirp2d_products(p, alpha, beta)
    measured = bnd.verify(p.sample((axis, axis)), [(alpha, beta)])[0]

    def pick(rep, name):
        e = rep.entry(name)
        return e.product, e.value

    rows = []
    spec = (
        ("xw", "ft_sharper", "product", products.xw),
        ("ft_sharper", "ft_sharper", "bound", None),
        ("ft_classical", "ft_classical", "bound", None),
        ("xu_alpha", "frft_sharper_alpha", "product", products.xu),
        ("frft_sharper_alpha", "frft_sharper_alpha", "bound", None),
        ("frft_classical_alpha", "frft_classical_alpha", "bound", None),
        ("uu", "two_frft_main", "product", products.uu),
        ("two_frft_main", "two_frft_main", "bound", None),
        ("two_frft_zhang", "two_frft_zhang", "bound", None),
    )
    for quantity, entry, kind, closed in spec:
        a_prod, a_bound = pick(exact, entry)
        q_prod, q_bound = pick(measured, entry)
        analytic = closed if kind == "product" else a_bound
        quadrature = q_prod if kind == "product" else q_bound
        equal = kind == "product" and abs(analytic - a_bound) <= EQUALITY_TOL
        rows.append(
            {
                "quantity": quantity,
                "analytic": analytic,
                "quadrature": quadrature,
                "abs_diff": abs(analytic - quadrature),
                "equality": equal,
            }
        )
    return rows, measured.warnings


def cmd_reproduce(args) -> int:
    rows, warnings = reproduce_rows(args.case, _grid_axes(args))
    if args.format == "csv":
        header = ("quantity", "analytic", "quadrature", "abs_diff", "equality")
        _emit(_csv(header, ([r[h] for h in header] for r in rows)), args)
    else:
        out = {
            "case": args.case,
            "alpha": CASE_ANGLES[0],
            "beta": CASE_ANGLES[1],
            "grid": {"half_width": float(args.half_width), "points": int(args.points)},
            "rows": rows,
            "warnings": list(warnings),
        }
        _emit(format_json(out), args)
    return EXIT_OK


def cmd_optics(args) -> int:
    if args.variant is None or args.s is None or args.d is None:
        raise UsageError("--variant, --s and --d are required")
    if args.chirp is None:
        raise UsageError("--chirp is required")
    s, d = float(args.s), float(args.d)
    if args.variant == "fresnel":
        if args.z is not None:
            raise UsageError("--z only applies to the lens variant")
        setup = OpticalSetup.fresnel(s, d)
    else:
        setup = OpticalSetup.lens(s, d, None if args.z is None else float(args.z))
    chirp = chirp_from_dict(_chirp_spec(args.chirp))
    if isinstance(chirp, GaussianChirp2D):
        report = chirp2d_moments(chirp, setup.alpha)
    else:
        report = extremal_moments(chirp, setup.alpha)
    out = {
        "setup": setup.to_dict(),
        "alpha": setup.alpha,
        "floor": optical_spread_floor(setup, report),
        "report": report.to_dict(),
    }
    _emit(format_json(out), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file supplying defaults for any flag")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--half-width", type=float, default=8.0, help="grid half-width for sampled chirps")
    common.add_argument("--points", type=int, default=256, help="samples per dimension for sampled chirps")

    parser = _Parser(prog="frft-uncertainty", description="FRFT uncertainty-principle toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("frft", parents=[common], help="transform a grid function")
    p.add_argument("--alpha")
    p.add_argument("--in", dest="input")
    p.add_argument("--chirp")
    p.set_defaults(func=cmd_frft)

    p = sub.add_parser("moments", parents=[common], help="moment report of a function")
    p.add_argument("--in", dest="input")
    p.add_argument("--chirp")
    p.add_argument("--alpha")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("bounds", parents=[common], help="check every bound at angle pairs")
    p.add_argument("--in", dest="input")
    p.add_argument("--chirp")
    p.add_argument("--angles", help='pairs as "a1,b1;a2,b2"')
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("reproduce", parents=[common], help="closed-form vs quadrature table")
    p.add_argument("--case", choices=tuple(CASES))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("optics", parents=[common], help="optical spread floor")
    p.add_argument("--variant", choices=("fresnel", "lens"))
    p.add_argument("--s", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--chirp")
    p.set_defaults(func=cmd_optics)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = _read_json(args.config)
    if not isinstance(cfg, dict):
        raise UsageError(f"{args.config}: config must be a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = {"in": "input", "half-width": "half_width"}.get(key, key.replace("-", "_"))
        if dest in ("command", "func", "config") or dest not in known:
            raise UsageError(f"{args.config}: unknown option {key!r} for '{args.command}'")
        action = known[dest]
        if action.type is not None and value is not None and not isinstance(value, (dict, list)):
            try:
                value = action.type(value)
            except (TypeError, ValueError):
                raise UsageError(f"{args.config}: bad value for {key!r}: {value!r}") from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"{args.config}: {key!r} must be one of {list(action.choices)}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        sys.stderr.write(f"frft-uncertainty: error: {exc}\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except (DomainError, GridDataError, NumericalError, ValueError, OSError) as exc:
        sys.stderr.write(f"frft-uncertainty: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
