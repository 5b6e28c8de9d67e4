"""Command-line interface for stokes-unfold.

Each subcommand computes one family of results, checks it against an
independent route, and writes a JSON or CSV report.

Usage:
    stokes-unfold stokes [--beta1 RE,IM] [--beta2 RE,IM] [--gamma1 RE,IM] [--gamma2 RE,IM]
    stokes-unfold series [--order K]
    stokes-unfold borel [--x RE,IM] [--theta RAD] [--eps-angle RAD]
    stokes-unfold unfold --sqrt-eps RE,IM
    stokes-unfold converge [--n-list 2,4,8]
    stokes-unfold classify [--alpha1 RE,IM] [--alpha2 RE,IM] [--reading alpha1_alpha2]
    stokes-unfold oracle-check [--grid N]
    stokes-unfold monodromy [--point L] [--compose LL]
    stokes-unfold --version

Common options: --sqrt-eps, --tol, --precision, --format {json,csv}, --out PATH,
--no-timestamp, --config PATH, --verbose. Negative complex values are passed
as --beta1=-1,0.

Exit codes: 0 when every check passes, 1 when a check misses its tolerance,
2 for usage, validation and library errors.

Example:
    # Stokes matrices at 0 and infinity
    $ stokes-unfold stokes --beta2 1 --gamma2 1

    # Convergence table as CSV
    $ stokes-unfold converge --beta2 2 --gamma2=-2 --format csv --out table.csv
"""

from __future__ import annotations

import argparse
import cmath
import logging
import math
import sys
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NoReturn

import numpy as np

from . import __version__
from .borel import jump_target, psi_sum, stokes_jump_origin
from .config import RunConfig, load_run_config
from .exceptions import ResonanceMismatchError, StokesUnfoldError
from .model import (
    char_exponents,
    heun_case_check,
    resonance_kinds,
    resonant_params,
)
from .oracle import (
    Loop,
    default_base,
    fundamental_frame,
    monodromy_ode,
    residue_contour_with_scale,
)
from .stokes import (
    a_k_recursion,
    bessel_sum_S,
    is_trivial_stokes,
    phi_coefficients,
    psi_coefficients,
    stokes_infinity,
    stokes_origin,
)
from .types import Frame, OutputFormat, Q41Reading, Resonance, ResonanceKind, SingularPoint
from .unfold import all_decompositions, d_coefficient, limit_experiment, residue_by_leibniz
from .utils import emit, render_csv, render_json, to_jsonable

logger = logging.getLogger(__name__)

ANTISYMMETRY_TOL = 1e-13
MONODROMY_TOL = 1e-6
ROUNDOFF_FLOOR = 1e-12


@dataclass
class CommandResult:
    """Report body, overall verdict and an optional CSV table."""

    body: dict[str, Any]
    passed: bool
    header: list[str] | None = None
    rows: list[list[Any]] | None = None


# ============================================================================
# Argument parsing
# ============================================================================


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    params = common.add_argument_group("equation parameters")
    for name in ("beta1", "beta2", "gamma1", "gamma2"):
        params.add_argument(f"--{name}", metavar="RE,IM", help=f"{name} as 're,im' or a real")
    params.add_argument("--sqrt-eps", dest="sqrt_eps", metavar="RE,IM", help="sqrt(eps)")

    run = common.add_argument_group("run options")
    run.add_argument("--config", type=Path, metavar="PATH", help="TOML run configuration")
    run.add_argument("--tol", type=float, help="Closed form vs oracle tolerance (default: 1e-8)")
    run.add_argument("--precision", type=int, metavar="DIGITS", help="mpmath working precision")
    run.add_argument("--format", choices=[f.value for f in OutputFormat], help="Output format")
    run.add_argument("--out", type=Path, metavar="PATH", help="Write the report to a file")
    run.add_argument(
        "--no-timestamp",
        dest="timestamp",
        action="store_const",
        const=False,
        default=None,
        help="Omit the generated_at stamp (JSON)",
    )
    run.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="stokes-unfold",
        description="Stokes matrices of a rank-1 system and their unfolding into monodromy",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    common = _common_parser()

    subparsers.add_parser(
        "stokes", parents=[common], help="Bessel sum S and both Stokes matrices"
    )

    series = subparsers.add_parser(
        "series", parents=[common], help="Formal series coefficients and the a_k recursion"
    )
    series.add_argument("--order", type=int, metavar="K", help="Number of coefficients")

    borel = subparsers.add_parser(
        "borel", parents=[common], help="Stokes jump by ray quadrature vs the residue formula"
    )
    borel.add_argument(
        "--x", metavar="RE,IM", help="Evaluation point (default 0.05 on the singular ray)"
    )
    borel.add_argument(
        "--theta", type=float, metavar="RAD", help="Also sum psi along this direction"
    )
    borel.add_argument("--eps-angle", dest="eps_angle", type=float, metavar="RAD")

    subparsers.add_parser(
        "unfold", parents=[common], help="Resonance type and monodromy decompositions"
    )

    converge = subparsers.add_parser(
        "converge", parents=[common], help="Limit of 2 pi i d along resonant eps_n -> 0"
    )
    converge.add_argument("--n-list", dest="n_list", metavar="N,N,...", help="n values")
    converge.add_argument("--threshold", type=float, help="Relative error bound (default: 0.05)")

    classify = subparsers.add_parser(
        "classify", parents=[common], help="Which points of the six-parameter family are singular"
    )
    classify.add_argument("--alpha1", metavar="RE,IM")
    classify.add_argument("--alpha2", metavar="RE,IM")
    classify.add_argument("--reading", choices=[r.value for r in Q41Reading])

    oracle = subparsers.add_parser(
        "oracle-check", parents=[common], help="Closed-form d vs contour residues over a grid"
    )
    oracle.add_argument("--grid", type=int, metavar="N", help="Largest n_beta and n_gamma")

    monodromy = subparsers.add_parser(
        "monodromy", parents=[common], help="Monodromy by ODE continuation vs the closed form"
    )
    point_choices = [pt.value for pt in SingularPoint]
    monodromy.add_argument("--point", choices=point_choices, help="Point to encircle (default L)")
    monodromy.add_argument(
        "--compose", choices=point_choices, help="Second point of a composed loop"
    )
    return parser


_OVERRIDE_KEYS = (
    "beta1", "beta2", "gamma1", "gamma2", "sqrt_eps", "tol", "precision", "format", "out",
    "timestamp", "order", "x", "theta", "eps_angle", "n_list", "threshold", "alpha1", "alpha2",
    "reading", "grid", "point", "compose",
)  # fmt: skip


def _load(args: argparse.Namespace) -> RunConfig:
    overrides = {key: getattr(args, key, None) for key in _OVERRIDE_KEYS}
    return load_run_config(args.config, overrides)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


# ============================================================================
# Entry point
# ============================================================================


def main() -> NoReturn:
    """Main entry point for CLI."""
    parser = build_parser()
    args = parser.parse_args()

    handler = COMMANDS.get(args.command or "")
    if handler is None:
        parser.print_help()
        sys.exit(0)

    _configure_logging(args.verbose)
    sys.exit(handler(args))


def _run(
    args: argparse.Namespace, command: str, build: Callable[[RunConfig], CommandResult]
) -> int:
    """Load the configuration, build the report, write it, map the verdict to an exit code."""
    try:
        cfg = _load(args)
        result = build(cfg)
        body = {"passed": result.passed, **result.body}
        if cfg.format is OutputFormat.CSV:
            if result.header is not None and result.rows is not None:
                content = render_csv(result.header, result.rows)
            else:
                content = render_csv(["key", "value"], _key_value_rows(body))
        else:
            content = render_json(command, body, cfg.timestamp)
        emit(content, cfg.out)
        if not result.passed:
            print(f"{_color('yellow', 'CHECK FAILED')}: {command}", file=sys.stderr)
        return 0 if result.passed else 1

    except StokesUnfoldError as e:
        print(f"{_color('red', 'ERROR')}: {e.message}", file=sys.stderr)
        if e.recovery_suggestion:
            print(f"Suggestion: {e.recovery_suggestion}", file=sys.stderr)
        return 2

    except Exception as e:
        print(f"{_color('red', 'ERROR')}: {e}", file=sys.stderr)
        if args.verbose:
            import traceback

            traceback.print_exc()
        return 2


def _key_value_rows(value: Any, prefix: str = "") -> list[list[Any]]:
    data = to_jsonable(value)
    if isinstance(data, dict):
        if set(data) == {"re", "im"}:
            return [[prefix, f"{data['re']},{data['im']}"]]
        rows: list[list[Any]] = []
        for key, item in data.items():
            rows += _key_value_rows(item, f"{prefix}.{key}" if prefix else key)
        return rows
    if isinstance(data, list):
        rows = []
        for i, item in enumerate(data):
            rows += _key_value_rows(item, f"{prefix}[{i}]")
        return rows
    return [[prefix, "" if data is None else data]]


def _color(color: str, text: str) -> str:
    """Apply ANSI color to text if stderr is a terminal."""
    if not sys.stderr.isatty():
        return text

    colors = {
        "red": "\033[91m",
        "green": "\033[92m",
        "yellow": "\033[93m",
    }
    reset = "\033[0m"
    return f"{colors.get(color, '')}{text}{reset}"


# ============================================================================
# Commands
# ============================================================================


def cmd_stokes(args: argparse.Namespace) -> int:
    """Bessel sum S, both Stokes matrices and the antisymmetry check.

    Returns:
        Exit code (0 for success, 1 for a failed check, 2 for errors)
    """

    def build(cfg: RunConfig) -> CommandResult:
        p = cfg.params()
        origin = stokes_origin(p)
        notes: list[str] = []
        if p.gammas_equal:
            infinity_entry: dict[str, Any] = {
                "theta": None,
                "theta_class": None,
                "mu": 0j,
                "matrix": np.eye(2, dtype=np.complex128),
            }
            residual = abs(origin.mu)
            notes.append(
                "gamma1 == gamma2: singular direction at infinity undefined, "
                "both Stokes matrices are the identity"
            )
        else:
            infinity = stokes_infinity(p)
            infinity_entry = {**infinity.to_dict(), "matrix": infinity.matrix}
            residual = abs(origin.mu + infinity.mu)
        trivial = is_trivial_stokes(p)
        if trivial:
            notes.append("trivial Stokes: S vanishes")
        body = {
            "params": p,
            "S": bessel_sum_S(p),
            "trivial": trivial,
            "origin": {**origin.to_dict(), "matrix": origin.matrix},
            "infinity": infinity_entry,
            "antisymmetry_residual": residual,
            "notes": notes,
        }
        return CommandResult(body, residual <= ANTISYMMETRY_TOL * max(1.0, abs(origin.mu)))

    return _run(args, "stokes", build)


def cmd_series(args: argparse.Namespace) -> int:
    """Coefficients of both formal series, the a_k recursion and the c_k identity."""

    def build(cfg: RunConfig) -> CommandResult:
        p = cfg.params()
        order = cfg.order
        psi = psi_coefficients(p, order)
        phi = None if p.gammas_equal else phi_coefficients(p, order)
        a, c = a_k_recursion(p, order)
        ratio = -p.delta_gamma / p.delta_beta

        rows: list[list[Any]] = []
        worst = 0.0
        for k in range(1, order + 1):
            expected = ratio * psi[k]
            size = max(abs(c[k]), abs(expected))
            err = abs(c[k] - expected) / size if size > 0 else 0.0
            worst = max(worst, err)
            rows.append([k, psi[k], phi[k] if phi is not None else "", c[k], err])

        body = {
            "params": p,
            "psi_hat": psi,
            "phi_hat": phi,
            "a_k": a,
            "c_k": c,
            "c_k_max_rel_err": worst,
            "radius_estimates": psi.ratio_radius_estimates(),
        }
        header = ["k", "psi_hat", "phi_hat", "c_k", "rel_err"]
        return CommandResult(body, worst <= cfg.tol, header, rows)

    return _run(args, "series", build)


def cmd_borel(args: argparse.Namespace) -> int:
    """Stokes jump at the origin: two-ray quadrature against the residue formula."""

    def build(cfg: RunConfig) -> CommandResult:
        p = cfg.params()
        report = stokes_jump_origin(
            p, x=cfg.x, eps_angle=cfg.eps_angle, tol=cfg.quad_tol, dps=cfg.precision
        )
        body: dict[str, Any] = {"params": p, "jump": report, "target": jump_target(p)}
        if cfg.theta is not None:
            body["psi_sum"] = psi_sum(p, cfg.theta, report.x, dps=cfg.precision)
        header = ["eps_angle", "rel_err"]
        rows = [[angle, err] for angle, err in report.sensitivity]
        return CommandResult(body, report.passes(cfg.quad_tol), header, rows)

    return _run(args, "borel", build)


def cmd_unfold(args: argparse.Namespace) -> int:
    """Resonance type and the monodromy decomposition at all four points."""

    def build(cfg: RunConfig) -> CommandResult:
        p, e = cfg.params(), cfg.epsilon()
        e.require_regular()
        kinds = resonance_kinds(p, e)
        if not kinds:
            raise ResonanceMismatchError(
                f"(p, sqrt_eps={e.sqrt_eps}) is not in double resonance",
                recovery_suggestion=(
                    "Use a real positive sqrt_eps with (beta2 - beta1)/(2 sqrt_eps) "
                    "a non-zero integer"
                ),
            )
        r = kinds[0]
        decomps = all_decompositions(p, e, r)

        leibniz_err = 0.0
        for point in r.log_points:
            closed = d_coefficient(p, e, r, point)
            other = residue_by_leibniz(p, e, point)
            err = abs(closed - other)
            leibniz_err = max(leibniz_err, err / abs(closed) if closed != 0 else err)
        commutator = max(dec.commutator_norm() for dec in decomps)
        det_err = max(abs(dec.determinant() - dec.expected_determinant()) for dec in decomps)

        body = {
            "params": p,
            "sqrt_eps": e.sqrt_eps,
            "resonance": r,
            "all_kinds": [k.kind.value for k in kinds],
            "decompositions": decomps,
            "commutator_norm": commutator,
            "determinant_err": det_err,
            "leibniz_rel_err": leibniz_err,
        }
        passed = commutator <= cfg.tol and det_err <= cfg.tol and leibniz_err <= cfg.tol
        return CommandResult(body, passed)

    return _run(args, "unfold", build)


def cmd_converge(args: argparse.Namespace) -> int:
    """Convergence table of 2 pi i d(eps_n) towards the Stokes multipliers."""

    def build(cfg: RunConfig) -> CommandResult:
        p = cfg.params()
        table = limit_experiment(p, None, cfg.n_list, cfg.threshold)
        header = ["n", "point", "sqrt_eps", "re_d", "im_d", "abs_err"]
        rows = [
            [row.n, row.point.value, row.sqrt_eps, row.d.real, row.d.imag, row.abs_err]
            for row in table.rows
        ]
        return CommandResult({"params": p, "table": table}, table.passes(), header, rows)

    return _run(args, "converge", build)


def cmd_classify(args: argparse.Namespace) -> int:
    """Which of the five candidate points of the six-parameter family are singular."""

    def build(cfg: RunConfig) -> CommandResult:
        g, e = cfg.general_params(), cfg.epsilon()
        report = heun_case_check(
            g.alpha1, g.alpha2, g.beta1, g.beta2, g.gamma1, g.gamma2, e, reading=cfg.reading
        )
        singular = [pt.label for pt in report.points if not pt.ordinary]
        if report.matched_case is not None:
            summary = f"case {report.matched_case.value}, singular: {{{', '.join(singular)}}}"
        else:
            summary = f"no case, {report.singular_count} singular points"
        body = {"params": g, "sqrt_eps": e.sqrt_eps, "summary": summary, "report": report}
        header = ["label", "t", "ordinary", "displayed_agrees"]
        rows = [[pt.label, pt.t, pt.ordinary, pt.displayed_agrees] for pt in report.points]
        return CommandResult(body, report.consistent, header, rows)

    return _run(args, "classify", build)


def cmd_oracle_check(args: argparse.Namespace) -> int:
    """Closed-form d against contour residues over all types and a (n_beta, n_gamma) grid."""

    def build(cfg: RunConfig) -> CommandResult:
        e = cfg.epsilon()
        header = ["kind", "n_beta", "n_gamma", "point", "closed", "contour", "rel_err", "passed"]
        rows: list[list[Any]] = []
        skipped = None
        if not e.is_real_positive():
            skipped = "eps is not on the positive real axis, no double resonance exists"
        elif abs(e.eps * e.eps - 1) <= 1e-12:
            skipped = "eps**2 == 1, the singular points collide"

        worst = 0.0
        all_ok = True
        if skipped is None:
            for kind in (ResonanceKind.A1, ResonanceKind.A2, ResonanceKind.A3, ResonanceKind.A4):
                for n_beta in range(1, cfg.grid + 1):
                    for n_gamma in range(0, cfg.grid + 1):
                        p = resonant_params(kind, n_beta, n_gamma, e)
                        r = Resonance(kind, n_beta, n_gamma)
                        for point in r.log_points:
                            closed = d_coefficient(p, e, r, point)
                            contour, scale = residue_contour_with_scale(p, e, point)
                            err = abs(closed - contour)
                            rel = err / abs(closed) if closed != 0 else err
                            ok = err <= cfg.tol * abs(closed) or err <= ROUNDOFF_FLOOR * scale
                            if closed != 0:
                                worst = max(worst, rel)
                            all_ok = all_ok and ok
                            rows.append(
                                [kind.value, n_beta, n_gamma, point.value, closed, contour, rel, ok]
                            )
            logger.info(f"oracle sweep: {len(rows)} rows, max rel err {worst:.3e}")

        body = {
            "sqrt_eps": e.sqrt_eps,
            "grid": cfg.grid,
            "skipped": skipped,
            "max_rel_err": worst,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        return CommandResult(body, all_ok, header, rows)

    return _run(args, "oracle-check", build)


def cmd_monodromy(args: argparse.Namespace) -> int:
    """Monodromy by ODE continuation around one (or two composed) singular points."""

    def build(cfg: RunConfig) -> CommandResult:
        p, e = cfg.params(), cfg.epsilon()
        e.require_regular()
        base = default_base(e)
        frame = fundamental_frame(p, e, base, Frame.ORIGIN)
        loop = Loop.around(cfg.point, e, base)
        numeric = monodromy_ode(p, e, loop, frame)
        scale = max(1.0, float(np.linalg.norm(numeric)))

        rho1, rho2 = char_exponents(p, e).rho[cfg.point]
        lam1 = cmath.exp(2j * math.pi * rho1)
        lam2 = cmath.exp(2j * math.pi * (rho2 - 1))
        checks: dict[str, float] = {
            "first_column_eigenvector": abs(numeric[1, 0]) + abs(numeric[0, 0] - lam1),
            "second_eigenvalue": abs(numeric[1, 1] - lam2),
        }
        empty = monodromy_ode(p, e, Loop.empty(base, e), frame)
        checks["empty_loop"] = float(np.linalg.norm(empty - np.eye(2)))

        body: dict[str, Any] = {
            "params": p,
            "sqrt_eps": e.sqrt_eps,
            "base": base,
            "point": cfg.point,
            "numeric": numeric,
        }
        kinds = resonance_kinds(p, e)
        if kinds:
            decomp = next(d for d in all_decompositions(p, e, kinds[0]) if d.point == cfg.point)
            body["resonance"] = kinds[0]
            body["closed_form"] = decomp.M
            checks["closed_form"] = float(np.max(np.abs(numeric - decomp.M)))

        if cfg.compose is not None:
            second = Loop.around(cfg.compose, e, base)
            m2 = monodromy_ode(p, e, second, frame)
            composed = monodromy_ode(p, e, loop.compose(second, e), frame)
            body["composed"] = composed
            checks["composition"] = float(np.max(np.abs(composed - m2 @ numeric)))

        body["checks"] = checks
        passed = all(value <= MONODROMY_TOL * scale for value in checks.values())
        return CommandResult(body, passed)

    return _run(args, "monodromy", build)


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "stokes": cmd_stokes,
    "series": cmd_series,
    "borel": cmd_borel,
    "unfold": cmd_unfold,
    "converge": cmd_converge,
    "classify": cmd_classify,
    "oracle-check": cmd_oracle_check,
    "monodromy": cmd_monodromy,
}
