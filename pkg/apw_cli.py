"""Command-line front end for apwlab.

Usage examples:
  - Validate a spec, write its canonical form and print the norm breakdown:
      python apw_cli.py build specs/volterra.json

  - Invert with the method picked from q = ||N|| / |lam|:
      python apw_cli.py invert specs/volterra.json --method auto --tol 1e-8 --out-dir out/

  - Check invertibility evidence over the xi grid:
      python apw_cli.py certify specs/singular.json --window 2

  - Re-check an inverse written by a previous run:
      python apw_cli.py verify specs/volterra.json out/inverse.json

Exit codes: 0 success, 1 usage or parse error, 2 evidence-singular operator,
3 tolerance failure (residuals, window stability, term budget).

Environment variables (optional):
  - APW_THREADS   worker cap for fiber sweeps (default: CPU count)
  - APW_SEED      default seed for random test signals
  - APW_LOG_LEVEL / APW_DEBUG / APW_LOG_FILE   logging controls
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from apwlab import settings
from apwlab.algebra import apply as apply_operator
from apwlab.algebra import apw_norm, compose
from apwlab.errors import (
    ApwError,
    BudgetError,
    NotApplicableError,
    SingularFiberError,
    SpecParseError,
    SpecValidationError,
    WindowTooSmallError,
)
from apwlab.grid import Grid, SampledFunction
from apwlab.invert import (
    FiberConfig,
    VerifyTolerances,
    certify_invertibility,
    extract_coefficient_bohr,
    invert,
    torus_inverse_fibers,
    verify_inverse,
)
from apwlab.logs import attach_file, get_logger
from apwlab.reports import (
    CERTIFICATE_TXT,
    METADATA_JSON,
    RESIDUAL_CSV,
    ReportBundle,
    signal_frame,
    write_frame,
    write_metadata,
    write_text,
)
from apwlab.signals import bump_signal
from apwlab.specfile import OperatorSpec, read_spec, write_spec

logger = get_logger("apwlab.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SINGULAR = 2
EXIT_TOLERANCE = 3

DEFAULT_OUT_DIR = "apw_out"
# largest label window the Bohr cross-check solves on every torus point
BOHR_MAX_LABELS = 121


def _print_json(payload: Any, stream=None) -> None:
    print(json.dumps(payload, indent=2, default=str), file=stream or sys.stdout)


def _fiber_config(args: argparse.Namespace, spec: OperatorSpec) -> FiberConfig:
    """File overrides first, then command-line flags."""
    values: Dict[str, Any] = dict(spec.fiber)
    flags = {
        "window_radius": getattr(args, "window", None),
        "xi_count": getattr(args, "xi_count", None),
        "torus_n": getattr(args, "torus_n", None),
        "pad": getattr(args, "pad", None),
        "max_window_radius": getattr(args, "max_window", None),
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    return FiberConfig(**values)


def _config_dict(config: FiberConfig) -> Dict[str, Any]:
    return {k: getattr(config, k) for k in config.__dataclass_fields__}


def _seed(args: argparse.Namespace) -> int:
    return settings.default_seed() if args.seed is None else args.seed


# ---- commands ----

def cmd_build(args: argparse.Namespace) -> int:
    spec = read_spec(args.spec)
    out = Path(args.out) if args.out else Path(args.out_dir) / "operator.json"
    write_spec(spec.operator, out, spec.fiber)
    _print_json({"written": str(out), "apw_norm": apw_norm(spec.operator).as_rows()})
    return EXIT_OK


def cmd_compose(args: argparse.Namespace) -> int:
    a = read_spec(args.a)
    b = read_spec(args.b)
    product = compose(a.operator, b.operator)
    write_spec(product, args.out)
    _print_json({"written": args.out, "labels": [lbl.text() for lbl in product.terms], "apw_norm": apw_norm(product).total})
    return EXIT_OK


def _load_signal(path: str, op_spec: OperatorSpec) -> SampledFunction:
    op = op_spec.operator
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, line=exc.lineno) from exc
    kind = doc.get("kind")
    if kind == "bump":
        center = np.atleast_1d(np.asarray(doc.get("center", [0.0] * op.c), dtype=float))
        radius = float(doc.get("radius", 1.0))
        amp = doc.get("amplitude", [1.0] * op.d)
        amp = np.asarray([complex(*a) if isinstance(a, list) else complex(a) for a in np.atleast_1d(amp).tolist()])
        half = doc.get("half_width", float(np.max(np.abs(center))) + radius + op.max_radius() + 1.0)
        grid = Grid.from_half_width(op.step, (float(half),) * op.c)
        return bump_signal(grid, center, radius, amp)
    if kind == "samples":
        count = tuple(int(n) for n in doc["grid"]["count"])
        re = np.asarray(doc["re"], dtype=float).reshape(count + (op.d,))
        im = np.asarray(doc["im"], dtype=float).reshape(count + (op.d,))
        return SampledFunction(Grid.centered(op.step, count), re + 1j * im)
    raise SpecParseError(f"unknown signal kind {kind!r}", field="kind")


def cmd_apply(args: argparse.Namespace) -> int:
    spec = read_spec(args.op)
    u = _load_signal(args.signal, spec)
    out = apply_operator(spec.operator, u)
    path = write_frame(signal_frame(out), args.out)
    _print_json({"written": str(path), "points": out.grid.size})
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    spec = read_spec(args.op)
    config = _fiber_config(args, spec)
    cert = certify_invertibility(spec.operator, config)
    out_dir = Path(args.out_dir)
    write_text(cert.text(), out_dir / CERTIFICATE_TXT)
    code = EXIT_OK if cert.invertible else EXIT_SINGULAR
    write_metadata(out_dir / METADATA_JSON, "certify", _config_dict(config), None, started, code)
    print(cert.text(), end="")
    return code


def _bohr_check(op, config: FiberConfig, window_radius: int) -> Optional[float]:
    """Largest gap between the Haar-extracted and directly read coefficients at xi = 0.

    Skipped (None) when the window has more than BOHR_MAX_LABELS labels, which rules out
    rank 3 and above at the default window.
    """
    labels = (2 * window_radius + 1) ** op.m
    if labels > BOHR_MAX_LABELS:
        logger.info("bohr check skipped: window %s has %s labels at rank %s", window_radius, labels, op.m)
        return None
    try:
        fibers = torus_inverse_fibers(op, np.zeros(op.c), window_radius, config.torus_n, config.threads)
    except ApwError as exc:
        logger.warning("bohr check skipped: %s", exc)
        return None
    gaps = [
        float(np.max(np.abs(extract_coefficient_bohr(fibers, a) - fibers.direct_coefficient(a))))
        for a in fibers.labels
    ]
    return max(gaps)


def cmd_invert(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    spec = read_spec(args.op)
    op = spec.operator
    config = _fiber_config(args, spec)
    bundle = ReportBundle(Path(args.out_dir))
    seed = _seed(args)

    cert = certify_invertibility(op, config)
    write_text(cert.text(), bundle.certificate)
    if not cert.invertible:
        write_metadata(bundle.metadata, "invert", _config_dict(config), seed, started, EXIT_SINGULAR, args.method)
        print(cert.text(), end="")
        return EXIT_SINGULAR

    result = invert(op, method=args.method, tol=args.tol, config=config, max_terms=args.max_terms)
    write_spec(result.operator, bundle.out_dir / "inverse.json")
    write_frame(result.decay(), bundle.decay)
    report = verify_inverse(op, result, VerifyTolerances(seed=seed))
    write_frame(report.to_frame(), bundle.residuals)

    extra: Dict[str, Any] = {"diagnostics": dict(result.diagnostics)}
    if result.method == "fiber":
        extra["bohr_max_gap"] = _bohr_check(op, config, result.diagnostics["window_radius"])
    code = EXIT_OK if report.passed else EXIT_TOLERANCE
    write_metadata(bundle.metadata, "invert", _config_dict(config), seed, started, code, result.method, extra)
    _print_json({
        "method": result.method,
        "mu": [result.mu.real, result.mu.imag],
        "labels": len(result.operator.terms),
        "residuals_passed": report.passed,
        "out_dir": str(bundle.out_dir),
    })
    return code


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    op = read_spec(args.op).operator
    inverse = read_spec(args.inverse).operator
    seed = _seed(args)
    report = verify_inverse(op, inverse, VerifyTolerances(seed=seed))
    out_dir = Path(args.out_dir)
    write_frame(report.to_frame(), out_dir / RESIDUAL_CSV)
    code = EXIT_OK if report.passed else EXIT_TOLERANCE
    write_metadata(out_dir / METADATA_JSON, "verify", {}, seed, started, code)
    _print_json({"passed": report.passed, "residuals": [r.__dict__ for r in report.rows]})
    return code


# ---- parser ----

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out-dir",
        default=DEFAULT_OUT_DIR,
        help=f"Directory for reports and written operators (default: {DEFAULT_OUT_DIR})",
    )
    common.add_argument("--seed", type=int, default=None, help="Seed for random test signals (default: APW_SEED)")
    common.add_argument("--log-file", default=None, help="Also write log lines to this file")

    fiber = argparse.ArgumentParser(add_help=False)
    fiber.add_argument("--window", type=int, default=None, help="Label window radius R (default: max|a_i| + 2, grown)")
    fiber.add_argument("--xi-count", type=int, default=None, help="Points per axis of the xi grid")
    fiber.add_argument("--torus-n", type=int, default=None, help="Torus grid size per axis (must exceed 2R)")
    fiber.add_argument("--pad", type=float, default=None, help="Working grid half-width over the largest kernel radius")
    fiber.add_argument("--max-window", type=int, default=None, help="Largest window the automatic growth may reach")

    parser = argparse.ArgumentParser(description="Almost-periodic integral operators: build, compose, invert.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="Validate a spec and write its canonical form")
    p.add_argument("spec")
    p.add_argument("--out", default=None, help="Output path (default: <out-dir>/operator.json)")
    p.set_defaults(handler=cmd_build)

    p = sub.add_parser("compose", parents=[common], help="Write the spec of A . B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("out")
    p.set_defaults(handler=cmd_compose)

    p = sub.add_parser("apply", parents=[common], help="Apply an operator to a signal and write a CSV")
    p.add_argument("op")
    p.add_argument("signal")
    p.add_argument("out")
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("certify", parents=[common, fiber], help="Sample fiber singular values")
    p.add_argument("op")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("invert", parents=[common, fiber], help="Invert lam + N and emit the report bundle")
    p.add_argument("op")
    p.add_argument("--method", choices=["neumann", "fiber", "auto"], default="auto")
    p.add_argument("--tol", type=float, default=1e-8, help="Neumann tail tolerance (default: 1e-8)")
    p.add_argument("--max-terms", type=int, default=200, help="Neumann term budget (default: 200)")
    p.set_defaults(handler=cmd_invert)

    p = sub.add_parser("verify", parents=[common], help="Residuals of a stored inverse")
    p.add_argument("op")
    p.add_argument("inverse")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.log_file:
        attach_file(args.log_file)

    try:
        return args.handler(args)
    except SingularFiberError as exc:
        _print_json(exc.to_dict(), sys.stderr)
        return EXIT_SINGULAR
    except (WindowTooSmallError, BudgetError) as exc:
        _print_json(exc.to_dict(), sys.stderr)
        return EXIT_TOLERANCE
    except (SpecParseError, SpecValidationError, NotApplicableError, ApwError) as exc:
        _print_json(exc.to_dict(), sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError, ValueError) as exc:
        _print_json({"error": "usage", "message": str(exc)}, sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
