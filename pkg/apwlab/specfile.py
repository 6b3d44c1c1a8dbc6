"""Operator spec files: JSON documents describing lam * 1 + sum_a Psi_{w_a} G_{g_a}.

Example::

    {
      "format_version": 1,
      "c": 1,
      "d": 1,
      "basis": [[1.0]],
      "grid": {"step": [0.03125], "half_width": [20.0]},
      "lambda": [1.0, 0.0],
      "terms": [
        {"label": [0], "kernel": {"kind": "exp-one-sided", "gamma": 0.5, "rate": 1.0}}
      ],
      "fiber": {"window_radius": 2}
    }

Analytic kernels are built on the file's ``grid.half_width`` (or with an automatic
radius when it is absent) and written back as their literal. Any other kernel is
written as a ``samples`` literal whose ``re``/``im`` lists flatten the array of
shape count + (d, d) in C order. Floats are written with Python's round-trip repr,
so reading a written file reproduces every sample bit for bit.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from . import settings
from .algebra import ApwOperator, apw_norm, from_terms
from .errors import SpecParseError, SpecValidationError
from .freq import FreqLabel, FrequencyBasis, verify_injectivity
from .kernel import Kernel, exp_one_sided, from_samples, gaussian, raised_cosine
from .logs import get_logger

logger = get_logger("apwlab.specfile")

FORMAT_VERSION = 1
FIBER_KEYS = ("window_radius", "xi_count", "torus_n", "condition_cap", "pad", "window_tol", "max_window_radius")


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    operator: ApwOperator
    half_width: Optional[List[float]] = None
    fiber: Mapping[str, Any] = field(default_factory=dict)


def _require(doc: Mapping[str, Any], key: str, where: str = ""):
    if key not in doc:
        raise SpecParseError("missing required field", field=f"{where}{key}")
    return doc[key]


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError(f"expected a number, got {value!r}", field=name)
    return float(value)


def _as_list(value) -> list:
    return value if isinstance(value, list) else [value]


def _complex_pair(value, name: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if not isinstance(value, list) or len(value) != 2:
        raise SpecParseError(f"expected [re, im], got {value!r}", field=name)
    return complex(_number(value[0], name), _number(value[1], name))


def _mass(value, d: int, name: str):
    try:
        arr = None if isinstance(value, bool) else np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        arr = None
    if arr is None or not (arr.ndim == 0 or arr.shape == (d, d)):
        raise SpecParseError(f"mass must be a number or a {d}x{d} matrix", field=name)
    return float(arr) if arr.ndim == 0 else arr


def kernel_from_literal(literal: Mapping[str, Any], step, c: int, d: int,
                        half_width: Optional[Sequence[float]] = None, name: str = "kernel") -> Kernel:
    """Build a Kernel from one of the literal forms accepted in spec files."""
    if not isinstance(literal, Mapping):
        raise SpecParseError("kernel literal must be an object", field=name)
    kind = _require(literal, "kind", f"{name}.")
    if kind == "gaussian":
        mass = _mass(_require(literal, "mass", f"{name}."), d, f"{name}.mass")
        width = _number(_require(literal, "width", f"{name}."), f"{name}.width")
        k = gaussian(mass, width, step, c=c, d=d, radius=half_width, literal=literal)
    elif kind == "exp-one-sided":
        if c != 1:
            raise SpecValidationError("exp-one-sided kernels need c = 1", invariant="kernel-dimension")
        gamma = _mass(_require(literal, "gamma", f"{name}."), d, f"{name}.gamma")
        rate = _number(_require(literal, "rate", f"{name}."), f"{name}.rate")
        k = exp_one_sided(gamma, rate, step, d=d, radius=None if half_width is None else half_width[0], literal=literal)
    elif kind == "raised-cosine":
        mass = _mass(_require(literal, "mass", f"{name}."), d, f"{name}.mass")
        radius = _number(_require(literal, "radius", f"{name}."), f"{name}.radius")
        k = raised_cosine(mass, radius, step, c=c, d=d, literal=literal)
    elif kind == "samples":
        grid = _require(literal, "grid", f"{name}.")
        count = tuple(int(n) for n in _require(grid, "count", f"{name}.grid."))
        re = np.asarray(_require(literal, "re", f"{name}."), dtype=float)
        im = np.asarray(_require(literal, "im", f"{name}."), dtype=float)
        shape = count + (d, d)
        if re.size != int(np.prod(shape)) or im.size != re.size:
            raise SpecParseError(f"expected {int(np.prod(shape))} samples for shape {shape}", field=f"{name}.re")
        if any(n % 2 == 0 for n in count):
            raise SpecValidationError(f"{name}: sample counts {count} must be odd", invariant="centered-grid")
        values = np.empty(shape, dtype=complex)
        values.real = re.reshape(shape)
        values.imag = im.reshape(shape)
        k = from_samples(values, step, {"tail_bound": float(literal.get("tail_bound", 0.0))})
    else:
        raise SpecParseError(f"unknown kernel kind '{kind}'", field=f"{name}.kind")
    if k.c != c or k.d != d:
        raise SpecValidationError(f"kernel shape does not match c={c}, d={d}", invariant="kernel-dimension")
    if kind != "samples" and k.tail_bound > settings.ANALYTIC_TAIL:
        raise SpecValidationError(
            f"{name}: discarded tail {k.tail_bound:.3g} exceeds {settings.ANALYTIC_TAIL:g}; enlarge grid.half_width",
            invariant="tail-bound",
        )
    return k


def parse_spec(text: str) -> OperatorSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise SpecParseError("top level must be an object")

    version = _require(doc, "format_version")
    if version != FORMAT_VERSION:
        raise SpecParseError(f"unsupported format_version {version!r}", field="format_version")
    c = int(_require(doc, "c"))
    d = int(_require(doc, "d"))
    if c not in (1, 2) or d not in (1, 2):
        raise SpecValidationError(f"c and d must be 1 or 2, got c={c}, d={d}", invariant="dimension")
    try:
        basis = FrequencyBasis(
            tuple(tuple(v) for v in _require(doc, "basis")), bool(doc.get("declared_independent", True))
        )
    except (TypeError, ValueError) as exc:
        raise SpecValidationError(str(exc), invariant="basis") from exc
    if basis.c != c:
        raise SpecValidationError(f"basis vectors live in R^{basis.c}, c={c}", invariant="basis")

    grid = _require(doc, "grid")
    step = [_number(h, "grid.step") for h in _as_list(_require(grid, "step", "grid."))]
    if len(step) != c or any(h <= 0 for h in step):
        raise SpecValidationError(f"grid.step must hold {c} positive numbers", invariant="grid-step")
    half_width = grid.get("half_width")
    if half_width is not None:
        half_width = [_number(v, "grid.half_width") for v in _as_list(half_width)]
        if len(half_width) == 1:
            half_width = half_width * c
        if len(half_width) != c or any(v <= 0 for v in half_width):
            raise SpecValidationError(f"grid.half_width must hold {c} positive numbers", invariant="grid-half-width")
    lam = _complex_pair(_require(doc, "lambda"), "lambda")

    terms: Dict[FreqLabel, Kernel] = {}
    raw_terms = doc.get("terms", [])
    if not isinstance(raw_terms, list):
        raise SpecParseError("terms must be a list", field="terms")
    for n, entry in enumerate(raw_terms):
        where = f"terms[{n}]"
        coords = _require(entry, "label", f"{where}.")
        if not isinstance(coords, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in coords):
            raise SpecParseError("label must be a list of integers", field=f"{where}.label")
        label = FreqLabel(tuple(coords))
        if label.rank != basis.rank:
            raise SpecValidationError(
                f"{where}: label {coords} has rank {label.rank}, basis has rank {basis.rank}", invariant="label-rank"
            )
        if label in terms:
            raise SpecValidationError(f"duplicate label {coords}", invariant="duplicate label")
        terms[label] = kernel_from_literal(
            _require(entry, "kernel", f"{where}."), step, c, d, half_width, f"{where}.kernel"
        )

    operator = from_terms(basis, tuple(step), d, lam, terms)
    fiber = doc.get("fiber", {}) or {}
    unknown = sorted(set(fiber) - set(FIBER_KEYS))
    if unknown:
        raise SpecParseError(f"unknown fiber settings {unknown}", field="fiber")
    validate_operator(operator)
    return OperatorSpec(operator, half_width, dict(fiber))


def validate_operator(op: ApwOperator, window_radius: Optional[int] = None) -> None:
    norm = apw_norm(op)
    if not np.isfinite(norm.total):
        raise SpecValidationError("APW norm is not finite", invariant="finite-norm")
    if op.basis.declared_independent:
        R = window_radius or max(op.max_label() + 2, 1)
        report = verify_injectivity(op.basis, R)
        if not report.passed:
            raise SpecValidationError(
                f"labels {report.worst_pair[0]} and {report.worst_pair[1]} give frequencies "
                f"{report.min_gap:.3g} apart; the basis is not independent on window {R}",
                invariant="injectivity",
            )


def read_spec(path: Union[str, Path]) -> OperatorSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    return parse_spec(text)


def _kernel_literal(k: Kernel) -> Dict[str, Any]:
    if k.literal is not None:
        return dict(k.literal)
    flat = np.ascontiguousarray(k.values).ravel()
    out: Dict[str, Any] = {
        "kind": "samples",
        "grid": {"count": list(k.grid.count)},
        "re": flat.real.tolist(),
        "im": flat.imag.tolist(),
    }
    if k.tail_bound:
        out["tail_bound"] = k.tail_bound
    return out


def spec_document(op: ApwOperator, fiber: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    analytic = [k for k in op.terms.values() if k.literal is not None and k.literal.get("kind") != "raised-cosine"]
    grid: Dict[str, Any] = {"step": list(op.step)}
    if analytic:
        grid["half_width"] = [max(k.radius[a] for k in analytic) for a in range(op.c)]
    doc: Dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "c": op.c,
        "d": op.d,
        "basis": [list(v) for v in op.basis.vectors],
        "declared_independent": op.basis.declared_independent,
        "grid": grid,
        "lambda": [op.lam.real, op.lam.imag],
        "terms": [{"label": list(label.coords), "kernel": _kernel_literal(k)} for label, k in op.terms.items()],
    }
    if fiber:
        doc["fiber"] = dict(fiber)
    return doc


def dumps_spec(op: ApwOperator, fiber: Optional[Mapping[str, Any]] = None) -> str:
    return json.dumps(spec_document(op, fiber), indent=2, sort_keys=True) + "\n"


def write_spec(op: ApwOperator, path: Union[str, Path], fiber: Optional[Mapping[str, Any]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_spec(op, fiber), encoding="utf-8")
    logger.info("write_spec: path=%s terms=%s", path, len(op.terms))
    return path
