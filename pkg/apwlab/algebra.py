"""The unitalized algebra of operators lam * 1 + sum_w Psi_w G_{g_w}.

An ``ApwOperator`` carries its unit coefficient explicitly and a finite map from
exact frequency labels to convolution kernels. Every reduction walks the labels
in lexicographic order, so results do not depend on dict or thread ordering.
Kernels that fall below the drop threshold are removed and their L1 mass is
added to ``slack``.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from . import settings
from .errors import BasisMismatchError, DimensionMismatchError, StepMismatchError
from .freq import FreqLabel, FrequencyBasis, TorusPoint, character_eval
from .grid import Grid, SampledFunction, modulate
from .kernel import (
    Kernel,
    add_kernels,
    apply_conv,
    convolve,
    modulate_kernel,
    scale_kernel,
    truncate_kernel,
    zero_kernel,
)
from .logs import get_logger
from .parallel import indexed_map

logger = get_logger("apwlab.algebra")


@dataclass(frozen=True, eq=False)
class ApwOperator:
    basis: FrequencyBasis
    step: Tuple[float, ...]
    d: int
    lam: complex = 1.0
    terms: Mapping[FreqLabel, Kernel] = field(default_factory=dict)
    slack: float = 0.0

    def __post_init__(self):
        step = tuple(float(h) for h in np.atleast_1d(self.step))
        if len(step) == 1 and self.basis.c > 1:
            step = step * self.basis.c
        if len(step) != self.basis.c:
            raise DimensionMismatchError(f"step has {len(step)} components, basis lives in R^{self.basis.c}")
        if self.d not in (1, 2):
            raise DimensionMismatchError(f"d must be 1 or 2, got {self.d}")
        reference_grid = Grid.centered(step, (3,) * len(step))
        for label, k in self.terms.items():
            if label.rank != self.basis.rank:
                raise BasisMismatchError(f"label {label.coords} does not match basis rank {self.basis.rank}")
            if k.c != self.basis.c:
                raise DimensionMismatchError(f"kernel at {label.coords} lives in R^{k.c}, basis in R^{self.basis.c}")
            if not reference_grid.same_step(k.grid):
                raise StepMismatchError(f"kernel at {label.coords} has step {k.step}, operator has {step}")
            if k.d != self.d:
                raise DimensionMismatchError(f"kernel at {label.coords} is {k.d}x{k.d}, operator has d={self.d}")
        if not self.slack >= 0:
            raise ValueError(f"slack must be nonnegative, got {self.slack}")
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(self.terms.items()))))

    @property
    def c(self) -> int:
        return self.basis.c

    @property
    def m(self) -> int:
        return self.basis.rank

    @property
    def labels(self) -> List[FreqLabel]:
        return list(self.terms)

    def vector(self, label: FreqLabel) -> np.ndarray:
        return self.basis.vector(label)

    def max_radius(self) -> float:
        return max((max(k.radius) for k in self.terms.values()), default=0.0)

    def max_label(self) -> int:
        return max((lbl.max_abs() for lbl in self.terms), default=0)

    def replace(self, lam: Optional[complex] = None, terms: Optional[Mapping[FreqLabel, Kernel]] = None,
                slack: Optional[float] = None) -> "ApwOperator":
        return ApwOperator(
            self.basis,
            self.step,
            self.d,
            self.lam if lam is None else lam,
            self.terms if terms is None else terms,
            self.slack if slack is None else slack,
        )


@dataclass(frozen=True)
class ApwNormBreakdown:
    unit: float
    per_label: Mapping[FreqLabel, float]
    total: float
    slack: float

    @property
    def off_unit(self) -> float:
        return self.total - self.unit

    def as_rows(self) -> List[dict]:
        rows = [{"label": "unit", "l1_norm": self.unit}]
        rows.extend({"label": lbl.text(), "l1_norm": v} for lbl, v in self.per_label.items())
        rows.append({"label": "total", "l1_norm": self.total})
        rows.append({"label": "slack", "l1_norm": self.slack})
        return rows


# ---- constructors ----

def from_terms(basis: FrequencyBasis, step, d: int, lam: complex, terms: Mapping[FreqLabel, Kernel],
               drop_threshold: float = settings.DROP_THRESHOLD) -> ApwOperator:
    return prune(ApwOperator(basis, step, d, lam, terms), drop_threshold)


def identity(basis: FrequencyBasis, step, d: int = 1) -> ApwOperator:
    return ApwOperator(basis, step, d, 1.0, {})


def zero(basis: FrequencyBasis, step, d: int = 1) -> ApwOperator:
    return ApwOperator(basis, step, d, 0.0, {})


def without_unit(A: ApwOperator) -> ApwOperator:
    return A.replace(lam=0.0)


def _require_compatible(A: ApwOperator, B: ApwOperator) -> None:
    if A.basis != B.basis:
        raise BasisMismatchError("operators are defined over different frequency bases")
    if not Grid.centered(A.step, (3,) * A.c).same_step(Grid.centered(B.step, (3,) * B.c)):
        raise StepMismatchError(f"operator steps differ: {A.step} vs {B.step}")
    if A.d != B.d:
        raise DimensionMismatchError(f"operator dimensions differ: {A.d} vs {B.d}")


def prune(A: ApwOperator, threshold: float = settings.DROP_THRESHOLD) -> ApwOperator:
    kept: Dict[FreqLabel, Kernel] = {}
    dropped = 0.0
    for label, k in A.terms.items():
        if k.l1 <= threshold:
            dropped += k.l1
        else:
            kept[label] = k
    if len(kept) == len(A.terms):
        return A
    logger.debug("prune: dropped %s terms, mass=%.3g", len(A.terms) - len(kept), dropped)
    return A.replace(terms=kept, slack=A.slack + dropped)


# ---- norms ----

def apw_norm(A: ApwOperator) -> ApwNormBreakdown:
    """|lam| + sum_w ||g_w||_1, summed in label order."""
    per_label = {label: k.l1 for label, k in A.terms.items()}
    unit = abs(A.lam)
    total = unit + float(np.sum(np.fromiter(per_label.values(), dtype=float, count=len(per_label))))
    return ApwNormBreakdown(unit, MappingProxyType(per_label), total, A.slack)


# ---- linear structure ----

def scale(alpha: complex, A: ApwOperator) -> ApwOperator:
    if alpha == 0:
        return A.replace(lam=0.0, terms={}, slack=0.0)
    terms = {label: scale_kernel(k, alpha) for label, k in A.terms.items()}
    return A.replace(lam=alpha * A.lam, terms=terms, slack=abs(alpha) * A.slack)


def add(A: ApwOperator, B: ApwOperator, threshold: float = settings.DROP_THRESHOLD) -> ApwOperator:
    _require_compatible(A, B)
    terms: Dict[FreqLabel, Kernel] = {}
    for label in sorted(set(A.terms) | set(B.terms)):
        parts = [k for k in (A.terms.get(label), B.terms.get(label)) if k is not None]
        terms[label] = parts[0] if len(parts) == 1 else add_kernels(parts)
    out = ApwOperator(A.basis, A.step, A.d, A.lam + B.lam, terms, A.slack + B.slack)
    return prune(out, threshold)


def subtract(A: ApwOperator, B: ApwOperator, threshold: float = settings.DROP_THRESHOLD) -> ApwOperator:
    return add(A, scale(-1.0, B), threshold)


# ---- composition ----

def _twisted_product(args) -> Kernel:
    g, nu_vec, h = args
    return convolve(modulate_kernel(g, nu_vec), h)


def compose(A: ApwOperator, B: ApwOperator, threshold: float = settings.DROP_THRESHOLD,
            threads: Optional[int] = None) -> ApwOperator:
    """A . B with (Psi_w G_g)(Psi_v G_h) = Psi_{w+v} G_{(g e^{-i<v,.>}) * h}."""
    _require_compatible(A, B)
    pairs: List[Tuple[FreqLabel, FreqLabel]] = [(w, v) for w in A.terms for v in B.terms]
    vectors = {v: B.vector(v) for v in B.terms}
    products = indexed_map(
        _twisted_product, [(A.terms[w], vectors[v], B.terms[v]) for w, v in pairs], threads=threads
    )

    pieces: Dict[FreqLabel, List[Tuple[complex, Kernel]]] = {}
    if A.lam != 0:
        for v, h in B.terms.items():
            pieces.setdefault(v, []).append((A.lam, h))
    if B.lam != 0:
        for w, g in A.terms.items():
            pieces.setdefault(w, []).append((B.lam, g))
    for (w, v), k in zip(pairs, products):
        pieces.setdefault(w + v, []).append((1.0, k))

    terms: Dict[FreqLabel, Kernel] = {}
    for label in sorted(pieces):
        coeffs, kernels = zip(*pieces[label])
        terms[label] = add_kernels(list(kernels), list(coeffs))

    nA, nB = apw_norm(A).total, apw_norm(B).total
    slack = A.slack * nB + B.slack * nA + A.slack * B.slack
    out = ApwOperator(A.basis, A.step, A.d, A.lam * B.lam, terms, slack)
    logger.debug("compose: %s x %s terms -> %s labels", len(A.terms), len(B.terms), len(terms))
    return prune(out, threshold)


def truncate_support(A: ApwOperator, radius) -> ApwOperator:
    """Re-truncate every kernel to |y_i| <= radius; the dropped L1 mass goes to slack."""
    terms: Dict[FreqLabel, Kernel] = {}
    dropped = 0.0
    for label, k in A.terms.items():
        terms[label], lost = truncate_kernel(k, radius)
        dropped += lost
    return A.replace(terms=terms, slack=A.slack + dropped)


# ---- action on functions ----

def _check_function(A: ApwOperator, u: SampledFunction) -> None:
    if u.grid.c != A.c:
        raise DimensionMismatchError(f"function lives in R^{u.grid.c}, operator in R^{A.c}")
    if not Grid.centered(A.step, (3,) * A.c).same_step(u.grid):
        raise StepMismatchError(f"function step {u.grid.step} differs from operator step {A.step}")
    if u.d != A.d:
        raise DimensionMismatchError(f"function has d={u.d}, operator has d={A.d}")


def apply(A: ApwOperator, u: SampledFunction) -> SampledFunction:
    """(Au)(x) = lam u(x) + sum_w exp(i<w, x>) int g_w(x - y) u(y) dy on u's grid."""
    _check_function(A, u)
    out = A.lam * u.values
    for label, k in A.terms.items():
        out = out + modulate(apply_conv(k, u), A.vector(label)).values
    return SampledFunction(u.grid, out)


# ---- characters and shifts ----

def _rotate(A: ApwOperator, factors: Mapping[FreqLabel, complex]) -> ApwOperator:
    terms = {
        label: Kernel(k.grid, factors[label] * k.values, dict(k.metadata, literal=None))
        for label, k in A.terms.items()
    }
    return A.replace(terms=terms)


def conjugate_shift(A: ApwOperator, h) -> ApwOperator:
    """S_h A S_h^{-1}: the coefficient at w picks up exp(-i<w, h>)."""
    h = np.atleast_1d(np.asarray(h, dtype=float))
    if not np.any(h):
        return A
    factors = {label: complex(np.exp(-1j * float(np.dot(A.vector(label), h)))) for label in A.terms}
    return _rotate(A, factors)


def evaluate_character(A: ApwOperator, theta: TorusPoint) -> ApwOperator:
    """A{theta}: the coefficient at label a picks up exp(-2 pi i a . theta)."""
    if theta.rank != A.m:
        raise BasisMismatchError(f"torus point of rank {theta.rank} used with an operator of rank {A.m}")
    if not any(theta.theta):
        return A
    factors = {label: character_eval(theta, label).conjugate() for label in A.terms}
    return _rotate(A, factors)


def kernel_of(A: ApwOperator, x) -> Kernel:
    """The slice y -> sum_w exp(i<w, x>) g_w(y) of the two-variable kernel; the unit part is excluded."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not A.terms:
        return zero_kernel(A.step, A.c, A.d)
    coeffs = [complex(np.exp(1j * float(np.dot(A.vector(label), x)))) for label in A.terms]
    return add_kernels(list(A.terms.values()), coeffs)


def two_variable_kernel(A: ApwOperator, grid: Grid) -> np.ndarray:
    """Dense matrix n(x_i, x_i - x_j) over all pairs of grid points; shape (P, P, d, d), P = grid.size.

    Used as a brute-force quadrature reference: (Au)(x_i) = lam u_i + sum_j n(x_i, x_i - x_j) u_j step^c.
    """
    _check_function(A, SampledFunction.zeros(grid, A.d))
    idx = np.stack(np.meshgrid(*[np.arange(n) for n in grid.count], indexing="ij"), axis=-1).reshape(-1, grid.c)
    xs = grid.points().reshape(-1, grid.c)
    diff = idx[:, None, :] - idx[None, :, :]
    out = np.zeros((len(xs), len(xs), A.d, A.d), dtype=complex)
    for label, k in A.terms.items():
        center = (np.asarray(k.grid.count) - 1) // 2
        pos = diff + center
        inside = np.all((pos >= 0) & (pos < np.asarray(k.grid.count)), axis=-1)
        block = np.zeros_like(out)
        block[inside] = k.values[tuple(pos[inside].T)]
        phase = np.exp(1j * xs @ A.vector(label))
        out += phase[:, None, None, None] * block
    return out


def dense_matrix(A: ApwOperator, grid: Grid) -> np.ndarray:
    """The full quadrature matrix of A on ``grid``, shape (P d, P d)."""
    P = grid.size
    K = two_variable_kernel(A, grid) * grid.cell
    mat = K.transpose(0, 2, 1, 3).reshape(P * A.d, P * A.d)
    return mat + A.lam * np.eye(P * A.d)
