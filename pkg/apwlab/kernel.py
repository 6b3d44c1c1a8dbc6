"""Matrix-valued L1 kernels on centered grids.

A kernel g: R^c -> C^{d x d} is stored as samples on an odd-count centered grid,
so 0 is always a grid point and full convolutions stay centered. All quadrature
is the Riemann sum with weight step^c; the Fourier convention is

    g^(xi) = sum_y g(y) exp(-i<xi, y>) step^c

so the symbol of a convolution is the product of the symbols.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sfft
from scipy import signal, special

from . import settings
from .errors import DimensionMismatchError
from .grid import Grid, SampledFunction, require_same_step
from .logs import get_logger

logger = get_logger("apwlab.kernel")


def _spectral_norms(values: np.ndarray) -> np.ndarray:
    if values.shape[-1] == 1:
        return np.abs(values[..., 0, 0])
    return np.linalg.norm(values, ord=2, axis=(-2, -1))


def _l1(values: np.ndarray, cell: float) -> float:
    norms = _spectral_norms(values).ravel()
    return float(np.sum(np.sort(norms))) * cell


@dataclass(frozen=True, eq=False)
class Kernel:
    grid: Grid
    values: np.ndarray
    metadata: Mapping[str, Any] = field(default_factory=dict)
    l1: float = field(init=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape == self.grid.count:
            vals = vals[..., None, None]
        if vals.shape[: self.grid.c] != self.grid.count or vals.ndim != self.grid.c + 2:
            raise DimensionMismatchError(f"kernel values shape {vals.shape} does not fit grid {self.grid.count}")
        if vals.shape[-1] != vals.shape[-2] or vals.shape[-1] not in (1, 2):
            raise DimensionMismatchError(f"kernel values must be d x d with d in (1, 2), got {vals.shape[-2:]}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("kernel has non-finite entries")
        if not self.grid.is_centered():
            raise ValueError(f"kernel grid must be centered with odd counts, got {self.grid}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))
        object.__setattr__(self, "l1", _l1(vals, self.grid.cell))

    @property
    def d(self) -> int:
        return self.values.shape[-1]

    @property
    def c(self) -> int:
        return self.grid.c

    @property
    def step(self) -> Tuple[float, ...]:
        return self.grid.step

    @property
    def radius(self) -> Tuple[float, ...]:
        return self.grid.half_width

    @property
    def tail_bound(self) -> float:
        return float(self.metadata.get("tail_bound", 0.0))

    @property
    def literal(self) -> Optional[Mapping[str, Any]]:
        return self.metadata.get("literal")


@dataclass(frozen=True)
class SymbolSample:
    xi: Tuple[float, ...]
    value: np.ndarray


# ---- constructors ----

def _mass_matrix(mass, d: int) -> np.ndarray:
    arr = np.asarray(mass, dtype=complex)
    if arr.ndim == 0:
        return arr * np.eye(d)
    if arr.shape != (d, d):
        raise DimensionMismatchError(f"mass must be a scalar or a {d}x{d} matrix, got shape {arr.shape}")
    return arr


def _literal_value(value):
    arr = np.asarray(value)
    if np.iscomplexobj(arr) and np.any(arr.imag):
        return None
    return np.real(arr).tolist()


def _default_literal(kind: str, **params) -> Optional[dict]:
    out = {"kind": kind}
    for key, value in params.items():
        value = _literal_value(value)
        if value is None:
            return None
        out[key] = value
    return out


def _from_profile(profile: np.ndarray, grid: Grid, mass: np.ndarray, metadata: dict) -> Kernel:
    # scale so the Riemann sum of the profile is exactly one
    total = float(np.sum(profile)) * grid.cell
    unit = profile / total
    return Kernel(grid, unit[..., None, None] * mass, metadata)


def _steps(step, c: int) -> Tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(step, dtype=float))
    return tuple(float(arr[0]) for _ in range(c)) if arr.size == 1 else tuple(float(v) for v in arr)


def gaussian_tail(mass_norm: float, width: float, radius, c: int) -> float:
    """Mass outside the box |y_i| <= radius_i; ``radius`` is a number or one value per axis."""
    radii = np.broadcast_to(np.asarray(radius, dtype=float), (c,))
    miss = special.erfc(radii / (width * np.sqrt(2.0)))
    return mass_norm * float(-np.expm1(np.sum(np.log1p(-miss))))


def gaussian(mass, width: float, step, c: int = 1, d: int = 1, radius=None,
             tail: float = settings.ANALYTIC_TAIL, literal: Optional[Mapping[str, Any]] = None) -> Kernel:
    """mass * exp(-|y|^2 / 2 width^2) / (2 pi width^2)^(c/2), truncated to a box of the given radius (one value or one per axis)."""
    if not width > 0:
        raise ValueError(f"gaussian width must be positive, got {width}")
    M = _mass_matrix(mass, d)
    mnorm = float(np.linalg.norm(M, 2))
    if radius is None:
        if mnorm <= tail:
            radius = 4.0 * width
        else:
            ratio = tail / mnorm
            per_axis = ratio if c == 1 else 1.0 - np.sqrt(1.0 - ratio)
            radius = float(special.erfcinv(per_axis)) * width * np.sqrt(2.0)
    steps = _steps(step, c)
    radii = tuple(float(v) for v in np.broadcast_to(np.asarray(radius, dtype=float), (c,)))
    grid = Grid.from_half_width(steps, radii)
    r2 = np.sum(grid.points() ** 2, axis=-1)
    profile = np.exp(-r2 / (2.0 * width**2))
    meta = {
        "kind": "gaussian",
        "tail_bound": gaussian_tail(mnorm, width, grid.half_width, c),
        "literal": dict(literal) if literal is not None else _default_literal("gaussian", mass=mass, width=width),
    }
    return _from_profile(profile, grid, M, meta)


def exp_one_sided_profile(gamma: float, rate: float, x: np.ndarray) -> np.ndarray:
    """gamma * exp(-rate x) on x > 0, gamma / 2 at the jump x = 0, zero for x < 0."""
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0, gamma * np.exp(-rate * np.clip(x, 0.0, None)), 0.0)
    return np.where(x == 0, 0.5 * gamma, out)


def exp_resolvent_parameters(gamma: float, rate: float) -> Tuple[float, float]:
    """(1 + G_g)^{-1} = 1 + G_m for g = gamma e^{-rate y} 1_{y>=0}: m = -gamma e^{-(rate + gamma) y} 1_{y>=0}."""
    return -gamma, rate + gamma


def exp_one_sided(gamma, rate: float, step, d: int = 1, radius: Optional[float] = None,
                  tail: float = settings.ANALYTIC_TAIL, literal: Optional[Mapping[str, Any]] = None) -> Kernel:
    """gamma * exp(-rate y) 1_{y >= 0} on R (c = 1); total mass gamma / rate."""
    if not rate > 0:
        raise ValueError(f"exp-one-sided rate must be positive, got {rate}")
    G = _mass_matrix(gamma, d)
    gnorm = float(np.linalg.norm(G, 2))
    if radius is None:
        radius = np.log(max(gnorm / (rate * tail), 1.0)) / rate if gnorm > 0 else 1.0
    grid = Grid.from_half_width(_steps(step, 1), (radius,))
    x = grid.coords(0)
    x = np.where(np.abs(x) < 1e-12 * grid.step[0], 0.0, x)
    profile = exp_one_sided_profile(1.0, rate, x)
    meta = {
        "kind": "exp-one-sided",
        "tail_bound": gnorm / rate * float(np.exp(-rate * grid.half_width[0])),
        "literal": dict(literal) if literal is not None else _default_literal("exp-one-sided", gamma=gamma, rate=rate),
    }
    return _from_profile(profile, grid, G / rate, meta)


def raised_cosine(mass, radius: float, step, c: int = 1, d: int = 1,
                  literal: Optional[Mapping[str, Any]] = None) -> Kernel:
    """Compactly supported bump prod_i (1 + cos(pi y_i / radius)) / 2 on |y_i| <= radius."""
    if not radius > 0:
        raise ValueError(f"raised-cosine radius must be positive, got {radius}")
    grid = Grid.from_half_width(_steps(step, c), (radius,) * c)
    pts = grid.points()
    inside = np.all(np.abs(pts) <= radius, axis=-1)
    profile = np.prod(0.5 * (1.0 + np.cos(np.pi * np.clip(pts / radius, -1.0, 1.0))), axis=-1) * inside
    meta = {
        "kind": "raised-cosine",
        "tail_bound": 0.0,
        "literal": dict(literal) if literal is not None else _default_literal("raised-cosine", mass=mass, radius=radius),
    }
    return _from_profile(profile, grid, _mass_matrix(mass, d), meta)


def from_samples(values, step, metadata: Optional[Mapping[str, Any]] = None) -> Kernel:
    vals = np.asarray(values, dtype=complex)
    c = vals.ndim - 2
    return Kernel(Grid.centered(_steps(step, c), vals.shape[:c]), vals, metadata or {})


def zero_kernel(step, c: int = 1, d: int = 1, count: int = 3) -> Kernel:
    steps = _steps(step, c)
    return Kernel(Grid.centered(steps, (count,) * c), np.zeros((count,) * c + (d, d), dtype=complex))


def delta_kernel(step, c: int = 1, d: int = 1) -> Kernel:
    """Discrete identity for convolution: one sample of height 1 / step^c at the origin."""
    steps = _steps(step, c)
    grid = Grid.centered(steps, (3,) * c)
    vals = np.zeros((3,) * c + (d, d), dtype=complex)
    vals[(1,) * c] = np.eye(d) / grid.cell
    return Kernel(grid, vals, {"kind": "delta"})


# ---- reshaping ----

def _derived_meta(*sources: Kernel) -> dict:
    return {"tail_bound": sum(k.tail_bound for k in sources)}


def pad_kernel(g: Kernel, count: Sequence[int]) -> Kernel:
    """Zero-pad g to a larger centered grid with the given (odd) counts."""
    count = tuple(int(n) for n in count)
    if count == g.grid.count:
        return g
    if any(n < m or (n - m) % 2 for n, m in zip(count, g.grid.count)):
        raise DimensionMismatchError(f"cannot pad kernel of counts {g.grid.count} to {count}")
    vals = np.zeros(count + (g.d, g.d), dtype=complex)
    sl = tuple(slice((n - m) // 2, (n - m) // 2 + m) for n, m in zip(count, g.grid.count))
    vals[sl] = g.values
    return Kernel(Grid.centered(g.grid.step, count), vals, {"tail_bound": g.tail_bound})


def truncate_kernel(g: Kernel, radius) -> Tuple[Kernel, float]:
    """Restrict g to the box |y_i| <= radius; returns the kernel and the dropped L1 mass."""
    radius = np.broadcast_to(np.asarray(radius, dtype=float), (g.c,))
    keep = []
    for a in range(g.c):
        n_new = 2 * int(np.floor(radius[a] / g.grid.step[a] + 1e-9)) + 1
        keep.append(max(3, min(n_new, g.grid.count[a])))
    keep = tuple(keep)
    if keep == g.grid.count:
        return g, 0.0
    sl = tuple(slice((m - n) // 2, (m - n) // 2 + n) for n, m in zip(keep, g.grid.count))
    norms = _spectral_norms(g.values)
    mask = np.ones(g.grid.count, dtype=bool)
    mask[sl] = False
    dropped = float(np.sum(np.sort(norms[mask]))) * g.grid.cell
    meta = {"tail_bound": g.tail_bound + dropped}
    return Kernel(Grid.centered(g.grid.step, keep), g.values[sl], meta), dropped


def common_count(kernels: Sequence[Kernel]) -> Tuple[int, ...]:
    return tuple(int(max(k.grid.count[a] for k in kernels)) for a in range(kernels[0].c))


def add_kernels(kernels: Sequence[Kernel], coeffs: Optional[Sequence[complex]] = None) -> Kernel:
    """Linear combination on the smallest common centered grid, summed in the given order."""
    if not kernels:
        raise ValueError("add_kernels needs at least one kernel")
    first = kernels[0]
    for k in kernels[1:]:
        require_same_step(first.grid, k.grid)
        if k.d != first.d:
            raise DimensionMismatchError(f"kernel dimension mismatch: {first.d} vs {k.d}")
    coeffs = [1.0] * len(kernels) if coeffs is None else list(coeffs)
    count = common_count(kernels)
    total = np.zeros(count + (first.d, first.d), dtype=complex)
    for k, a in zip(kernels, coeffs):
        total += a * pad_kernel(k, count).values
    return Kernel(Grid.centered(first.grid.step, count), total, _derived_meta(*kernels))


def scale_kernel(g: Kernel, alpha: complex) -> Kernel:
    return Kernel(g.grid, alpha * g.values, {"tail_bound": abs(alpha) * g.tail_bound})


# ---- operations on kernels ----

def l1_norm(k: Kernel) -> float:
    """sum_y ||k(y)||_2 step^c, recomputed from the samples."""
    return _l1(k.values, k.grid.cell)


def _check_pair(g: Kernel, h_grid: Grid, h_d: int) -> None:
    require_same_step(g.grid, h_grid)
    if g.d != h_d:
        raise DimensionMismatchError(f"dimension mismatch: kernel is {g.d}x{g.d}, operand has d={h_d}")


def convolve(g: Kernel, h: Kernel) -> Kernel:
    """(g * h)(x) = int g(x - y) h(y) dy, full (non-circular), matrix order g . h."""
    _check_pair(g, h.grid, h.d)
    axes = tuple(range(g.c))
    full = signal.fftconvolve(g.values[..., :, :, None], h.values[..., None, :, :], mode="full", axes=axes)
    vals = full.sum(axis=-2) * g.grid.cell
    count = tuple(a + b - 1 for a, b in zip(g.grid.count, h.grid.count))
    return Kernel(Grid.centered(g.grid.step, count), vals, _derived_meta(g, h))


def apply_conv(g: Kernel, u: SampledFunction) -> SampledFunction:
    """(G_g u)(x) = int g(x - y) u(y) dy on u's grid; samples outside u's grid count as zero."""
    _check_pair(g, u.grid, u.d)
    axes = tuple(range(g.c))
    full = signal.fftconvolve(g.values, u.values[..., None, :], mode="full", axes=axes)
    full = full.sum(axis=-1) * g.grid.cell
    sl = tuple(slice((m - 1) // 2, (m - 1) // 2 + n) for m, n in zip(g.grid.count, u.grid.count))
    return SampledFunction(u.grid, full[sl])


def modulate_kernel(g: Kernel, nu) -> Kernel:
    """x -> g(x) exp(-i<nu, x>)."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if not np.any(nu):
        return g
    return Kernel(g.grid, g.grid.phase(-nu)[..., None, None] * g.values, _derived_meta(g))


def symbol(g: Kernel, xi) -> SymbolSample:
    """g^(xi) = sum_y g(y) exp(-i<xi, y>) step^c."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    phase = g.grid.phase(-xi)
    value = np.tensordot(phase, g.values, axes=g.c) * g.grid.cell
    return SymbolSample(tuple(float(v) for v in xi), value)


# ---- the DFT frequency grid of a working grid ----

def xi_axes(work: Grid) -> Tuple[np.ndarray, ...]:
    """Per-axis frequencies 2 pi k / (n step), k centered; they span (-pi/step, pi/step)."""
    return tuple(
        2.0 * np.pi * (np.arange(n) - (n - 1) / 2.0) / (n * h) for n, h in zip(work.count, work.step)
    )


def xi_points(work: Grid) -> np.ndarray:
    mesh = np.meshgrid(*xi_axes(work), indexing="ij")
    return np.stack(mesh, axis=-1)


def symbol_on_grid(g: Kernel, work: Grid, shift=None) -> np.ndarray:
    """g^(xi_k + shift) for every xi_k on the DFT grid of ``work``; shape work.count + (d, d)."""
    require_same_step(g.grid, work)
    if shift is not None:
        g = modulate_kernel(g, shift)
    vals = pad_kernel(g, work.count).values
    axes = tuple(range(work.c))
    spec = sfft.fftshift(sfft.fftn(sfft.ifftshift(vals, axes=axes), axes=axes), axes=axes)
    return spec * work.cell


def kernel_from_symbol(values: np.ndarray, work: Grid, metadata: Optional[Mapping[str, Any]] = None) -> Kernel:
    """Inverse of ``symbol_on_grid``: samples on ``work`` whose symbol matches ``values`` on the DFT grid."""
    axes = tuple(range(work.c))
    samples = sfft.fftshift(sfft.ifftn(sfft.ifftshift(values, axes=axes), axes=axes), axes=axes)
    return Kernel(work, samples / work.cell, metadata or {})
