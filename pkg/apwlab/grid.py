"""Uniform grids, sampled vector-valued functions and the shift/modulation primitives."""

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatchError, GridAlignmentError, StepMismatchError

_STEP_RTOL = 1e-12
_ALIGN_TOL = 1e-9


def _as_vector(value, c: int, name: str) -> np.ndarray:
    vec = np.atleast_1d(np.asarray(value, dtype=float))
    if vec.shape != (c,):
        raise DimensionMismatchError(f"{name} must have {c} components, got shape {vec.shape}")
    return vec


@dataclass(frozen=True)
class Grid:
    """Axis-aligned uniform grid on R^c, c in {1, 2}."""

    origin: Tuple[float, ...]
    step: Tuple[float, ...]
    count: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "step", tuple(float(v) for v in self.step))
        object.__setattr__(self, "count", tuple(int(v) for v in self.count))
        if not (len(self.origin) == len(self.step) == len(self.count)):
            raise DimensionMismatchError("origin, step and count must have the same length")
        if self.c not in (1, 2):
            raise DimensionMismatchError(f"grid dimension must be 1 or 2, got {self.c}")
        for h, n in zip(self.step, self.count):
            if not h > 0:
                raise ValueError(f"grid step must be positive, got {h}")
            if n < 2:
                raise ValueError(f"grid count must be at least 2, got {n}")

    @classmethod
    def centered(cls, step: Sequence[float], count: Sequence[int]) -> "Grid":
        origin = tuple(-h * (n - 1) / 2.0 for h, n in zip(step, count))
        return cls(origin, tuple(step), tuple(count))

    @classmethod
    def from_half_width(cls, step: Sequence[float], half_width: Sequence[float]) -> "Grid":
        """Centered odd-count grid covering [-L, L] per axis (0 is always a grid point)."""
        counts = tuple(2 * int(np.ceil(L / h - 1e-9)) + 1 for h, L in zip(step, half_width))
        counts = tuple(max(n, 3) for n in counts)
        return cls.centered(step, counts)

    @property
    def c(self) -> int:
        return len(self.count)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.count

    @property
    def size(self) -> int:
        return int(np.prod(self.count))

    @property
    def cell(self) -> float:
        """Quadrature weight step^c."""
        return float(np.prod(self.step))

    @property
    def half_width(self) -> Tuple[float, ...]:
        return tuple(h * (n - 1) / 2.0 for h, n in zip(self.step, self.count))

    def coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.step[axis] * np.arange(self.count[axis])

    def points(self) -> np.ndarray:
        """Coordinates of every grid point, shape count + (c,)."""
        mesh = np.meshgrid(*[self.coords(a) for a in range(self.c)], indexing="ij")
        return np.stack(mesh, axis=-1)

    def phase(self, omega) -> np.ndarray:
        """exp(i<omega, x>) evaluated at the grid points."""
        omega = _as_vector(omega, self.c, "frequency")
        arg = np.zeros(self.count)
        for a in range(self.c):
            shape = [1] * self.c
            shape[a] = self.count[a]
            arg = arg + omega[a] * self.coords(a).reshape(shape)
        return np.exp(1j * arg)

    def is_centered(self) -> bool:
        return all(
            n % 2 == 1 and abs(o + h * (n - 1) / 2.0) <= _ALIGN_TOL * h
            for o, h, n in zip(self.origin, self.step, self.count)
        )

    def same_step(self, other: "Grid") -> bool:
        if self.c != other.c:
            return False
        return all(abs(a - b) <= _STEP_RTOL * max(a, b) for a, b in zip(self.step, other.step))


def require_same_step(a: Grid, b: Grid) -> None:
    if a.c != b.c:
        raise DimensionMismatchError(f"grid dimension mismatch: {a.c} vs {b.c}")
    if not a.same_step(b):
        raise StepMismatchError(f"grid steps differ: {a.step} vs {b.step}")


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Samples of u: R^c -> C^d on a grid; values have shape grid.count + (d,)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape == self.grid.count:
            vals = vals[..., None]
        if vals.shape[:-1] != self.grid.count or vals.shape[-1] not in (1, 2):
            raise DimensionMismatchError(
                f"values shape {vals.shape} does not match grid {self.grid.count} x d (d in 1, 2)"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("sampled function has non-finite entries")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return self.values.shape[-1]

    @classmethod
    def zeros(cls, grid: Grid, d: int = 1) -> "SampledFunction":
        return cls(grid, np.zeros(grid.count + (d,), dtype=complex))

    @classmethod
    def from_callable(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray], d: int = 1) -> "SampledFunction":
        """Sample ``fn`` on grid points; ``fn`` receives coordinates of shape count + (c,)."""
        vals = np.asarray(fn(grid.points()), dtype=complex)
        if d == 1 and vals.shape == grid.count:
            vals = vals[..., None]
        return cls(grid, vals)

    def scaled(self, alpha: complex) -> "SampledFunction":
        return SampledFunction(self.grid, alpha * self.values)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        if self.grid != other.grid or self.d != other.d:
            raise DimensionMismatchError("cannot subtract functions on different grids")
        return SampledFunction(self.grid, self.values - other.values)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        if self.grid != other.grid or self.d != other.d:
            raise DimensionMismatchError("cannot add functions on different grids")
        return SampledFunction(self.grid, self.values + other.values)


def lp_seminorm(u: SampledFunction, p) -> float:
    """Discrete L_p seminorm with the Euclidean norm on C^d; p in {1, 2, inf}."""
    pointwise = np.linalg.norm(u.values, axis=-1).ravel()
    if p in (np.inf, "inf", float("inf")):
        return float(pointwise.max()) if pointwise.size else 0.0
    if isinstance(p, bool) or p not in (1, 2):
        raise ValueError(f"p must be 1, 2 or inf, got {p!r}")
    p = int(p)
    total = float(np.sum(np.sort(pointwise**p))) * u.grid.cell
    return total ** (1.0 / p)


def _index_offsets(grid: Grid, h) -> Tuple[int, ...]:
    h = _as_vector(h, grid.c, "shift")
    offsets = []
    for axis, (hv, step) in enumerate(zip(h, grid.step)):
        ratio = hv / step
        k = int(round(ratio))
        if abs(ratio - k) > _ALIGN_TOL * max(1.0, abs(k)):
            raise GridAlignmentError(axis, float(hv), step)
        offsets.append(k)
    return tuple(offsets)


def shift_array(values: np.ndarray, offsets: Sequence[int]) -> np.ndarray:
    """Move samples by integer offsets along the leading axes, zero-filling vacated samples."""
    out = np.zeros_like(values)
    src, dst = [], []
    for k, n in zip(offsets, values.shape):
        if abs(k) >= n:
            return out
        if k >= 0:
            src.append(slice(0, n - k))
            dst.append(slice(k, n))
        else:
            src.append(slice(-k, n))
            dst.append(slice(0, n + k))
    out[tuple(dst)] = values[tuple(src)]
    return out


def shift(u: SampledFunction, h) -> SampledFunction:
    """(S_h u)(x) = u(x - h) for grid-aligned h."""
    offsets = _index_offsets(u.grid, h)
    return SampledFunction(u.grid, shift_array(u.values, offsets))


def modulate(u: SampledFunction, omega) -> SampledFunction:
    """(Psi_omega u)(x) = exp(i<omega, x>) u(x)."""
    return SampledFunction(u.grid, u.grid.phase(omega)[..., None] * u.values)
