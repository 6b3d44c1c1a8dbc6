"""Seeded smooth compactly supported test signals."""

from typing import List, Optional, Sequence

import numpy as np

from . import settings
from .grid import Grid, SampledFunction


def bump_profile(r: np.ndarray) -> np.ndarray:
    """exp(1 - 1 / (1 - r^2)) for r < 1 and 0 elsewhere; peak value 1 at r = 0."""
    r = np.asarray(r, dtype=float)
    inside = r < 1.0
    safe = np.where(inside, r, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe**2)), 0.0)


def bump_signal(grid: Grid, center: Sequence[float], radius: float, amplitude=1.0) -> SampledFunction:
    """amplitude * bump(|x - center| / radius); amplitude is a scalar or a C^d vector."""
    if not radius > 0:
        raise ValueError(f"bump radius must be positive, got {radius}")
    center = np.atleast_1d(np.asarray(center, dtype=float))
    amp = np.atleast_1d(np.asarray(amplitude, dtype=complex))
    r = np.linalg.norm(grid.points() - center, axis=-1) / radius
    return SampledFunction(grid, bump_profile(r)[..., None] * amp)


def random_bumps(grid: Grid, count: int, d: int = 1, seed: Optional[int] = None,
                 center_span: float = 1.0, radius_range=(0.5, 2.0)) -> List[SampledFunction]:
    """``count`` bumps with centers in [-center_span, center_span]^c and complex amplitudes."""
    rng = np.random.default_rng(settings.default_seed() if seed is None else seed)
    out = []
    for _ in range(count):
        center = rng.uniform(-center_span, center_span, size=grid.c)
        radius = rng.uniform(*radius_range)
        amp = rng.normal(size=d) + 1j * rng.normal(size=d)
        out.append(bump_signal(grid, center, radius, amp))
    return out


def signal_grid(step, support: float, reach: float, margin: float = 1.0) -> Grid:
    """Centered grid wide enough that an operator of kernel reach ``reach`` sees the whole support."""
    step = tuple(float(h) for h in np.atleast_1d(step))
    half = support + reach + margin
    return Grid.from_half_width(step, (half,) * len(step))
