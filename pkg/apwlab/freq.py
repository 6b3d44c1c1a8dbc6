"""Exact labels on a finitely generated frequency module and its characters.

Frequencies are integer combinations a_1 w_1 + ... + a_m w_m of declared base
frequencies. Algebra code matches frequencies by their integer label only; the
real vector is recomputed on demand and never stored. When the generators are
rationally independent the compactification of the module is the torus T^m,
so characters are points theta in [0, 1)^m with <w_a, theta> = exp(2 pi i a.theta).
"""

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import AliasError, BasisMismatchError
from .logs import get_logger

logger = get_logger("apwlab.freq")


@dataclass(frozen=True, order=True)
class FreqLabel:
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(v) for v in self.coords))

    @classmethod
    def zero(cls, m: int) -> "FreqLabel":
        return cls((0,) * m)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __neg__(self) -> "FreqLabel":
        return FreqLabel(tuple(-v for v in self.coords))

    def __add__(self, other: "FreqLabel") -> "FreqLabel":
        return label_add(self, other)

    def __sub__(self, other: "FreqLabel") -> "FreqLabel":
        return label_add(self, -other)

    def max_abs(self) -> int:
        return max((abs(v) for v in self.coords), default=0)

    def l1(self) -> int:
        return sum(abs(v) for v in self.coords)

    def text(self) -> str:
        return ";".join(str(v) for v in self.coords)


@dataclass(frozen=True)
class FrequencyBasis:
    vectors: Tuple[Tuple[float, ...], ...]
    declared_independent: bool = True

    def __post_init__(self):
        vecs = tuple(tuple(float(x) for x in np.atleast_1d(v)) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if not 1 <= len(vecs) <= 3:
            raise ValueError(f"basis rank must be between 1 and 3, got {len(vecs)}")
        if len({len(v) for v in vecs}) != 1 or len(vecs[0]) not in (1, 2):
            raise ValueError("base frequencies must all be vectors in R^1 or R^2")
        arr = np.asarray(vecs)
        if np.any(np.linalg.norm(arr, axis=1) == 0):
            raise ValueError("base frequencies must be nonzero")
        if len(set(vecs)) != len(vecs):
            raise ValueError("base frequencies must be pairwise distinct")

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def c(self) -> int:
        return len(self.vectors[0])

    @property
    def matrix(self) -> np.ndarray:
        """m x c matrix whose rows are the base frequencies."""
        return np.asarray(self.vectors, dtype=float)

    def vector(self, label: FreqLabel) -> np.ndarray:
        if label.rank != self.rank:
            raise BasisMismatchError(f"label of rank {label.rank} used with a basis of rank {self.rank}")
        return np.asarray(label.coords, dtype=float) @ self.matrix


def label_add(a: FreqLabel, b: FreqLabel) -> FreqLabel:
    if a.rank != b.rank:
        raise BasisMismatchError(f"cannot add labels of rank {a.rank} and {b.rank}")
    return FreqLabel(tuple(x + y for x, y in zip(a.coords, b.coords)))


@dataclass(frozen=True)
class TorusPoint:
    theta: Tuple[float, ...]

    def __post_init__(self):
        theta = tuple(float(t) for t in np.atleast_1d(self.theta))
        if any(not (0.0 <= t < 1.0) for t in theta):
            raise ValueError(f"torus coordinates must lie in [0, 1), got {theta}")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def zero(cls, m: int) -> "TorusPoint":
        return cls((0.0,) * m)

    @classmethod
    def wrap(cls, theta: Sequence[float]) -> "TorusPoint":
        wrapped = []
        for t in np.atleast_1d(np.asarray(theta, dtype=float)):
            w = float(t % 1.0)
            wrapped.append(0.0 if w >= 1.0 else w)
        return cls(tuple(wrapped))

    @classmethod
    def from_shift(cls, basis: FrequencyBasis, h) -> "TorusPoint":
        """Image of the real shift h: theta_i = <w_i, h> / 2 pi mod 1."""
        h = np.atleast_1d(np.asarray(h, dtype=float))
        return cls.wrap(basis.matrix @ h / (2.0 * np.pi))

    @property
    def rank(self) -> int:
        return len(self.theta)


def character_eval(theta: TorusPoint, a: FreqLabel) -> complex:
    """exp(2 pi i a . theta)."""
    if theta.rank != a.rank:
        raise BasisMismatchError(f"torus point of rank {theta.rank} paired with label of rank {a.rank}")
    return complex(np.exp(2j * np.pi * float(np.dot(a.coords, theta.theta))))


def torus_grid(n: int, m: int) -> np.ndarray:
    """Uniform grid theta_j = j / n per axis; shape (n,)*m + (m,)."""
    axes = [np.arange(n) / n] * m
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


def haar_average(values: np.ndarray, a: FreqLabel) -> np.ndarray:
    """(1/N^m) sum_j exp(2 pi i a . theta_j) f(theta_j) over the full N^m torus grid.

    ``values`` has shape (N,)*m + block; the leading m axes index the grid.
    """
    m = a.rank
    values = np.asarray(values)
    n = values.shape[0]
    if values.shape[:m] != (n,) * m:
        raise ValueError(f"expected a full {n}^{m} torus grid, got shape {values.shape[:m]}")
    if any(2 * abs(v) >= n for v in a.coords):
        raise AliasError(a.coords, n)
    theta = torus_grid(n, m)
    weights = np.exp(2j * np.pi * np.tensordot(theta, np.asarray(a.coords, dtype=float), axes=1))
    return np.tensordot(weights, values, axes=m) / n**m


def window_labels(m: int, radius: int) -> List[FreqLabel]:
    """All labels with |a_i| <= radius, in lexicographic order."""
    return [FreqLabel(c) for c in product(range(-radius, radius + 1), repeat=m)]


@dataclass(frozen=True)
class InjectivityReport:
    window_radius: int
    tol: float
    min_gap: float
    worst_pair: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    passed: bool


def verify_injectivity(basis: FrequencyBasis, window_radius: int, tol: float = 1e-3) -> InjectivityReport:
    """Smallest |w_a - w_b| over distinct labels in the window; a sanity guard, not a proof."""
    if window_radius < 1:
        raise ValueError("window_radius must be at least 1")
    m = basis.rank
    diffs = np.array(list(product(range(-2 * window_radius, 2 * window_radius + 1), repeat=m)), dtype=float)
    diffs = diffs[np.any(diffs != 0, axis=1)]
    gaps = np.linalg.norm(diffs @ basis.matrix, axis=1)
    idx = int(np.argmin(gaps))
    gap = float(gaps[idx])
    d = diffs[idx].astype(int)
    # realise the difference as a pair inside the window
    first = tuple(int(np.clip(v, -window_radius, window_radius)) for v in d)
    second = tuple(int(x - y) for x, y in zip(first, d))
    report = InjectivityReport(window_radius, tol, gap, (first, second), gap > tol)
    if not report.passed:
        logger.warning("verify_injectivity: labels %s and %s are %.3g apart (tol %.3g)", first, second, gap, tol)
    return report
