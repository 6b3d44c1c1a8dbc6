"""Inversion of lam + N.

Two independent routes are provided. ``invert_neumann`` sums the geometric
series when q = ||N|| / |lam| < 1. ``invert_fiber`` works in the Fourier domain:
under F(Psi_w G_g u)(xi) = g^(xi - w) u^(xi - w) the operator acts on the lattice
xi + w_a through the block matrix

    T(alpha, beta) = lam delta + exp(-2 pi i (alpha - beta) . theta) g^_{alpha - beta}(xi + w_beta)

and the central block column of T^{-1} holds the inverse's coefficients,
S(alpha, 0) = mu delta + m^_alpha(xi). Sampling xi on the DFT grid of a working
grid and transforming back per label recovers the kernels m_alpha exactly on that
grid. The torus route reads the same coefficients through a Haar average over
characters theta, which is how the coefficients are extracted in theory.
"""

import time
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from . import settings
from .algebra import (
    ApwOperator,
    add,
    apply,
    apw_norm,
    compose,
    from_terms,
    identity,
    scale,
    subtract,
    truncate_support,
    without_unit,
)
from .errors import (
    AliasError,
    BudgetError,
    NotApplicableError,
    SingularFiberError,
    WindowTooSmallError,
)
from .freq import FreqLabel, TorusPoint, haar_average, torus_grid, window_labels
from .grid import Grid, lp_seminorm
from .kernel import Kernel, common_count, kernel_from_symbol, symbol, symbol_on_grid, xi_points
from .logs import get_logger
from .parallel import chunk_ranges, indexed_map
from .signals import random_bumps, signal_grid

logger = get_logger("apwlab.invert")

_CHUNK = 256
_CHUNK_ENTRIES = 2_000_000


# ---- configuration and result types ----

@dataclass(frozen=True)
class FiberConfig:
    """Fiber sweep settings.

    ``window_radius`` None picks max|a_i| + 2 over the operator's labels and lets the
    window grow by 2 until the decay table is stable. ``xi_count`` None sizes the
    working grid as ``pad`` times the largest kernel radius; the xi grid is the DFT
    grid of the working grid, so it spans (-pi/step, pi/step).
    """

    window_radius: Optional[int] = None
    xi_count: Optional[int] = None
    torus_n: Optional[int] = None
    condition_cap: float = settings.CONDITION_CAP
    pad: float = settings.DEFAULT_PAD
    window_tol: float = 1e-6
    max_window_radius: int = 8
    check_window: bool = True
    singular_ratio: float = settings.SINGULAR_RATIO
    threads: Optional[int] = None

    def __post_init__(self):
        if self.window_radius is not None and self.window_radius < 1:
            raise ValueError(f"window_radius must be at least 1, got {self.window_radius}")
        if self.xi_count is not None and self.xi_count < 3:
            raise ValueError(f"xi_count must be at least 3, got {self.xi_count}")
        if not self.pad >= 1.0:
            raise ValueError(f"pad must be at least 1, got {self.pad}")
        if not self.condition_cap > 1.0:
            raise ValueError("condition_cap must exceed 1")

    def radius_for(self, A: ApwOperator) -> int:
        if self.window_radius is not None:
            return self.window_radius
        return A.max_label() + 2

    def torus_for(self, radius: int) -> int:
        n = self.torus_n if self.torus_n is not None else 2 * radius + 2
        if n <= 2 * radius:
            raise AliasError((radius,), n)
        return n


@dataclass(frozen=True, eq=False)
class InverseResult:
    operator: ApwOperator
    method: str
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    @property
    def mu(self) -> complex:
        return self.operator.lam

    @property
    def M(self) -> ApwOperator:
        return without_unit(self.operator)

    def decay(self) -> pd.DataFrame:
        return decay_table(self.operator)


@dataclass(frozen=True, eq=False)
class FiberMatrix:
    xi: Tuple[float, ...]
    theta: TorusPoint
    labels: Tuple[FreqLabel, ...]
    d: int
    entries: np.ndarray

    def index(self, label: FreqLabel) -> int:
        return self.labels.index(label)

    def block(self, alpha: FreqLabel, beta: FreqLabel) -> np.ndarray:
        i, j, d = self.index(alpha), self.index(beta), self.d
        return self.entries[i * d:(i + 1) * d, j * d:(j + 1) * d]

    def off_unit_row_sums(self, lam: complex) -> np.ndarray:
        """Gershgorin block-row sums of ||T(alpha, beta) - lam delta||_2."""
        W, d = len(self.labels), self.d
        blocks = (self.entries - lam * np.eye(W * d)).reshape(W, d, W, d).transpose(0, 2, 1, 3)
        return np.linalg.norm(blocks, ord=2, axis=(-2, -1)).sum(axis=1)


@dataclass(frozen=True, eq=False)
class Certificate:
    verdict: str
    sigma_min: float
    sigma_min_xi: Tuple[float, ...]
    max_condition: float
    threshold: float
    xi_count: int
    xi_range: Tuple[float, ...]
    window_radius: int
    sigma_per_xi: np.ndarray

    @property
    def invertible(self) -> bool:
        return self.verdict == "evidence-invertible"

    def text(self) -> str:
        lines = [
            f"verdict: {self.verdict}",
            f"sigma_min: {self.sigma_min!r}",
            f"sigma_min_xi: {list(self.sigma_min_xi)}",
            f"max_condition: {self.max_condition!r}",
            f"threshold: {self.threshold!r}",
            f"xi_count: {self.xi_count}",
            f"xi_range: {list(self.xi_range)}",
            f"window_radius: {self.window_radius}",
            "theta_sweep: skipped; fibers at theta are unitarily conjugate to theta = 0, "
            "so singular values do not depend on theta",
            "note: sampled evidence over a finite xi grid, not a proof of invertibility",
        ]
        return "\n".join(lines) + "\n"


# ---- Neumann series ----

def neumann_tail(q: float, lam_abs: float, terms: int) -> float:
    """Norm bound |lam|^{-1} q^{J+1} / (1 - q) on the series tail after j = 0..J."""
    return q ** (terms + 1) / ((1.0 - q) * lam_abs)


def neumann_terms(q: float, lam_abs: float, tol: float) -> int:
    """Smallest J >= 0 with neumann_tail(q, |lam|, J) <= tol."""
    if not 0.0 <= q < 1.0:
        raise NotApplicableError(f"Neumann series needs 0 <= q < 1, got q={q:.6g}")
    if q == 0.0:
        return 0
    J = 0
    bound = neumann_tail(q, lam_abs, 0)
    while bound > tol:
        J += 1
        bound *= q
    return J


def working_grid(A: ApwOperator, config: Optional[FiberConfig] = None) -> Grid:
    config = config or FiberConfig()
    floor = common_count(list(A.terms.values())) if A.terms else (3,) * A.c
    if config.xi_count is not None:
        n = config.xi_count + (1 - config.xi_count % 2)
        counts = tuple(max(n, f) for f in floor)
        return Grid.centered(A.step, counts)
    half = config.pad * A.max_radius()
    grid = Grid.from_half_width(A.step, (half,) * A.c)
    counts = tuple(max(n, f) for n, f in zip(grid.count, floor))
    return Grid.centered(A.step, counts)


def invert_neumann(A: ApwOperator, tol: float = 1e-8, max_terms: int = 200,
                   pad: float = settings.DEFAULT_PAD, threads: Optional[int] = None) -> InverseResult:
    """(lam + N)^{-1} = lam^{-1} sum_{j=0}^{J} (-N / lam)^j with products re-truncated to the working radius."""
    started = time.perf_counter()
    if A.lam == 0:
        raise NotApplicableError("the unit part is zero; lam + N has no Neumann expansion")
    lam_abs = abs(A.lam)
    q = apw_norm(A).off_unit / lam_abs
    if q >= 1.0:
        raise NotApplicableError(f"q={q:.6g} >= 1: the Neumann series does not converge, use invert_fiber")
    J = neumann_terms(q, lam_abs, tol)
    if J > max_terms:
        achievable = neumann_tail(q, lam_abs, max_terms)
        raise BudgetError(f"{J} terms needed for tol={tol:g}, max_terms={max_terms}", achievable)

    mu = 1.0 / A.lam
    radius = working_grid(A, FiberConfig(pad=pad)).half_width
    ratio = scale(-mu, without_unit(A))
    term = scale(mu, identity(A.basis, A.step, A.d))
    total = term
    for j in range(1, J + 1):
        term = truncate_support(compose(ratio, term, threads=threads), radius)
        total = add(total, term)
        logger.debug("invert_neumann: j=%s labels=%s term_norm=%.3g", j, len(term.terms), apw_norm(term).total)

    bound = neumann_tail(q, lam_abs, J)
    diagnostics = {
        "method": "neumann",
        "q": q,
        "terms": J,
        "tail_bound": bound,
        "truncation_slack": total.slack,
        "working_radius": list(radius),
        "wall_time": time.perf_counter() - started,
    }
    logger.info("invert_neumann: q=%.4g terms=%s tail_bound=%.3g labels=%s", q, J, bound, len(total.terms))
    return InverseResult(total, "neumann", MappingProxyType(diagnostics))


# ---- fibers ----

def _couplings(A: ApwOperator, labels: Sequence[FreqLabel]) -> List[Tuple[int, int, FreqLabel]]:
    """(row, column, term label) for every nonzero block T(beta + nu, beta) inside the window."""
    index = {label: i for i, label in enumerate(labels)}
    out = []
    for j, beta in enumerate(labels):
        for nu in A.terms:
            i = index.get(beta + nu)
            if i is not None:
                out.append((i, j, nu))
    return out


def _phases(A: ApwOperator, theta: Optional[TorusPoint]) -> Dict[FreqLabel, complex]:
    if theta is None or not any(theta.theta):
        return {nu: 1.0 + 0j for nu in A.terms}
    return {nu: complex(np.exp(-2j * np.pi * float(np.dot(nu.coords, theta.theta)))) for nu in A.terms}


def build_fiber(A: ApwOperator, xi, theta: Optional[TorusPoint] = None,
                window_radius: Optional[int] = None) -> FiberMatrix:
    """The truncated lattice matrix at base frequency xi and character theta."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    theta = theta if theta is not None else TorusPoint.zero(A.m)
    R = window_radius if window_radius is not None else A.max_label() + 2
    labels = tuple(window_labels(A.m, R))
    W, d = len(labels), A.d
    T = np.zeros((W, d, W, d), dtype=complex)
    for i in range(W):
        T[i, :, i, :] += A.lam * np.eye(d)
    phases = _phases(A, theta)
    memo: Dict[Tuple[FreqLabel, int], np.ndarray] = {}
    for i, j, nu in _couplings(A, labels):
        key = (nu, j)
        if key not in memo:
            memo[key] = symbol(A.terms[nu], xi + A.vector(labels[j])).value
        T[i, :, j, :] += phases[nu] * memo[key]
    return FiberMatrix(tuple(float(v) for v in xi), theta, labels, d, T.reshape(W * d, W * d))


class _FiberSweep:
    """All fibers of A at theta = 0 over the DFT grid of ``work``, assembled chunk by chunk."""

    def __init__(self, A: ApwOperator, work: Grid, window_radius: int):
        self.A = A
        self.work = work
        self.radius = window_radius
        self.labels = tuple(window_labels(A.m, window_radius))
        self.center = self.labels.index(FreqLabel.zero(A.m))
        self.couplings = _couplings(A, self.labels)
        self.count = work.size
        d = A.d
        self.symbols: Dict[Tuple[FreqLabel, int], np.ndarray] = {}
        for _, j, nu in self.couplings:
            if (nu, j) not in self.symbols:
                vals = symbol_on_grid(A.terms[nu], work, A.vector(self.labels[j]))
                self.symbols[(nu, j)] = vals.reshape(self.count, d, d)

    def xi(self) -> np.ndarray:
        return xi_points(self.work).reshape(self.count, self.work.c)

    def assemble(self, idx: range) -> np.ndarray:
        W, d = len(self.labels), self.A.d
        sl = slice(idx.start, idx.stop)
        T = np.zeros((len(idx), W, d, W, d), dtype=complex)
        for i in range(W):
            T[:, i, :, i, :] += self.A.lam * np.eye(d)
        for i, j, nu in self.couplings:
            T[:, i, :, j, :] += self.symbols[(nu, j)][sl]
        return T.reshape(len(idx), W * d, W * d)

    def run(self, threads: Optional[int], solve: bool, spectrum: bool):
        """Central columns (count, W, d, d) and/or singular-value extremes, in xi order."""
        W, d = len(self.labels), self.A.d
        rhs = np.zeros((W * d, d), dtype=complex)
        rhs[self.center * d:(self.center + 1) * d, :] = np.eye(d)
        workers = threads or settings.threads()
        per_chunk = max(1, min(_CHUNK, _CHUNK_ENTRIES // (W * d) ** 2))
        chunks = chunk_ranges(self.count, max(workers, -(-self.count // per_chunk)))

        def task(idx: range):
            T = self.assemble(idx)
            col = smin = smax = None
            if solve:
                col = np.linalg.solve(T, np.broadcast_to(rhs, (len(idx),) + rhs.shape)).reshape(len(idx), W, d, d)
            if spectrum:
                s = np.linalg.svd(T, compute_uv=False)
                smin, smax = s[:, -1], s[:, 0]
            return col, smin, smax

        parts = indexed_map(task, chunks, threads=workers)
        col = np.concatenate([p[0] for p in parts]) if solve else None
        smin = np.concatenate([p[1] for p in parts]) if spectrum else None
        smax = np.concatenate([p[2] for p in parts]) if spectrum else None
        return col, smin, smax

    def coefficients(self, col: np.ndarray, mu: complex) -> Dict[FreqLabel, Kernel]:
        d = self.A.d
        out: Dict[FreqLabel, Kernel] = {}
        for i, alpha in enumerate(self.labels):
            hat = col[:, i].copy()
            if i == self.center:
                hat -= mu * np.eye(d)
            out[alpha] = kernel_from_symbol(hat.reshape(self.work.count + (d, d)), self.work, {"kind": "fiber-inverse"})
        return out


def _window_drift(narrow: Mapping[FreqLabel, Kernel], wide: Mapping[FreqLabel, Kernel]) -> float:
    per_label = max(abs(k.l1 - wide[label].l1) for label, k in narrow.items())
    total_narrow = float(np.sum(np.sort([k.l1 for k in narrow.values()])))
    total_wide = float(np.sum(np.sort([k.l1 for k in wide.values()])))
    return max(per_label, abs(total_narrow - total_wide))


def certify_invertibility(A: ApwOperator, config: Optional[FiberConfig] = None) -> Certificate:
    """Smallest singular value of the fibers over the xi grid at theta = 0; evidence, not proof."""
    config = config or FiberConfig()
    work = working_grid(A, config)
    R = config.radius_for(A)
    sweep = _FiberSweep(A, work, R)
    _, smin, smax = sweep.run(config.threads, solve=False, spectrum=True)
    threshold = config.singular_ratio * apw_norm(A).total
    k = int(np.argmin(smin))
    cond = smax / np.maximum(smin, np.finfo(float).tiny)
    verdict = "evidence-invertible" if smin[k] > threshold else "evidence-singular"
    cert = Certificate(
        verdict=verdict,
        sigma_min=float(smin[k]),
        sigma_min_xi=tuple(float(v) for v in sweep.xi()[k]),
        max_condition=float(np.max(cond)),
        threshold=threshold,
        xi_count=sweep.count,
        xi_range=tuple(np.pi / h for h in work.step),
        window_radius=R,
        sigma_per_xi=smin,
    )
    logger.info("certify_invertibility: verdict=%s sigma_min=%.3g xi=%s", verdict, cert.sigma_min, cert.sigma_min_xi)
    return cert


def invert_fiber(A: ApwOperator, config: Optional[FiberConfig] = None) -> InverseResult:
    started = time.perf_counter()
    config = config or FiberConfig()
    if A.lam == 0:
        raise NotApplicableError("the unit part is zero; the inverse has no unit coefficient 1/lam")
    mu = 1.0 / A.lam
    work = working_grid(A, config)
    auto = config.window_radius is None
    R = config.radius_for(A)
    scale_ = apw_norm(A).total

    sweep = _FiberSweep(A, work, R)
    col, smin, smax = sweep.run(config.threads, solve=True, spectrum=True)
    xi = sweep.xi()
    k = int(np.argmin(smin))
    if smin[k] < config.singular_ratio * scale_:
        raise SingularFiberError(f"fiber is numerically singular: sigma_min={smin[k]:.3g}", xi[k])
    cond = smax / smin
    kc = int(np.argmax(cond))
    if cond[kc] > config.condition_cap:
        raise SingularFiberError(
            f"fiber condition number {cond[kc]:.3g} exceeds cap {config.condition_cap:.3g}", xi[kc]
        )
    near_critical = bool(smin[k] < settings.NEAR_CRITICAL_RATIO * scale_)
    window_tol = config.window_tol
    if near_critical:
        window_tol *= 10.0
        logger.warning(
            "invert_fiber: NEAR-CRITICAL operator, sigma_min=%.3g at xi=%s; window tolerance widened to %.3g",
            smin[k], xi[k], window_tol,
        )

    coeffs = sweep.coefficients(col, mu)
    drift = None
    if config.check_window:
        while True:
            wider = _FiberSweep(A, work, R + 2)
            wide_col, _, _ = wider.run(config.threads, solve=True, spectrum=False)
            wide_coeffs = wider.coefficients(wide_col, mu)
            drift = _window_drift(coeffs, wide_coeffs)
            logger.debug("invert_fiber: window=%s drift=%.3g", R, drift)
            if drift < window_tol:
                break
            if auto and R + 2 <= config.max_window_radius:
                R += 2
                coeffs = wide_coeffs
                continue
            raise WindowTooSmallError(
                f"decay table did not stabilise: drift {drift:.3g} >= {window_tol:.3g} at window {R}", drift, R
            )

    operator = from_terms(A.basis, A.step, A.d, mu, coeffs)
    diagnostics = {
        "method": "fiber",
        "window_radius": R,
        "window_drift": drift,
        "xi_count": sweep.count,
        "working_count": list(work.count),
        "sigma_min": float(smin[k]),
        "sigma_min_xi": [float(v) for v in xi[k]],
        "max_condition": float(cond[kc]),
        "near_critical": near_critical,
        "wall_time": time.perf_counter() - started,
    }
    logger.info(
        "invert_fiber: xi_count=%s window=%s drift=%s labels=%s", sweep.count, R, drift, len(operator.terms)
    )
    return InverseResult(operator, "fiber", MappingProxyType(diagnostics))


def invert(A: ApwOperator, method: str = "auto", tol: float = 1e-8, config: Optional[FiberConfig] = None,
           max_terms: int = 200) -> InverseResult:
    """Dispatch on ``method``; auto takes the Neumann series when q < 0.9 and fibers otherwise."""
    config = config or FiberConfig()
    if method == "auto":
        q = apw_norm(A).off_unit / abs(A.lam) if A.lam != 0 else np.inf
        method = "neumann" if q < 0.9 else "fiber"
        logger.info("invert: auto selected method=%s (q=%.4g)", method, q)
    if method == "neumann":
        return invert_neumann(A, tol=tol, max_terms=max_terms, pad=config.pad, threads=config.threads)
    if method == "fiber":
        return invert_fiber(A, config)
    raise ValueError(f"unknown inversion method '{method}'")


# ---- the torus route ----

@dataclass(frozen=True, eq=False)
class TorusFiberSet:
    """Central block columns S_theta(alpha, 0) of the inverted fibers over the full N^m theta grid."""

    xi: Tuple[float, ...]
    labels: Tuple[FreqLabel, ...]
    torus_n: int
    columns: np.ndarray

    @property
    def m(self) -> int:
        return self.labels[0].rank

    def generating_values(self) -> np.ndarray:
        """f(theta) = sum_alpha S_theta(alpha, 0); shape (N,)*m + (d, d)."""
        return self.columns.sum(axis=self.m)

    def direct_coefficient(self, a: FreqLabel) -> np.ndarray:
        return self.columns[(0,) * self.m + (self.labels.index(a),)]


def torus_inverse_fibers(A: ApwOperator, xi, window_radius: Optional[int] = None,
                         torus_n: Optional[int] = None, threads: Optional[int] = None) -> TorusFiberSet:
    config = FiberConfig(window_radius=window_radius, torus_n=torus_n)
    R = config.radius_for(A)
    N = config.torus_for(R)
    thetas = torus_grid(N, A.m).reshape(-1, A.m)
    d = A.d

    def task(theta_row) -> np.ndarray:
        fiber = build_fiber(A, xi, TorusPoint(tuple(theta_row)), R)
        W = len(fiber.labels)
        rhs = np.zeros((W * d, d), dtype=complex)
        center = fiber.index(FreqLabel.zero(A.m))
        rhs[center * d:(center + 1) * d] = np.eye(d)
        return np.linalg.solve(fiber.entries, rhs).reshape(W, d, d)

    cols = indexed_map(task, list(thetas), threads=threads)
    labels = tuple(window_labels(A.m, R))
    columns = np.stack(cols).reshape((N,) * A.m + (len(labels), d, d))
    xi = tuple(float(v) for v in np.atleast_1d(xi))
    return TorusFiberSet(xi, labels, N, columns)


def direct_coefficient(fibers: TorusFiberSet, a: FreqLabel) -> np.ndarray:
    """S_0(a, 0), read straight off the theta = 0 fiber."""
    return fibers.direct_coefficient(a)


def extract_coefficient_bohr(fibers: TorusFiberSet, a: FreqLabel) -> np.ndarray:
    """Haar average of exp(2 pi i a . theta) f(theta) over the theta grid; equals S_0(a, 0)."""
    return haar_average(fibers.generating_values(), a)


# ---- verification ----

@dataclass(frozen=True)
class VerifyTolerances:
    algebraic: float = 1e-6
    application: float = 1e-4
    signals: int = 10
    seed: Optional[int] = None
    center_span: float = 2.0
    radius_range: Tuple[float, float] = (0.5, 2.0)


@dataclass(frozen=True)
class ResidualRow:
    kind: str
    p: str
    value: float
    passed: bool


@dataclass(frozen=True)
class ResidualReport:
    rows: Tuple[ResidualRow, ...]
    seed: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def value(self, kind: str, p: str = "") -> float:
        for r in self.rows:
            if r.kind == kind and r.p == p:
                return r.value
        raise KeyError((kind, p))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"kind": r.kind, "p": r.p, "value": r.value, "passed": r.passed} for r in self.rows],
            columns=["kind", "p", "value", "passed"],
        )


def verify_inverse(A: ApwOperator, result: Union[InverseResult, ApwOperator],
                   tolerances: Optional[VerifyTolerances] = None) -> ResidualReport:
    """Algebraic residuals in the APW norm and application residuals in L_1, L_2 and L_inf."""
    tol = tolerances or VerifyTolerances()
    inverse = result.operator if isinstance(result, InverseResult) else result
    one = identity(A.basis, A.step, A.d)
    rows: List[ResidualRow] = []
    for kind, product in (("algebraic_right", compose(A, inverse)), ("algebraic_left", compose(inverse, A))):
        diff = subtract(product, one)
        value = apw_norm(diff).total
        rows.append(ResidualRow(kind, "", value, value <= tol.algebraic + diff.slack))

    seed = settings.default_seed() if tol.seed is None else tol.seed
    grid = signal_grid(A.step, tol.center_span + tol.radius_range[1], A.max_radius())
    bumps = random_bumps(grid, tol.signals, A.d, seed, tol.center_span, tol.radius_range)
    worst = {1: 0.0, 2: 0.0, np.inf: 0.0}
    for u in bumps:
        back = apply(inverse, apply(A, u))
        err = back - u
        for p in worst:
            worst[p] = max(worst[p], lp_seminorm(err, p) / lp_seminorm(u, p))
    for p, value in worst.items():
        name = "inf" if p == np.inf else str(p)
        rows.append(ResidualRow("application", name, value, value <= tol.application))
    report = ResidualReport(tuple(rows), seed)
    logger.info("verify_inverse: passed=%s worst=%.3g", report.passed, max(r.value for r in rows))
    return report


# ---- decay tables ----

def decay_table(op: ApwOperator) -> pd.DataFrame:
    """Per-label L1 norms sorted by decreasing size with their running sum."""
    rows = sorted(((k.l1, label) for label, k in op.terms.items()), key=lambda t: (-t[0], t[1]))
    frame = pd.DataFrame(
        {"label": [label.text() for _, label in rows], "l1_norm": [v for v, _ in rows]},
        columns=["label", "l1_norm"],
    )
    frame["cumulative"] = frame["l1_norm"].cumsum()
    return frame
