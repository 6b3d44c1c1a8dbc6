"""apwlab: almost-periodic integral operators lam + sum_w exp(i<w, x>) int g_w(x - y) u(y) dy.

The package keeps the operators' Fourier coefficients as convolution kernels on
uniform grids, implements the algebra (sum, product, shifts, characters) exactly
on those coefficients, and inverts lam + N by a Neumann series or by frequency
lattice fibers with an a-posteriori window check.
"""

__version__ = "0.1.0"

from .algebra import (
    ApwNormBreakdown,
    ApwOperator,
    add,
    apply,
    apw_norm,
    compose,
    conjugate_shift,
    evaluate_character,
    identity,
    kernel_of,
    scale,
    subtract,
    zero,
)
from .errors import ApwError
from .freq import (
    FreqLabel,
    FrequencyBasis,
    TorusPoint,
    character_eval,
    haar_average,
    label_add,
    verify_injectivity,
)
from .grid import Grid, SampledFunction, lp_seminorm, modulate, shift
from .invert import (
    FiberConfig,
    InverseResult,
    build_fiber,
    certify_invertibility,
    extract_coefficient_bohr,
    invert,
    invert_fiber,
    invert_neumann,
    verify_inverse,
)
from .kernel import Kernel, apply_conv, convolve, l1_norm, modulate_kernel, symbol

__all__ = [
    "ApwError",
    "ApwNormBreakdown",
    "ApwOperator",
    "FiberConfig",
    "FreqLabel",
    "FrequencyBasis",
    "Grid",
    "InverseResult",
    "Kernel",
    "SampledFunction",
    "TorusPoint",
    "add",
    "apply",
    "apply_conv",
    "apw_norm",
    "build_fiber",
    "certify_invertibility",
    "character_eval",
    "compose",
    "conjugate_shift",
    "convolve",
    "evaluate_character",
    "extract_coefficient_bohr",
    "haar_average",
    "identity",
    "invert",
    "invert_fiber",
    "invert_neumann",
    "kernel_of",
    "l1_norm",
    "label_add",
    "lp_seminorm",
    "modulate",
    "modulate_kernel",
    "scale",
    "shift",
    "subtract",
    "symbol",
    "verify_injectivity",
    "verify_inverse",
    "zero",
]
