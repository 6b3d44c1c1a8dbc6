import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from apwlab.algebra import ApwOperator  # noqa: E402
from apwlab.freq import FreqLabel, FrequencyBasis  # noqa: E402
from apwlab.kernel import exp_one_sided, gaussian  # noqa: E402

VOLTERRA_STEP = 2.0**-5
TWO_FREQ_STEP = 2.0**-4
SQRT2 = float(np.sqrt(2.0))


def volterra(gamma: float = 0.5, rate: float = 1.0, step: float = VOLTERRA_STEP) -> ApwOperator:
    """1 + G_g with g(y) = gamma exp(-rate y) on y >= 0, a single term at label 0."""
    basis = FrequencyBasis(((1.0,),))
    g = exp_one_sided(gamma, rate, step)
    return ApwOperator(basis, (step,), 1, 1.0, {FreqLabel((0,)): g})


def two_frequency(masses=(0.2, 0.2), widths=(1.0, 1.0), step: float = TWO_FREQ_STEP) -> ApwOperator:
    """1 + Psi_1 G_g + Psi_sqrt2 G_h on the basis (1, sqrt 2) with Gaussian g, h."""
    basis = FrequencyBasis(((1.0,), (SQRT2,)))
    terms = {
        FreqLabel((1, 0)): gaussian(masses[0], widths[0], step),
        FreqLabel((0, 1)): gaussian(masses[1], widths[1], step),
    }
    return ApwOperator(basis, (step,), 1, 1.0, terms)


@pytest.fixture
def volterra_op():
    return volterra()


@pytest.fixture
def two_freq_op():
    return two_frequency()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
