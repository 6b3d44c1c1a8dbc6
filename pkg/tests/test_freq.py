import numpy as np
import pytest

from apwlab.errors import AliasError, BasisMismatchError
from apwlab.freq import (
    FreqLabel,
    FrequencyBasis,
    TorusPoint,
    character_eval,
    haar_average,
    label_add,
    torus_grid,
    verify_injectivity,
    window_labels,
)

from conftest import SQRT2


def test_label_add_examples():
    assert label_add(FreqLabel((1, 0)), FreqLabel((0, 1))) == FreqLabel((1, 1))
    assert label_add(FreqLabel((2, -1)), FreqLabel((-2, 1))) == FreqLabel((0, 0))
    assert FreqLabel((3, 1)) - FreqLabel((1, 1)) == FreqLabel((2, 0))


def test_label_add_rejects_rank_mismatch():
    with pytest.raises(BasisMismatchError):
        label_add(FreqLabel((1,)), FreqLabel((1, 0)))


def test_label_order_and_text():
    labels = sorted([FreqLabel((1, 0)), FreqLabel((-1, 2)), FreqLabel((0, 0))])
    assert labels[0] == FreqLabel((-1, 2))
    assert FreqLabel((-1, 2)).text() == "-1;2"
    assert FreqLabel((0, 0)).is_zero()
    assert FreqLabel((3, -4)).max_abs() == 4 and FreqLabel((3, -4)).l1() == 7


def test_basis_vector():
    basis = FrequencyBasis(((1.0,), (SQRT2,)))
    assert basis.vector(FreqLabel((1, 1)))[0] == pytest.approx(1 + SQRT2)
    with pytest.raises(BasisMismatchError):
        basis.vector(FreqLabel((1,)))


def test_basis_validation():
    with pytest.raises(ValueError):
        FrequencyBasis(((0.0,),))
    with pytest.raises(ValueError):
        FrequencyBasis(((1.0,), (1.0,)))
    with pytest.raises(ValueError):
        FrequencyBasis(tuple((float(k),) for k in range(1, 5)))


def test_character_is_a_homomorphism(rng):
    for _ in range(50):
        theta = TorusPoint(tuple(rng.uniform(0, 1, size=2)))
        a = FreqLabel(tuple(rng.integers(-6, 7, size=2)))
        b = FreqLabel(tuple(rng.integers(-6, 7, size=2)))
        lhs = character_eval(theta, label_add(a, b))
        rhs = character_eval(theta, a) * character_eval(theta, b)
        assert abs(lhs - rhs) <= 1e-12
        assert abs(abs(lhs) - 1.0) <= 1e-12


def test_character_at_zero_is_one():
    assert character_eval(TorusPoint.zero(2), FreqLabel((5, -3))) == 1.0


def test_torus_point_range():
    with pytest.raises(ValueError):
        TorusPoint((1.0,))
    assert TorusPoint.wrap((-0.25, 1.5)).theta == (0.75, 0.5)


def test_from_shift_matches_phase(rng):
    basis = FrequencyBasis(((1.0,), (SQRT2,)))
    for _ in range(20):
        h = rng.uniform(-10, 10)
        theta = TorusPoint.from_shift(basis, h)
        a = FreqLabel(tuple(rng.integers(-4, 5, size=2)))
        expected = np.exp(1j * basis.vector(a)[0] * h)
        assert abs(character_eval(theta, a) - expected) <= 1e-11


def test_haar_average_examples():
    n = 8
    theta = torus_grid(n, 2)
    ones = np.ones((n, n))
    assert haar_average(ones, FreqLabel((0, 0))) == pytest.approx(1.0)
    assert abs(haar_average(ones, FreqLabel((1, 0)))) <= 1e-14
    f = np.exp(-2j * np.pi * (2 * theta[..., 0] + theta[..., 1]))
    assert haar_average(f, FreqLabel((2, 1))) == pytest.approx(1.0)


@pytest.mark.parametrize("m", [1, 2])
def test_haar_average_orthogonality(m):
    n = 16
    theta = torus_grid(n, m)
    labels = window_labels(m, 7)
    for b in labels:
        f = np.exp(-2j * np.pi * np.tensordot(theta, np.asarray(b.coords, dtype=float), axes=1))
        for a in labels:
            expected = 1.0 if a == b else 0.0
            assert abs(haar_average(f, a) - expected) <= 1e-12


def test_haar_average_keeps_block_shape():
    values = np.ones((6, 2, 2))
    assert haar_average(values, FreqLabel((0,))).shape == (2, 2)


def test_haar_average_rejects_aliasing():
    with pytest.raises(AliasError):
        haar_average(np.ones((6, 6)), FreqLabel((3, 0)))


def test_window_labels():
    labels = window_labels(2, 1)
    assert len(labels) == 9
    assert labels == sorted(labels)
    assert FreqLabel((0, 0)) in labels


def test_injectivity_passes_for_irrational_pair():
    report = verify_injectivity(FrequencyBasis(((1.0,), (SQRT2,))), 6)
    assert report.passed
    assert report.min_gap > 1e-3


def test_injectivity_fails_for_rational_pair():
    report = verify_injectivity(FrequencyBasis(((1.0,), (0.5,))), 2)
    assert not report.passed
    assert report.min_gap == pytest.approx(0.0, abs=1e-15)
    first, second = report.worst_pair
    assert all(abs(v) <= 2 for v in first + second)
    diff = np.subtract(first, second) @ np.array([1.0, 0.5])
    assert abs(diff) <= 1e-15
