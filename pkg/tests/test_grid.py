import numpy as np
import pytest

from apwlab.errors import GridAlignmentError, StepMismatchError
from apwlab.grid import Grid, SampledFunction, lp_seminorm, modulate, require_same_step, shift


def test_from_half_width_is_centered_and_odd():
    grid = Grid.from_half_width((0.25,), (2.0,))
    assert grid.count == (17,)
    assert grid.is_centered()
    assert grid.coords(0)[8] == 0.0


def test_lp_seminorm_examples():
    grid = Grid.from_half_width((2.0**-8,), (20.0,))
    assert lp_seminorm(SampledFunction.zeros(grid), 1) == 0.0
    assert lp_seminorm(SampledFunction.zeros(grid), np.inf) == 0.0

    one = SampledFunction(grid, np.ones(grid.count))
    assert lp_seminorm(one, np.inf) == 1.0

    decay = SampledFunction.from_callable(grid, lambda x: np.exp(-np.abs(x[..., 0])))
    assert lp_seminorm(decay, 1) == pytest.approx(2.0, abs=1e-3)


def test_lp_seminorm_is_homogeneous(rng):
    grid = Grid.from_half_width((0.1,), (5.0,))
    u = SampledFunction(grid, rng.normal(size=grid.count) + 1j * rng.normal(size=grid.count))
    for p in (1, 2, np.inf):
        assert lp_seminorm(u.scaled(-3.0 + 4.0j), p) == pytest.approx(5.0 * lp_seminorm(u, p), rel=1e-12)


def test_lp_seminorm_uses_euclidean_norm_for_vectors():
    grid = Grid.from_half_width((0.5,), (1.0,))
    vals = np.zeros(grid.count + (2,), dtype=complex)
    vals[..., 0] = 3.0
    vals[..., 1] = 4.0
    assert lp_seminorm(SampledFunction(grid, vals), np.inf) == pytest.approx(5.0)


def test_lp_seminorm_rejects_other_p():
    grid = Grid.from_half_width((0.5,), (1.0,))
    for p in (3, 1.5, 0, True):
        with pytest.raises(ValueError):
            lp_seminorm(SampledFunction.zeros(grid), p)


def test_shift_by_zero_is_identity(rng):
    grid = Grid.from_half_width((0.125,), (4.0,))
    u = SampledFunction(grid, rng.normal(size=grid.count))
    assert np.array_equal(shift(u, 0.0).values, u.values)


def test_shift_moves_a_delta():
    grid = Grid.from_half_width((0.5,), (5.0,))
    vals = np.zeros(grid.count)
    vals[10] = 1.0
    moved = shift(SampledFunction(grid, vals), 1.5)
    assert np.flatnonzero(moved.values[..., 0]).tolist() == [13]


def test_shift_group_law_on_interior(rng):
    grid = Grid.from_half_width((0.25,), (10.0,))
    vals = np.zeros(grid.count, dtype=complex)
    inner = np.abs(grid.coords(0)) <= 4.0
    vals[inner] = rng.normal(size=int(inner.sum()))
    u = SampledFunction(grid, vals)
    twice = shift(shift(u, 1.25), -2.5)
    once = shift(u, -1.25)
    assert np.array_equal(twice.values, once.values)


def test_shift_preserves_norm_of_interior_support(rng):
    grid = Grid.from_half_width((0.25,), (10.0,))
    vals = np.zeros(grid.count, dtype=complex)
    inner = np.abs(grid.coords(0)) <= 3.0
    vals[inner] = rng.normal(size=int(inner.sum()))
    u = SampledFunction(grid, vals)
    for p in (1, 2, np.inf):
        assert lp_seminorm(shift(u, 2.0), p) == pytest.approx(lp_seminorm(u, p), rel=1e-12)


def test_shift_rejects_misaligned_offset():
    grid = Grid.from_half_width((0.25,), (2.0,))
    with pytest.raises(GridAlignmentError) as excinfo:
        shift(SampledFunction.zeros(grid), 0.1)
    assert excinfo.value.details["axis"] == 0


def test_shift_in_two_dimensions():
    grid = Grid.from_half_width((0.5, 0.25), (2.0, 2.0))
    vals = np.zeros(grid.count)
    vals[4, 8] = 1.0
    moved = shift(SampledFunction(grid, vals), (1.0, -0.5))
    assert moved.values[6, 6, 0] == 1.0
    assert np.count_nonzero(moved.values) == 1


def test_modulate_by_zero_and_modulus(rng):
    grid = Grid.from_half_width((0.1,), (5.0,))
    u = SampledFunction(grid, rng.normal(size=grid.count) + 1j * rng.normal(size=grid.count))
    assert np.array_equal(modulate(u, 0.0).values, u.values)
    twisted = modulate(u, 2.7)
    assert np.allclose(np.abs(twisted.values), np.abs(u.values), rtol=1e-14)


def test_shift_and_modulate_commute_up_to_phase(rng):
    grid = Grid.from_half_width((0.125,), (8.0,))
    for _ in range(100):
        u = SampledFunction(grid, rng.normal(size=grid.count) + 1j * rng.normal(size=grid.count))
        k = int(rng.integers(-20, 21))
        h = k * grid.step[0]
        omega = float(rng.uniform(-5.0, 5.0))
        lhs = shift(modulate(u, omega), h).values
        rhs = np.exp(-1j * omega * h) * modulate(shift(u, h), omega).values
        scale = np.abs(u.values).max()
        assert np.abs(lhs - rhs).max() <= 1e-12 * scale


def test_require_same_step():
    a = Grid.from_half_width((0.25,), (1.0,))
    b = Grid.from_half_width((0.5,), (1.0,))
    require_same_step(a, Grid.from_half_width((0.25,), (3.0,)))
    with pytest.raises(StepMismatchError):
        require_same_step(a, b)
