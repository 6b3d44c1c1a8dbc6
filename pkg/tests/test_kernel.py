import numpy as np
import numpy.testing as npt
import pytest

from apwlab.errors import StepMismatchError
from apwlab.grid import Grid, SampledFunction, lp_seminorm
from apwlab.kernel import (
    add_kernels,
    apply_conv,
    convolve,
    delta_kernel,
    exp_one_sided,
    exp_resolvent_parameters,
    from_samples,
    gaussian,
    kernel_from_symbol,
    l1_norm,
    modulate_kernel,
    pad_kernel,
    raised_cosine,
    symbol,
    symbol_on_grid,
    truncate_kernel,
    xi_axes,
    zero_kernel,
)

FINE = 2.0**-8


def _random_kernel(rng, count=33, step=0.125, d=1):
    vals = rng.normal(size=(count, d, d)) + 1j * rng.normal(size=(count, d, d))
    return from_samples(vals, step)


def test_l1_of_zero_kernel():
    assert l1_norm(zero_kernel(0.5)) == 0.0


def test_l1_of_one_sided_exponential():
    g = exp_one_sided(0.5, 1.0, FINE, radius=30.0)
    assert l1_norm(g) == pytest.approx(0.5, abs=1e-3)
    assert g.l1 == pytest.approx(l1_norm(g), rel=1e-14)


def test_l1_of_gaussian():
    g = gaussian(0.3, 1.0, 2.0**-6, radius=12.0)
    assert l1_norm(g) == pytest.approx(0.3, abs=1e-6)


def test_analytic_kernels_record_small_tails():
    assert gaussian(0.3, 1.0, 2.0**-4).tail_bound <= 1e-8
    assert exp_one_sided(0.5, 1.0, 2.0**-5).tail_bound <= 1e-8
    assert raised_cosine(1.0, 2.0, 0.1).tail_bound == 0.0


def test_exp_one_sided_vanishes_left_of_origin():
    g = exp_one_sided(0.5, 1.0, 2.0**-5)
    x = g.grid.coords(0)
    assert np.all(g.values[x < 0] == 0)
    centre = g.values[x == 0][0, 0, 0]
    right = g.values[x > 0][0, 0, 0]
    assert centre.real == pytest.approx(0.5 * right.real / np.exp(-g.grid.step[0]), rel=1e-12)


def test_resolvent_parameters():
    assert exp_resolvent_parameters(0.5, 1.0) == (-0.5, 1.5)


def test_convolve_with_delta_is_identity(rng):
    g = _random_kernel(rng)
    out = convolve(g, delta_kernel(0.125))
    assert out.grid.count == (35,)
    npt.assert_allclose(out.values[1:-1], g.values, rtol=0, atol=1e-13 * np.abs(g.values).max())
    assert np.abs(out.values[[0, -1]]).max() <= 1e-13 * np.abs(g.values).max()


def test_convolve_obeys_young(rng):
    for _ in range(20):
        g = _random_kernel(rng, count=int(rng.integers(3, 40)) * 2 + 1)
        h = _random_kernel(rng, count=int(rng.integers(3, 40)) * 2 + 1)
        assert l1_norm(convolve(g, h)) <= l1_norm(g) * l1_norm(h) * (1 + 1e-10)


def test_convolve_matrix_kernels_keep_order(rng):
    g = _random_kernel(rng, count=9, d=2)
    h = _random_kernel(rng, count=7, d=2)
    out = convolve(g, h)
    expected = np.zeros((15, 2, 2), dtype=complex)
    for i in range(9):
        for j in range(7):
            expected[i + j] += g.values[i] @ h.values[j]
    npt.assert_allclose(out.values, expected * 0.125, rtol=0, atol=1e-12)


def test_convolve_of_exponentials_closed_form():
    g = exp_one_sided(1.0, 1.0, FINE, radius=30.0)
    gg = convolve(g, g)
    x = gg.grid.coords(0)
    sel = (x > 0) & (x <= 20.0)
    expected = x[sel] * np.exp(-x[sel])
    assert np.abs(gg.values[sel, 0, 0] - expected).max() <= 1e-4


def test_convolve_rejects_step_mismatch():
    with pytest.raises(StepMismatchError):
        convolve(zero_kernel(0.5), zero_kernel(0.25))


def test_apply_conv_zero_and_delta(rng):
    grid = Grid.from_half_width((0.125,), (4.0,))
    u = SampledFunction(grid, rng.normal(size=grid.count) + 1j * rng.normal(size=grid.count))
    assert lp_seminorm(apply_conv(zero_kernel(0.125), u), np.inf) == 0.0
    same = apply_conv(delta_kernel(0.125), u)
    assert np.allclose(same.values, u.values, atol=1e-13 * np.abs(u.values).max())


def test_apply_conv_matches_direct_quadrature(rng):
    step = 1.0 / 16
    grid = Grid.centered((step,), (256,))
    u = SampledFunction(grid, rng.normal(size=grid.count) + 1j * rng.normal(size=grid.count))
    g = gaussian(0.7 - 0.2j, 0.5, step)
    out = apply_conv(g, u)
    x = grid.coords(0)
    direct = np.zeros(256, dtype=complex)
    gx = g.grid.coords(0)
    for i in range(256):
        diff = np.rint((x[i] - x) / step).astype(int) + (g.grid.count[0] - 1) // 2
        ok = (diff >= 0) & (diff < g.grid.count[0])
        direct[i] = np.sum(g.values[diff[ok], 0, 0] * u.values[ok, 0]) * step
    assert gx[(g.grid.count[0] - 1) // 2] == 0.0
    assert np.abs(out.values[:, 0] - direct).max() <= 1e-10 * np.abs(direct).max()


def test_apply_conv_norm_bound(rng):
    grid = Grid.from_half_width((0.0625,), (6.0,))
    for _ in range(10):
        g = _random_kernel(rng, count=41, step=0.0625)
        u = SampledFunction(grid, rng.normal(size=grid.count) + 1j * rng.normal(size=grid.count))
        out = apply_conv(g, u)
        for p in (1, 2, np.inf):
            assert lp_seminorm(out, p) <= l1_norm(g) * lp_seminorm(u, p) * (1 + 1e-10)


def test_modulate_kernel():
    g = gaussian(1.0, 1.0, 0.125)
    assert modulate_kernel(g, 0.0) is g
    twisted = modulate_kernel(g, 1.7)
    assert l1_norm(twisted) == pytest.approx(l1_norm(g), rel=1e-12)
    back = modulate_kernel(modulate_kernel(g, 1.0), -0.3)
    assert np.allclose(back.values, modulate_kernel(g, 0.7).values, atol=1e-14)


def test_symbol_at_zero_is_mass(rng):
    g = _random_kernel(rng)
    expected = g.values.sum(axis=0) * g.grid.cell
    assert np.allclose(symbol(g, 0.0).value, expected, atol=1e-12)


def test_symbol_of_one_sided_exponential():
    g = exp_one_sided(0.5, 1.0, FINE)
    for xi in np.linspace(-8.0, 8.0, 17):
        value = symbol(g, xi).value[0, 0]
        assert abs(value - 0.5 / (1 + 1j * xi)) <= 1e-3


def test_symbol_is_bounded_by_l1(rng):
    g = _random_kernel(rng, d=2)
    for xi in rng.uniform(-20, 20, size=30):
        assert np.linalg.norm(symbol(g, xi).value, 2) <= l1_norm(g) + 1e-10


def test_convolution_theorem(rng):
    for _ in range(100):
        g = _random_kernel(rng, count=int(rng.integers(1, 20)) * 2 + 1, d=2)
        h = _random_kernel(rng, count=int(rng.integers(1, 20)) * 2 + 1, d=2)
        xi = rng.uniform(-10, 10)
        lhs = symbol(convolve(g, h), xi).value
        rhs = symbol(g, xi).value @ symbol(h, xi).value
        assert np.abs(lhs - rhs).max() <= 1e-8 * l1_norm(g) * l1_norm(h)


def test_modulation_shifts_symbol(rng):
    g = _random_kernel(rng)
    for xi in (-2.0, 0.3, 5.5):
        lhs = symbol(modulate_kernel(g, 1.25), xi).value
        rhs = symbol(g, xi + 1.25).value
        assert np.abs(lhs - rhs).max() <= 1e-10


def test_symbol_on_grid_matches_direct_symbol(rng):
    g = _random_kernel(rng, count=17, d=2)
    work = Grid.centered(g.step, (65,))
    table = symbol_on_grid(g, work, shift=(0.4,))
    axis = xi_axes(work)[0]
    for k in (0, 13, 32, 64):
        npt.assert_allclose(table[k], symbol(g, axis[k] + 0.4).value, rtol=0, atol=1e-12)


def test_kernel_from_symbol_inverts_symbol_on_grid(rng):
    g = _random_kernel(rng, count=17)
    work = Grid.centered(g.step, (41,))
    back = kernel_from_symbol(symbol_on_grid(g, work), work)
    npt.assert_allclose(back.values, pad_kernel(g, (41,)).values, rtol=0, atol=1e-12)


def test_truncate_kernel_reports_dropped_mass():
    g = raised_cosine(1.0, 2.0, 0.125)
    cut, dropped = truncate_kernel(g, 1.0)
    assert cut.grid.count == (17,)
    assert cut.l1 + dropped == pytest.approx(g.l1, rel=1e-12)
    assert cut.tail_bound == pytest.approx(dropped)
    same, none = truncate_kernel(g, 5.0)
    assert same is g and none == 0.0


def test_add_kernels_pads_to_common_grid():
    a = raised_cosine(1.0, 1.0, 0.125)
    b = raised_cosine(2.0, 2.0, 0.125)
    total = add_kernels([a, b], [1.0, -0.5])
    assert total.grid.count == b.grid.count
    assert np.allclose(total.values, pad_kernel(a, b.grid.count).values - 0.5 * b.values)
