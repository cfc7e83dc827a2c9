"""Grids, wavefunctions, inner products, and the transform pair."""

import numpy as np
import pytest
from scipy.integrate import quad

from spectralqm import (
    MomentumAmplitudes,
    Wavefunction,
    expectation,
    from_momentum,
    gaussian_packet,
    inner,
    kinetic_op,
    make_grid,
    momentum_op,
    normalize,
    norm_squared,
    plane_wave,
    random_state,
    to_momentum,
)
from spectralqm.grids import momentum_density_norm


def test_grid_1d_spacing_and_wavenumber_order():
    grid = make_grid(1, 8, 16.0, -8.0)
    assert grid.spacing == (2.0,)
    assert grid.length[0] == grid.n[0] * grid.spacing[0]
    k = grid.axis_wavenumbers(0)
    expected = np.array([0, 1, 2, 3, -4, -3, -2, -1]) * (2 * np.pi / 16.0)
    np.testing.assert_allclose(k, expected, atol=1e-15)


def test_grid_wavenumber_spacing():
    grid = make_grid(1, 8, 8.0, 0.0)
    assert grid.k_spacing[0] == pytest.approx(2 * np.pi / 8.0, abs=1e-15)
    assert len(grid.axis_wavenumbers(0)) == grid.n[0]


def test_grid_2d_point_count():
    grid = make_grid(2, 4, 4.0, 0.0)
    assert grid.size == 16
    assert grid.spacing == (1.0, 1.0)


def test_grid_rejects_bad_parameters():
    with pytest.raises(ValueError):
        make_grid(1, 12, 10.0, 0.0)  # not a power of two
    with pytest.raises(ValueError):
        make_grid(1, 2, 10.0, 0.0)  # too small
    with pytest.raises(ValueError):
        make_grid(1, 8, -1.0, 0.0)
    with pytest.raises(ValueError):
        make_grid(3, 8, 10.0, 0.0)
    with pytest.raises(ValueError):
        make_grid(2, (8, 8, 8), 10.0, 0.0)


def test_derivative_wavenumbers_zero_nyquist():
    grid = make_grid(1, 16, 16.0, 0.0)
    k = grid.axis_derivative_wavenumbers(0)
    assert k[8] == 0.0
    assert k[1] == pytest.approx(2 * np.pi / 16.0)


@pytest.fixture
def wide_grid():
    return make_grid(1, 256, 40.0, -20.0)


def test_gaussian_packet_centered_moments(wide_grid):
    psi = gaussian_packet(wide_grid, 0.0, 0.0, 1.0)
    assert norm_squared(psi) == pytest.approx(1.0, abs=1e-12)
    x_mean = float(np.sum(wide_grid.meshes[0] * np.abs(psi.amps) ** 2) * wide_grid.cell_volume)
    assert x_mean == pytest.approx(0.0, abs=1e-12)
    assert expectation(momentum_op(wide_grid), psi) == pytest.approx(0.0, abs=1e-10)


def test_gaussian_packet_momentum(wide_grid):
    psi = gaussian_packet(wide_grid, 0.0, 2.0, 1.0)
    assert expectation(momentum_op(wide_grid), psi) == pytest.approx(2.0, abs=1e-10)


def test_gaussian_kinetic_energy_against_quadrature_oracle(wide_grid):
    # independent oracle: continuum integral (1/2m) int |psi'(x)|^2 dx for
    # psi ~ exp(-x^2/(4 s^2) + i p0 x), evaluated by adaptive quadrature
    p0, sigma = 2.0, 1.0
    norm_c = (2 * np.pi * sigma**2) ** -0.25

    def dpsi_abs2(x):
        env = norm_c * np.exp(-(x**2) / (4 * sigma**2))
        d_env = env * (-x / (2 * sigma**2))
        return d_env**2 + (p0 * env) ** 2

    oracle, err = quad(dpsi_abs2, -15 * sigma, 15 * sigma)
    oracle *= 0.5
    assert err < 1e-10
    assert oracle == pytest.approx(p0**2 / 2 + 1.0 / (8 * sigma**2), abs=1e-10)  # = 2.125
    psi = gaussian_packet(wide_grid, 0.0, p0, sigma)
    assert expectation(kinetic_op(wide_grid), psi) == pytest.approx(oracle, abs=1e-8)


def test_gaussian_packet_rejects_bad_sigma(wide_grid):
    with pytest.raises(ValueError):
        gaussian_packet(wide_grid, 0.0, 0.0, -1.0)


def test_gaussian_packet_warns_near_boundary(wide_grid):
    with pytest.warns(UserWarning):
        gaussian_packet(wide_grid, 18.0, 0.0, 1.0)


def test_plane_wave_momentum():
    grid = make_grid(1, 16, 16.0, 0.0)
    assert expectation(momentum_op(grid), plane_wave(grid, 4)) == pytest.approx(np.pi / 2, abs=1e-12)
    assert expectation(momentum_op(grid), plane_wave(grid, 0)) == pytest.approx(0.0, abs=1e-12)
    assert expectation(momentum_op(grid), plane_wave(grid, -4)) == pytest.approx(-np.pi / 2, abs=1e-12)
    assert norm_squared(plane_wave(grid, 3)) == pytest.approx(1.0, abs=1e-12)


def test_plane_wave_rejects_out_of_range():
    grid = make_grid(1, 16, 16.0, 0.0)
    with pytest.raises(ValueError):
        plane_wave(grid, 8)
    with pytest.raises(ValueError):
        plane_wave(grid, -9)


def test_inner_product_properties(wide_grid):
    psi = gaussian_packet(wide_grid, 0.0, 1.0, 1.0)
    assert inner(psi, psi) == pytest.approx(1.0, abs=1e-12)
    scaled = psi.with_amps(1j * psi.amps)
    assert inner(psi, scaled) == pytest.approx(1j, abs=1e-12)
    phi = gaussian_packet(wide_grid, 1.0, -0.5, 1.5)
    assert inner(psi, phi) == pytest.approx(np.conj(inner(phi, psi)), abs=1e-14)


def test_inner_orthogonal_plane_waves():
    grid = make_grid(1, 16, 16.0, 0.0)
    val = inner(plane_wave(grid, 1), plane_wave(grid, 2))
    assert abs(val) < 1e-12


def test_inner_rejects_grid_mismatch(wide_grid):
    other = make_grid(1, 128, 40.0, -20.0)
    with pytest.raises(ValueError):
        inner(gaussian_packet(wide_grid, 0, 0, 1.0), gaussian_packet(other, 0, 0, 1.0))


def test_transform_round_trip_and_parseval(wide_grid):
    rng = np.random.default_rng(11)
    for _ in range(20):
        psi = random_state(wide_grid, rng)
        phi = to_momentum(psi)
        assert abs(momentum_density_norm(phi) - norm_squared(psi)) < 1e-12
        back = from_momentum(phi)
        assert np.max(np.abs(back.amps - psi.amps)) < 1e-12


def test_parseval_many_random_states():
    grid = make_grid(1, 64, 10.0, -5.0)
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(1000):
        psi = random_state(grid, rng)
        worst = max(worst, abs(momentum_density_norm(to_momentum(psi)) - 1.0))
    assert worst < 1e-12


def test_transform_round_trip_2d():
    grid = make_grid(2, 32, (3.0, 5.0), (-1.5, -2.5))
    rng = np.random.default_rng(2)
    psi = random_state(grid, rng)
    phi = to_momentum(psi)
    assert abs(momentum_density_norm(phi) - 1.0) < 1e-12
    assert np.max(np.abs(from_momentum(phi).amps - psi.amps)) < 1e-12


def test_transform_linearity(wide_grid):
    rng = np.random.default_rng(3)
    psi, phi = random_state(wide_grid, rng), random_state(wide_grid, rng)
    a, b = 0.3 - 0.7j, 1.2 + 0.1j
    combo = psi.with_amps(a * psi.amps + b * phi.amps)
    lhs = to_momentum(combo).amps
    rhs = a * to_momentum(psi).amps + b * to_momentum(phi).amps
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_plane_wave_transform_concentrated():
    grid = make_grid(1, 64, 16.0, 0.0)
    phi = to_momentum(plane_wave(grid, 4))
    density = np.abs(phi.amps) ** 2 * grid.k_cell_volume
    assert density[4] == pytest.approx(1.0, abs=1e-12)
    off = np.delete(density, 4)
    assert np.max(off) < 1e-24


def test_gaussian_transform_width(wide_grid):
    # |Phi(k)|^2 is Gaussian with k-standard deviation 1/(2 sigma)
    sigma = 1.0
    phi = to_momentum(gaussian_packet(wide_grid, 0.0, 0.0, sigma))
    k = wide_grid.axis_wavenumbers(0)
    w = np.abs(phi.amps) ** 2
    k_var = float(np.sum(k**2 * w) / np.sum(w))
    assert np.sqrt(k_var) == pytest.approx(1.0 / (2 * sigma), rel=0.02)


def test_normalize_idempotent(wide_grid):
    rng = np.random.default_rng(9)
    psi = Wavefunction(wide_grid, rng.standard_normal(wide_grid.shape) + 0.5j)
    once = normalize(psi)
    twice = normalize(once)
    assert np.max(np.abs(twice.amps - once.amps)) < 1e-14


def test_normalize_scaling_invariance(wide_grid):
    # alpha * psi renormalized gives back the same physical state
    psi = gaussian_packet(wide_grid, 1.0, 0.5, 1.0)
    rescaled = normalize(psi.with_amps(3.7 * psi.amps))
    assert np.max(np.abs(rescaled.amps - psi.amps)) < 1e-12


def test_wavefunction_shape_mismatch_rejected(wide_grid):
    with pytest.raises(ValueError):
        Wavefunction(wide_grid, np.zeros(7, dtype=complex))


def test_momentum_amplitudes_preserve_units(wide_grid):
    psi = gaussian_packet(wide_grid, 0.0, 1.0, 1.0, hbar=2.0, mass=3.0)
    phi = to_momentum(psi)
    assert isinstance(phi, MomentumAmplitudes)
    back = from_momentum(phi)
    assert back.hbar == 2.0 and back.mass == 3.0
