"""Acceptance criteria: every headline guarantee at its stated tolerance.

Each test prints one `ACCEPTANCE <nn> <name>: ...` line (run pytest with -s
to see them inline).  Tolerances here are pinned; they are the contract.
"""

import json
import time

import numpy as np
import pytest

from spectralqm import (
    check_antihermitian_exponential,
    check_commutant_uniqueness,
    check_commutator_system,
    check_ehrenfest_force,
    check_ehrenfest_velocity,
    check_normalization,
    check_parseval_momentum,
    gaussian_packet,
    hamiltonian,
    make_grid,
    normalize,
    random_state,
    reference_two_slit_config,
    run_diffraction,
    spectrum,
    split_step,
    to_dense,
)
from spectralqm.checks import (
    check_evolution_operator,
    check_field_energy_parseval,
    random_smooth_fields,
)
from spectralqm.cli import main as cli_main


def report(num, name, value, bound, passed, unit="residual"):
    status = "PASS" if passed else "FAIL"
    print(f"\nACCEPTANCE {num:02d} {name}: {unit}={value:.3e} bound={bound:.1e} {status}",
          flush=True)
    assert passed, f"criterion {num} ({name}): {value} vs {bound}"


@pytest.fixture(scope="module")
def harmonic_period_trajectory():
    grid = make_grid(1, 256, 20.0, -10.0)
    x = grid.axis_points(0)
    psi0 = gaussian_packet(grid, 1.0, 0.0, np.sqrt(0.5))
    return split_step(psi0, 0.5 * x**2, 1.0, 1.0, 1e-3, 6290, 10,
                      force_samples=[-x], store_states=False)


def test_criterion_01_norm_conservation():
    grid = make_grid(1, 256, 20.0, -10.0)
    x = grid.axis_points(0)
    psi0 = gaussian_packet(grid, 1.0, 0.0, np.sqrt(0.5))
    started = time.perf_counter()
    traj = split_step(psi0, 0.5 * x**2, 1.0, 1.0, 1e-3, 10000, 100,
                      force_samples=[-x], store_states=False)
    elapsed = time.perf_counter() - started
    residual = check_normalization(traj).residual
    assert elapsed <= 10.0, f"norm run took {elapsed:.1f}s"
    report(1, "norm conservation over 1e4 steps", residual, 1e-10, residual <= 1e-10)


def test_criterion_02_parseval_momentum():
    grid = make_grid(1, 256, 20.0, -10.0)
    rng = np.random.default_rng(2)
    worst = max(
        check_parseval_momentum(random_state(grid, rng)).residual for _ in range(100)
    )
    report(2, "momentum via spectrum equals operator route", worst, 1e-10, worst <= 1e-10)


def test_criterion_03_ehrenfest_laws(harmonic_period_trajectory):
    v = check_ehrenfest_velocity(harmonic_period_trajectory).residual
    f = check_ehrenfest_force(harmonic_period_trajectory).residual
    grid = make_grid(1, 256, 20.0, -10.0)
    x = grid.axis_points(0)
    quartic = split_step(
        gaussian_packet(grid, 1.0, 0.0, 0.5), 0.25 * x**4, 1.0, 1.0, 1e-3, 6290, 10,
        force_samples=[-(x**3)], store_states=False,
    )
    vq = check_ehrenfest_velocity(quartic).residual
    fq = check_ehrenfest_force(quartic).residual
    worst_harmonic = max(v, f)
    worst_quartic = max(vq, fq)
    ok = worst_harmonic <= 1e-5 and worst_quartic <= 1e-4
    report(3, "velocity/force laws (harmonic<=1e-5, quartic<=1e-4)",
           max(worst_harmonic, worst_quartic), 1e-4, ok)


def test_criterion_04_classical_limit(harmonic_period_trajectory):
    traj = harmonic_period_trajectory
    err = float(np.max(np.abs(traj.x_mean[:, 0] - np.cos(traj.times))))
    report(4, "mean position tracks cos(t) on quadratic potential", err, 1e-4, err <= 1e-4)


def test_criterion_05_commutator_system():
    grid = make_grid(1, 256, 40.0, -20.0)
    x = grid.axis_points(0)
    states = [
        gaussian_packet(grid, c, p, 1.0)
        for c, p in zip(np.linspace(-2, 2, 5), np.linspace(-1, 1, 5))
    ]
    rep = check_commutator_system(grid, 0.5 * x**2, 1.0, 1.0, states, force_samples=-x)
    report(5, "generator commutator equations, 5 interior states",
           rep.residual, 1e-6, rep.residual <= 1e-6)


def test_criterion_06_commutant_uniqueness():
    started = time.perf_counter()
    worst = max(check_commutant_uniqueness(n).residual for n in (8, 16))
    elapsed = time.perf_counter() - started
    assert elapsed <= 5.0, f"commutant computation took {elapsed:.1f}s"
    report(6, "joint commutant of x and p is exactly the scalars",
           worst, 1e-8, worst <= 1e-8)


def test_criterion_07_antihermitian_exponentials():
    rep = check_antihermitian_exponential(16, 100, seed=7)
    control = check_antihermitian_exponential(16, 10, seed=7, hermitian_control=True)
    ok = rep.residual <= 1e-10 and not control.passed
    report(7, "anti-Hermitian generators exponentiate to unitaries",
           rep.residual, 1e-10, ok)


def test_criterion_08_evolution_operator_laws():
    reports = {r.name: r for r in check_evolution_operator(32)}
    bounds = {
        "evolution-unitarity": 1e-9,
        "evolution-composition": 1e-10,
        "generator-constant": 1e-6,
        "generator-driven": 1e-4,
        "generator-hermiticity": 1e-6,
    }
    ok = all(reports[k].residual <= v for k, v in bounds.items())
    worst = max(reports[k].residual / v for k, v in bounds.items())
    report(8, "two-time evolution operator laws and generator recovery",
           worst, 1.0, ok, unit="worst residual/bound")


def test_criterion_09_harmonic_spectrum():
    started = time.perf_counter()
    grid = make_grid(1, 256, 20.0, -10.0)
    x = grid.axis_points(0)
    pairs = spectrum(to_dense(hamiltonian(grid, 0.5 * x**2)), 5)
    elapsed = time.perf_counter() - started
    err = max(abs(e - (k + 0.5)) for k, (e, _) in enumerate(pairs))
    assert elapsed <= 30.0
    report(9, "lowest five oscillator levels", err, 1e-6, err <= 1e-6)


def test_criterion_10_split_step_order():
    grid = make_grid(1, 256, 20.0, -10.0)
    x = grid.axis_points(0)
    u = 0.5 * x**2
    psi0 = gaussian_packet(grid, 1.0, 0.5, 0.8)

    def terminal(steps):
        return split_step(psi0, u, 1.0, 1.0, 1.0 / steps, steps, steps).states[-1].amps

    ref = terminal(1600)
    scale = np.sqrt(grid.cell_volume)
    e1 = np.linalg.norm(terminal(100) - ref) * scale
    e2 = np.linalg.norm(terminal(200) - ref) * scale
    ratio = e1 / e2
    report(10, "dt-halving error ratio (second order)", ratio, 4.5,
           3.5 <= ratio <= 4.5, unit="ratio")


def test_criterion_11_field_energy_identity():
    grid = make_grid(1, 256, 2 * np.pi, 0.0)
    rng = np.random.default_rng(11)
    worst = max(
        check_field_energy_parseval(random_smooth_fields(grid, rng)).residual
        for _ in range(50)
    )
    x = grid.axis_points(0)
    e = np.zeros((3, 256))
    h = np.zeros((3, 256))
    e[1] = np.sin(x)
    h[2] = np.sin(x)
    dx = grid.cell_volume
    w_real = float(np.sum(e**2) + np.sum(h**2)) * dx / (8 * np.pi)
    sine_err = abs(w_real - 0.25)
    ok = worst <= 1e-12 and sine_err <= 1e-10
    report(11, "field energy equals its harmonic sum (sine case = 1/4)",
           max(worst, sine_err), 1e-10, ok)


@pytest.fixture(scope="module")
def diffraction_results():
    started = time.perf_counter()
    reference = run_diffraction(reference_two_slit_config())
    doubled = run_diffraction(reference_two_slit_config(2.0))
    return reference, doubled, time.perf_counter() - started


def test_criterion_12_two_slit_diffraction(diffraction_results):
    reference, doubled, elapsed = diffraction_results
    assert elapsed <= 300.0, f"diffraction runs took {elapsed:.0f}s"
    ratio = doubled.fringe_spacing / reference.fringe_spacing
    halving_err = abs(ratio / 0.5 - 1.0)
    ok = (reference.relative_error <= 0.10
          and doubled.relative_error <= 0.10
          and halving_err <= 0.10)
    worst = max(reference.relative_error, doubled.relative_error, halving_err)
    report(12, "two-slit fringe spacing vs far-field prediction",
           worst, 0.10, ok, unit="relative error")


def test_criterion_13_superposition():
    grid = make_grid(1, 256, 20.0, -10.0)
    x = grid.axis_points(0)
    u = 0.5 * x**2
    psi1 = gaussian_packet(grid, -1.5, 0.5, 1.0)
    psi2 = gaussian_packet(grid, 1.5, -0.5, 1.0)
    summed = normalize(psi1.with_amps(psi1.amps + psi2.amps))
    from spectralqm.grids import norm_squared

    scale = 1.0 / np.sqrt(norm_squared(psi1.with_amps(psi1.amps + psi2.amps)))

    def final(psi):
        return split_step(psi, u, 1.0, 1.0, 1e-3, 1000, 1000).states[-1].amps

    diff = final(summed) - scale * (final(psi1) + final(psi2))
    err = float(np.linalg.norm(diff) * np.sqrt(grid.cell_volume))
    report(13, "evolving the normalized sum equals the sum of evolutions",
           err, 1e-10, err <= 1e-10)


def test_criterion_14_byte_identical_outputs(tmp_path):
    config = {
        "name": "det",
        "grid": {"dim": 1, "n": 128, "length": 20.0, "origin": -10.0},
        "potential": {"kind": "harmonic", "omega": 1.0},
        "initial": {"kind": "gaussian", "x0": 1.0, "p0": 0.0, "sigma": 1.0},
        "dt": 1e-3, "steps": 200, "record_every": 10, "seed": 5,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config))
    pairs = []
    for label in ("a", "b"):
        out = tmp_path / f"evolve_{label}"
        assert cli_main(["evolve", "--config", str(cfg_path), "--out", str(out)]) == 0
        pairs.append((out / "det_trajectory.csv").read_bytes())
    evolve_identical = pairs[0] == pairs[1]

    reports = []
    for label in ("a", "b"):
        out = tmp_path / f"verify_{label}"
        assert cli_main(["verify", "--out", str(out), "--seed", "42"]) == 0
        reports.append((out / "verify_reports.json").read_bytes())
    verify_identical = reports[0] == reports[1]
    ok = evolve_identical and verify_identical
    report(14, "fixed seed gives byte-identical evolve/verify outputs",
           float(ok), 1.0, ok, unit="identical")
