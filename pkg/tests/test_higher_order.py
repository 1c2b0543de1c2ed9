"""Higher-order stepper and deviator-system tests.

The deviator solves are pinned by an independently assembled reference system
(plain loops) solved with numpy's LAPACK route, plus the exact closed form
P = -(1-3*gamma)/2 * n that holds whenever gamma is a single scalar.
"""

import numpy as np
import pytest

from msdiff import (
    InitialCondition,
    MixtureState,
    SingularSystemError,
    assemble_deviator_system,
    homs_flux_rhs,
    homs_step,
    initial_state,
    ms_step,
    solve_deviator,
    solve_deviator_field,
    total_mass,
    total_pressure,
)
from msdiff.higher_order import deviator_residual
from oracles import deviator_closed_form, deviator_reference, random_simplex

EQ = np.array([0.4, 0.2, 0.4])


def _benchmark_ic():
    return InitialCondition([
        [(0.0, 0.5, 0.8), (0.5, 1.0, 0.0)],
        [(0.0, 1.0, 0.2)],
        [(0.0, 0.5, 0.0), (0.5, 1.0, 0.8)],
    ])


def test_zero_densities_give_zero_system(bench_spec):
    system = assemble_deviator_system(np.zeros(3), bench_spec)
    assert np.all(system.m_hat == 0.0)
    assert np.all(system.beta_hat == 0.0)


def test_gamma_third_zeroes_beta_for_any_densities(bench_spec):
    spec = bench_spec.with_gamma(1.0 / 3.0)
    rng = np.random.default_rng(23)
    for _ in range(20):
        system = assemble_deviator_system(random_simplex(rng, 3), spec)
        assert np.all(system.beta_hat == 0.0)


def test_equilibrium_off_diagonal_entry(bench_spec):
    system = assemble_deviator_system(EQ, bench_spec)
    m = bench_spec.masses
    expected = 0.4 / ((m[0] + m[1]) * bench_spec.diffusivities[0, 1])
    assert system.m_hat[0, 1] == pytest.approx(expected, rel=1e-14)
    assert system.m_hat[0, 1] == pytest.approx(0.22124, abs=1e-4)


def test_assembly_matches_independent_reference(bench_spec):
    rng = np.random.default_rng(29)
    for neglect in (False, True):
        spec = bench_spec.with_neglect_self_diffusion(neglect)
        for _ in range(30):
            n = random_simplex(rng, 3)
            # random symmetric gamma matrix, not just a scalar
            g = rng.uniform(0.0, 1.0, size=(3, 3))
            g = 0.5 * (g + g.T)
            spec_g = spec.with_gamma(g)
            system = assemble_deviator_system(n, spec_g)
            m_ref, b_ref = deviator_reference(
                n, spec_g.masses, spec_g.diffusivities, spec_g.gamma, neglect)
            assert system.m_hat == pytest.approx(m_ref, rel=1e-13, abs=1e-15)
            assert system.beta_hat == pytest.approx(b_ref, rel=1e-13, abs=1e-15)


def test_solve_deviator_equilibrium_gamma_third(bench_spec):
    p = solve_deviator(EQ, bench_spec.with_gamma(1.0 / 3.0))
    assert np.all(p == 0.0)


def test_solve_deviator_all_zero_is_singular(bench_spec):
    with pytest.raises(SingularSystemError):
        solve_deviator(np.zeros(3), bench_spec)


def test_solve_deviator_equilibrium_regression(bench_spec):
    # pinned by the independent assembly solved with numpy, recorded to six
    # significant figures; the scalar-gamma closed form gives the same values
    p = solve_deviator(EQ, bench_spec)
    m_ref, b_ref = deviator_reference(EQ, bench_spec.masses,
                                      bench_spec.diffusivities, bench_spec.gamma)
    assert p == pytest.approx(np.linalg.solve(m_ref, b_ref), rel=1e-12)
    assert p == pytest.approx([-0.140000, -0.0700000, -0.140000], rel=1e-6)
    assert p == pytest.approx(deviator_closed_form(EQ, 0.1), rel=1e-12)


def test_solve_deviator_residual_contract(bench_spec):
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = random_simplex(rng, 3)
        system = assemble_deviator_system(n, bench_spec)
        p = solve_deviator(n, bench_spec)
        resid = np.abs(system.m_hat @ p - system.beta_hat).max()
        assert resid <= 1e-10 * (1.0 + np.abs(system.beta_hat).max())


def test_solve_deviator_field_matches_pointwise(bench_spec):
    rng = np.random.default_rng(37)
    n = np.stack([random_simplex(rng, 3) for _ in range(7)], axis=1)
    field = solve_deviator_field(n, bench_spec)
    for l in range(7):
        assert np.array_equal(field[:, l], solve_deviator(n[:, l], bench_spec))


def test_closed_form_holds_with_and_without_self_diffusion(bench_spec):
    # both variants of the system are solved exactly by P = -(1-3g)/2 n, which
    # is why neglecting self-diffusion has no visible effect at scalar gamma
    rng = np.random.default_rng(41)
    for neglect in (False, True):
        spec = bench_spec.with_neglect_self_diffusion(neglect)
        for _ in range(10):
            n = random_simplex(rng, 3)
            assert solve_deviator(n, spec) == pytest.approx(
                deviator_closed_form(n, 0.1), rel=1e-12)


def test_flux_rhs_constant_deviators_reduce_to_classical(bench_spec, bench_grid):
    state = initial_state(bench_grid, _benchmark_ic(), bench_spec)
    state_p = MixtureState(time=0.0, n=state.n, J=state.J,
                           P=np.full_like(state.n, 0.3))
    rhs = homs_flux_rhs(state_p, bench_grid)
    grad_n = (state.n[:, 1:] - state.n[:, :-1]) / bench_grid.dx
    assert rhs == pytest.approx(grad_n[:2], rel=1e-13, abs=1e-13)


def test_flux_rhs_pure_deviator_gradient(bench_spec, bench_grid):
    n = np.tile(EQ[:, None], (1, 21))
    p = np.linspace(0.0, 1.0, 21)[None, :] * np.array([[1.0], [-0.5], [-0.5]])
    state = MixtureState(time=0.0, n=n, J=np.zeros((3, 20)), P=p)
    rhs = homs_flux_rhs(state, bench_grid)
    grad_p = (p[:, 1:] - p[:, :-1]) / bench_grid.dx
    assert rhs == pytest.approx(grad_p[:2], rel=1e-12)


def test_flux_rhs_benchmark_is_two_term_sum(bench_spec, bench_grid):
    state = initial_state(bench_grid, _benchmark_ic(), bench_spec, model="homs")
    rhs = homs_flux_rhs(state, bench_grid)
    grad_n = (state.n[:, 1:] - state.n[:, :-1]) / bench_grid.dx
    grad_p = (state.P[:, 1:] - state.P[:, :-1]) / bench_grid.dx
    assert np.array_equal(rhs, (grad_n + grad_p)[:2])
    # with scalar gamma the deviator gradient rescales the density gradient
    assert rhs == pytest.approx(((1.0 + 3.0 * 0.1) / 2.0) * grad_n[:2], rel=1e-10)


def test_homs_step_constant_state_is_fixed_point(bench_spec, bench_grid):
    ic = InitialCondition([[(0.0, 1.0, v)] for v in EQ])
    state = initial_state(bench_grid, ic, bench_spec, model="homs")
    stepped = homs_step(state, bench_spec, bench_grid, 2e-4)
    assert stepped.n.tobytes() == state.n.tobytes()
    assert stepped.P.tobytes() == state.P.tobytes()
    assert np.array_equal(stepped.J, np.zeros_like(stepped.J))


def test_homs_step_substep_order(bench_spec, bench_grid):
    # fluxes must use the pre-step deviators, the new deviators the new
    # densities; both are observable on one benchmark step
    state = initial_state(bench_grid, _benchmark_ic(), bench_spec, model="homs")
    stepped = homs_step(state, bench_spec, bench_grid, 2e-4)
    from msdiff.classical import _solve_flux_batch
    from msdiff.grid import midpoint_densities

    j_expected = _solve_flux_batch(midpoint_densities(state.n),
                                   homs_flux_rhs(state, bench_grid),
                                   bench_spec, 1e-12)
    assert np.array_equal(stepped.J, j_expected)
    assert np.array_equal(stepped.P, solve_deviator_field(stepped.n, bench_spec))
    assert deviator_residual(stepped.n, stepped.P, bench_spec) <= 1e-10


def test_homs_step_gamma_third_equals_classical(bench_spec, bench_grid):
    spec3 = bench_spec.with_gamma(1.0 / 3.0)
    s_homs = initial_state(bench_grid, _benchmark_ic(), spec3, model="homs")
    s_ms = initial_state(bench_grid, _benchmark_ic(), spec3, model="ms")
    for _ in range(50):
        s_homs = homs_step(s_homs, spec3, bench_grid, 2e-4)
        s_ms = ms_step(s_ms, spec3, bench_grid, 2e-4)
        assert s_homs.n.tobytes() == s_ms.n.tobytes()
        assert np.all(s_homs.P == 0.0)


def test_homs_step_mass_conservation_short_run(bench_spec, bench_grid):
    state = initial_state(bench_grid, _benchmark_ic(), bench_spec, model="homs")
    m0 = total_mass(state, bench_grid)
    for _ in range(300):
        state = homs_step(state, bench_spec, bench_grid, 2e-4)
    assert np.abs(total_mass(state, bench_grid) - m0).max() / m0.min() <= 1e-12
    assert np.abs(state.n.sum(axis=0) - 1.0).max() == 0.0


def test_homs_lags_classical_on_benchmark(bench_spec, bench_grid):
    s_homs = initial_state(bench_grid, _benchmark_ic(), bench_spec, model="homs")
    s_ms = initial_state(bench_grid, _benchmark_ic(), bench_spec, model="ms")
    for _ in range(181):
        s_homs = homs_step(s_homs, bench_spec, bench_grid, 2e-4)
        s_ms = ms_step(s_ms, bench_spec, bench_grid, 2e-4)
    # species 1 and 3 decay monotonically; the delayed run stays farther out
    for i in (0, 2):
        d_homs = np.abs(s_homs.n[i] - EQ[i]).max()
        d_ms = np.abs(s_ms.n[i] - EQ[i]).max()
        assert d_homs > d_ms


def test_total_pressure_values():
    assert total_pressure(0.4, 0.0, 5.0 / 3.0, 1.0) == pytest.approx(0.6667, abs=1e-4)
    n = np.array([0.4, 0.2, 0.4])
    assert total_pressure(n, np.zeros(3), 5.0 / 3.0, 1.0) == pytest.approx(
        (5.0 / 3.0) * n, rel=1e-14)


def test_total_pressure_with_equilibrium_deviators(bench_spec):
    p = solve_deviator(EQ, bench_spec)
    tot = total_pressure(EQ, p, bench_spec.kappa, bench_spec.temperature)
    expected = (5.0 / 3.0) * (EQ + deviator_closed_form(EQ, 0.1))
    assert tot == pytest.approx(expected, rel=1e-12)
