import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from staghydro.mesh import perturb_interior, uniform_quad_mesh
from staghydro.problems import ProblemSpec, taylor_green, uniform_gas
from staghydro.solver import (
    TangledElementError,
    advance,
    apply_wall_bc,
    compute_dt,
    compute_forces,
    energy_rhs,
    energy_work,
    init_state,
    internal_energy,
    kinetic_energy,
    l2_density_error,
    rk2_step,
    total_energy,
    total_momentum,
    update_thermo_from_geometry,
)


def tg_state(n, m, source=True, seed=None):
    mesh = uniform_quad_mesh(n, n, m)
    if seed is not None:
        mesh = perturb_interior(mesh, 0.05, seed)
    return init_state(mesh, taylor_green(source=source))


def static_state(n, m, **kw):
    return init_state(uniform_quad_mesh(n, n, m), uniform_gas(**kw))


# --- initialisation ------------------------------------------------------


@pytest.mark.parametrize("m, n", [(1, 3), (2, 2), (3, 4)])
def test_total_nodal_mass_is_one(m, n):
    s = static_state(n, m)
    assert s.nodal_mass.sum() == pytest.approx(1.0, abs=1e-12)
    assert s.Me.sum() == pytest.approx(1.0, abs=1e-12)


def test_single_q1_element_nodal_masses():
    np.testing.assert_allclose(static_state(1, 1).nodal_mass, 0.25, atol=1e-15)


def test_taylor_green_corner_energy():
    s = tg_state(1, 1)
    # a 1x1 Q1 mesh has its only point at the centre; probe the corner directly
    p = taylor_green().pressure(np.array(0.0), np.array(0.0))
    assert float(p) / ((5 / 3 - 1) * 1.0) == pytest.approx(2.25)
    e_at_points = s.p / ((s.gamma - 1) * s.rho)
    np.testing.assert_allclose(s.e, e_at_points, rtol=1e-14)


def test_initial_velocity_satisfies_walls():
    s = tg_state(4, 2)
    for name, mask in s.mesh.wall_masks.items():
        comp = 0 if name in ("left", "right") else 1
        np.testing.assert_array_equal(s.kin_vel[mask, comp], 0.0)


def test_nonpositive_initial_pressure_rejected():
    with pytest.raises(ValueError):
        init_state(uniform_quad_mesh(2, 2, 1), uniform_gas(p=0.0))


# --- thermodynamic update ------------------------------------------------


def test_undeformed_mesh_keeps_initial_density():
    s = static_state(3, 2, rho=1.7)
    np.testing.assert_allclose(s.rho, 1.7, rtol=1e-14)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_uniform_compression_quadruples_density(m):
    s = static_state(2, m)
    s.kin_pos = 0.5 * s.kin_pos
    update_thermo_from_geometry(s)
    np.testing.assert_allclose(s.rho, 4.0, rtol=1e-14)


def test_equation_of_state():
    s = static_state(1, 2)
    s.e = np.full_like(s.e, 1.5)
    update_thermo_from_geometry(s)
    np.testing.assert_allclose(s.p, 1.0, rtol=1e-14)


def test_tangled_element_is_reported():
    s = static_state(2, 1)
    pos = s.kin_pos.copy()
    pos[4] = [2.0, 2.0]  # drag the centre node across the far corner
    s.kin_pos = pos
    with pytest.raises(TangledElementError) as info:
        update_thermo_from_geometry(s)
    assert info.value.detj <= 0 and 0 <= info.value.element < 4


# --- forces --------------------------------------------------------------


def test_zero_pressure_zero_force():
    s = static_state(2, 2)
    s.p = np.zeros_like(s.p)
    F, W = compute_forces(s)
    assert not F.any() and not W.f.any()


@pytest.mark.parametrize("m", [1, 2, 3])
def test_constant_pressure_element_forces_balance(m):
    s = tg_state(3, m, seed=1)
    s.p = np.full_like(s.p, 2.5)
    _, W = compute_forces(s)
    np.testing.assert_allclose(W.f.sum(axis=(1, 2)), 0.0, atol=1e-13)


def test_linear_pressure_q2_matches_dense_quadrature():
    from numpy.polynomial.legendre import leggauss

    s = static_state(1, 2)
    s.p = s.thermo_points()[..., 0].copy()  # p = r
    F, _ = compute_forces(s)

    # oracle: 6x6 Gauss rule on the unit square with hand-written Q2 functions
    def q(x):
        return [2 * x * x - 3 * x + 1, 4 * x * (1 - x), x * (2 * x - 1)]

    def dq(x):
        return [4 * x - 3, 4 - 8 * x, 4 * x - 1]

    x6, w6 = leggauss(6)
    t, wt = (x6 + 1) / 2, w6 / 2
    expected = np.zeros((9, 2))
    for i, r in enumerate(t):
        for j, z in enumerate(t):
            for b in range(3):
                for a in range(3):
                    grad = (dq(r)[a] * q(z)[b], q(r)[a] * dq(z)[b])
                    expected[a + 3 * b] += wt[i] * wt[j] * r * np.array(grad)
    np.testing.assert_allclose(F, expected, atol=1e-13)


def test_force_assembly_order_is_deterministic():
    s = tg_state(3, 2, seed=4)
    a, _ = compute_forces(s)
    b, _ = compute_forces(s.copy())
    np.testing.assert_array_equal(a, b)


# --- boundary conditions -------------------------------------------------


def test_wall_and_corner_projection():
    s = static_state(2, 1)
    mesh = s.mesh
    left_only = next(i for i in range(mesh.n_kin) if mesh.wall_masks["left"][i] and len(mesh.boundary_normals(i)) == 1)
    vec = np.tile([3.0, 7.0], (mesh.n_kin, 1))
    apply_wall_bc(s, vec)
    np.testing.assert_array_equal(vec[left_only], [0.0, 7.0])
    np.testing.assert_array_equal(vec[0], [0.0, 0.0])
    np.testing.assert_array_equal(vec[4], [3.0, 7.0])


# --- energy --------------------------------------------------------------


def test_zero_velocity_rate_is_source_only():
    s = tg_state(2, 2)
    _, W = compute_forces(s)
    rate = energy_rhs(s, W, np.zeros_like(s.kin_vel))
    xq = s.thermo_points()
    np.testing.assert_allclose(rate, taylor_green().energy_source(xq[..., 0], xq[..., 1]), atol=1e-15)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_rigid_translation_does_no_work(u, v):
    s = tg_state(2, 2, source=False, seed=2)
    _, W = compute_forces(s)
    vel = np.tile([u, v], (s.mesh.n_kin, 1))
    np.testing.assert_allclose(energy_rhs(s, W, vel), 0.0, atol=1e-12)


def test_uniform_compression_work():
    s = static_state(1, 2)
    _, W = compute_forces(s)
    vel = -s.kin_pos  # u = (-r, -z), div u = -2, p = 1
    assert energy_work(s, W, vel).sum() == pytest.approx(2.0, rel=1e-13)


# --- time stepping -------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_static_gas_stays_at_rest(m):
    s0 = static_state(3, m)
    s = s0
    for _ in range(100):
        s = rk2_step(s, 0.01)
    # force sums cancel only to round-off, which accumulates over the steps
    np.testing.assert_allclose(s.kin_pos, s0.kin_pos, atol=1e-12)
    np.testing.assert_allclose(s.kin_vel, 0.0, atol=1e-12)
    np.testing.assert_allclose(s.e, s0.e, rtol=1e-12)
    np.testing.assert_allclose(s.rho, s0.rho, rtol=1e-12)


def test_step_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        rk2_step(static_state(1, 1), 0.0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_step_conserves_mass_energy_and_compatibility(m):
    s = tg_state(3, m, source=False, seed=m)
    E0 = total_energy(s)
    for _ in range(5):
        dt = compute_dt(s, 0.2)
        new = rk2_step(s, dt)
        # pointwise mass
        np.testing.assert_allclose(new.rho * new.detJ, s.rho0_detJ0, rtol=1e-14)
        # work identity: kinetic change equals minus internal change
        dKE = kinetic_energy(new) - kinetic_energy(s)
        dIE = internal_energy(new) - internal_energy(s)
        assert abs(dKE + dIE) <= 1e-12 * max(1.0, abs(dKE))
        s = new
    assert abs(total_energy(s) - E0) <= 1e-12 * E0


def test_momentum_balance_with_walls():
    s = tg_state(4, 2, source=False)
    P0 = total_momentum(s)
    s = rk2_step(s, 1e-3)
    # the symmetric vortex has zero net momentum; walls only remove normal components
    np.testing.assert_allclose(P0, 0.0, atol=1e-13)
    np.testing.assert_allclose(total_momentum(s), 0.0, atol=1e-12)


def test_masses_are_time_invariant():
    s0 = tg_state(2, 2)
    s = rk2_step(s0, 1e-3)
    np.testing.assert_array_equal(s.nodal_mass, s0.nodal_mass)
    np.testing.assert_array_equal(s.Me, s0.Me)


def test_source_energy_bookkeeping():
    res = advance(tg_state(2, 2), 0.05, 0.2)
    assert res.state.time == pytest.approx(0.05, abs=1e-14)
    assert abs(res.energy_drift) < 1e-12


# --- time step -----------------------------------------------------------


def test_dt_single_element():
    assert compute_dt(static_state(1, 1), 0.5) == pytest.approx(0.5 / math.sqrt(5 / 3), rel=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 1.0))
def test_dt_linear_in_cfl(cfl):
    s = tg_state(2, 2)
    assert compute_dt(s, cfl) == pytest.approx(cfl * compute_dt(s, 1.0), rel=1e-14)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_dt_halves_under_refinement(m):
    assert compute_dt(static_state(4, m), 0.5) == pytest.approx(0.5 * compute_dt(static_state(2, m), 0.5), rel=1e-13)


def test_dt_clipped_at_final_time():
    s = static_state(1, 1)
    assert compute_dt(s, 0.5, t_final=0.1) == pytest.approx(0.1)


def test_advance_zero_time():
    res = advance(tg_state(2, 2), 0.0, 0.5)
    assert res.steps == 0
    assert l2_density_error(res.state) == pytest.approx(0.0, abs=1e-14)


# --- error norm ----------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_l2_error_constant_offsets(m):
    s = static_state(2, m)
    assert l2_density_error(s) == pytest.approx(0.0, abs=1e-15)
    s = static_state(2, m, rho=1.1)
    assert l2_density_error(s) == pytest.approx(0.1, rel=1e-13)


def test_l2_error_with_reference_function():
    s = static_state(3, 2)
    err = l2_density_error(s, lambda r, z: 1.0 + r)
    # || r ||_L2 over the unit square
    assert err == pytest.approx(math.sqrt(1 / 3), rel=1e-13)


def test_problem_validation():
    with pytest.raises(ValueError):
        ProblemSpec(gamma=1.0, velocity=None, pressure=None, density=None)
    with pytest.raises(ValueError):
        taylor_green(cfl=1.5)
