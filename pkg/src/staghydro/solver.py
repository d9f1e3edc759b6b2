"""Staggered-grid Lagrangian hydrodynamics on Q^m - Q^(m-1) space pairs.

Kinematic unknowns (position, velocity) live on the continuous Gauss-Lobatto
node lattice; thermodynamic unknowns (density, energy, pressure) live at the
m x m Gauss-Legendre points of each element. Arrays over thermodynamic points
have shape (n_elem, m*m).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .basis import kinematic_basis, thermodynamic_basis
from .geometry import PointTable, jacobians, physical_points, scaled_grads
from .mesh import WALL_NORMALS, Mesh
from .problems import ProblemSpec
from .quadrature import gauss_legendre_2d, gauss_lobatto_2d


class TangledElementError(RuntimeError):
    """A Jacobian determinant became non-positive at a thermodynamic point."""

    def __init__(self, element: int, point: int, detj: float, time: float):
        self.element = element
        self.point = point
        self.detj = detj
        self.time = time
        super().__init__(
            f"tangled element {element} at point {point}: detJ={detj:.6g} (t={time:.6g})"
        )


@dataclass(frozen=True)
class Discretization:
    """Bases and tabulated rules for one space pair."""

    m: int
    kin: object
    thermo: object
    gl_weights: np.ndarray
    gl_table: PointTable  # kinematic basis at the m x m Gauss-Legendre points
    lob_weights: np.ndarray
    lob_table: PointTable  # kinematic basis at its own Gauss-Lobatto nodes


@lru_cache(maxsize=None)
def discretization(m: int) -> Discretization:
    kin = kinematic_basis(m)
    thermo = thermodynamic_basis(m)
    gl = gauss_legendre_2d(m)
    lob = gauss_lobatto_2d(m + 1)
    return Discretization(m, kin, thermo, gl.weights, PointTable.from_rule(kin, gl),
                          lob.weights, PointTable.from_rule(kin, lob))


@dataclass
class State:
    mesh: Mesh
    problem: ProblemSpec
    time: float
    kin_pos: np.ndarray
    kin_vel: np.ndarray
    nodal_mass: np.ndarray
    rho: np.ndarray
    e: np.ndarray
    p: np.ndarray
    Me: np.ndarray
    rho0_detJ0: np.ndarray
    J: Optional[np.ndarray] = None
    detJ: Optional[np.ndarray] = None
    source_energy: float = 0.0  # cumulative energy injected by the source term

    @property
    def disc(self) -> Discretization:
        return discretization(self.mesh.m)

    @property
    def gamma(self) -> float:
        return self.problem.gamma

    def copy(self) -> "State":
        arrays = {k: (v.copy() if isinstance(v, np.ndarray) else v)
                  for k, v in self.__dict__.items() if k not in ("mesh", "problem")}
        return replace(self, **arrays)

    def element_coords(self, pos=None) -> np.ndarray:
        pos = self.kin_pos if pos is None else pos
        return pos[self.mesh.elem_to_kin]

    def thermo_points(self) -> np.ndarray:
        """Physical positions of the thermodynamic points, (n_elem, m*m, 2)."""
        return physical_points(self.element_coords(), self.disc.gl_table)


@dataclass
class ElementWork:
    """Corner forces ``f[e, q, i] = w_q p_q (detJ grad N_i)(xi_q)``."""

    f: np.ndarray  # (n_elem, nq, nk, 2)


def _eval_velocity(problem: ProblemSpec, pts: np.ndarray) -> np.ndarray:
    u, v = problem.velocity(pts[..., 0], pts[..., 1])
    return np.stack([np.broadcast_to(u, pts.shape[:-1]), np.broadcast_to(v, pts.shape[:-1])], axis=-1)


def init_state(mesh: Mesh, problem: ProblemSpec) -> State:
    """Sample the problem at the DOF locations and build the lumped masses."""
    d = discretization(mesh.m)
    pos = np.array(mesh.kin_coords, dtype=float)
    vel = np.array(_eval_velocity(problem, pos), dtype=float)

    coords = pos[mesh.elem_to_kin]
    _, detJ0 = jacobians(coords, d.gl_table)
    if np.any(detJ0 <= 0.0):
        e, q = np.unravel_index(np.argmin(detJ0), detJ0.shape)
        raise TangledElementError(int(e), int(q), float(detJ0[e, q]), 0.0)
    xq = physical_points(coords, d.gl_table)
    rho0 = np.asarray(problem.density(xq[..., 0], xq[..., 1]), dtype=float) * np.ones(detJ0.shape)
    p0 = np.asarray(problem.pressure(xq[..., 0], xq[..., 1]), dtype=float) * np.ones(detJ0.shape)
    if np.any(rho0 <= 0.0) or np.any(p0 <= 0.0):
        raise ValueError("initial density and pressure must be positive at every point")
    e0 = p0 / ((problem.gamma - 1.0) * rho0)

    # Gauss-Lobatto quadrature at the nodes gives a diagonal local mass matrix
    _, detJ_nodes = jacobians(coords, d.lob_table)
    rho_nodes = np.asarray(problem.density(coords[..., 0], coords[..., 1]), dtype=float) * np.ones(detJ_nodes.shape)
    if np.any(rho_nodes <= 0.0):
        raise ValueError("initial density must be positive at every node")
    local = rho_nodes * d.lob_weights[None, :] * detJ_nodes
    nodal_mass = np.zeros(mesh.n_kin)
    np.add.at(nodal_mass, mesh.elem_to_kin, local)

    state = State(
        mesh=mesh, problem=problem, time=0.0, kin_pos=pos, kin_vel=vel,
        nodal_mass=nodal_mass, rho=rho0.copy(), e=e0, p=p0.copy(),
        Me=rho0 * d.gl_weights[None, :] * detJ0, rho0_detJ0=rho0 * detJ0,
    )
    apply_wall_bc(state, state.kin_vel)
    update_thermo_from_geometry(state)
    return state


def update_thermo_from_geometry(state: State) -> None:
    """Strong mass conservation at each point, then the ideal-gas EOS."""
    J, detJ = jacobians(state.element_coords(), state.disc.gl_table)
    if np.any(detJ <= 0.0):
        e, q = np.unravel_index(np.argmin(detJ), detJ.shape)
        raise TangledElementError(int(e), int(q), float(detJ[e, q]), state.time)
    state.J = J
    state.detJ = detJ
    state.rho = state.rho0_detJ0 / detJ
    state.p = (state.gamma - 1.0) * state.rho * state.e


def compute_forces(state: State):
    """Assemble nodal forces ``int p grad N_j`` and keep the corner forces.

    Accumulation runs in ascending element order, then local node order.
    """
    if state.J is None:
        update_thermo_from_geometry(state)
    d = state.disc
    G = scaled_grads(state.J, d.gl_table)
    f = (d.gl_weights[None, :] * state.p)[..., None, None] * G
    F = np.zeros((state.mesh.n_kin, 2))
    np.add.at(F, state.mesh.elem_to_kin, f.sum(axis=1))
    return F, ElementWork(f)


def _active_walls(state: State):
    return [(state.mesh.wall_masks[w], np.array(WALL_NORMALS[w])) for w in state.problem.walls]


def apply_wall_bc(state: State, vec: np.ndarray) -> np.ndarray:
    """Remove the wall-normal component of ``vec`` in place (u . n = 0)."""
    for mask, n in _active_walls(state):
        vec[mask] -= np.outer(vec[mask] @ n, n)
    return vec


def energy_work(state: State, work: ElementWork, velocities: np.ndarray) -> np.ndarray:
    """Compressive work rate ``-sum_i u_i . f_iq`` at each point (energy units / time)."""
    V = velocities[state.mesh.elem_to_kin]
    return -np.einsum("eqkc,ekc->eq", work.f, V)


def source_rate(state: State) -> np.ndarray:
    if state.problem.energy_source is None:
        return np.zeros_like(state.e)
    xq = state.thermo_points()
    return np.asarray(state.problem.energy_source(xq[..., 0], xq[..., 1]), dtype=float) * np.ones(state.e.shape)


def energy_rhs(state: State, work: ElementWork, velocities: np.ndarray) -> np.ndarray:
    """Specific-internal-energy rate per point; compression raises e."""
    return energy_work(state, work, velocities) / state.Me + source_rate(state)


def _accelerate(state: State, F: np.ndarray) -> np.ndarray:
    return apply_wall_bc(state, F / state.nodal_mass[:, None])


def rk2_step(state: State, dt: float) -> State:
    """One step of the energy-conserving two-stage midpoint scheme."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    u0, r0, e0 = state.kin_vel, state.kin_pos, state.e

    F0, W0 = compute_forces(state)
    u_half = apply_wall_bc(state, u0 + 0.5 * dt * _accelerate(state, F0))
    ubar = 0.5 * (u0 + u_half)
    mid = state.copy()
    mid.kin_vel = u_half
    mid.kin_pos = r0 + 0.5 * dt * ubar
    mid.e = e0 + 0.5 * dt * energy_rhs(state, W0, ubar)
    mid.time = state.time + 0.5 * dt
    update_thermo_from_geometry(mid)

    F1, W1 = compute_forces(mid)
    u1 = apply_wall_bc(state, u0 + dt * _accelerate(state, F1))
    ubar = 0.5 * (u0 + u1)
    src = source_rate(mid)
    new = state.copy()
    new.kin_vel = u1
    new.kin_pos = r0 + dt * ubar
    new.e = e0 + dt * (energy_work(mid, W1, ubar) / state.Me + src)
    new.time = state.time + dt
    new.source_energy = state.source_energy + dt * float(np.sum(state.Me * src))
    update_thermo_from_geometry(new)
    return new


def compute_dt(state: State, cfl: float, t_final: Optional[float] = None) -> float:
    """CFL step from the per-point length sqrt(w_q detJ) and signal speed c + |u|."""
    d = state.disc
    if state.detJ is None:
        update_thermo_from_geometry(state)
    V = state.kin_vel[state.mesh.elem_to_kin]
    uq = np.einsum("qk,ekc->eqc", d.gl_table.values, V)
    speed = np.sqrt(state.gamma * state.p / state.rho) + np.linalg.norm(uq, axis=-1)
    length = np.sqrt(d.gl_weights[None, :] * state.detJ)
    dt = cfl * float(np.min(length / speed))
    if t_final is not None:
        dt = min(dt, t_final - state.time)
    return dt


def kinetic_energy(state: State) -> float:
    return 0.5 * float(np.sum(state.nodal_mass * np.sum(state.kin_vel**2, axis=1)))


def internal_energy(state: State) -> float:
    return float(np.sum(state.Me * state.e))


def total_energy(state: State) -> float:
    return kinetic_energy(state) + internal_energy(state)


def total_momentum(state: State) -> np.ndarray:
    return state.nodal_mass @ state.kin_vel


@lru_cache(maxsize=None)
def _error_tables(m: int):
    d = discretization(m)
    rule = gauss_legendre_2d(m + 2)
    return rule.weights, PointTable.from_rule(d.kin, rule), d.thermo.values_at(rule.points)


def l2_density_error(state: State, reference: Callable = None) -> float:
    """``||rho_h - rho_ref||_L2`` on the current mesh with an (m+2)^2 rule."""
    w, table, phi = _error_tables(state.mesh.m)
    coords = state.element_coords()
    _, detJ = jacobians(coords, table)
    rho_h = state.rho @ phi.T
    if reference is None:
        ref = 1.0
    else:
        x = physical_points(coords, table)
        ref = reference(x[..., 0], x[..., 1])
    return float(np.sqrt(np.sum(w[None, :] * detJ * (rho_h - ref) ** 2)))


@dataclass
class RunResult:
    state: State
    steps: int
    initial_energy: float
    dts: list = field(default_factory=list)

    @property
    def energy_drift(self) -> float:
        """Relative total-energy imbalance after removing source input."""
        E = total_energy(self.state) - self.state.source_energy
        return (E - self.initial_energy) / abs(self.initial_energy)


def advance(state: State, t_final: float, cfl: float, dt_cap: Optional[float] = None,
            max_steps: Optional[int] = None, on_step: Optional[Callable] = None) -> RunResult:
    """Step ``state`` to ``t_final`` with CFL-limited (optionally capped) steps."""
    E0 = total_energy(state)
    result = RunResult(state, 0, E0)
    # a final sliver below this is absorbed by stretching the previous step
    eps = 1e-12 * max(1.0, t_final)
    while state.time < t_final - eps:
        dt = compute_dt(state, cfl, t_final)
        if dt_cap is not None:
            dt = min(dt, dt_cap)
        if t_final - (state.time + dt) < eps:
            dt = t_final - state.time
        state = rk2_step(state, dt)
        result.steps += 1
        result.dts.append(dt)
        result.state = state
        if on_step is not None:
            on_step(state, result.steps)
        if max_steps is not None and result.steps >= max_steps:
            break
    return result
