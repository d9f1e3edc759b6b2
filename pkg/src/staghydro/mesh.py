"""Logically rectangular quadrilateral meshes with a continuous Q^m node lattice."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import gauss_lobatto_1d

# outward unit normals of the four walls of a rectangle
WALL_NORMALS = {
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
    "bottom": (0.0, -1.0),
    "top": (0.0, 1.0),
}


@dataclass(frozen=True)
class Mesh:
    nx: int
    ny: int
    m: int
    domain: tuple  # (r0, r1, z0, z1)
    kin_coords: np.ndarray  # (n_kin, 2)
    elem_to_kin: np.ndarray  # (n_elem, (m+1)**2)
    wall_masks: dict  # wall name -> bool mask over kinematic DOFs

    @property
    def n_elem(self) -> int:
        return self.nx * self.ny

    @property
    def n_kin(self) -> int:
        return len(self.kin_coords)

    @property
    def n_thermo(self) -> int:
        return self.m**2 * self.n_elem

    @property
    def h(self) -> float:
        r0, r1, z0, z1 = self.domain
        return max((r1 - r0) / self.nx, (z1 - z0) / self.ny)

    def element_kin_dofs(self, e: int) -> np.ndarray:
        if not 0 <= e < self.n_elem:
            raise IndexError(f"element index {e} out of range [0, {self.n_elem})")
        return self.elem_to_kin[e]

    def boundary_normals(self, dof: int) -> list:
        return [WALL_NORMALS[w] for w, mask in self.wall_masks.items() if mask[dof]]

    def with_coords(self, coords) -> "Mesh":
        coords = np.array(coords, dtype=float)
        if coords.shape != self.kin_coords.shape:
            raise ValueError("coordinate array has the wrong shape")
        return Mesh(self.nx, self.ny, self.m, self.domain, coords, self.elem_to_kin, self.wall_masks)


def uniform_quad_mesh(nx: int, ny: int, m: int, domain=(0.0, 1.0, 0.0, 1.0)) -> Mesh:
    """Uniform nx-by-ny grid; element nodes sit at mapped Gauss-Lobatto abscissae."""
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be positive")
    if m not in (1, 2, 3):
        raise ValueError(f"space-pair order m={m} out of range (supported 1..3)")
    r0, r1, z0, z1 = map(float, domain)
    if not (r1 > r0 and z1 > z0):
        raise ValueError(f"degenerate domain {domain}")

    ref = (gauss_lobatto_1d(m + 1).points + 1.0) / 2.0
    def lattice(n, lo, hi):
        h = (hi - lo) / n
        pts = [lo + (e + t) * h for e in range(n) for t in ref[:-1]]
        pts.append(hi)
        return np.array(pts)

    xr = lattice(nx, r0, r1)
    xz = lattice(ny, z0, z1)
    R, Z = np.meshgrid(xr, xz, indexing="xy")
    coords = np.column_stack([R.ravel(), Z.ravel()])

    nr = m * nx + 1
    local = np.array([a + b * nr for b in range(m + 1) for a in range(m + 1)])
    e2k = np.array(
        [m * ex + m * ey * nr + local for ey in range(ny) for ex in range(nx)],
        dtype=np.int64,
    )

    ir = np.arange(len(coords)) % nr
    iz = np.arange(len(coords)) // nr
    masks = {
        "left": ir == 0,
        "right": ir == nr - 1,
        "bottom": iz == 0,
        "top": iz == m * ny,
    }
    for mask in masks.values():
        mask.setflags(write=False)
    coords.setflags(write=False)
    e2k.setflags(write=False)
    return Mesh(nx, ny, m, (r0, r1, z0, z1), coords, e2k, masks)


def perturb_interior(mesh: Mesh, amplitude: float, seed: int = 0) -> Mesh:
    """Randomly displace non-boundary nodes by up to ``amplitude * h`` per axis."""
    rng = np.random.default_rng(seed)
    on_wall = np.zeros(mesh.n_kin, dtype=bool)
    for mask in mesh.wall_masks.values():
        on_wall |= mask
    shift = rng.uniform(-1.0, 1.0, size=mesh.kin_coords.shape) * amplitude * mesh.h
    shift[on_wall] = 0.0
    return mesh.with_coords(mesh.kin_coords + shift)


def write_mesh_text(mesh: Mesh, path) -> None:
    """Debug dump: ``id r z`` node lines, then ``id dof...`` element lines."""
    with open(path, "w") as fh:
        fh.write(f"# nodes {mesh.n_kin}\n")
        for i, (r, z) in enumerate(mesh.kin_coords):
            fh.write(f"{i} {r:.17g} {z:.17g}\n")
        fh.write(f"# elements {mesh.n_elem}\n")
        for e, dofs in enumerate(mesh.elem_to_kin):
            fh.write(f"{e} " + " ".join(str(int(d)) for d in dofs) + "\n")
