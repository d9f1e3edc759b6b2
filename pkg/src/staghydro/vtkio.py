"""Legacy ASCII VTK output.

One unstructured grid per file. The first ``n_kin`` points are the kinematic
lattice, connected by VTK_QUAD (m = 1) or VTK_LAGRANGE_QUADRILATERAL cells;
the remaining points are the thermodynamic Gauss points as VTK_VERTEX cells.
Fields undefined on one point family are written as zero, and ``point_kind``
(0 kinematic, 1 thermodynamic) tells them apart.
"""

from __future__ import annotations

import numpy as np

VTK_VERTEX = 1
VTK_QUAD = 9
VTK_LAGRANGE_QUADRILATERAL = 70


def lagrange_quad_order(m: int) -> list:
    """Local lexicographic node indices in VTK Lagrange-quadrilateral order."""
    n = m + 1

    def idx(a, b):
        return a + b * n

    order = [idx(0, 0), idx(m, 0), idx(m, m), idx(0, m)]
    order += [idx(a, 0) for a in range(1, m)]
    order += [idx(m, b) for b in range(1, m)]
    order += [idx(a, m) for a in range(1, m)]
    order += [idx(0, b) for b in range(1, m)]
    order += [idx(a, b) for b in range(1, m) for a in range(1, m)]
    return order


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_state_vtk(state, path, title: str = "staghydro") -> None:
    mesh = state.mesh
    m = mesh.m
    kin = state.kin_pos
    thermo = state.thermo_points().reshape(-1, 2)
    nk, nt = len(kin), len(thermo)
    pts = np.vstack([kin, thermo])

    if m == 1:
        local, ctype = [0, 1, 3, 2], VTK_QUAD
    else:
        local, ctype = lagrange_quad_order(m), VTK_LAGRANGE_QUADRILATERAL
    cells = [mesh.elem_to_kin[e][local] for e in range(mesh.n_elem)]
    cells += [[nk + t] for t in range(nt)]
    types = [ctype] * mesh.n_elem + [VTK_VERTEX] * nt

    vel = np.zeros((nk + nt, 2))
    vel[:nk] = state.kin_vel
    scalars = {}
    for name, arr in (("density", state.rho), ("pressure", state.p), ("energy", state.e)):
        full = np.zeros(nk + nt)
        full[nk:] = arr.ravel()
        scalars[name] = full
    kind = np.r_[np.zeros(nk, dtype=int), np.ones(nt, dtype=int)]

    lines = [
        "# vtk DataFile Version 4.2",
        f"{title} t={_fmt(state.time)}",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {nk + nt} double",
    ]
    lines += [f"{_fmt(r)} {_fmt(z)} 0" for r, z in pts]
    size = sum(len(c) + 1 for c in cells)
    lines.append(f"CELLS {len(cells)} {size}")
    lines += [" ".join(str(int(v)) for v in [len(c), *c]) for c in cells]
    lines.append(f"CELL_TYPES {len(types)}")
    lines += [str(t) for t in types]
    lines.append(f"POINT_DATA {nk + nt}")
    lines.append("VECTORS velocity double")
    lines += [f"{_fmt(u)} {_fmt(v)} 0" for u, v in vel]
    for name, arr in scalars.items():
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [_fmt(x) for x in arr]
    lines += ["SCALARS point_kind int 1", "LOOKUP_TABLE default"]
    lines += [str(k) for k in kind]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
