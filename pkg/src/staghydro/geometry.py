"""Element mapping: Jacobians, determinants and detJ-scaled physical gradients.

Everything is built from 1D intermediates. For a tensor basis with node
``(a, b)`` holding coordinate ``x_ab``, the row sums

    row[b] = sum_a x_ab * l_a'(xi)      (depends on xi only)
    col[a] = sum_b x_ab * l_b'(eta)     (depends on eta only)

give ``dx/dxi = sum_b l_b(eta) row[b]`` and ``dx/deta = sum_a l_a(xi) col[a]``.
On a tensor point set the intermediates are shared along grid lines, so a
Jacobian entry costs O(m) per point instead of O(m^2).

The inverse Jacobian is never formed; consumers take ``detJ * grad N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSet

RANK_RTOL = 1e-10


def numerical_rank(A, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


@dataclass(frozen=True)
class PointTable:
    """A basis tabulated on the tensor grid ``xs x ys`` (xi fastest)."""

    basis: BasisSet
    xs: np.ndarray
    ys: np.ndarray
    vx: np.ndarray
    dx: np.ndarray
    vy: np.ndarray
    dy: np.ndarray

    @classmethod
    def build(cls, basis: BasisSet, xs, ys=None) -> "PointTable":
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        ys = xs if ys is None else np.atleast_1d(np.asarray(ys, dtype=float))
        return cls(basis, xs, ys, basis.values_1d(xs), basis.derivs_1d(xs),
                   basis.values_1d(ys), basis.derivs_1d(ys))

    @classmethod
    def from_rule(cls, basis: BasisSet, rule) -> "PointTable":
        return cls.build(basis, rule.rx.points, rule.ry.points)

    @property
    def n_points(self) -> int:
        return len(self.xs) * len(self.ys)

    @property
    def values(self) -> np.ndarray:
        """``N_k`` at every point, shape ``(n_points, n_nodes)``."""
        return np.einsum("jb,ia->jiba", self.vy, self.vx).reshape(self.n_points, -1)

    @property
    def dxi(self) -> np.ndarray:
        return np.einsum("jb,ia->jiba", self.vy, self.dx).reshape(self.n_points, -1)

    @property
    def deta(self) -> np.ndarray:
        return np.einsum("jb,ia->jiba", self.dy, self.vx).reshape(self.n_points, -1)


def _lattice(coords: np.ndarray, n: int) -> np.ndarray:
    """(E, n*n, 2) element coordinates -> (E, b, a, 2)."""
    return coords.reshape(coords.shape[0], n, n, 2)


def intermediates(coords: np.ndarray, table: PointTable):
    """Row and column intermediates for a batch of elements.

    Returns ``row`` with shape (E, n_xs, m+1, 2) and ``col`` with shape
    (E, n_ys, m+1, 2); the last axis is (r, z).
    """
    X = _lattice(coords, len(table.basis.nodes_1d))
    row = np.einsum("ebac,ia->eibc", X, table.dx)
    col = np.einsum("ebac,jb->ejac", X, table.dy)
    return row, col


def jacobians(coords: np.ndarray, table: PointTable):
    """Jacobians ``J[e, q] = [[r_xi, r_eta], [z_xi, z_eta]]`` and determinants.

    ``coords`` has shape (E, (m+1)^2, 2). Returns J of shape (E, nq, 2, 2)
    and detJ of shape (E, nq).
    """
    row, col = intermediates(coords, table)
    E = coords.shape[0]
    J = np.empty((E, len(table.ys), len(table.xs), 2, 2))
    J[..., 0] = np.einsum("eibc,jb->ejic", row, table.vy)
    J[..., 1] = np.einsum("ejac,ia->ejic", col, table.vx)
    J = J.reshape(E, table.n_points, 2, 2)
    detJ = J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]
    return J, detJ


def scaled_grads(J: np.ndarray, table: PointTable) -> np.ndarray:
    """``detJ * grad N_k`` at every point, shape (E, nq, n_nodes, 2)."""
    dxi, deta = table.dxi, table.deta
    J11 = J[..., 0, 0][..., None]
    J12 = J[..., 0, 1][..., None]
    J21 = J[..., 1, 0][..., None]
    J22 = J[..., 1, 1][..., None]
    G = np.empty(J.shape[:2] + (dxi.shape[1], 2))
    G[..., 0] = dxi * J22 - deta * J21
    G[..., 1] = -dxi * J12 + deta * J11
    return G


def physical_points(coords: np.ndarray, table: PointTable) -> np.ndarray:
    """Physical positions of the table points, shape (E, nq, 2)."""
    return np.einsum("qk,ekc->eqc", table.values, coords)


@dataclass(frozen=True)
class ElementGeometry:
    """One element: node coordinates in row-major reference order plus its basis."""

    coords: np.ndarray
    basis: BasisSet

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float).reshape(-1, 2)
        if len(coords) != self.basis.n_nodes:
            raise ValueError(f"expected {self.basis.n_nodes} nodes, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def _table(self, point) -> PointTable:
        xi, eta = point
        return PointTable.build(self.basis, [xi], [eta])

    def intermediates(self, point) -> dict:
        """The 4(m+1) intermediates at ``point``, keyed by family.

        ``r_row[b]`` is the xi-derivative sum along eta-row ``b`` (r_Lambda,
        r_Theta, r_Psi for Q2); ``r_col[a]`` is the eta-derivative sum along
        xi-column ``a`` (r_Delta, r_Phi, r_Gamma).
        """
        row, col = intermediates(self.coords[None], self._table(point))
        return {
            "r_row": row[0, 0, :, 0], "z_row": row[0, 0, :, 1],
            "r_col": col[0, 0, :, 0], "z_col": col[0, 0, :, 1],
        }

    def jacobian(self, point):
        J, detJ = jacobians(self.coords[None], self._table(point))
        return J[0, 0], float(detJ[0, 0])

    def scaled_physical_grads(self, point) -> np.ndarray:
        J, _ = jacobians(self.coords[None], self._table(point))
        return scaled_grads(J, self._table(point))[0, 0]

    def detj_shape_combination(self, point) -> float:
        """detJ as a combination of shape values (Q1 and Q2 only)."""
        m = self.basis.order
        N = self.basis.eval_values(point)
        if m == 1:
            return _q1_detj_combination(self.coords, N)
        if m == 2:
            it = self.intermediates(point)
            # coefficient of N_(a,b) is r_row[b] z_col[a] - r_col[a] z_row[b]
            coef = (np.outer(it["r_row"], it["z_col"]) - np.outer(it["z_row"], it["r_col"]))
            return float(np.dot(N, coef.ravel()))
        raise ValueError(f"shape-value combination of detJ unsupported for m={m}")


def _q1_detj_combination(coords, N) -> float:
    r = coords[:, 0]
    z = coords[:, 1]

    def d(v, i, j):
        return v[i - 1] - v[j - 1]

    t1 = -d(r, 2, 1) * d(z, 1, 3) + d(r, 1, 3) * d(z, 2, 1)
    t2 = -d(r, 4, 2) * d(z, 2, 1) + d(r, 2, 1) * d(z, 4, 2)
    t3 = -d(r, 1, 3) * d(z, 3, 4) + d(r, 3, 4) * d(z, 1, 3)
    t4 = -d(r, 3, 4) * d(z, 4, 2) + d(r, 4, 2) * d(z, 3, 4)
    return 0.25 * float(N[0] * t1 + N[1] * t2 + N[2] * t3 + N[3] * t4)


def jacobian(geom: ElementGeometry, point):
    return geom.jacobian(point)


def detj_shape_combination(geom: ElementGeometry, point) -> float:
    return geom.detj_shape_combination(point)


def scaled_physical_grads(geom: ElementGeometry, point) -> np.ndarray:
    return geom.scaled_physical_grads(point)
