"""Tensor-product Lagrange nodal bases.

The kinematic basis of pair ``m`` is Q^m on the (m+1) Gauss-Lobatto
abscissae; the thermodynamic basis is Q^(m-1) on the m Gauss-Legendre
abscissae. 2D function ``i = a + b * n`` is ``l_a(xi) * l_b(eta)`` (zero-based),
i.e. nodes are numbered row by row with xi running fastest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .quadrature import gauss_legendre_1d, gauss_lobatto_1d

KINEMATIC = "kinematic"
THERMODYNAMIC = "thermodynamic"


@dataclass(frozen=True)
class BasisSet:
    nodes_1d: np.ndarray
    kind: str
    _bary: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = np.array(self.nodes_1d, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes_1d", nodes)
        n = len(nodes)
        bary = np.ones(n)
        for j in range(n):
            for k in range(n):
                if k != j:
                    bary[j] /= nodes[j] - nodes[k]
        bary.setflags(write=False)
        object.__setattr__(self, "_bary", bary)

    @property
    def order(self) -> int:
        return len(self.nodes_1d) - 1

    @property
    def n_nodes(self) -> int:
        return len(self.nodes_1d) ** 2

    @property
    def nodes_2d(self) -> np.ndarray:
        X, Y = np.meshgrid(self.nodes_1d, self.nodes_1d, indexing="xy")
        return np.column_stack([X.ravel(), Y.ravel()])

    def values_1d(self, x) -> np.ndarray:
        """Lagrange values ``l_j(x)``, shape ``(len(x), n)``.

        Uses the first barycentric form ``l_j(x) = w_j prod_{k != j}(x - x_k)``,
        which is exact at the nodes.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        diff = x[:, None] - self.nodes_1d[None, :]
        n = len(self.nodes_1d)
        out = np.empty((len(x), n))
        for j in range(n):
            out[:, j] = self._bary[j] * np.prod(np.delete(diff, j, axis=1), axis=1)
        return out

    def derivs_1d(self, x) -> np.ndarray:
        """First derivatives ``l_j'(x)``, shape ``(len(x), n)``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        diff = x[:, None] - self.nodes_1d[None, :]
        n = len(self.nodes_1d)
        out = np.zeros((len(x), n))
        for j in range(n):
            others = np.delete(diff, j, axis=1)
            for i in range(n - 1):
                out[:, j] += np.prod(np.delete(others, i, axis=1), axis=1)
            out[:, j] *= self._bary[j]
        return out

    def eval_values(self, point) -> np.ndarray:
        xi, eta = point
        vx = self.values_1d(xi)[0]
        vy = self.values_1d(eta)[0]
        return np.outer(vy, vx).ravel()

    def eval_parametric_grads(self, point) -> np.ndarray:
        """Rows ``(dN_i/dxi, dN_i/deta)`` for every basis function."""
        xi, eta = point
        vx, dx = self.values_1d(xi)[0], self.derivs_1d(xi)[0]
        vy, dy = self.values_1d(eta)[0], self.derivs_1d(eta)[0]
        return np.column_stack([np.outer(vy, dx).ravel(), np.outer(dy, vx).ravel()])

    def values_at(self, points) -> np.ndarray:
        """Value matrix, shape ``(len(points), n_nodes)``."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        vx = self.values_1d(points[:, 0])
        vy = self.values_1d(points[:, 1])
        return np.einsum("pb,pa->pba", vy, vx).reshape(len(points), -1)


def _check_pair(m: int):
    if m not in (1, 2, 3):
        raise ValueError(f"space-pair order m={m} out of range (supported 1..3)")


def kinematic_basis(m: int) -> BasisSet:
    _check_pair(m)
    return BasisSet(gauss_lobatto_1d(m + 1).points, KINEMATIC)


def thermodynamic_basis(m: int) -> BasisSet:
    _check_pair(m)
    return BasisSet(gauss_legendre_1d(m).points, THERMODYNAMIC)


eval_values = BasisSet.eval_values
eval_parametric_grads = BasisSet.eval_parametric_grads
