"""Quadrature-dependent rank analyses of Q^m elements.

* density DOF count: rank of the kinematic shape-value matrix at an n x n
  Gauss-Legendre rule (detJ is a combination of those values);
* strain-rate rank: rank of the stacked discrete strain-rate operator, whose
  deficiency against 2(m+1)^2 - 3 counts zero-energy (hourglass) modes;
* the area decomposition of a bilinear detJ at diagonal Gauss points.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .basis import KINEMATIC, BasisSet
from .geometry import PointTable, jacobians, numerical_rank, scaled_grads
from .quadrature import gauss_legendre_1d, gauss_legendre_2d, gauss_lobatto_1d

VALIDATED_REGIME = (1, 2, 3)


@dataclass(frozen=True)
class RankReport:
    kind: str
    m: int
    quad_points_1d: int
    matrix_rows: int
    matrix_cols: int
    rank: int
    full_rank: int

    @property
    def deficiency(self) -> int:
        return self.full_rank - self.rank

    @property
    def in_validated_regime(self) -> bool:
        return self.m in VALIDATED_REGIME

    def line(self) -> str:
        note = "" if self.in_validated_regime else "  [outside paper's claimed regime]"
        return (f"{self.kind:<12} m={self.m} n={self.quad_points_1d}  "
                f"matrix {self.matrix_rows}x{self.matrix_cols}  rank={self.rank}  "
                f"full={self.full_rank}  deficiency={self.deficiency}{note}")


def _kinematic(m: int) -> BasisSet:
    # Lobatto table reaches 6 points, so m up to 5 can be analysed
    return BasisSet(gauss_lobatto_1d(m + 1).points, KINEMATIC)


def reference_coords(m: int) -> np.ndarray:
    return _kinematic(m).nodes_2d


def density_dof_rank(m: int, n: int) -> RankReport:
    basis = _kinematic(m)
    rule = gauss_legendre_2d(n)
    A = basis.values_at(rule.points)
    return RankReport("density", m, n, A.shape[0], A.shape[1], numerical_rank(A), basis.n_nodes)


def strain_rate_matrix(m: int, n: int, coords=None) -> np.ndarray:
    """Rows (du/dr, dv/dz, du/dz + dv/dr) per Gauss point; columns (u_1.., v_1..)."""
    basis = _kinematic(m)
    coords = reference_coords(m) if coords is None else np.asarray(coords, dtype=float)
    rule = gauss_legendre_2d(n)
    table = PointTable.from_rule(basis, rule)
    J, detJ = jacobians(coords[None], table)
    grads = scaled_grads(J, table)[0] / detJ[0][:, None, None]
    nq, nk = grads.shape[:2]
    D = np.zeros((3 * nq, 2 * nk))
    for q in range(nq):
        dr, dz = grads[q, :, 0], grads[q, :, 1]
        D[3 * q, :nk] = dr
        D[3 * q + 1, nk:] = dz
        D[3 * q + 2, :nk] = dz
        D[3 * q + 2, nk:] = dr
    return D


def strain_rate_rank(m: int, n: int, coords=None) -> RankReport:
    D = strain_rate_matrix(m, n, coords)
    full = 2 * (m + 1) ** 2 - 3
    return RankReport("strain-rate", m, n, D.shape[0], D.shape[1], numerical_rank(D), full)


def triangle_area(p, q, r) -> float:
    """Signed area of triangle (p, q, r); positive when counterclockwise."""
    return 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def quad_area(coords) -> float:
    """Area of a bilinear quad in lexicographic node order (1,2,3,4)."""
    c = np.asarray(coords, dtype=float)
    return 0.5 * ((c[3, 0] - c[0, 0]) * (c[2, 1] - c[1, 1]) - (c[2, 0] - c[1, 0]) * (c[3, 1] - c[0, 1]))


def detj_gl_decomposition(point) -> tuple:
    """Coefficients (a, b) with detJ(point) = a*S + b*S_312 for every bilinear quad.

    Valid at the diagonal points (s, s), s < 0, of the 2x2 and 3x3 rules.
    Writing detJ = 1/2 (N1 S312 + N2 S124 + N3 S431 + N4 S243) and using
    S312 + S243 = S124 + S431 = S with N2 = N3 on the diagonal gives
    a = (N4 + N2) / 2 and b = (N1 - N4) / 2.
    """
    xi, eta = point
    allowed = [x for n in (2, 3) for x in gauss_legendre_1d(n).points if x < 0.0]
    if xi != eta or not any(abs(xi - x) < 1e-12 for x in allowed):
        raise ValueError(f"unsupported point {point}: need (s, s) with s a negative 2- or 3-point Gauss abscissa")
    N = BasisSet(np.array([-1.0, 1.0]), KINEMATIC).eval_values(point)
    return 0.5 * (N[3] + N[1]), 0.5 * (N[0] - N[3])


def analyze(m: int, n: int, seed=None, amplitude: float = 0.1) -> str:
    """Plain-text density and strain-rate rank report for one (m, n) pair."""
    coords = reference_coords(m)
    if seed is not None:
        rng = np.random.default_rng(seed)
        coords = coords + rng.uniform(-amplitude, amplitude, coords.shape) / m
    lines = [density_dof_rank(m, n).line(), strain_rate_rank(m, n, coords).line()]
    if seed is not None:
        lines.append(f"(element nodes perturbed, seed={seed}, amplitude={amplitude})")
    return "\n".join(lines)


DIAGONAL_POINTS = {
    "2x2": (-sqrt(1.0 / 3.0), -sqrt(1.0 / 3.0)),
    "3x3": (-sqrt(3.0 / 5.0), -sqrt(3.0 / 5.0)),
}
