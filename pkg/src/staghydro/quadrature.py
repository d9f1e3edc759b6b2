"""Gauss-Legendre and Gauss-Lobatto rules on [-1, 1] and their tensor products.

Abscissae and weights are closed-form constants, not root-finding results,
so golden tests stay bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QuadratureRule1D:
    points: np.ndarray
    weights: np.ndarray
    kind: str = "legendre"

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen(self.points))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.points.shape != self.weights.shape:
            raise ValueError("points and weights must have the same length")

    def __len__(self) -> int:
        return len(self.points)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.points)))


@dataclass(frozen=True)
class QuadratureRule2D:
    """Tensor-product rule on [-1, 1]^2; point ``i + j * nx`` is ``(x_i, y_j)``."""

    points: np.ndarray  # (n, 2)
    weights: np.ndarray  # (n,)
    rx: QuadratureRule1D
    ry: QuadratureRule1D

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen(self.points))
        object.__setattr__(self, "weights", _frozen(self.weights))

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.points[:, 0], self.points[:, 1])))


def _symmetric(pairs, centre=None):
    """Build an ascending rule from (positive abscissa, weight) pairs."""
    pairs = sorted(pairs, reverse=True)
    pts = [-x for x, _ in pairs]
    wts = [w for _, w in pairs]
    if centre is not None:
        pts.append(0.0)
        wts.append(centre)
    for x, w in reversed(pairs):
        pts.append(x)
        wts.append(w)
    return pts, wts


def _legendre_table():
    s65 = sqrt(6.0 / 5.0)
    s107 = sqrt(10.0 / 7.0)
    return {
        1: ([0.0], [2.0]),
        2: _symmetric([(sqrt(1.0 / 3.0), 1.0)]),
        3: _symmetric([(sqrt(3.0 / 5.0), 5.0 / 9.0)], centre=8.0 / 9.0),
        4: _symmetric([
            (sqrt((3.0 + 2.0 * s65) / 7.0), 0.5 - 1.0 / (6.0 * s65)),
            (sqrt((3.0 - 2.0 * s65) / 7.0), 0.5 + 1.0 / (6.0 * s65)),
        ]),
        5: _symmetric([
            (sqrt((5.0 + 2.0 * s107) / 9.0), 729.0 / (50.0 * (46.0 + 13.0 * s107))),
            (sqrt((5.0 - 2.0 * s107) / 9.0), 729.0 / (50.0 * (46.0 - 13.0 * s107))),
        ], centre=128.0 / 225.0),
    }


def _lobatto_table():
    s7 = sqrt(7.0)
    return {
        2: ([-1.0, 1.0], [1.0, 1.0]),
        3: _symmetric([(1.0, 1.0 / 3.0)], centre=4.0 / 3.0),
        4: _symmetric([(1.0, 1.0 / 6.0), (sqrt(1.0 / 5.0), 5.0 / 6.0)]),
        5: _symmetric([(1.0, 1.0 / 10.0), (sqrt(3.0 / 7.0), 49.0 / 90.0)], centre=32.0 / 45.0),
        6: _symmetric([
            (1.0, 1.0 / 15.0),
            (sqrt((7.0 + 2.0 * s7) / 21.0), (14.0 - s7) / 30.0),
            (sqrt((7.0 - 2.0 * s7) / 21.0), (14.0 + s7) / 30.0),
        ]),
    }


_LEGENDRE = _legendre_table()
_LOBATTO = _lobatto_table()


def gauss_legendre_1d(n: int) -> QuadratureRule1D:
    """n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1."""
    if n not in _LEGENDRE:
        raise ValueError(f"rule order out of range: Gauss-Legendre n={n} (supported 1..5)")
    pts, wts = _LEGENDRE[n]
    return QuadratureRule1D(pts, wts, "legendre")


def gauss_lobatto_1d(n: int) -> QuadratureRule1D:
    """n-point Gauss-Lobatto rule (endpoints included), exact to degree 2n - 3."""
    if n not in _LOBATTO:
        raise ValueError(f"rule order out of range: Gauss-Lobatto n={n} (supported 2..6)")
    pts, wts = _LOBATTO[n]
    return QuadratureRule1D(pts, wts, "lobatto")


def tensor_product(rx: QuadratureRule1D, ry: QuadratureRule1D) -> QuadratureRule2D:
    X, Y = np.meshgrid(rx.points, ry.points, indexing="xy")
    WX, WY = np.meshgrid(rx.weights, ry.weights, indexing="xy")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    return QuadratureRule2D(pts, (WX * WY).ravel(), rx, ry)


def gauss_legendre_2d(n: int) -> QuadratureRule2D:
    r = gauss_legendre_1d(n)
    return tensor_product(r, r)


def gauss_lobatto_2d(n: int) -> QuadratureRule2D:
    r = gauss_lobatto_1d(n)
    return tensor_product(r, r)
