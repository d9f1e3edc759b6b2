"""Closed-form initial data for test problems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

ALL_WALLS = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class ProblemSpec:
    """Ideal-gas initial-value problem on a rectangle.

    Field callables take arrays ``(r, z)`` and return arrays of the same shape
    (velocity returns a pair). ``energy_source`` is a specific-energy rate.
    """

    gamma: float
    velocity: Callable
    pressure: Callable
    density: Callable
    energy_source: Optional[Callable] = None
    walls: tuple = ALL_WALLS
    t_final: float = 0.5
    cfl: float = 0.5
    domain: tuple = (0.0, 1.0, 0.0, 1.0)
    name: str = "custom"

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if not self.t_final >= 0.0:
            raise ValueError("t_final must be non-negative")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must lie in (0, 1]")
        unknown = set(self.walls) - set(ALL_WALLS)
        if unknown:
            raise ValueError(f"unknown walls {sorted(unknown)}")


def taylor_green(source: bool = True, gamma: float = 5.0 / 3.0,
                 t_final: float = 0.5, cfl: float = 0.5) -> ProblemSpec:
    """2D Taylor-Green vortex on the unit square with wall boundaries."""
    pi = np.pi

    def velocity(r, z):
        return np.sin(pi * r) * np.cos(pi * z), -np.cos(pi * r) * np.sin(pi * z)

    def density(r, z):
        return np.ones_like(np.asarray(r, dtype=float))

    def pressure(r, z):
        return density(r, z) / 4.0 * (np.cos(2 * pi * r) + np.cos(2 * pi * z)) + 1.0

    def e_source(r, z):
        return 3.0 / 8.0 * pi * (np.cos(3 * pi * r) * np.cos(pi * z)
                                 - np.cos(pi * r) * np.cos(3 * pi * z))

    return ProblemSpec(
        gamma=gamma, velocity=velocity, pressure=pressure, density=density,
        energy_source=e_source if source else None, t_final=t_final, cfl=cfl,
        name="taylor-green" if source else "taylor-green-nosource",
    )


def uniform_gas(rho: float = 1.0, p: float = 1.0, gamma: float = 5.0 / 3.0,
                t_final: float = 0.1, cfl: float = 0.5) -> ProblemSpec:
    """Static gas at rest; an exact equilibrium of the discrete scheme."""

    def velocity(r, z):
        zero = np.zeros_like(np.asarray(r, dtype=float))
        return zero, zero.copy()

    return ProblemSpec(
        gamma=gamma, velocity=velocity,
        pressure=lambda r, z: np.full_like(np.asarray(r, dtype=float), p),
        density=lambda r, z: np.full_like(np.asarray(r, dtype=float), rho),
        t_final=t_final, cfl=cfl, name="uniform",
    )


PROBLEMS = {"taylor-green": taylor_green}
