"""High-order staggered Lagrangian hydrodynamics on quadrilaterals."""

__version__ = "0.1.0"
