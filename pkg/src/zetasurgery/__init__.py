"""Zeta-regularized determinants on product cylinders: gluing identities and adiabatic limits."""

__version__ = "0.1.0"
