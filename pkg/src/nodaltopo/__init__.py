"""Toolkit for nodal sets of spherical harmonics and planar eigenfunctions.

Builds eigenfunction families with prescribed nodal topology (perturbed
harmonics with ~n^2/4 ovals, lifts of planar harmonic polynomials, a planar
eigenfunction with exactly two nodal domains), extracts and counts their
nodal sets on topology-aware grids, and checks the results against exact
combinatorial and bound formulas.
"""

from .specfun import (
    BesselZeroTable,
    DomainError,
    assoc_normalized,
    assoc_zeros,
    bessel_j,
    bessel_zeros,
    legendre_deriv,
    legendre_eval,
)

__all__ = [
    "BesselZeroTable",
    "DomainError",
    "assoc_normalized",
    "assoc_zeros",
    "bessel_j",
    "bessel_zeros",
    "legendre_deriv",
    "legendre_eval",
]
