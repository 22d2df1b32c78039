"""Lax flows, spectral curves and generalized Jacobians for the spherical pendulum.

Submodules
----------
matpoly    matrix polynomials, characteristic polynomials, Lax vector fields
pendulum   the complexified pendulum, its Lax pair and spectral invariants
flows      numerical integration and isospectrality diagnostics
curves     the quartic spectral curve, periods, extended lattice, Abel map
jacobian   lattice-quotient arithmetic, Abel-flow fits, equivariance
monodromy  period continuation around loops, discriminant, frequency map
"""
__version__ = "0.1.0"

from .errors import LaxJacError  # noqa: E402,F401
