# Spherical pendulum, its two integrals, and the 2x2 Lax matrix.
import numpy as np

from laxjac.flows import integrate_pendulum, isospectral_deviation, pendulum_trajectory_to_lax
from laxjac.matpoly import char_poly
from laxjac.pendulum import S0, cushman_map, integrals, lax_matrices, lax_vars_of

# the reference state: tilted by asin(0.6), spinning about e3
print("H, K at S0:", integrals(S0))

# the Cushman map sends (x, v) to (y, u) = (x, x cross v)
y, u = cushman_map(S0)
print("y =", y.real, " u =", u.real)

A, B = lax_matrices(lax_vars_of(S0))
print("A(lambda) coefficients, ascending:")
print(np.round(A.coeffs.real, 6))

# det(mu I - A) = mu^2 - F(lambda), F = lambda^4 + 2k lambda^3 + 2h lambda^2 + 1
F = -char_poly(A).s[1]
print("F coefficients (ascending):", np.round(F.real, 12))

# integrate for a while and watch the invariants
tr = integrate_pendulum(S0, 20.0, tol=1e-12, n_samples=401)
print("max |H(t) - H(0)|:", tr.diagnostics["H_drift"].max())
print("max |K(t) - K(0)|:", tr.diagnostics["K_drift"].max())

# the spectral polynomial does not move along the flow
print("char-poly drift:", isospectral_deviation(pendulum_trajectory_to_lax(tr)))
