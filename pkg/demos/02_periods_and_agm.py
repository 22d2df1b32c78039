# Periods of mu^2 = F(lambda) by contour quadrature and by the AGM.
import numpy as np

from laxjac.curves import (curve_from_hk, extended_lattice, periods_agm, periods_first_kind,
                           quartic_curve, reciprocity_residual)

c = curve_from_hk(1.3, 0.6)
print(c)
print("branch points:", np.round(c.branch_points, 6))

wa, wb = periods_first_kind(c)
qa, qb = periods_agm(c)
print("contour :", wa, wb)
print("AGM     :", qa, qb)
print("tau = omega_b / omega_a =", wb / wa)

# the lemniscate: real period 4 int_0^1 dx / sqrt(1 - x^4)
lem = quartic_curve([1, 0, 0, 0, -1])
print("lemniscate periods:", periods_first_kind(lem))

# adding the third-kind differential gives the rank-three lattice in C^2
L = extended_lattice(c)
print("generators of the extended lattice (rows):")
print(np.round(L.generators, 9))
print("real singular values:", np.round(L.singular_values(), 6))
print("reciprocity residual:", reciprocity_residual(c))



def reduce_tau(t):
    t = t if t.imag > 0 else -t
    while True:
        t = t - round(t.real)
        if abs(t) >= 1:
            return t
        t = -1 / t


# walk towards the unstable equilibrium (1, 0): the cell stretches like log(1/eps)
for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
    w = periods_first_kind(curve_from_hk(1 + eps, 0.0))
    print(f"h = 1 + {eps:g}: Im tau = {reduce_tau(w[1] / w[0]).imag:.6f}")
