# The pendulum flow is a straight line on the generalized Jacobian.
import numpy as np

from laxjac.curves import curve_from_hk, eigenvector_divisor, extended_lattice
from laxjac.flows import Trajectory, integrate_pendulum
from laxjac.jacobian import abel_flow_fit, symmetry_equivariance
from laxjac.pendulum import S0, lax_vars_of, rotate_about_e3

curve = curve_from_hk(1.3, 0.6)
L = extended_lattice(curve)

# two points where the (1,2) entry of A(lambda) vanishes
for P in eigenvector_divisor(lax_vars_of(S0)):
    print("divisor point:", np.round(P.lam, 6), np.round(P.mu, 6), "residual", P.residual(curve))

tr = integrate_pendulum(S0, 5.0, n_samples=200)
fit = abel_flow_fit(tr, curve, lattice=L)
print("V_H =", np.round(fit.velocity, 10), " residual", fit.residual)

# the rotation about e3 moves only the C* fiber
ts = np.linspace(0.0, 5.0, 50)
rot = Trajectory(ts, [rotate_about_e3(S0, t) for t in ts], 0.0)
fk = abel_flow_fit(rot, curve, lattice=L)
print("V_K =", np.round(fk.velocity, 10))

for th in (0.3, 0.6, 1.2):
    r, dz2 = symmetry_equivariance(S0, th, curve, lattice=L)
    print(f"theta = {th}: |dz1 mod Lambda| = {r:.1e}, dz2 = {dz2:.10f}")
