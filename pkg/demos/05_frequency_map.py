# Return time and rotation number, read off the lattice and checked on a section.
import numpy as np

from laxjac.monodromy import frequency_jacobian, frequency_map, poincare_rotation

fd = frequency_map(1.3, 0.6)
print("T_r =", fd.T_r, " Theta_r =", fd.Theta_r)
print("rotation number:", fd.rotation_number)

T, dphi = poincare_rotation(1.3, 0.6)
print("Poincare section: T =", T, " dphi =", dphi)

J, det = frequency_jacobian(1.3, 0.6)
print("d(omega)/d(h, k) =")
print(np.round(J, 6))
print("det =", det)

# a small table along k = 0.6
for h in np.linspace(0.9, 1.9, 6):
    f = frequency_map(h, 0.6)
    print(f"h = {h:.2f}: omega = ({f.omega[0]:.6f}, {f.omega[1]:.6f})")
