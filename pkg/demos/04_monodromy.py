# Transport the period lattice around the unstable equilibrium (h, k) = (1, 0).
import numpy as np

from laxjac.monodromy import LoopSpec, continue_periods, discriminant_locus

lines, isolated = discriminant_locus(grid=(181, 161))
print("isolated zeros of the discriminant:", isolated)
print("number of discriminant polylines:", len(lines))

loop = LoopSpec((1.0, 0.0), 0.3, 64)
res = continue_periods(loop)
print("closing residual:", res.continuation_residual, " steps:", res.steps)

# on H1 of the compact curve nothing happens...
print("M =", res.M.tolist())
# ...while the affine curve picks up a shear by the loop around infinity
print("M_ext =", res.M_ext.tolist())
# and on the real torus this is the classical monodromy of the spherical pendulum
print("M_real =", res.M_real.tolist())

back = continue_periods(loop.reversed())
print("reversed loop undoes it:", np.array_equal(back.M_ext @ res.M_ext, np.eye(3, dtype=int)))

# a loop in the regular region is trivial
print("trivial loop:", continue_periods(LoopSpec((2.0, 0.5), 0.1, 64)).M_ext.tolist())
