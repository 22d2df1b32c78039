r"""The complexified spherical pendulum and its 2x2 Lax pair.

Phase space is ``M = {(x, v) in C^3 x C^3 : <x,x> = 1, <x,v> = 0}`` with the
bilinear (not Hermitian) pairing ``<a, b> = sum a_i b_i``.  The equations of
motion are

.. math::

    \dot x = v, \qquad \dot v = -e_3 + (\langle x, e_3\rangle - \langle v, v\rangle)\, x,

with integrals ``H = <v,v>/2 + x_3`` and ``K = x_1 v_2 - x_2 v_1``.

The map ``(x, v) -> (y, u) = (x, x cross v)`` followed by the substitution

=====================  =====================
``U1 = u3 - i u2``     ``U2 = y3 - i y2``
``V1 = u1``            ``V2 = y1``
``W1 = u3 + i u2``     ``W2 = y3 + i y2``
=====================  =====================

puts the flow in Lax form ``2i dA/dt = [A, B]`` with

.. math::

    A(\lambda) = \begin{pmatrix} V_1\lambda + V_2 & \lambda^2 + U_1\lambda + U_2 \\
                 \lambda^2 + W_1\lambda + W_2 & -(V_1\lambda + V_2)\end{pmatrix},
    \qquad B(\lambda) = \frac{A(\lambda) - A(0)}{\lambda}.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, NoRealTorus, RelationViolation
from .matpoly import MatrixPolynomial
from ._jsonutil import decode_complex, encode_complex

__all__ = [
    "PendulumState",
    "LaxVariables",
    "pendulum_rhs",
    "integrals",
    "cushman_map",
    "cushman_inverse",
    "to_lax_vars",
    "lax_vars_of",
    "lax_matrices",
    "lax_time_derivative",
    "spectral_invariants",
    "rotate_about_e3",
    "project_to_manifold",
    "random_state",
    "state_on_level",
    "S0",
]

E3 = np.array([0.0, 0.0, 1.0])
INPUT_TOL = 1e-6


def bdot(a, b):
    """Bilinear pairing ``sum a_i b_i`` (no conjugation)."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


@dataclass(frozen=True)
class PendulumState:
    """Point ``(x, v)`` of the constraint manifold.

    The constructor rejects states off the manifold by more than ``tol``; use
    :meth:`unchecked` to build arbitrary pairs and :func:`project_to_manifold`
    to repair drift explicitly.
    """

    x: np.ndarray
    v: np.ndarray

    def __init__(self, x, v, tol=INPUT_TOL):
        object.__setattr__(self, "x", np.array(x, dtype=complex).reshape(3))
        object.__setattr__(self, "v", np.array(v, dtype=complex).reshape(3))
        if tol is not None:
            drift = self.constraint_residual()
            if drift > tol:
                raise ConstraintViolation(f"state is off the constraint manifold by {drift:.3e}")

    @classmethod
    def unchecked(cls, x, v):
        return cls(x, v, tol=None)

    def constraint_residual(self):
        return max(abs(bdot(self.x, self.x) - 1.0), abs(bdot(self.x, self.v)))

    def as_vector(self):
        return np.concatenate([self.x, self.v])

    @classmethod
    def from_vector(cls, w, tol=None):
        w = np.asarray(w)
        return cls(w[:3], w[3:6], tol=tol)

    @property
    def is_real(self):
        return bool(np.all(self.x.imag == 0) and np.all(self.v.imag == 0))

    def to_dict(self):
        return {"x": encode_complex(self.x), "v": encode_complex(self.v)}

    @classmethod
    def from_dict(cls, obj, tol=INPUT_TOL):
        return cls(decode_complex(obj["x"]), decode_complex(obj["v"]), tol=tol)


@dataclass(frozen=True)
class LaxVariables:
    U1: complex
    U2: complex
    V1: complex
    V2: complex
    W1: complex
    W2: complex

    def as_array(self):
        return np.array([self.U1, self.U2, self.V1, self.V2, self.W1, self.W2], dtype=complex)

    def relation_residuals(self):
        """Residuals of ``U2 W2 + V2^2 = 1`` and ``U1 W2 + U2 W1 + 2 V1 V2 = 0``."""
        return (self.U2 * self.W2 + self.V2 ** 2 - 1.0,
                self.U1 * self.W2 + self.U2 * self.W1 + 2 * self.V1 * self.V2)


S0 = PendulumState([0.6, 0.0, 0.8], [0.0, 1.0, 0.0])


def pendulum_rhs(state, tol=INPUT_TOL):
    """Velocity field of the pendulum at ``state``.

    Returns
    -------
    (xdot, vdot) : tuple of complex arrays
    """
    drift = state.constraint_residual()
    if drift > tol:
        raise ConstraintViolation(f"input drift {drift:.3e} exceeds {tol:g}")
    return _rhs(state.x, state.v)


def _rhs(x, v):
    # multiplier divided by <x,x> (= 1 on M): keeps <x,v> exactly invariant off M,
    # where the literal form would make M repelling near the upright position
    return v, -E3 + (x[2] - bdot(v, v)) / bdot(x, x) * x


def integrals(state):
    """Energy ``H`` and angular momentum ``K``."""
    x, v = state.x, state.v
    return 0.5 * bdot(v, v) + x[2], x[0] * v[1] - x[1] * v[0]


def cushman_map(state):
    """``(x, v) -> (y, u) = (x, x cross v)``."""
    return state.x.copy(), np.cross(state.x, state.v)


def cushman_inverse(y, u, tol=INPUT_TOL):
    """``(y, u) -> (y, u cross y)``."""
    y = np.asarray(y, dtype=complex)
    return PendulumState(y, np.cross(u, y), tol=tol)


def to_lax_vars(y, u):
    y = np.asarray(y, dtype=complex)
    u = np.asarray(u, dtype=complex)
    return LaxVariables(
        U1=u[2] - 1j * u[1], U2=y[2] - 1j * y[1],
        V1=u[0], V2=y[0],
        W1=u[2] + 1j * u[1], W2=y[2] + 1j * y[1],
    )


def lax_vars_of(state):
    return to_lax_vars(*cushman_map(state))


def _coeff_matrices(lv):
    A0 = np.array([[lv.V2, lv.U2], [lv.W2, -lv.V2]], dtype=complex)
    A1 = np.array([[lv.V1, lv.U1], [lv.W1, -lv.V1]], dtype=complex)
    return A0, A1


J_PENDULUM = np.array([[0, 1], [1, 0]], dtype=complex)


def lax_matrices(lv):
    """Lax pair ``(A, B)`` as matrix polynomials in ``lambda``."""
    A0, A1 = _coeff_matrices(lv)
    return MatrixPolynomial([A0, A1, J_PENDULUM]), MatrixPolynomial([A1, J_PENDULUM])


def lax_time_derivative(y, u):
    """``dA/dt`` obtained by pushing the reduced flow ``y' = u x y, u' = e3 x y``
    through the change of variables (the leading coefficient does not move)."""
    y = np.asarray(y, dtype=complex)
    u = np.asarray(u, dtype=complex)
    dlv = to_lax_vars(np.cross(u, y), np.cross(E3, y))
    A0, A1 = _coeff_matrices(dlv)
    return MatrixPolynomial([A0, A1, np.zeros((2, 2))])


def spectral_invariants(lv, tol=1e-8):
    """Energy/momentum read off the characteristic polynomial.

    Returns
    -------
    h, k : complex
    F : ndarray
        Ascending coefficients of ``F(lam) = lam^4 + 2k lam^3 + 2h lam^2 + 1``.

    Raises
    ------
    RelationViolation
        If the ``lam^1`` or ``lam^0`` coefficient of ``det(A)`` deviates from
        ``0`` or ``1`` by more than ``tol``.
    """
    r0, r1 = lv.relation_residuals()
    if abs(r0) > tol or abs(r1) > tol:
        raise RelationViolation(
            f"Lax variables off the constraint manifold (|const-1|={abs(r0):.2e}, "
            f"|linear|={abs(r1):.2e})")
    k = 0.5 * (lv.U1 + lv.W1)
    h = 0.5 * (lv.U2 + lv.W2 + lv.U1 * lv.W1 + lv.V1 ** 2)
    return h, k, np.array([1.0, 0.0, 2 * h, 2 * k, 1.0], dtype=complex)


def rotation_e3(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=complex)


def rotate_about_e3(state, theta):
    """Apply the (possibly complex) rotation by ``theta`` about ``e3``."""
    R = rotation_e3(theta)
    return PendulumState.unchecked(R @ state.x, R @ state.v)


def project_to_manifold(state):
    """Normalize ``x`` and strip the normal component from ``v``.

    Only for explicit drift repair; nothing in the library calls it implicitly.
    """
    x = state.x / np.sqrt(bdot(state.x, state.x))
    v = state.v - bdot(x, state.v) * x
    return PendulumState(x, v)


def random_state(rng, complex_=False, speed=1.0):
    """Random point of ``M``; real unless ``complex_``."""
    def draw():
        z = rng.normal(size=3)
        return z + 1j * rng.normal(size=3) * 0.3 if complex_ else z.astype(complex)

    x = draw()
    x = x / np.sqrt(bdot(x, x))
    v = draw()
    v = speed * (v - bdot(x, v) * x)
    return PendulumState(x, v, tol=1e-10)


def allowed_heights(h, k):
    """Interval of heights ``x3`` reachable on the real level set ``(h, k)``.

    The radial motion is confined to ``{z in [-1, 1] : 2 (h - z)(1 - z^2) >= k^2}``.
    Returns the component containing the largest admissible gap, or ``None``.
    """
    roots = np.roots([2.0, -2.0 * h, -2.0, 2.0 * h - k * k])
    real = np.sort(roots[np.abs(roots.imag) < 1e-12].real)
    candidates = []
    pts = np.concatenate([[-1.0], real[(real > -1) & (real < 1)], [1.0]])
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (lo + hi)
        if 2 * (h - mid) * (1 - mid * mid) - k * k > 0:
            candidates.append((lo, hi))
    if not candidates:
        return None
    return max(candidates, key=lambda iv: iv[1] - iv[0])


def state_on_level(h, k, height=None):
    """Real state with ``H = h`` and ``K = k``, placed at ``x3 = height``.

    ``height`` defaults to the middle of the admissible band.  Azimuth zero,
    moving downwards when ``height`` is strictly inside the band.
    """
    band = allowed_heights(h, k)
    if band is None:
        raise NoRealTorus(f"(h, k) = ({h}, {k}) has no real invariant torus")
    z = 0.5 * (band[0] + band[1]) if height is None else float(height)
    rho = np.sqrt(1.0 - z * z)
    v2 = k / rho
    w2 = 2.0 * (h - z) - v2 * v2
    if w2 < -1e-12:
        raise NoRealTorus(f"height {z} is outside the admissible band")
    w = np.sqrt(max(w2, 0.0))
    x = np.array([rho, 0.0, z])
    # unit tangent along the meridian, pointing downwards
    meridian = np.array([z, 0.0, -rho])
    v = w * meridian + np.array([0.0, v2, 0.0])
    return PendulumState(x, v, tol=1e-10)
