"""Numerical integration of the pendulum and of polynomial Lax flows.

Both integrators use an explicit adaptive Runge--Kutta pair (Dormand--Prince
8(5,3) from :mod:`scipy.integrate`) on the real and imaginary parts of the
complex state.  The requested ``tol`` is passed to the pair as a local
tolerance of ``tol / 10`` (never below ``2.3e-14``).  Nothing is projected back onto the constraint manifold:
invariant and constraint drift are diagnostics, not something the integrator
enforces.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StepFailure
from .matpoly import MatrixPolynomial, char_poly, lax_vector_field
from .pendulum import (PendulumState, _rhs, integrals, lax_matrices, lax_vars_of,
                       rotate_about_e3)

__all__ = [
    "Trajectory",
    "integrate_pendulum",
    "integrate_lax",
    "isospectral_deviation",
    "commuting_flows_deviation",
    "pendulum_trajectory_to_lax",
]


@dataclass
class Trajectory:
    """Samples of a flow.

    ``states`` holds :class:`PendulumState` or :class:`MatrixPolynomial`
    snapshots; ``diagnostics`` maps names to per-sample arrays.
    """

    times: np.ndarray
    states: list
    integrator_tol: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times)
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if np.isrealobj(self.times) and len(self.times) > 1:
            steps = np.diff(self.times)
            if not (np.all(steps > 0) or np.all(steps < 0)):
                raise ValueError("sample times must be strictly monotone")

    def __len__(self):
        return len(self.states)

    def to_rows(self):
        """CSV rows for pendulum trajectories (header first)."""
        head = ["t"]
        for name in ("x1", "x2", "x3", "v1", "v2", "v3"):
            head += [f"re_{name}", f"im_{name}"]
        head += ["re_H", "im_H", "re_K", "im_K", "xx_residual", "xv_residual"]
        rows = [head]
        for t, s in zip(self.times, self.states):
            H, K = integrals(s)
            w = s.as_vector()
            row = [float(np.real(t))]
            for c in w:
                row += [c.real, c.imag]
            row += [H.real, H.imag, K.real, K.imag,
                    abs(np.sum(s.x * s.x) - 1), abs(np.sum(s.x * s.v))]
            rows.append(row)
        return rows

    def to_dict(self):
        out = {"times": [float(np.real(t)) for t in self.times],
               "integrator_tol": self.integrator_tol,
               "diagnostics": {k: [float(x) for x in v] for k, v in self.diagnostics.items()}}
        if self.states and isinstance(self.states[0], PendulumState):
            out["states"] = [s.to_dict() for s in self.states]
        else:
            out["states"] = [A.to_dict() for A in self.states]
        return out


def _as_real(w):
    return np.ascontiguousarray(w, dtype=complex).view(float)


def _as_complex(w):
    return np.ascontiguousarray(w).view(complex)


# local error target relative to the requested tolerance; global error runs
# roughly an order of magnitude above the per-step target
SAFETY = 0.1
MIN_RTOL = 2.3e-14


def _solve(fun, w0, span, tol, t_eval):
    local = max(SAFETY * tol, MIN_RTOL)
    sol = solve_ivp(
        fun, span, _as_real(w0), method="DOP853", rtol=local, atol=local,
        t_eval=t_eval, dense_output=False,
    )
    if sol.status != 0:
        t_fail = float(sol.t[-1]) if len(sol.t) else span[0]
        raise StepFailure(f"integration stopped at t={t_fail:.6g}: {sol.message}", t_fail)
    return sol


def integrate_pendulum(state0, t_end, tol=1e-12, n_samples=101, t_start=0.0):
    """Integrate the pendulum from ``state0`` over ``[t_start, t_end]``.

    ``t_end < t_start`` integrates backwards.  Samples are equally spaced and
    include both ends.

    Raises
    ------
    StepFailure
        When adaptive stepping cannot continue (e.g. finite-time blow-up of a
        complex solution); ``t_fail`` records the last time reached.
    """
    def fun(t, y):
        w = _as_complex(y)
        xd, vd = _rhs(w[:3], w[3:])
        return _as_real(np.concatenate([xd, vd]))

    t_eval = np.linspace(t_start, t_end, n_samples)
    sol = _solve(fun, state0.as_vector(), (t_start, t_end), tol, t_eval)
    W = _as_complex(sol.y.T.copy())
    states = [PendulumState.unchecked(w[:3], w[3:]) for w in W]
    H0, K0 = integrals(state0)
    HK = np.array([integrals(s) for s in states])
    diag = {
        "H_drift": np.abs(HK[:, 0] - H0),
        "K_drift": np.abs(HK[:, 1] - K0),
        "constraint_drift": np.array([s.constraint_residual() for s in states]),
    }
    return Trajectory(times=t_eval, states=states, integrator_tol=tol, diagnostics=diag)


def integrate_lax(A0, k=1, a=0.0, t_end=1.0, tol=1e-12, n_samples=101):
    """Integrate ``dA/dt = [A^k(a), A(x)] / (x - a)`` coefficientwise.

    ``t_end`` may be complex: the flow is then followed along the straight ray
    ``t = s * t_end / |t_end|`` for real ``s`` in ``[0, |t_end|]`` and the
    returned sample times are complex.
    """
    t_end = complex(t_end)
    length = abs(t_end)
    direction = t_end / length if length > 0 else 1.0
    shape = A0.coeffs.shape
    d = A0.d

    def fun(s, y):
        A = MatrixPolynomial(_as_complex(y).reshape(shape))
        F = lax_vector_field(A, k, a)
        out = np.zeros(shape, dtype=complex)
        out[: min(F.d + 1, d)] = F.coeffs[:d]
        return _as_real(direction * out.ravel())

    s_eval = np.linspace(0.0, length, n_samples)
    sol = _solve(fun, A0.coeffs.ravel(), (0.0, length), tol, s_eval)
    W = _as_complex(sol.y.T.copy())
    states = [MatrixPolynomial(w.reshape(shape)) for w in W]
    times = s_eval * direction if t_end.imag != 0 else s_eval
    traj = Trajectory(times=times, states=states, integrator_tol=tol)
    traj.diagnostics["leading_drift"] = np.array(
        [np.abs(A.leading - A0.leading).max() for A in states])
    return traj


def isospectral_deviation(traj):
    """Largest drift of any characteristic-polynomial coefficient along ``traj``."""
    ref = char_poly(traj.states[0]).coefficient_vector()
    worst = 0.0
    for A in traj.states[1:]:
        worst = max(worst, float(np.abs(char_poly(A).coefficient_vector() - ref).max()))
    return worst


def commuting_flows_deviation(state0, t, s, tol=1e-12):
    """``|Phi^H_t Phi^K_s (p) - Phi^K_s Phi^H_t (p)|``.

    The ``K`` flow is rotation about ``e3`` by angle ``s``.
    """
    def flow_h(st):
        if t == 0:
            return st
        return integrate_pendulum(st, t, tol=tol, n_samples=2).states[-1]

    p1 = flow_h(rotate_about_e3(state0, s))
    p2 = rotate_about_e3(flow_h(state0), s)
    return float(np.abs(p1.as_vector() - p2.as_vector()).max())


def pendulum_trajectory_to_lax(traj):
    """Push a pendulum trajectory through ``(x, v) -> (y, u) -> A(lambda)``."""
    return Trajectory(times=traj.times,
                      states=[lax_matrices(lax_vars_of(s))[0] for s in traj.states],
                      integrator_tol=traj.integrator_tol)
