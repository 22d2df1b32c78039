r"""Monodromy of the period lattices over the ``(h, k)`` plane and the frequency map.

Continuation works on period vectors rather than explicit cycles.  At every
step of a loop the periods are recomputed on a cycle basis attached to the
tracked branch points; the previously transported generators are extrapolated
to the new parameter value and re-expressed in the fresh basis, where the
coefficients must round to integers.  After a full turn the transported
generators are compared with the initial ones.

Three integer matrices come out:

``M``
    action on ``Lambda = <omega_a, omega_b>`` (cycles of the compact curve),
``M_ext``
    action on ``Lambda' = <g1, g2, g3>`` (cycles of the affine curve),
``M_real``
    action on the rank-two lattice of real return times ``(T, Theta)`` of
    the invariant torus, i.e. on ``Lambda'`` intersected with the real span of
    the two flow velocities.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from . import curves as _curves
from ._jsonutil import encode_complex
from .curves import (CycleSpec, curve_from_hk, default_base_point, extended_lattice,
                     period_data, quartic_discriminant)
from .errors import (BranchCollision, ContourTooClose, IntegerRelationFailure, LaxJacError,
                     NonIntegerMonodromy, NoRealTorus)
from .flows import Trajectory, integrate_pendulum
from .jacobian import abel_flow_fit
from .pendulum import allowed_heights, rotate_about_e3, state_on_level

__all__ = [
    "LoopSpec",
    "MonodromyResult",
    "discriminant",
    "discriminant_locus",
    "loop_clearance",
    "continue_periods",
    "FrequencyData",
    "frequency_map",
    "frequency_jacobian",
    "return_lattice",
    "poincare_rotation",
]


def discriminant(h, k):
    """Discriminant of ``F_c`` as a function of ``(h, k)`` (vectorized)."""
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    one = np.ones_like(h)
    return quartic_discriminant([one, 0 * h, 2 * h, 2 * k, one]).real


def discriminant_locus(h_range=(-1.5, 3.0), k_range=(-2.0, 2.0), grid=(401, 401)):
    """Real zero set of the discriminant on a rectangle.

    Returns
    -------
    polylines : list of (n, 2) arrays
        Curves where the discriminant changes sign, in ``(h, k)``.
    isolated : list of (h, k)
        Zeros without a sign change (local minima of ``|disc|`` that vanish),
        such as the unstable equilibrium value ``(1, 0)``.
    """
    import contourpy
    from scipy.optimize import minimize

    H, K = np.meshgrid(np.linspace(*h_range, grid[0]), np.linspace(*k_range, grid[1]),
                       indexing="ij")
    D = discriminant(H, K)
    gen = contourpy.contour_generator(H, K, D)
    polylines = [np.asarray(p) for p in gen.lines(0.0) if len(p) > 1]

    # isolated zeros: local minima of |D| that do not sit on a sign change
    A = np.abs(D)
    isolated = []
    scale = np.abs(D).max()
    for i in range(1, grid[0] - 1):
        for j in range(1, grid[1] - 1):
            window = A[i - 1:i + 2, j - 1:j + 2]
            if A[i, j] > window.min() or A[i, j] > 1e-3 * scale:
                continue
            w = D[i - 1:i + 2, j - 1:j + 2]
            if (w < 0).any() and (w > 0).any():
                continue
            res = minimize(lambda p: discriminant(p[0], p[1]) ** 2, [H[i, j], K[i, j]],
                           method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-30})
            p = res.x
            if abs(discriminant(*p)) < 1e-8 and not any(
                    np.hypot(p[0] - q[0], p[1] - q[1]) < 1e-4 for q in isolated):
                isolated.append((float(p[0]), float(p[1])))
    return polylines, isolated


@dataclass(frozen=True)
class LoopSpec:
    """Circle ``(h, k) = center + radius (cos phi, sin phi)`` traversed once."""

    center: tuple
    radius: float
    n_steps: int = 64
    orientation: int = 1

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.n_steps < 32:
            raise ValueError("n_steps must be at least 32")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def point(self, s):
        phi = 2 * np.pi * self.orientation * s
        return (self.center[0] + self.radius * np.cos(phi),
                self.center[1] + self.radius * np.sin(phi))

    def reversed(self):
        return LoopSpec(self.center, self.radius, self.n_steps, -self.orientation)

    def to_dict(self):
        return {"center": list(self.center), "radius": self.radius,
                "n_steps": self.n_steps, "orientation": self.orientation}


def loop_clearance(loop, samples=None):
    """Whether the discriminant keeps one sign on the annulus of width ``radius/10``."""
    n = samples or 4 * loop.n_steps
    phi = np.linspace(0, 2 * np.pi, n, endpoint=False)
    vals = []
    for dr in (-0.1, 0.0, 0.1):
        r = loop.radius * (1 + dr)
        vals.append(discriminant(loop.center[0] + r * np.cos(phi), loop.center[1] + r * np.sin(phi)))
    vals = np.concatenate(vals)
    return bool(np.all(vals > 0) or np.all(vals < 0))


@dataclass
class MonodromyResult:
    """Integer monodromy matrices of one loop.

    ``continuation_residual`` is the distance from the integers of the closing
    change of basis; ``max_step_rounding`` the largest per-step prediction
    mismatch (must stay well below 1/2).  Rows of ``M_ext`` express the transported generators ``g1, g2, g3`` in the
    initial ones; ``M`` is its upper-left block.  ``M_real`` acts on the basis
    ``real_basis`` (integer coefficient rows over ``g1, g2, g3``) of the real
    return lattice; it is None when the base point has no real torus.
    """

    M: np.ndarray
    M_ext: np.ndarray
    continuation_residual: float
    loop: LoopSpec
    steps: int
    max_step_rounding: float = 0.0
    M_real: np.ndarray = None
    real_basis: np.ndarray = None
    initial_generators: np.ndarray = None
    final_generators: np.ndarray = None

    def to_dict(self):
        out = {"M": self.M.tolist(), "M_ext": self.M_ext.tolist(),
               "continuation_residual": self.continuation_residual,
               "loop": self.loop.to_dict(), "steps": self.steps,
               "max_step_rounding": self.max_step_rounding,
               "trace_M": int(np.trace(self.M)), "det_M": int(round(np.linalg.det(self.M)))}
        if self.M_real is not None:
            out["M_real"] = self.M_real.tolist()
            out["real_basis"] = self.real_basis.tolist()
        if self.initial_generators is not None:
            out["initial_generators"] = encode_complex(self.initial_generators)
        return out


def _match(prev, new):
    """Permutation ``p`` with ``new[p[i]]`` nearest to ``prev[i]``, and the largest move."""
    D = np.abs(prev[:, None] - new[None, :])
    p = D.argmin(axis=1)
    if len(set(p.tolist())) != len(p):
        return None, np.inf
    return p, float(D[np.arange(len(p)), p].max())


def _generators_at(h, k, labels_pos):
    """Extended generators on the cycle basis of the tracked labels ``0,1,2``."""
    curve = curve_from_hk(h, k)
    spec = CycleSpec(a=(int(labels_pos[0]), int(labels_pos[1])),
                     b=(int(labels_pos[1]), int(labels_pos[2])))
    return curve, period_data(curve, spec).generators


def _express(target, basis):
    """Real coefficients of the rows of ``target`` over the rows of ``basis`` (rank 3 in R^4)."""
    def real(v):
        return np.array([v[0].real, v[0].imag, v[1].real, v[1].imag])

    G = np.column_stack([real(g) for g in basis])
    U, _, _ = np.linalg.svd(G)
    F = np.column_stack([G, U[:, 3]])
    return np.array([np.linalg.solve(F, real(t)) for t in target])


def continue_periods(loop, max_halvings=12, round_tol=0.1, move_frac=0.25):
    """Transport ``Lambda'`` once around ``loop``.

    Raises
    ------
    BranchCollision
        If step refinement cannot keep branch points apart or the rounding
        unambiguous.
    NonIntegerMonodromy
        If the closing change of basis is not integral to ``1e-6``.
    """
    if not loop_clearance(loop):
        raise BranchCollision("loop passes within radius/10 of the discriminant locus")
    h0, k0 = loop.point(0.0)
    curve0 = curve_from_hk(h0, k0)
    labels = curve0.branch_points.copy()
    pos = np.arange(4)
    _, G0 = _generators_at(h0, k0, pos)
    transported = G0.copy()
    history = [(0.0, G0.copy())]
    s, ds = 0.0, 1.0 / loop.n_steps
    worst = 0.0
    steps = 0
    while s < 1.0 - 1e-15:
        step = min(ds, 1.0 - s)
        for _ in range(max_halvings + 1):
            s_new = s + step
            h, k = loop.point(s_new)
            curve = curve_from_hk(h, k)
            new = curve.branch_points
            perm, move = _match(labels, new)
            ok = perm is not None and move < move_frac * curve.min_separation
            if ok:
                try:
                    _, G = _generators_at(h, k, perm)
                except ContourTooClose:
                    ok = False
            if ok:
                # predict transported generators by linear extrapolation
                if len(history) >= 2:
                    (s1, T1), (s2, T2) = history[-2], history[-1]
                    pred = T2 + (T2 - T1) * (s_new - s2) / (s2 - s1)
                else:
                    pred = transported
                coef = _express(pred, G)
                N = np.round(coef[:, :3])
                err = float(np.abs(coef[:, :3] - N).max())
                ok = err < round_tol and abs(round(np.linalg.det(N))) == 1
            if ok:
                break
            step *= 0.5
        else:
            raise BranchCollision(f"step refinement exhausted at s={s:.6f}")
        worst = max(worst, err)
        transported = N @ G
        labels = new[perm]
        history.append((s_new, transported.copy()))
        history = history[-2:]
        s = s_new
        steps += 1
        # recover the nominal step after local refinement
        ds = min(1.0 / loop.n_steps, 2 * step)

    coef = _express(transported, G0)
    M_ext = np.round(coef[:, :3])
    residual = float(max(np.abs(coef[:, :3] - M_ext).max(), np.abs(coef[:, 3]).max()))
    if residual > 1e-6:
        raise NonIntegerMonodromy(f"closing change of basis off the integers by {residual:.2e}")
    M_ext = M_ext.astype(int)
    M = M_ext[:2, :2].copy()

    M_real = real_basis = None
    try:
        lattice = extended_lattice(curve0)
        fd = frequency_map(h0, k0, lattice=lattice)
        real_basis = fd.basis_coeffs
        # transported lattice vector n . g  ->  (n M_ext) . g, rewritten in real_basis
        images = real_basis @ M_ext
        sol, *_ = np.linalg.lstsq(real_basis.T.astype(float), images.T.astype(float), rcond=None)
        M_real = np.round(sol.T).astype(int)
    except (NoRealTorus, IntegerRelationFailure):
        pass
    return MonodromyResult(M=M, M_ext=M_ext, continuation_residual=residual,
                           loop=loop, steps=steps, max_step_rounding=worst, M_real=M_real, real_basis=real_basis,
                           initial_generators=G0, final_generators=transported)


# ----------------------------------------------------------------------------
# frequency map


@dataclass
class FrequencyData:
    """Frequencies of the real torus over ``(h, k)``.

    ``T_r`` is the first return time of the radial motion, ``Theta_r`` the
    azimuthal advance during it (in ``[0, 2 pi)`` for ``k >= 0`` and
    ``(-2 pi, 0]`` for ``k < 0``).  ``omega = (2 pi / T_r, Theta_r / T_r)``.
    ``basis_coeffs`` are the integer coefficient rows over ``g1, g2, g3`` of
    the return-lattice basis ``(0, 2 pi)``, ``(T_r, Theta_r)``.
    """

    h: float
    k: float
    omega: tuple
    T_r: float
    Theta_r: float
    V_H: np.ndarray
    V_K: np.ndarray
    functional: np.ndarray
    basis_coeffs: np.ndarray
    fit_residual: float
    relation_residual: float = field(default=0.0)

    @property
    def rotation_number(self):
        return self.Theta_r / (2 * np.pi)

    def to_dict(self):
        return {"h": self.h, "k": self.k, "omega": list(self.omega), "T_r": self.T_r,
                "Theta_r": self.Theta_r, "V_H": encode_complex(self.V_H),
                "V_K": encode_complex(self.V_K), "functional": self.functional.tolist(),
                "basis_coeffs": self.basis_coeffs.tolist(), "fit_residual": self.fit_residual}


def _integer_functional(P, bound=64, tol=1e-7):
    """Primitive integer ``l`` (|l_i| <= bound) with every row of ``P`` proportional to ``l``."""
    row = P[np.argmax(np.linalg.norm(P, axis=1))]
    if np.linalg.norm(row) < tol:
        raise IntegerRelationFailure("flow directions already contain the full lattice")
    j = int(np.argmax(np.abs(row)))
    unit = row / row[j]
    for m in range(1, bound + 1):
        cand = unit * m
        l = np.round(cand)
        if np.abs(cand - l).max() < tol * m and np.abs(l).max() <= bound:
            g = np.gcd.reduce(np.abs(l).astype(int))
            l = (l / g).astype(int)
            # every row must vanish on the kernel of l
            if np.linalg.matrix_rank(np.vstack([P, l]), tol=1e-6 * np.abs(P).max()) == 1:
                return l
    raise IntegerRelationFailure(f"no integer relation with coefficients up to {bound}")


def _kernel_basis(l):
    """Integer basis of ``{n in Z^3 : l . n = 0}`` for primitive ``l``."""
    from itertools import product

    # small exhaustive search over a box, then pick a unimodular pair
    box = range(-8, 9)
    cands = [np.array(v) for v in product(box, box, box) if any(v) and np.dot(l, v) == 0]
    cands.sort(key=lambda v: (np.abs(v).sum(), tuple(v)))
    for a in cands:
        for b in cands:
            c = np.cross(a, b)
            if np.any(c) and np.gcd.reduce(np.abs(c)) == 1:
                return np.array([a, b])
    raise IntegerRelationFailure("could not find a kernel basis")


def return_lattice(V_H, V_K, lattice, bound=64):
    """Integer data of ``{(T, Theta) : T V_H + Theta V_K in Lambda'}``.

    Returns ``(l, basis, TT)``: the integer functional cutting out the real
    sublattice, an integer basis (rows over ``g1, g2, g3``) and the matching
    ``(T, Theta)`` pairs.
    """
    def real(v):
        return np.array([v[0].real, v[0].imag, v[1].real, v[1].imag])

    W = np.column_stack([real(V_H), real(V_K)])
    Q, _ = np.linalg.qr(W, mode="complete")
    perp = Q[:, 2:]
    G = lattice.real_matrix()
    P = perp.T @ G
    l = _integer_functional(P, bound)
    basis = _kernel_basis(l)
    TT = []
    for n in basis:
        x, *_ = np.linalg.lstsq(W, G @ n, rcond=None)
        TT.append(x)
    return l, basis, np.array(TT)


def _velocities(h, k, lattice, curve, n_samples=24, t_span=1.5):
    state = state_on_level(h, k)
    traj = integrate_pendulum(state, t_span, n_samples=n_samples)
    base = default_base_point(curve)
    fit_h = abel_flow_fit(traj, curve, base=base, lattice=lattice)
    ts = np.linspace(0.0, t_span, n_samples)
    rot = Trajectory(ts, [rotate_about_e3(state, t) for t in ts], 0.0)
    fit_k = abel_flow_fit(rot, curve, base=base, lattice=lattice)
    return fit_h.velocity, fit_k.velocity, max(fit_h.residual, fit_k.residual)


def frequency_map(h, k, cycle_spec=None, lattice=None, bound=64):
    """Frequencies of the real flows of ``X_H`` and ``X_K`` on the torus over ``(h, k)``.

    Raises
    ------
    NoRealTorus
        Outside the physical region.
    IntegerRelationFailure
        If the real sublattice of return times cannot be identified.
    """
    h, k = float(h), float(k)
    if allowed_heights(h, k) is None:
        raise NoRealTorus(f"(h, k) = ({h}, {k}) has no real invariant torus")
    curve = curve_from_hk(h, k)
    if lattice is None:
        lattice = extended_lattice(curve, cycle_spec or _curves.DEFAULT_CYCLES)
    V_H, V_K, fit_res = _velocities(h, k, lattice, curve)
    l, basis, TT = return_lattice(V_H, V_K, lattice, bound)
    # (T, Theta) returns to the start, so the azimuth advanced by -Theta meanwhile
    TT = TT * np.array([1.0, -1.0])

    # change basis to (0, 2 pi) and (T_r, Theta_r) with T_r > 0 minimal
    t0, t1 = TT[0, 0], TT[1, 0]
    eps = 1e-9 * max(abs(t0), abs(t1))
    if abs(t1) < eps:
        a, b = 1, 0
    elif abs(t0) < eps:
        a, b = 0, 1
    else:
        ratio = Fraction(t0 / t1).limit_denominator(bound)
        a, b = ratio.numerator, ratio.denominator
    # b v0 - a v1 has T = 0; x v0 + y v1 with a x + b y = 1 completes the basis
    _, x, y = _ext_gcd(a, b)
    U = np.array([[b, -a], [x, y]])
    new = U @ basis
    TTn = U @ TT
    if TTn[1, 0] < 0:
        new[1], TTn[1] = -new[1], -TTn[1]
    if TTn[0, 1] < 0:
        new[0], TTn[0] = -new[0], -TTn[0]
    two_pi = TTn[0, 1]
    if abs(two_pi - 2 * np.pi) > 1e-6 or abs(TTn[0, 0]) > 1e-6:
        raise IntegerRelationFailure(f"fiber return (0, 2 pi) not found, got {TTn[0]}")
    T_r = TTn[1, 0]
    # normalize Theta_r by adding multiples of the fiber vector
    m = np.floor(TTn[1, 1] / two_pi)
    if k < 0:
        m = np.ceil(TTn[1, 1] / two_pi)
    new[1] = new[1] - int(m) * new[0]
    TTn[1] = TTn[1] - m * TTn[0]
    Theta_r = TTn[1, 1]
    rel_res = float(np.abs(lattice.real_matrix() @ new[1]
                           - np.column_stack([_r4(V_H), _r4(V_K)]) @ (TTn[1] * [1.0, -1.0])).max())
    return FrequencyData(h, k, (2 * np.pi / T_r, Theta_r / T_r), float(T_r), float(Theta_r),
                         V_H, V_K, l, new, fit_res, rel_res)


def _r4(v):
    return np.array([v[0].real, v[0].imag, v[1].real, v[1].imag])


def _ext_gcd(a, b):
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b) > 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def frequency_jacobian(h, k, step=1e-3, cycle_spec=None):
    """Central-difference Jacobian of ``(h, k) -> (Omega_1, Omega_2)`` and its determinant."""
    def om(hh, kk):
        return np.array(frequency_map(hh, kk, cycle_spec).omega)

    J = np.column_stack([(om(h + step, k) - om(h - step, k)) / (2 * step),
                         (om(h, k + step) - om(h, k - step)) / (2 * step)])
    return J, float(np.linalg.det(J))


def poincare_rotation(h, k, n_returns=3, tol=1e-12):
    """Radial period and azimuthal advance measured on the section ``{v3 = 0, x3 at minimum}``.

    Integrates the pendulum directly and records successive lowest points.
    Returns ``(T, dphi)`` averaged over ``n_returns`` returns, ``dphi`` normalized
    like ``Theta_r``.
    """
    state = state_on_level(h, k)
    w0 = np.concatenate([state.x.real, state.v.real])

    def rhs(t, w):
        x, v = w[:3], w[3:]
        return np.concatenate([v, -np.array([0, 0, 1.0]) + (x[2] - v @ v) * x])

    def event(t, w):
        return w[5]
    event.direction = 1.0

    # generous horizon: a few multiples of a crude period estimate
    t_end = 40.0 * (n_returns + 1)
    sol = solve_ivp(rhs, (0, t_end), w0, method="DOP853", rtol=tol, atol=tol,
                    events=event, dense_output=True)
    te = sol.t_events[0]
    if len(te) < n_returns + 1:
        raise LaxJacError("not enough section crossings")
    te = te[: n_returns + 1]
    ts = np.linspace(0, te[-1], 20000)
    ts = np.union1d(ts, te)
    W = sol.sol(ts)
    phi = np.unwrap(np.arctan2(W[1], W[0]))
    phi_e = np.interp(te, ts, phi)
    T = float(np.diff(te).mean())
    dphi = float(np.diff(phi_e).mean())
    two_pi = 2 * np.pi
    dphi = dphi - two_pi * (np.ceil(dphi / two_pi) if k < 0 else np.floor(dphi / two_pi))
    return T, dphi
