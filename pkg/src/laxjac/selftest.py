"""Executable checks for the ten headline properties of the library.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in order.
The same functions back ``laxjac selftest`` and the acceptance test module.
"""
import time
from dataclasses import dataclass

import numpy as np

from .curves import (QuarticCurve, curve_from_hk, extended_lattice, period_data,
                     periods_agm, periods_first_kind, reciprocity_residual)
from .flows import integrate_lax, integrate_pendulum, isospectral_deviation
from .jacobian import (ExtendedAbelPoint, abel_flow_fit, extension_projection,
                       group_action_shift, model_lattice, projection_lattice,
                       symmetry_equivariance)
from .matpoly import char_poly
from .monodromy import LoopSpec, continue_periods, frequency_jacobian, frequency_map, poincare_rotation
from .pendulum import (S0, integrals, lax_matrices, lax_time_derivative, lax_vars_of,
                       random_state, rotate_about_e3, spectral_invariants, cushman_map)
from .flows import Trajectory

__all__ = ["CheckResult", "CHECKS", "run_all", "format_table"]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float = None

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f} s)"

    def to_dict(self):
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": self.seconds, "limit_seconds": self.limit}


def _timed(number, name, limit=None):
    def wrap(fn):
        def run(seed=0):
            t0 = time.perf_counter()
            passed, detail = fn(np.random.default_rng(seed))
            dt = time.perf_counter() - t0
            if limit is not None and dt > limit:
                passed = False
                detail += f"; runtime {dt:.1f} s exceeds {limit:g} s"
            return CheckResult(number, name, bool(passed), detail, dt, limit)
        run.number = number
        run.check_name = name
        return run
    return wrap


@_timed(1, "conservation", limit=30.0)
def check_conservation(rng):
    worst_h = worst_k = 0.0
    for _ in range(20):
        st = random_state(rng)
        tr = integrate_pendulum(st, 20.0, tol=1e-12, n_samples=41)
        worst_h = max(worst_h, float(tr.diagnostics["H_drift"].max()))
        worst_k = max(worst_k, float(tr.diagnostics["K_drift"].max()))
    return (worst_h < 1e-9 and worst_k < 1e-9,
            f"max |dH| = {worst_h:.2e}, max |dK| = {worst_k:.2e} (< 1e-9)")


@_timed(2, "lax identity", limit=1.0)
def check_lax_identity(rng):
    worst = 0.0
    for _ in range(100):
        st = random_state(rng)
        y, u = cushman_map(st)
        A, B = lax_matrices(lax_vars_of(st))
        dA = lax_time_derivative(y, u)
        lhs = (2j * dA.coeffs)
        rhs = A.commutator(B).coeffs
        n = max(len(lhs), len(rhs))
        diff = np.zeros((n, 2, 2), dtype=complex)
        diff[:len(lhs)] += lhs
        diff[:len(rhs)] -= rhs
        worst = max(worst, float(np.abs(diff).max()))
    return worst < 1e-10, f"max |2i dA/dt - [A,B]| = {worst:.2e} (< 1e-10)"


@_timed(3, "relations block")
def check_relations(rng):
    worst_rel = worst_hk = 0.0
    for _ in range(1000):
        st = random_state(rng)
        lv = lax_vars_of(st)
        H, K = integrals(st)
        A, _ = lax_matrices(lv)
        # det(mu I - A) = mu^2 - F(lam) for traceless A
        F = -char_poly(A).s[1]
        target = np.array([1.0, 0.0, 2 * H, 2 * K, 1.0])
        worst_rel = max(worst_rel, float(np.abs(F[:5] - target).max()))
        h, k, _ = spectral_invariants(lv)
        worst_hk = max(worst_hk, abs(h - H), abs(k - K))
    return (worst_rel < 1e-10 and worst_hk < 1e-12,
            f"relations {worst_rel:.2e} (< 1e-10), (h,k) vs (H,K) {worst_hk:.2e} (< 1e-12)")


@_timed(4, "isospectrality")
def check_isospectrality(rng):
    worst = 0.0
    states = [S0] + [random_state(rng) for _ in range(5)]
    for st in states:
        A, _ = lax_matrices(lax_vars_of(st))
        # physical time t in [0, 10] is Lax time t / (2i)
        tr = integrate_lax(A, 1, 0.0, t_end=10.0 / 2j, tol=1e-12, n_samples=51)
        worst = max(worst, isospectral_deviation(tr))
    return worst < 1e-9, f"max char-poly drift {worst:.2e} over t in [0,10] (< 1e-9)"


def random_smooth_curve(rng, min_sep=0.05):
    while True:
        roots = rng.normal(size=4) + 1j * rng.normal(size=4)
        d = min(abs(roots[i] - roots[j]) for i in range(4) for j in range(i + 1, 4))
        if d > min_sep:
            lead = rng.normal() + 1j * rng.normal()
            return QuarticCurve(lead * np.polynomial.polynomial.polyfromroots(roots))


@_timed(5, "period oracle")
def check_periods(rng):
    worst = worst_rec = 0.0
    for _ in range(50):
        c = random_smooth_curve(rng)
        p = periods_first_kind(c)
        q = periods_agm(c)
        worst = max(worst, max(abs(p[i] - q[i]) / abs(q[i]) for i in range(2)))
        worst_rec = max(worst_rec, reciprocity_residual(c))
    return (worst < 1e-9 and worst_rec < 1e-7,
            f"contour vs AGM {worst:.2e} (< 1e-9), reciprocity {worst_rec:.2e} (< 1e-7)")


@_timed(6, "extended lattice")
def check_extended_lattice(rng):
    L = extended_lattice(curve_from_hk(1.3, 0.6))
    sv = L.singular_values()
    g3_exact = L.generators[2, 0] == 0 and L.generators[2, 1] == 2j * np.pi
    tau1, tau2 = 0.7 + 1.3j, -0.4 + 0.9j
    M = model_lattice(tau1, tau2)
    img1 = set(np.round(projection_lattice(M, 0), 12))
    img2 = set(np.round(projection_lattice(M, 1), 12))
    model_ok = (img1 == set(np.round([2j * np.pi, tau1], 12))
                and img2 == set(np.round([2j * np.pi, tau2], 12)))
    p = ExtendedAbelPoint([0.3 + 0.1j, 0.2 - 0.5j], M)
    q = group_action_shift(p, 1.7 - 0.4j)
    fiber_ok = abs(extension_projection(p) - extension_projection(q)) < 1e-12
    ok = sv[-1] > 1e-8 and g3_exact and model_ok and fiber_ok
    return ok, (f"rank 3 (smallest sv {sv[-1]:.3f}), g3 exact {g3_exact}, "
                f"model images ok {model_ok}, fiber-invariant projection {fiber_ok}")


@_timed(7, "linearization", limit=60.0)
def check_linearization(rng):
    curve = curve_from_hk(1.3, 0.6)
    L = extended_lattice(curve)
    tr = integrate_pendulum(S0, 5.0, n_samples=200)
    fit = abel_flow_fit(tr, curve, lattice=L)
    ts = np.linspace(0, 5.0, 50)
    rot = Trajectory(ts, [rotate_about_e3(S0, t) for t in ts], 0.0)
    fk = abel_flow_fit(rot, curve, lattice=L)
    vk1 = abs(fk.velocity[0])
    return (fit.residual < 1e-6 and vk1 < 1e-7,
            f"fit residual {fit.residual:.2e} (< 1e-6), |(V_K)_1| = {vk1:.2e} (< 1e-7), "
            f"V_H = {np.round(fit.velocity, 9).tolist()}")


@_timed(8, "bundle equivariance")
def check_equivariance(rng):
    curve = curve_from_hk(1.3, 0.6)
    L = extended_lattice(curve)
    worst1 = worst_lin = 0.0
    for th in (0.3, 0.7, 1.1):
        r1, d1 = symmetry_equivariance(S0, th, curve, lattice=L)
        r2, d2 = symmetry_equivariance(S0, 2 * th, curve, lattice=L)
        worst1 = max(worst1, r1, r2)
        gap = d2 - 2 * d1
        gap -= 2j * np.pi * np.round(gap.imag / (2 * np.pi))
        worst_lin = max(worst_lin, abs(gap))
    return (worst1 < 1e-6 and worst_lin < 1e-6,
            f"|dz1 mod Lambda| {worst1:.2e} (< 1e-6), linearity of dz2 {worst_lin:.2e} (< 1e-6)")


def _unipotent_nontrivial(M):
    M = np.asarray(M)
    I = np.eye(2, dtype=int)
    return (round(np.linalg.det(M)) == 1 and np.trace(M) == 2
            and not np.any((M - I) @ (M - I)) and np.any(M != I))


@_timed(9, "monodromy", limit=120.0)
def check_monodromy(rng):
    runs = {(0.3, 64): None, (0.3, 128): None, (0.2, 64): None}
    for r, n in runs:
        runs[(r, n)] = continue_periods(LoopSpec((1.0, 0.0), r, n))
    base = runs[(0.3, 64)]
    M = base.M
    I = np.eye(2, dtype=int)
    integral = max(m.continuation_residual for m in runs.values()) < 1e-6
    det_ok = round(np.linalg.det(M)) == 1
    trace_ok = np.trace(M) == 2
    nilp_ok = not np.any((M - I) @ (M - I))
    nontrivial = bool(np.any(M != I))
    stable = all(np.array_equal(m.M, M) for m in runs.values())
    ext_ok = all(np.array_equal(m.M_ext[:2, :2], m.M) and m.M_ext[2, 0] == 0
                 and m.M_ext[2, 1] == 0 and abs(m.M_ext[2, 2]) == 1 for m in runs.values())
    real_ok = all(m.M_real is not None and _unipotent_nontrivial(m.M_real) for m in runs.values())
    real_stable = all(np.array_equal(m.M_real, base.M_real) for m in runs.values())
    passed = integral and det_ok and trace_ok and nilp_ok and nontrivial and stable and ext_ok
    detail = (f"M = {M.tolist()} (integral {integral}, det 1 {det_ok}, trace 2 {trace_ok}, "
              f"(M-I)^2 = 0 {nilp_ok}, M != I {nontrivial}, stable {stable}); "
              f"M_ext = {base.M_ext.tolist()} block-compatible {ext_ok}; "
              f"real-torus M_real = {base.M_real.tolist() if base.M_real is not None else None} "
              f"nontrivial unipotent {real_ok}, stable {real_stable}")
    return passed, detail


@_timed(10, "frequency nondegeneracy")
def check_frequency(rng):
    h0, k0 = 1.3, 0.6
    dets = []
    for dh in (-0.05, 0.0, 0.05):
        for dk in (-0.05, 0.0, 0.05):
            _, det = frequency_jacobian(h0 + dh, k0 + dk, step=1e-3)
            dets.append(det)
    fd = frequency_map(h0, k0)
    T, dphi = poincare_rotation(h0, k0)
    err = abs(fd.Theta_r - dphi)
    worst = min(abs(d) for d in dets)
    return (worst > 1e-6 and err < 1e-4,
            f"min |det| on 3x3 grid {worst:.3e} (> 1e-6), center det {dets[4]:.4f}; "
            f"Theta_r {fd.Theta_r:.10f} vs section {dphi:.10f}, diff {err:.1e} (< 1e-4)")


CHECKS = [check_conservation, check_lax_identity, check_relations, check_isospectrality,
          check_periods, check_extended_lattice, check_linearization, check_equivariance,
          check_monodromy, check_frequency]


def run_all(seed=0, only=None):
    out = []
    for chk in CHECKS:
        if only and chk.number not in only:
            continue
        out.append(chk(seed))
    return out


def format_table(results):
    lines = [r.line() for r in results]
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines)
