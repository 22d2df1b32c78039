r"""The quartic spectral curve ``mu^2 = f(lam)`` and its periods.

For the pendulum ``f = F_c = lam^4 + 2k lam^3 + 2h lam^2 + 1``.  Any quartic
with nonzero leading coefficient ``a4`` is accepted; the two points at infinity
are labelled by the branch of ``mu / lam^2`` there: ``inf+`` is the branch
tending to ``+sqrt(a4)`` (principal root), ``inf-`` the other one.

Cycle convention: branch points sorted by ``(Re, Im)`` as ``b1..b4``; the
a-cycle encircles ``(b1, b2)``, the b-cycle ``(b2, b3)``.  A cycle around
``(e_i, e_j)`` is computed as ``2 int_{e_j}^{e_i} phi dlam / mu`` along a path
between the two branch points (the loop collapsed onto the path), with the
sheet fixed by ``mu(m) = i h g(m)`` at the first interior vertex ``m`` where
``h = (e_j - e_i) / 2`` and ``g = sqrt(a4 (lam - e_k)(lam - e_l))`` is continued
from its principal value at ``e_j``.  That is the same lift used by
:func:`periods_agm`, so on straight paths the two agree by value.

The third-kind differential is ``eta = c lam dlam / mu`` with ``c`` fixed
numerically so that ``res(eta, inf+) = -1`` and ``res(eta, inf-) = +1``.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _paths
from ._jsonutil import decode_complex, encode_complex
from .errors import (AGMNonconvergence, ContourTooClose, DegenerateDivisor,
                     NormalizationFailure, PathThroughBranchPoint, RankDeficientLattice,
                     SingularCurveError)

__all__ = [
    "QuarticCurve",
    "CycleSpec",
    "PeriodData",
    "DivisorPoint",
    "ExtendedLattice",
    "curve_from_hk",
    "quartic_curve",
    "quartic_discriminant",
    "periods_first_kind",
    "periods_agm",
    "periods_third_kind",
    "period_data",
    "reciprocity_residual",
    "integral_between_infinities",
    "extended_lattice",
    "abel_map_extended",
    "eigenvector_divisor",
    "default_base_point",
    "lattices_equal",
]

SINGULAR_TOL = 1e-10
BRANCH_TOL = 1e-6
CONTOUR_MARGIN = 0.1
TWO_PI_I = 2j * np.pi


def quartic_discriminant(c):
    """Discriminant of ``sum c[i] lam^i`` (ascending, degree 4), in closed form.

    Coefficients may be arrays of equal shape.
    """
    e, d, c, b, a = (np.asarray(x, dtype=complex) for x in c)
    return (256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * c**2 * e**2
            + 144 * a**2 * c * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * c * e**2
            - 6 * a * b**2 * d**2 * e - 80 * a * b * c**2 * d * e + 18 * a * b * c * d**3
            + 16 * a * c**4 * e - 4 * a * c**3 * d**2 - 27 * b**4 * e**2
            + 18 * b**3 * c * d * e - 4 * b**3 * d**3 - 4 * b**2 * c**3 * e
            + b**2 * c**2 * d**2)


def _sort_points(z):
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.imag, z.real))]


class QuarticCurve:
    """Hyperelliptic genus-one curve ``mu^2 = f(lam)`` with ``deg f = 4``.

    Parameters
    ----------
    coeffs : array_like
        Ascending coefficients ``a0..a4`` with ``a4 != 0``.
    """

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.shape != (5,) or c[4] == 0:
            raise ValueError("need five ascending coefficients with nonzero leading term")
        c.setflags(write=False)
        self.coeffs = c
        roots = np.roots(c[::-1])
        dc = np.polynomial.polynomial.polyder(c)
        for _ in range(2):
            fv = np.polynomial.polynomial.polyval(roots, c)
            dv = np.polynomial.polynomial.polyval(roots, dc)
            step = np.where(np.abs(dv) > 1e-300, fv / np.where(dv == 0, 1, dv), 0)
            roots = roots - step
        self.branch_points = _sort_points(roots)
        self.branch_points.setflags(write=False)
        self.disc = quartic_discriminant(c)
        scale = max(1.0, float(np.abs(c).max())) ** 6
        self.singular = abs(self.disc) <= SINGULAR_TOL * scale

    points_at_infinity = ("inf+", "inf-")

    @property
    def a4(self):
        return self.coeffs[4]

    @property
    def p_g(self):
        return 0 if self.singular else 1

    @property
    def p_a(self):
        """Arithmetic genus of the curve with modulus ``inf+ + inf-``."""
        return self.p_g + 1

    def __call__(self, lam):
        return np.polynomial.polynomial.polyval(lam, self.coeffs)

    def f_rev(self, tau):
        """``tau^4 f(1/tau)``."""
        return np.polynomial.polynomial.polyval(tau, self.coeffs[::-1])

    def q(self, n):
        """``f(lam) / (lam - b_n)`` as a callable, smooth at ``b_n``."""
        others = np.delete(self.branch_points, n)
        a4 = self.a4

        def q(lam):
            return a4 * (lam - others[0]) * (lam - others[1]) * (lam - others[2])
        return q

    @cached_property
    def min_separation(self):
        b = self.branch_points
        return min(abs(b[i] - b[j]) for i in range(4) for j in range(i + 1, 4))

    def vieta_residual(self):
        """Mismatch between symmetric functions of the roots and the coefficients."""
        b = self.branch_points
        e1 = b.sum()
        e2 = sum(b[i] * b[j] for i in range(4) for j in range(i + 1, 4))
        e3 = sum(b[i] * b[j] * b[k] for i in range(4) for j in range(i + 1, 4)
                 for k in range(j + 1, 4))
        e4 = b.prod()
        c = self.coeffs / self.a4
        return float(max(abs(e1 + c[3]), abs(e2 - c[2]), abs(e3 + c[1]), abs(e4 - c[0])))

    def require_smooth(self):
        if self.singular:
            raise SingularCurveError(f"curve is singular (disc = {self.disc:.3e})")

    @cached_property
    def eta_scale(self):
        """Constant ``c`` in ``eta = c lam dlam / mu`` (residue -1 at ``inf+``)."""
        res = _raw_residues(self)
        if abs(res[0] + res[1]) > 1e-8 * max(1.0, abs(res[0])):
            raise NormalizationFailure(f"residues {res} are not opposite")
        return -1.0 / res[0]

    def infinity_sheet(self, lam, mu):
        """``+1`` if ``(lam, mu)`` continues to ``inf+`` along the radial ray, else ``-1``.

        Only meaningful for ``|lam|`` beyond every branch point.
        """
        S = mu * lam ** -2
        tau = 1.0 / lam
        u = np.linspace(0.0, 1.0, 257)
        s, _ = _paths.track_sqrt(self.f_rev(tau * (1 - u)), S)
        return 1 if abs(s[-1] - np.sqrt(self.a4)) < abs(s[-1] + np.sqrt(self.a4)) else -1

    def to_dict(self):
        return {"coeffs": encode_complex(self.coeffs),
                "branch_points": encode_complex(self.branch_points),
                "disc": encode_complex(self.disc),
                "singular": bool(self.singular)}

    def __repr__(self):
        return f"QuarticCurve(coeffs={self.coeffs.tolist()})"


def quartic_curve(coeffs):
    return QuarticCurve(coeffs)


def curve_from_hk(h, k):
    """Spectral curve ``mu^2 = lam^4 + 2k lam^3 + 2h lam^2 + 1`` of the pendulum."""
    return QuarticCurve([1.0, 0.0, 2.0 * h, 2.0 * k, 1.0])


def _raw_residues(curve):
    """Residues of ``lam dlam / mu`` at ``(inf+, inf-)`` by loops in ``tau = 1/lam``.

    In that chart ``lam dlam / mu = -dtau / (tau S(tau))`` with
    ``S^2 = tau^4 f(1/tau)`` single valued on ``|tau| < 1 / max|b|``.
    """
    rho = 0.5 / max(1.0, float(np.abs(curve.branch_points).max()))
    n = 256
    theta = 2 * np.pi * np.arange(n + 1) / n
    tau = rho * np.exp(1j * theta)
    out = []
    for sign in (1.0, -1.0):
        S, _ = _paths.track_sqrt(curve.f_rev(tau), sign * np.sqrt(curve.a4))
        # dtau = i tau dtheta; trapezoid is spectrally accurate on a periodic integrand
        integrand = -1j / S[:-1]
        out.append(integrand.mean() * 2 * np.pi / TWO_PI_I)
    return tuple(out)


@dataclass(frozen=True)
class CycleSpec:
    """Pairings of branch-point indices defining the a- and b-cycles."""

    a: tuple = (0, 1)
    b: tuple = (1, 2)

    def to_dict(self):
        return {"a": list(self.a), "b": list(self.b)}


DEFAULT_CYCLES = CycleSpec()


def _cycle_path(curve, i, j):
    """Vertex list from ``b_j`` to ``b_i`` keeping the other branch points away."""
    b = curve.branch_points
    margin = CONTOUR_MARGIN * curve.min_separation
    others = [b[n] for n in range(4) if n not in (i, j)]
    ej, ei = b[j], b[i]
    mid = 0.5 * (ei + ej)
    path = _paths.plan_polyline([ej, mid, ei], others, margin)
    if path is None:
        raise ContourTooClose(
            f"no admissible contour around (b{i + 1}, b{j + 1}) at margin {margin:.3g}")
    return path


def _branch_to_branch(curve, i, j, with_eta=True):
    """``int_{b_j}^{b_i} (1, lam) dlam / mu`` on the canonical sheet, plus the path."""
    b = curve.branch_points
    path = _cycle_path(curve, i, j)
    ej, ei = b[j], b[i]
    k, l = [n for n in range(4) if n not in (i, j)]
    m = path[1]
    # canonical sheet: mu(m) = i h g(m), g continued from its principal value at b_j
    u = np.linspace(0.0, 1.0, 513)
    lam = ej + (m - ej) * u
    g, _ = _paths.track_sqrt(curve.a4 * (lam - b[k]) * (lam - b[l]), None)
    h = 0.5 * (ej - ei)
    mu_m = 1j * h * g[-1]

    total = 0.0
    # first piece: b_j -> path[1]
    first = _paths.branch_piece(curve.q(j), ej, m, with_eta)
    I, _, s_end = _paths.integrate_piece(first)
    if abs(s_end - mu_m) > abs(s_end + mu_m):
        I, s_end = -I, -s_end
    total = total + I
    mu = s_end
    for a, c in zip(path[1:-2], path[2:-1]):
        I, _, mu = _paths.integrate_piece(_paths.line_piece(curve, a, c, with_eta), mu)
        total = total + I
    # last piece, integrated from b_i outwards and subtracted
    w = path[-2]
    last = _paths.branch_piece(curve.q(i), ei, w, with_eta)
    I, _, s_end = _paths.integrate_piece(last)
    if abs(s_end - mu) > abs(s_end + mu):
        I = -I
    total = total - I
    return total, path


def _cycle_integrals(curve, cycle_spec, with_eta=True):
    curve.require_smooth()
    out = []
    for pair in (cycle_spec.a, cycle_spec.b):
        I, _ = _branch_to_branch(curve, pair[0], pair[1], with_eta)
        out.append(2.0 * I)
    return out


def periods_first_kind(curve, cycle_spec=DEFAULT_CYCLES):
    """``(omega_a, omega_b)``: periods of ``dlam / mu``.

    Raises
    ------
    SingularCurveError
        If the curve is singular.
    ContourTooClose
        If no path keeps the other branch points at 10% of the minimal
        separation.
    """
    Ia, Ib = _cycle_integrals(curve, cycle_spec, with_eta=False)
    return complex(Ia[0]), complex(Ib[0])


def _agm(a, b, max_iter=64):
    for _ in range(max_iter):
        if abs(a - b) <= 1e-15 * abs(a):
            return a
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        # right choice of square root
        if abs(a - b) > abs(a + b):
            b = -b
    if abs(a - b) <= 1e-12 * abs(a):
        return a
    raise AGMNonconvergence(f"AGM did not converge (a={a}, b={b})")


def _agm_period(curve, i, j):
    b = curve.branch_points
    k, l = [n for n in range(4) if n not in (i, j)]
    ei, ej, ek, el = b[i], b[j], b[k], b[l]
    a4 = curve.a4
    gj = np.sqrt(a4 * (ej - ek) * (ej - el))
    # continue g to e_i along the straight segment (sign only)
    lam = ej + (ei - ej) * np.linspace(0.0, 1.0, 2049)
    vals = np.sqrt(a4 * (lam - ek) * (lam - el))
    prev = vals[0]
    for v in vals[1:]:
        prev = -v if abs(v - prev) > abs(v + prev) else v
    gi = prev
    a0 = np.sqrt(a4 * (ei - ek) * (ej - el))
    if abs(a0 - gj) > abs(a0 + gj):
        a0 = -a0
    b0 = gi * gj / a0
    return TWO_PI_I / _agm(a0, b0)


def periods_agm(curve, cycle_spec=DEFAULT_CYCLES):
    """Independent closed-form periods through the arithmetic-geometric mean.

    For a cycle around ``(e_i, e_j)`` with remaining roots ``(e_k, e_l)`` the
    period is ``2 pi i / M(a0, b0)`` with ``a0^2 = a4 (e_i - e_k)(e_j - e_l)``,
    ``b0^2 = a4 (e_i - e_l)(e_j - e_k)`` and the branches of ``a0, b0`` and of
    every AGM step fixed by the same lift used for the contour integrals.
    """
    curve.require_smooth()
    return (complex(_agm_period(curve, *cycle_spec.a)),
            complex(_agm_period(curve, *cycle_spec.b)))


def periods_third_kind(curve, cycle_spec=DEFAULT_CYCLES):
    """``(eta_a, eta_b, residue_check)`` for the normalized third-kind differential.

    ``residue_check`` holds the numerically computed residues at
    ``(inf+, inf-)``; they are ``(-1, +1)`` by the choice of normalization.

    Raises
    ------
    NormalizationFailure
        If the raw residues at the two points at infinity are not opposite.
    """
    Ia, Ib = _cycle_integrals(curve, cycle_spec, with_eta=True)
    c = curve.eta_scale
    raw = _raw_residues(curve)
    return complex(c * Ia[1]), complex(c * Ib[1]), (complex(c * raw[0]), complex(c * raw[1]))


@dataclass
class PeriodData:
    """Periods of ``dlam/mu`` and of ``eta`` on one cycle basis."""

    omega_a: complex
    omega_b: complex
    eta_a: complex
    eta_b: complex
    residues: tuple
    cycle_spec: CycleSpec = DEFAULT_CYCLES
    residue_gen: complex = TWO_PI_I

    @property
    def tau(self):
        return self.omega_b / self.omega_a

    @property
    def generators(self):
        return np.array([[self.omega_a, self.eta_a],
                         [self.omega_b, self.eta_b],
                         [0.0, self.residue_gen]], dtype=complex)

    def to_dict(self):
        return {"omega_a": encode_complex(self.omega_a),
                "omega_b": encode_complex(self.omega_b),
                "eta_a": encode_complex(self.eta_a),
                "eta_b": encode_complex(self.eta_b),
                "generators": encode_complex(self.generators),
                "residues": encode_complex(np.array(self.residues)),
                "cycle_spec": self.cycle_spec.to_dict()}

    @classmethod
    def from_dict(cls, obj):
        cs = obj.get("cycle_spec", {"a": [0, 1], "b": [1, 2]})
        return cls(omega_a=complex(decode_complex(obj["omega_a"])),
                   omega_b=complex(decode_complex(obj["omega_b"])),
                   eta_a=complex(decode_complex(obj["eta_a"])),
                   eta_b=complex(decode_complex(obj["eta_b"])),
                   residues=tuple(decode_complex(obj["residues"])),
                   cycle_spec=CycleSpec(tuple(cs["a"]), tuple(cs["b"])))


def period_data(curve, cycle_spec=DEFAULT_CYCLES):
    """All periods in one pass over the cycle paths."""
    Ia, Ib = _cycle_integrals(curve, cycle_spec, with_eta=True)
    c = curve.eta_scale
    raw = _raw_residues(curve)
    data = PeriodData(complex(Ia[0]), complex(Ib[0]), complex(c * Ia[1]), complex(c * Ib[1]),
                      (complex(c * raw[0]), complex(c * raw[1])), cycle_spec)
    if abs((data.omega_b / data.omega_a).imag) < 1e-12:
        raise RankDeficientLattice("omega_b / omega_a is real")
    return data


def integral_between_infinities(curve):
    """``int_{inf-}^{inf+} dlam / mu``, as twice the integral from ``b1`` to ``inf+``.

    The path leaves ``b1`` along the straight ray that keeps the other branch
    points furthest away and then runs radially to infinity in ``tau = 1/lam``.
    """
    curve.require_smooth()
    b = curve.branch_points
    e = b[0]
    R = 2.0 * float(np.abs(b).max()) + 1.0
    best = None
    for phi in np.linspace(0, 2 * np.pi, 32, endpoint=False):
        w = e + (R + abs(e)) * np.exp(1j * phi)
        clear = min(_paths.segment_distance(x, e, w)[0] for x in b[1:])
        if best is None or clear > best[0]:
            best = (clear, w)
    w = best[1]
    I1, _, s_end = _paths.integrate_piece(_paths.branch_piece(curve.q(0), e, w, False))
    mu_w = s_end
    I2, _, S_end = _paths.integrate_piece(_paths.infinity_piece(curve.f_rev, w), mu_w * w ** -2)
    total = I1[0] + I2[0]
    # tau -> 0 end: S -> +/- sqrt(a4) tells which point at infinity was reached
    sheet = 1 if abs(S_end - np.sqrt(curve.a4)) < abs(S_end + np.sqrt(curve.a4)) else -1
    return complex(2.0 * sheet * total)


def reciprocity_residual(curve, data=None):
    """Residual of the bilinear relation for ``(dlam/mu, eta)``.

    ``omega_a eta_b - omega_b eta_a = -s 2 pi i int_{inf-}^{inf+} dlam/mu``
    modulo ``2 pi i Lambda``, with ``s`` the orientation sign of
    ``(omega_a, omega_b)``.  Returns the distance to the nearest admissible
    value.
    """
    if data is None:
        data = period_data(curve)
    wa, wb = data.omega_a, data.omega_b
    lhs = wa * data.eta_b - wb * data.eta_a
    s = np.sign((np.conj(wa) * wb).imag)
    rhs = -s * TWO_PI_I * integral_between_infinities(curve)
    diff = (lhs - rhs) / TWO_PI_I
    M = np.array([[wa.real, wb.real], [wa.imag, wb.imag]])
    n = np.round(np.linalg.solve(M, [diff.real, diff.imag]))
    return float(abs(diff - n[0] * wa - n[1] * wb) * 2 * np.pi)


@dataclass
class ExtendedLattice:
    """Rank-three lattice ``Lambda'`` in ``C^2`` generated by ``g1, g2, g3``."""

    generators: np.ndarray
    periods: PeriodData = None
    _real: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.generators = np.asarray(self.generators, dtype=complex).reshape(3, 2)
        G = self.real_matrix()
        sv = np.linalg.svd(G, compute_uv=False)
        if sv[-1] <= 1e-8 * max(1.0, sv[0]):
            raise RankDeficientLattice(f"smallest singular value {sv[-1]:.3e}")

    def real_matrix(self):
        """4x3 real matrix whose columns are ``(Re z1, Im z1, Re z2, Im z2)`` of each ``g``."""
        g = self.generators
        return np.stack([g[:, 0].real, g[:, 0].imag, g[:, 1].real, g[:, 1].imag])

    def singular_values(self):
        return np.linalg.svd(self.real_matrix(), compute_uv=False)

    @property
    def omega(self):
        return self.generators[:2, 0]

    def lambda_singular_values(self):
        """Singular values of the 2x2 real matrix of ``Lambda = <omega_a, omega_b>``."""
        w = self.omega
        return np.linalg.svd(np.array([[w[0].real, w[1].real], [w[0].imag, w[1].imag]]),
                             compute_uv=False)

    def to_dict(self):
        out = {"generators": encode_complex(self.generators)}
        if self.periods is not None:
            out.update({k: v for k, v in self.periods.to_dict().items() if k != "generators"})
        return out

    @classmethod
    def from_dict(cls, obj):
        periods = PeriodData.from_dict(obj) if "omega_a" in obj else None
        return cls(decode_complex(obj["generators"]), periods)


def extended_lattice(curve, cycle_spec=DEFAULT_CYCLES):
    """``Lambda'`` with ``g1 = (omega_a, eta_a)``, ``g2 = (omega_b, eta_b)``, ``g3 = (0, 2 pi i)``."""
    data = period_data(curve, cycle_spec)
    return ExtendedLattice(data.generators, data)


def lattices_equal(L1, L2, tol=1e-9):
    """Whether two bases span the same lattice.

    ``L1, L2`` are sequences of generators (complex scalars or ``C^n`` vectors)
    of equal count.  Returns ``(equal, U, residual)`` with ``U`` the integer
    matrix expressing ``L2`` in ``L1``.
    """
    A = np.atleast_2d(np.asarray(L1, dtype=complex))
    B = np.atleast_2d(np.asarray(L2, dtype=complex))
    if A.shape[0] == 1 and A.shape[1] > 1 and np.ndim(L1) == 1:
        A, B = A.T, B.T
    Ar = np.concatenate([A.real, A.imag], axis=1).T
    Br = np.concatenate([B.real, B.imag], axis=1).T
    X, *_ = np.linalg.lstsq(Ar, Br, rcond=None)
    U = np.round(X)
    scale = max(1.0, float(np.abs(Br).max()))
    residual = float(np.abs(Ar @ U - Br).max()) / scale
    det = round(float(np.linalg.det(U))) if U.shape[0] == U.shape[1] else 0
    return (residual <= tol and abs(det) == 1), U.astype(int), residual


@dataclass(frozen=True)
class DivisorPoint:
    """Point ``(lam, mu)`` of the affine curve; ``sheet`` is a free-form label."""

    lam: complex
    mu: complex
    sheet: str = ""

    def residual(self, curve):
        return abs(self.mu ** 2 - curve(self.lam))

    def involution(self):
        return DivisorPoint(self.lam, -self.mu, self.sheet)

    def to_dict(self):
        return {"lam": encode_complex(self.lam), "mu": encode_complex(self.mu)}


def default_base_point(curve):
    """A point far from every branch point; ``mu`` is the principal root."""
    b = curve.branch_points
    cands = [0.0, 1.0, -1.0, 1j, -1j, 0.5 + 0.5j, -0.5 - 0.5j, 2.0, -2.0, 2j, -2j]
    lam = max(cands, key=lambda z: np.abs(b - z).min())
    return DivisorPoint(complex(lam), complex(np.sqrt(curve(lam))), "base")


def _abel_path(curve, lam0, lam1, path_hint):
    b = list(curve.branch_points)
    margin = max(min(CONTOUR_MARGIN * curve.min_separation,
                     0.5 * min(np.abs(np.array(b) - lam1).min(), np.abs(np.array(b) - lam0).min())),
                 2 * BRANCH_TOL)
    verts = [lam0] + list(path_hint or []) + [lam1]
    path = _paths.plan_polyline(verts, b, margin)
    if path is None:
        raise PathThroughBranchPoint("could not route a path around the branch points")
    for a, c in zip(path[:-1], path[1:]):
        for e in b:
            if _paths.segment_distance(e, a, c)[0] < BRANCH_TOL:
                raise PathThroughBranchPoint(f"path passes within {BRANCH_TOL:g} of {e}")
    return path


def _sheet_loop(curve, lam0, mu0):
    """Closed lam-loop from ``lam0`` around the nearest branch point; swaps sheets."""
    b = curve.branch_points
    n = int(np.argmin(np.abs(b - lam0)))
    e = b[n]
    r = 0.3 * min(curve.min_separation, abs(lam0 - e))
    start = e + r * (lam0 - e) / abs(lam0 - e)
    phi0 = np.angle(start - e)
    total, mu = 0.0, mu0
    for piece in (_paths.line_piece(curve, lam0, start),
                  _paths.arc_piece(curve, e, r, phi0, 2 * np.pi),
                  _paths.line_piece(curve, start, lam0)):
        I, _, mu = _paths.integrate_piece(piece, mu)
        total = total + I
    return total, mu


def abel_map_extended(curve, P, base=None, path_hint=None):
    """``(int dlam/mu, int eta)`` from ``base`` to ``P`` along a polyline in ``lam``.

    ``path_hint`` lists optional intermediate ``lam`` vertices.  If the path
    lands on ``(lam_P, -mu_P)`` a loop around the nearest branch point is
    prepended to switch sheets.  The result is defined modulo ``Lambda'``.

    Raises
    ------
    PathThroughBranchPoint
        If ``P`` or ``base`` lies within ``1e-6`` of a branch point, or the path
        cannot be routed.
    """
    curve.require_smooth()
    if base is None:
        base = default_base_point(curve)
    b = curve.branch_points
    for pt in (P, base):
        if np.abs(b - pt.lam).min() < BRANCH_TOL:
            raise PathThroughBranchPoint(f"point at lam={pt.lam} sits on a branch point")
    if P.lam == base.lam and P.mu == base.mu and not path_hint:
        return np.zeros(2, dtype=complex)
    path = _abel_path(curve, base.lam, P.lam, path_hint)

    def run(mu0):
        total, mu = np.zeros(2, dtype=complex), mu0
        for a, c in zip(path[:-1], path[1:]):
            I, _, mu = _paths.integrate_piece(_paths.line_piece(curve, a, c), mu)
            total = total + I
        return total, mu

    total, mu_end = run(base.mu)
    if abs(mu_end - P.mu) > abs(mu_end + P.mu):
        loop, mu_swapped = _sheet_loop(curve, base.lam, base.mu)
        total, mu_end = run(mu_swapped)
        total = total + loop
    c = curve.eta_scale
    return np.array([total[0], c * total[1]])


def eigenvector_divisor(lv, entry="12", tol=1e-8):
    """Spectral divisor of the Lax matrix of ``lv``.

    ``entry="12"`` takes the zeros of ``lam^2 + U1 lam + U2`` with
    ``mu = V1 lam + V2``; ``entry="21"`` takes the zeros of
    ``lam^2 + W1 lam + W2`` with ``mu = -(V1 lam + V2)``.

    Raises
    ------
    DegenerateDivisor
        If the two roots are closer than ``tol``.
    """
    if entry == "12":
        c1, c0, sign = lv.U1, lv.U2, 1.0
    elif entry == "21":
        c1, c0, sign = lv.W1, lv.W2, -1.0
    else:
        raise ValueError("entry must be '12' or '21'")
    disc = np.sqrt(complex(c1 * c1 - 4 * c0))
    roots = sorted([(-c1 + disc) / 2, (-c1 - disc) / 2], key=lambda z: (z.real, z.imag))
    if abs(roots[0] - roots[1]) <= tol:
        raise DegenerateDivisor(f"divisor points collide (separation {abs(roots[0] - roots[1]):.2e})")
    return tuple(DivisorPoint(complex(z), complex(sign * (lv.V1 * z + lv.V2)), f"D{n + 1}")
                 for n, z in enumerate(roots))
