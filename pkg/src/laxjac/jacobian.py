r"""Lattice-quotient arithmetic on ``J(X) = C / Lambda`` and ``J(X') = C^2 / Lambda'``.

``Lambda'`` has real rank three in ``C^2 = R^4``; the quotient is
``(S^1)^3 x R``.  Points are reduced by solving the real system
``[g1 g2 g3 n] c = z`` where ``n`` is a unit vector completing the span, and
flooring the first three coefficients.

The projection ``(z1, z2) -> z1 mod Lambda`` realizes
``0 -> C* -> J(X') -> J(X) -> 0``: its kernel is the ``z2`` line modulo
``2 pi i``.
"""
from dataclasses import dataclass

import numpy as np

from ._jsonutil import encode_complex
from .curves import (DivisorPoint, ExtendedLattice, abel_map_extended, default_base_point,
                     eigenvector_divisor)
from .errors import (DegenerateDivisor, DegenerateTau, DivisorDegeneracy,
                     PathThroughBranchPoint, RankDeficientLattice)
from .pendulum import lax_vars_of, rotate_about_e3

__all__ = [
    "ExtendedAbelPoint",
    "reduce_mod_lattice",
    "nearest_lattice_vector",
    "lattice_coordinates",
    "extension_projection",
    "projection_lattice",
    "group_action_shift",
    "model_lattice",
    "abel_sum",
    "FitReport",
    "abel_flow_fit",
    "symmetry_equivariance",
]

FLOOR_EPS = 1e-9


def _real4(z):
    z = np.asarray(z, dtype=complex)
    return np.array([z[0].real, z[0].imag, z[1].real, z[1].imag])


def _complex2(v):
    return np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])


def _frame(L):
    """Real 4x4 matrix ``[g1 g2 g3 n]``."""
    G = L.real_matrix()
    U, sv, _ = np.linalg.svd(G)
    if sv[-1] <= 1e-8 * max(1.0, sv[0]):
        raise RankDeficientLattice(f"smallest singular value {sv[-1]:.3e}")
    return np.column_stack([G, U[:, 3]])


def lattice_coordinates(z, L):
    """Real coordinates of ``z`` along ``g1, g2, g3, n``."""
    return np.linalg.solve(_frame(L), _real4(z))


@dataclass
class ExtendedAbelPoint:
    """Point ``z = (z1, z2)`` of ``C^2`` read modulo ``lattice``."""

    z: np.ndarray
    lattice: ExtendedLattice

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=complex).reshape(2)

    def reduce(self):
        return reduce_mod_lattice(self.z, self.lattice)[0]

    def to_dict(self):
        return {"z": encode_complex(self.z)}


def reduce_mod_lattice(z, L):
    """Move ``z`` into the fundamental cell of ``L``.

    Returns
    -------
    reduced : ndarray, shape (2,)
    coeffs : tuple of three ints
        Integer multiples of ``g1, g2, g3`` that were subtracted.
    """
    c = lattice_coordinates(z, L)
    n = np.floor(c[:3] + FLOOR_EPS)
    reduced = np.asarray(z, dtype=complex) - n @ L.generators
    return reduced, tuple(int(x) for x in n)


def nearest_lattice_vector(z, L):
    """Lattice vector closest to ``z`` in lattice coordinates, and its coefficients."""
    c = lattice_coordinates(z, L)
    n = np.round(c[:3])
    return n @ L.generators, n.astype(int)


def projection_lattice(L, coord=0):
    """Image of ``L`` under ``(z1, z2) -> z_coord``: its two nonzero generators.

    Raises
    ------
    DegenerateTau
        If the image is not a rank-two lattice in ``C``.
    """
    vals = L.generators[:, coord]
    scale = np.abs(vals).max()
    gens = vals[np.abs(vals) > 1e-14 * scale]
    if len(gens) != 2:
        raise DegenerateTau(f"projection has {len(gens)} nonzero generators, expected 2")
    M = np.array([[gens[0].real, gens[1].real], [gens[0].imag, gens[1].imag]])
    if abs(np.linalg.det(M)) <= 1e-12 * scale ** 2:
        raise DegenerateTau("projected generators are R-linearly dependent")
    return gens


def _reduce_1d(w, gens):
    M = np.array([[gens[0].real, gens[1].real], [gens[0].imag, gens[1].imag]])
    c = np.linalg.solve(M, [w.real, w.imag])
    n = np.floor(c + FLOOR_EPS)
    return w - n[0] * gens[0] - n[1] * gens[1], n


def extension_projection(p, coord=0):
    """``z_coord`` reduced modulo the projected lattice (the map to ``J(X)``).

    ``coord=1`` gives the second quotient structure of the model lattice.
    """
    gens = projection_lattice(p.lattice, coord)
    return complex(_reduce_1d(complex(p.z[coord]), gens)[0])


def distance_mod(w, gens):
    """Distance from ``w`` to the lattice spanned by ``gens`` in ``C``."""
    r, _ = _reduce_1d(complex(w), gens)
    return min(abs(r - a * gens[0] - b * gens[1]) for a in (0, 1) for b in (0, 1))


def group_action_shift(p, g):
    """``(z1, z2) -> (z1, z2 + g)``: the ``C*`` action on the fiber."""
    return ExtendedAbelPoint(p.z + np.array([0.0, g]), p.lattice)


def model_lattice(tau1, tau2):
    """The rank-three lattice with generators ``(2 pi i, 0), (0, 2 pi i), (tau1, tau2)``.

    Raises
    ------
    DegenerateTau
        If the generators are not R-independent (``tau1, tau2`` both imaginary).
    """
    gens = np.array([[2j * np.pi, 0.0], [0.0, 2j * np.pi], [tau1, tau2]], dtype=complex)
    try:
        return ExtendedLattice(gens)
    except RankDeficientLattice as exc:
        raise DegenerateTau(str(exc)) from exc


def abel_sum(curve, state, base=None, entry="12"):
    """Extended Abel image of the eigenvector divisor of ``state`` (two points)."""
    if base is None:
        base = default_base_point(curve)
    pts = eigenvector_divisor(lax_vars_of(state), entry=entry)
    return sum(abel_map_extended(curve, P, base) for P in pts)


@dataclass
class FitReport:
    velocity: np.ndarray
    residual: float
    segments: int
    theta_crossings: list
    offsets: list
    times: np.ndarray = None
    z: np.ndarray = None

    def to_dict(self):
        return {"velocity": encode_complex(self.velocity),
                "residual": float(self.residual),
                "segments": int(self.segments),
                "theta_crossings": [float(np.real(t)) for t in self.theta_crossings]}


def _unwrapped_samples(curve, L, traj, base, entry):
    """Abel sums along ``traj`` with lattice jumps removed, split at degeneracies."""
    segments, crossings = [], []
    current, bad_until = [], -1
    times = np.real(np.asarray(traj.times))
    prev = None
    skip = set()
    raw = []
    for n, st in enumerate(traj.states):
        try:
            raw.append(abel_sum(curve, st, base, entry))
        except (DegenerateDivisor, PathThroughBranchPoint):
            raw.append(None)
            crossings.append(times[n])
            skip.update(range(n - 2, n + 3))
    for n, z in enumerate(raw):
        if z is None or n in skip:
            if current:
                segments.append(current)
            current, prev = [], None
            continue
        if prev is not None:
            step = z - prev
            jump, _ = nearest_lattice_vector(step, L)
            z = z - jump
            c = lattice_coordinates(z - prev, L)[:3]
            if np.abs(c).max() > 0.4:
                # sampling too coarse for unambiguous unwrapping: split here
                segments.append(current)
                current = []
        current.append((times[n], z))
        prev = z
    if current:
        segments.append(current)
    segments = [s for s in segments if len(s) >= 3]
    return segments, crossings


def abel_flow_fit(traj, curve, base=None, entry="12", lattice=None, agree_tol=1e-6):
    """Fit ``z(t) = z_s + V t`` to the extended Abel image of a trajectory.

    All segments share ``V`` and get separate offsets ``z_s``.

    Returns
    -------
    FitReport
        ``velocity`` (``C^2``), max-norm ``residual``, number of segments and
        the times where the divisor degenerated.

    Raises
    ------
    DivisorDegeneracy
        If segments fitted on their own disagree in ``V`` by more than
        ``agree_tol`` (relative), or no segment has three usable samples.
    """
    from .curves import extended_lattice

    L = lattice if lattice is not None else extended_lattice(curve)
    if base is None:
        base = default_base_point(curve)
    segments, crossings = _unwrapped_samples(curve, L, traj, base, entry)
    if not segments:
        raise DivisorDegeneracy("no segment with at least three regular samples")

    nseg = len(segments)
    rows, rhs = [], []
    for s, seg in enumerate(segments):
        for t, z in seg:
            row = np.zeros(1 + nseg)
            row[0] = t
            row[1 + s] = 1.0
            rows.append(row)
            rhs.append(_real4(z))
    X = np.array(rows)
    Y = np.array(rhs)
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    residual = float(np.abs(X @ coef - Y).max())
    V = _complex2(coef[0])

    if nseg > 1:
        scale = max(1.0, float(np.abs(coef[0]).max()))
        for seg in segments:
            t = np.array([p[0] for p in seg])
            Z = np.array([_real4(p[1]) for p in seg])
            A = np.column_stack([t, np.ones_like(t)])
            c, *_ = np.linalg.lstsq(A, Z, rcond=None)
            if np.abs(c[0] - coef[0]).max() > agree_tol * scale:
                raise DivisorDegeneracy("segment velocities disagree across a divisor collision")

    times = np.concatenate([[p[0] for p in seg] for seg in segments])
    zs = np.concatenate([[p[1] for p in seg] for seg in segments])
    return FitReport(V, residual, nseg, crossings,
                     [_complex2(c) for c in coef[1:]], times, zs)


def symmetry_equivariance(state, theta, curve, base=None, lattice=None, entry="12"):
    """Compare Abel images of ``state`` and of its rotation by ``theta`` about ``e3``.

    Returns
    -------
    dz1_residual : float
        Distance of ``Delta z1`` to ``Lambda``.
    dz2 : complex
        Fiber shift after removing the lattice vector that absorbs
        ``Delta z1``, normalized so that ``Im`` lies in ``(-pi, pi]``.
    """
    from .curves import extended_lattice

    L = lattice if lattice is not None else extended_lattice(curve)
    if base is None:
        base = default_base_point(curve)
    z0 = abel_sum(curve, state, base, entry)
    z1 = abel_sum(curve, rotate_about_e3(state, theta), base, entry)
    dz = z1 - z0
    w = L.generators[:2, 0]
    M = np.array([[w[0].real, w[1].real], [w[0].imag, w[1].imag]])
    n = np.round(np.linalg.solve(M, [dz[0].real, dz[0].imag]))
    dz = dz - n @ L.generators[:2]
    res = float(abs(dz[0]))
    dz2 = dz[1]
    dz2 = dz2 - 2j * np.pi * np.round(dz2.imag / (2 * np.pi))
    return res, complex(dz2)
