"""Adaptive path quadrature on the double cover ``mu**2 = f(lam)``.

A path is a chain of *pieces*, each parametrized by ``u in [0, 1]``.  On a piece
``mu = p(u) * s(u)`` where ``p`` is an explicit analytic prefactor and ``s`` is
a square root of a smooth, non-vanishing function ``A(u)``; ``s`` is tracked by
nearest-value continuation.  Integrands are ``phi(lam) dlam / mu`` with
``phi`` in ``{1, lam}``, written as ``phi(lam(u)) * factor(u) / s(u) du``.

Pieces leaving a branch point ``e`` use ``lam = e + D u**2`` which removes the
inverse square-root singularity: ``mu = u * sqrt(D q(lam))`` with
``q = f / (lam - e)``.
"""
import numpy as np

from .errors import PathThroughBranchPoint

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
GL_NODES = 0.5 * (GL_NODES + 1.0)
GL_WEIGHTS = 0.5 * GL_WEIGHTS

REL_TOL = 1e-12
MAX_DEPTH = 48


def track_sqrt(arg, start):
    """Continuous square root of ``arg`` starting next to ``start``.

    Returns the tracked values and a flag that is False when two consecutive
    samples differ by more than half their modulus (continuation unsafe).
    """
    m = np.sqrt(arg)
    flips = np.abs(m[1:] - m[:-1]) > np.abs(m[1:] + m[:-1])
    sign = np.concatenate([[1.0], np.where(np.cumsum(flips) % 2 == 1, -1.0, 1.0)])
    s = m * sign
    if start is not None and abs(s[0] - start) > abs(s[0] + start):
        s = -s
    ok = bool(np.all(np.abs(np.diff(s)) <= 0.5 * np.maximum(np.abs(s[1:]), np.abs(s[:-1]))))
    return s, ok


class Piece:
    """One parametrized stretch of a path.

    Parameters
    ----------
    lam, factor, arg : callables of a float array ``u``
        Position, smooth Jacobian factor ``(dlam/du) / p(u)``, and the radicand
        whose tracked square root is ``s``.
    mu_scale : callable
        The prefactor ``p(u)`` (so ``mu = p * s``).
    with_eta : bool
        Also integrate ``lam dlam / mu``.
    """

    def __init__(self, lam, factor, arg, mu_scale, with_eta=True):
        self.lam = lam
        self.factor = factor
        self.arg = arg
        self.mu_scale = mu_scale
        self.with_eta = with_eta

    def mu(self, u, s):
        return self.mu_scale(np.atleast_1d(u)) * s


def _eval_panel(piece, u0, u1, s0):
    u = np.concatenate([[u0], u0 + (u1 - u0) * GL_NODES, [u1]])
    s, ok = track_sqrt(piece.arg(u), s0)
    inner = u[1:-1]
    base = piece.factor(inner) / s[1:-1]
    if piece.with_eta:
        vals = np.stack([base, piece.lam(inner) * base])
    else:
        vals = base[None]
    return (u1 - u0) * (vals @ GL_WEIGHTS), s[-1], ok


def integrate_piece(piece, s0=None, rel_tol=REL_TOL):
    """Integrate over ``u in [0, 1]`` with recursive panel bisection.

    ``s0`` fixes the branch of ``s`` at ``u = 0`` (principal root if None).

    Returns
    -------
    integrals : ndarray
        ``[int dlam/mu]`` or ``[int dlam/mu, int lam dlam/mu]``.
    s_start, s_end : complex
        Tracked ``s`` at both ends.
    """
    if s0 is None:
        s0 = np.sqrt(piece.arg(np.array([0.0])))[0]

    def rec(u0, u1, s_a, coarse, depth):
        um = 0.5 * (u0 + u1)
        left, s_m, ok_l = _eval_panel(piece, u0, um, s_a)
        right, s_b, ok_r = _eval_panel(piece, um, u1, s_m)
        fine = left + right
        I_c, s_c, ok_c = coarse
        err = np.abs(fine - I_c).max()
        good = ok_l and ok_r and ok_c and abs(s_c - s_b) <= 0.5 * abs(s_b)
        if good and err <= rel_tol * max(1.0, np.abs(fine).max()):
            return fine, s_b
        if depth >= MAX_DEPTH:
            raise PathThroughBranchPoint(
                "quadrature failed to converge; the path runs too close to a branch point")
        I_l, s_m = rec(u0, um, s_a, (left, s_m, ok_l), depth + 1)
        I_r, s_b = rec(um, u1, s_m, (right, s_b, ok_r), depth + 1)
        return I_l + I_r, s_b

    first = _eval_panel(piece, 0.0, 1.0, s0)
    total, s_end = rec(0.0, 1.0, s0, first, 0)
    return total, s0, s_end


def line_piece(f, a, b, with_eta=True):
    """Straight piece from ``a`` to ``b`` away from branch points."""
    d = b - a
    return Piece(
        lam=lambda u: a + d * u,
        factor=lambda u: np.full(np.shape(u), d, dtype=complex),
        arg=lambda u: f(a + d * u),
        mu_scale=lambda u: np.ones(np.shape(u)),
        with_eta=with_eta,
    )


def arc_piece(f, center, radius, phi0, sweep, with_eta=True):
    """Circular arc ``center + radius * exp(i (phi0 + sweep u))``."""
    def lam(u):
        return center + radius * np.exp(1j * (phi0 + sweep * u))

    return Piece(
        lam=lam,
        factor=lambda u: 1j * sweep * (lam(u) - center),
        arg=lambda u: f(lam(u)),
        mu_scale=lambda u: np.ones(np.shape(u)),
        with_eta=with_eta,
    )


def branch_piece(q, e, w, with_eta=True):
    """Piece from the branch point ``e`` to ``w`` with ``lam = e + (w - e) u^2``.

    ``q(lam) = f(lam) / (lam - e)`` must be supplied directly (it is smooth at
    ``e``).  Here ``mu = u * s(u)`` with ``s^2 = (w - e) q(lam)``.
    """
    D = w - e
    return Piece(
        lam=lambda u: e + D * u * u,
        factor=lambda u: np.full(np.shape(u), 2.0 * D, dtype=complex),
        arg=lambda u: D * q(e + D * u * u),
        mu_scale=lambda u: np.asarray(u, dtype=float),
        with_eta=with_eta,
    )


def infinity_piece(f_rev, lam0):
    """Radial piece from ``lam0`` out to infinity, in the chart ``tau = 1/lam``.

    ``f_rev(tau) = tau**4 f(1/tau)``.  Only ``dlam / mu`` is integrable here.
    With ``tau = tau0 (1 - u)`` one has ``mu = S(tau) / tau^2`` and
    ``dlam / mu = tau0 du / S``.  ``mu_scale`` returns ``1/tau^2`` so that
    ``mu = mu_scale * S`` as for the other pieces.
    """
    tau0 = 1.0 / lam0
    return Piece(
        lam=lambda u: 1.0 / (tau0 * (1.0 - u)),
        factor=lambda u: np.full(np.shape(u), tau0, dtype=complex),
        arg=lambda u: f_rev(tau0 * (1.0 - u)),
        mu_scale=lambda u: 1.0 / (tau0 * (1.0 - np.asarray(u))) ** 2,
        with_eta=False,
    )


def segment_distance(p, a, b):
    """Distance from ``p`` to the segment ``[a, b]`` and the foot parameter."""
    d = b - a
    if d == 0:
        return abs(p - a), 0.0
    t = ((p - a) * np.conj(d)).real / abs(d) ** 2
    t = min(max(t, 0.0), 1.0)
    return abs(p - (a + t * d)), t


def plan_polyline(points, branch, margin, depth=6):
    """Insert waypoints so that no segment passes within ``margin`` of a branch point.

    A branch point closer than ``margin`` to a segment end is tolerated there.
    Returns the refined vertex list or None if planning fails.
    """
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        seg = _plan_segment(a, b, branch, margin, depth)
        if seg is None:
            return None
        out.extend(seg[1:])
    return out


def _plan_segment(a, b, branch, margin, depth):
    worst = None
    for e in branch:
        dist, t = segment_distance(e, a, b)
        if dist >= margin:
            continue
        at_end = (t <= 0.0 and abs(e - a) == dist) or (t >= 1.0 and abs(e - b) == dist)
        if at_end and (abs(e - a) < margin or abs(e - b) < margin):
            continue
        if worst is None or t < worst[1]:
            worst = (e, t)
    if worst is None:
        return [a, b]
    if depth == 0:
        return None
    e, t = worst
    foot = a + t * (b - a)
    normal = foot - e
    if abs(normal) < 1e-14:
        normal = 1j * (b - a)
    normal = normal / abs(normal)
    w = e + 2.5 * margin * normal
    left = _plan_segment(a, w, branch, margin, depth - 1)
    right = _plan_segment(w, b, branch, margin, depth - 1)
    if left is None or right is None:
        return None
    return left + right[1:]
