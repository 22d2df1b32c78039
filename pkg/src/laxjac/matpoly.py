r"""Complex matrix polynomials and their spectral data.

A matrix polynomial of degree ``d`` and size ``r`` is stored as an array of
shape ``(d + 1, r, r)`` holding :math:`A_0, \dots, A_d` in ascending order, so
``A(x) = A_0 + A_1 x + ... + A_d x^d``.  The leading coefficient ``A_d`` plays
the role of the fixed matrix ``J`` of the isospectral Lax flows

.. math::

    \frac{d}{dt} A(x) = \left[\frac{A^k(a)}{x - a}, A(x)\right].

Characteristic polynomials follow the convention ``det(y I - A(x))``, monic in
``y``.  For the 2x2 pendulum Lax matrix this gives ``mu**2 - F(lam)``; the
opposite sign convention ``mu**2 + F(lam) = 0`` is related by ``mu -> i mu``.
"""
from dataclasses import dataclass

import numpy as np

from ._jsonutil import decode_complex, encode_complex
from .errors import IllConditioned, NonzeroRemainder, NotDiagonalizable

__all__ = [
    "MatrixPolynomial",
    "PlaneSpectralPolynomial",
    "EigenStructure",
    "evaluate",
    "char_poly",
    "lax_vector_field",
    "eigen_structure",
    "restrict_to_eigenspace",
    "stabilizer_dimension",
]


class MatrixPolynomial:
    """Polynomial in one variable with complex ``r x r`` matrix coefficients.

    Parameters
    ----------
    coeffs : array_like, shape (d + 1, r, r)
        Coefficients in ascending powers of ``x``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0:
            raise ValueError(f"coefficients must have shape (d+1, r, r), got {c.shape}")
        c.setflags(write=False)
        self.coeffs = c

    @property
    def r(self):
        return self.coeffs.shape[1]

    @property
    def d(self):
        return self.coeffs.shape[0] - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    def coeff(self, i):
        """Coefficient of ``x**i``; zero beyond the stored degree."""
        if 0 <= i <= self.d:
            return self.coeffs[i]
        return np.zeros((self.r, self.r), dtype=complex)

    def __call__(self, x0):
        return evaluate(self, x0)

    def __add__(self, other):
        d = max(self.d, other.d)
        return MatrixPolynomial([self.coeff(i) + other.coeff(i) for i in range(d + 1)])

    def __sub__(self, other):
        d = max(self.d, other.d)
        return MatrixPolynomial([self.coeff(i) - other.coeff(i) for i in range(d + 1)])

    def __matmul__(self, other):
        return MatrixPolynomial(_polymatmul(self.coeffs, other.coeffs))

    def commutator(self, other):
        """``[self, other]`` as a matrix polynomial."""
        return (self @ other) - (other @ self)

    def trace(self):
        """Trace as a scalar polynomial (ascending coefficients)."""
        return np.trace(self.coeffs, axis1=1, axis2=2)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def to_dict(self):
        return {"r": self.r, "d": self.d, "coeffs": encode_complex(self.coeffs)}

    @classmethod
    def from_dict(cls, obj):
        A = cls(decode_complex(obj["coeffs"]))
        if A.r != obj["r"] or A.d != obj["d"]:
            raise ValueError("declared r/d do not match coefficient array")
        return A

    def __repr__(self):
        return f"MatrixPolynomial(r={self.r}, d={self.d})"


@dataclass(frozen=True)
class PlaneSpectralPolynomial:
    r"""``P(x, y) = y^r + s_1(x) y^{r-1} + ... + s_r(x)``.

    ``s[i - 1]`` holds the ascending coefficients of :math:`s_i(x)`.
    """

    r: int
    d: int
    s: tuple

    def degree_bound_ok(self, tol=0.0):
        for i, si in enumerate(self.s, start=1):
            if np.any(np.abs(si[i * self.d + 1:]) > tol):
                return False
        return True

    def evaluate(self, x, y):
        val = np.asarray(y, dtype=complex) ** self.r
        for i, si in enumerate(self.s, start=1):
            val = val + np.polynomial.polynomial.polyval(x, si) * y ** (self.r - i)
        return val

    def coefficient_vector(self):
        """All ``s_i`` coefficients, padded to their degree bounds, concatenated."""
        parts = []
        for i, si in enumerate(self.s, start=1):
            padded = np.zeros(i * self.d + 1, dtype=complex)
            n = min(len(si), len(padded))
            padded[:n] = si[:n]
            parts.append(padded)
        return np.concatenate(parts)


@dataclass(frozen=True)
class EigenStructure:
    """Clustered eigenvalues of a square matrix.

    ``multiplicities`` are algebraic, ``geometric`` the eigenspace dimensions.
    ``regular`` holds exactly when every eigenvalue owns a single Jordan block.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple
    geometric: tuple
    regular: bool

    @property
    def s(self):
        return len(self.eigenvalues)

    @property
    def diagonalizable(self):
        return self.multiplicities == self.geometric


def _polymatmul(P, Q):
    n = P.shape[0] + Q.shape[0] - 1
    out = np.zeros((n,) + P.shape[1:2] + Q.shape[2:], dtype=complex)
    for i in range(P.shape[0]):
        out[i:i + Q.shape[0]] += np.einsum("ij,njk->nik", P[i], Q)
    return out


def evaluate(A, x0):
    """``sum_i A_i x0**i`` by Horner's rule."""
    out = np.array(A.coeffs[-1])
    for c in A.coeffs[-2::-1]:
        out = out * x0 + c
    return out


def char_poly(A):
    """Characteristic polynomial ``det(y I - A(x))`` of a matrix polynomial.

    Uses the Faddeev--LeVerrier recursion with polynomial-matrix arithmetic, so
    no interpolation error enters; every ``s_i`` is truncated to its degree
    bound ``i * d``.
    """
    r, d = A.r, A.d
    eye = np.eye(r, dtype=complex)[None]
    M = np.zeros((1, r, r), dtype=complex)
    c_prev = np.ones(1, dtype=complex)
    s = []
    for k in range(1, r + 1):
        M = _polymatmul(A.coeffs, M) if k > 1 else M
        M = M.copy()
        M[: len(c_prev)] += c_prev[:, None, None] * eye
        AM = _polymatmul(A.coeffs, M)
        c_prev = -np.trace(AM, axis1=1, axis2=2) / k
        c_prev = c_prev[: k * d + 1]
        s.append(c_prev.copy())
    return PlaneSpectralPolynomial(r=r, d=d, s=tuple(s))


def lax_vector_field(A, k=1, a=0.0, rtol=1e-12):
    """Right-hand side ``[A^k(a), A(x)] / (x - a)`` of the polynomial Lax flow.

    The commutator vanishes at ``x = a``, so the division is exact; the result
    has degree ``d - 1`` and the flow leaves the leading coefficient fixed.

    Raises
    ------
    NonzeroRemainder
        If synthetic division leaves a remainder above ``rtol`` (relative).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    Mk = np.linalg.matrix_power(evaluate(A, a), k)
    C = np.einsum("ij,njk->nik", Mk, A.coeffs) - np.einsum("nij,jk->nik", A.coeffs, Mk)
    if A.d == 0:
        rem = C[0]
        quot = np.zeros((1, A.r, A.r), dtype=complex)
    else:
        quot = np.zeros((A.d, A.r, A.r), dtype=complex)
        quot[-1] = C[-1]
        for i in range(A.d - 1, 0, -1):
            quot[i - 1] = C[i] + a * quot[i]
        rem = C[0] + a * quot[0]
    scale = sum(np.abs(C[i]).max() * abs(a) ** i for i in range(C.shape[0]))
    if np.abs(rem).max() > rtol * max(scale, 1.0):
        raise NonzeroRemainder(
            f"division by (x - a) left remainder {np.abs(rem).max():.3e}")
    return MatrixPolynomial(quot)


def _cluster(values, tol):
    """Group nearly equal complex numbers; ambiguous gaps raise."""
    values = np.asarray(values, dtype=complex)
    n = len(values)
    scale = max(1.0, float(np.abs(values).max())) if n else 1.0
    labels = list(range(n))

    def find(i):
        while labels[i] != i:
            labels[i] = labels[labels[i]]
            i = labels[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(values[i] - values[j])
            if gap < tol * scale:
                labels[find(i)] = find(j)
            elif gap < 10 * tol * scale:
                raise IllConditioned(
                    f"eigenvalues {values[i]:.6g} and {values[j]:.6g} are neither "
                    f"separated nor clustered at tolerance {tol:g}")
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = [values[idx].mean() for idx in groups.values()]
    members = list(groups.values())
    order = sorted(range(len(clusters)), key=lambda m: (clusters[m].real, clusters[m].imag))
    return [clusters[m] for m in order], [members[m] for m in order]


def eigen_structure(J, tol=1e-9):
    """Distinct eigenvalues of ``J`` with algebraic and geometric multiplicities.

    Eigenvalues are clustered at relative tolerance ``tol`` and sorted by
    ``(Re, Im)``; this order defines the eigenvalue index used elsewhere.
    """
    J = np.asarray(J, dtype=complex)
    r = J.shape[0]
    centers, members = _cluster(np.linalg.eigvals(J), tol)
    scale = max(1.0, float(np.abs(J).max()))
    geometric = []
    for lam in centers:
        sv = np.linalg.svd(J - lam * np.eye(r), compute_uv=False)
        geometric.append(int(np.sum(sv <= max(10 * tol, 1e-12) * scale * r)))
    mult = tuple(len(m) for m in members)
    geometric = tuple(max(g, 1) for g in geometric)
    return EigenStructure(
        eigenvalues=np.array(centers),
        multiplicities=mult,
        geometric=geometric,
        regular=all(g == 1 for g in geometric),
    )


def _eigenbasis(J, es, tol):
    """Columns spanning each eigenspace, in eigenvalue order."""
    r = J.shape[0]
    if not es.diagonalizable:
        raise NotDiagonalizable("leading matrix is not diagonalizable")
    if np.allclose(J, np.diag(np.diag(J)), atol=0.0):
        diag = np.diag(J)
        blocks = []
        for lam in es.eigenvalues:
            idx = np.flatnonzero(np.abs(diag - lam) <= 10 * tol * max(1.0, abs(lam)))
            blocks.append(np.eye(r, dtype=complex)[:, idx])
        return blocks
    blocks = []
    for lam, m in zip(es.eigenvalues, es.multiplicities):
        _, _, vh = np.linalg.svd(J - lam * np.eye(r))
        blocks.append(vh[r - m:].conj().T)
    return blocks


def restrict_to_eigenspace(u, J, i, tol=1e-9):
    r"""Restriction ``u|_{E_i} : v \mapsto Pr_{E_i} u(v)`` in a fixed eigenbasis.

    The projection is along the remaining eigenspaces of ``J``.  For diagonal
    ``J`` the eigenbasis is the standard one and the result is a diagonal minor
    of ``u``.
    """
    u = np.asarray(u, dtype=complex)
    J = np.asarray(J, dtype=complex)
    es = eigen_structure(J, tol)
    blocks = _eigenbasis(J, es, tol)
    P = np.hstack(blocks)
    start = sum(b.shape[1] for b in blocks[:i])
    stop = start + blocks[i].shape[1]
    u_eig = np.linalg.solve(P, u @ P)
    return u_eig[start:stop, start:stop]


def stabilizer_dimension(J, K=None, tol=1e-9, seed=0):
    """Torus and additive ranks of the projective stabilizer of ``J``.

    The Lie algebra of the stabilizer is the kernel of ``X -> [X, J]``,
    optionally cut down by ``[X|_{E_i}, K_i] = 0`` on every eigenspace of
    dimension greater than one.  Its group of units modulo scalars is
    ``(C*)^t x C^a`` with ``t + 1`` the number of distinct eigenvalues of a
    generic element and ``t + 1 + a`` the kernel dimension.

    Parameters
    ----------
    J : array_like
        Leading coefficient.
    K : sequence of arrays, optional
        One regular matrix per eigenspace of dimension > 1, in eigenvalue
        order.  Required when ``J`` is not regular.

    Returns
    -------
    (torus_rank, additive_rank)
    """
    J = np.asarray(J, dtype=complex)
    r = J.shape[0]
    es = eigen_structure(J, tol)
    eye = np.eye(r)
    # vec(XJ - JX) = (J^T kron I - I kron J) vec(X), column-major vec
    rows = [np.kron(J.T, eye) - np.kron(eye, J)]
    if not es.regular:
        if K is None:
            raise ValueError("K is required when J is not regular")
        blocks = _eigenbasis(J, es, tol)
        big = [b for b in blocks if b.shape[1] > 1]
        if len(K) != len(big):
            raise ValueError(f"expected {len(big)} K matrices, got {len(K)}")
        P = np.hstack(blocks)
        Pinv = np.linalg.inv(P)
        offsets = np.cumsum([0] + [b.shape[1] for b in blocks])
        big_idx = [n for n, b in enumerate(blocks) if b.shape[1] > 1]
        for n, Ki in zip(big_idx, K):
            Ki = np.asarray(Ki, dtype=complex)
            sl = slice(offsets[n], offsets[n + 1])
            m = Ki.shape[0]
            # X -> (P^-1 X P)[sl, sl], then commutator with K_i
            restrict = np.kron(P[:, sl].T, Pinv[sl, :])
            comm = np.kron(Ki.T, np.eye(m)) - np.kron(np.eye(m), Ki)
            rows.append(comm @ restrict)
    L = np.vstack(rows)
    _, sv, vh = np.linalg.svd(L)
    sv = np.concatenate([sv, np.zeros(vh.shape[0] - len(sv))])
    kernel = vh[sv <= max(1e-10, tol) * max(1.0, sv.max())].conj()
    dim = kernel.shape[0]
    rng = np.random.default_rng(seed)
    weights = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    generic = (weights @ kernel).reshape(r, r, order="F")
    n_eig = len(_cluster(np.linalg.eigvals(generic), 1e-6)[0])
    return n_eig - 1, dim - n_eig
