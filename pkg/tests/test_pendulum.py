import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laxjac.errors import ConstraintViolation, RelationViolation
from laxjac.flows import integrate_pendulum
from laxjac.pendulum import (S0, LaxVariables, PendulumState, bdot, cushman_inverse, cushman_map,
                             integrals, lax_matrices, lax_time_derivative, lax_vars_of,
                             pendulum_rhs, project_to_manifold, random_state, rotate_about_e3,
                             spectral_invariants, state_on_level, to_lax_vars)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
TOP = PendulumState([0, 0, 1], [0, 0, 0])
BOTTOM = PendulumState([0, 0, -1], [0, 0, 0])


def test_equilibria_are_fixed():
    for s in (TOP, BOTTOM):
        xd, vd = pendulum_rhs(s)
        assert np.allclose(xd, 0) and np.allclose(vd, 0)


def test_rhs_at_s0():
    xd, vd = pendulum_rhs(S0)
    assert np.allclose(xd, [0, 1, 0])
    assert np.allclose(vd, [-0.12, 0, -1.16])


def test_integrals():
    assert np.allclose(integrals(TOP), (1, 0))
    assert np.allclose(integrals(BOTTOM), (-1, 0))
    assert np.allclose(integrals(S0), (1.3, 0.6))


def test_constructor_rejects_off_manifold():
    with pytest.raises(ConstraintViolation):
        PendulumState([1, 0, 1], [0, 0, 0])
    s = PendulumState.unchecked([1.1, 0, 0], [0.1, 1, 0])
    p = project_to_manifold(s)
    assert p.constraint_residual() < 1e-14


def test_cushman_examples():
    y, u = cushman_map(PendulumState([0, 0, 1], [1, 0, 0]))
    assert np.allclose(y, [0, 0, 1]) and np.allclose(u, [0, 1, 0])
    y, u = cushman_map(S0)
    assert np.allclose(y, [0.6, 0, 0.8]) and np.allclose(u, [-0.8, 0, 0.6])


@settings(max_examples=40, deadline=None)
@given(seeds, st.booleans())
def test_cushman_square_flips_velocity(seed, complex_):
    s = random_state(np.random.default_rng(seed), complex_=complex_)
    y, u = cushman_map(s)
    s2 = PendulumState.unchecked(y, u)
    y2, u2 = cushman_map(s2)
    assert np.allclose(y2, s.x, atol=1e-12) and np.allclose(u2, -s.v, atol=1e-12)
    back = cushman_inverse(y, u)
    assert np.allclose(back.as_vector(), s.as_vector(), atol=1e-12)


def test_lax_vars_examples():
    lv = to_lax_vars(np.array([0, 0, 1.0]), np.array([0, 1.0, 0]))
    assert np.allclose(lv.as_array(), [-1j, 1, 0, 0, 1j, 1])
    lv = to_lax_vars(np.array([0.6, 0, 0.8]), np.array([-0.8, 0, 0.6]))
    assert np.allclose(lv.as_array(), [0.6, 0.8, -0.8, 0.6, 0.6, 0.8])


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 3))
def test_lax_vars_real_in_plane(a, b, c):
    y = np.array([a, 0.0, b])
    y = y / np.linalg.norm(y) if np.linalg.norm(y) > 1e-3 else np.array([0, 0, 1.0])
    u = c * np.array([-y[2], 0, y[0]])
    assert np.all(np.abs(to_lax_vars(y, u).as_array().imag) < 1e-15)


def test_lax_matrices_equilibrium():
    A, B = lax_matrices(to_lax_vars(np.array([0, 0, 1.0]), np.zeros(3)))
    assert np.allclose(A.coeffs[0], [[0, 1], [1, 0]])
    assert np.allclose(A.coeffs[1], 0)
    assert np.allclose(A.coeffs[2], [[0, 1], [1, 0]])
    assert np.allclose(B.coeffs[1], [[0, 1], [1, 0]])
    assert np.allclose(B.coeffs[0], 0)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_lax_matrix_structure(seed):
    A, B = lax_matrices(lax_vars_of(random_state(np.random.default_rng(seed), complex_=True)))
    assert np.array_equal(A.coeffs[2], [[0, 1], [1, 0]])
    assert np.array_equal(B.coeffs[0], A.coeffs[1])


def test_spectral_invariants_examples():
    h, k, F = spectral_invariants(lax_vars_of(S0))
    assert np.isclose(h, 1.3) and np.isclose(k, 0.6)
    assert np.allclose(F, [1, 0, 2.6, 1.2, 1])
    h, k, F = spectral_invariants(lax_vars_of(TOP))
    assert np.allclose([h, k], [1, 0]) and np.allclose(F, [1, 0, 2, 0, 1])


def test_spectral_invariants_rejects_bad_relations():
    with pytest.raises(RelationViolation):
        spectral_invariants(LaxVariables(0, 2, 0, 0, 0, 2))


@settings(max_examples=50, deadline=None)
@given(seeds, st.booleans())
def test_relations_and_hk(seed, complex_):
    s = random_state(np.random.default_rng(seed), complex_=complex_)
    lv = lax_vars_of(s)
    assert max(abs(r) for r in lv.relation_residuals()) < 1e-10
    H, K = integrals(s)
    h, k, _ = spectral_invariants(lv)
    assert abs(h - H) < 1e-12 and abs(k - K) < 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_lax_identity(seed):
    s = random_state(np.random.default_rng(seed), complex_=True)
    A, B = lax_matrices(lax_vars_of(s))
    dA = lax_time_derivative(*cushman_map(s))
    rhs = A.commutator(B)
    n = max(dA.d, rhs.d) + 1
    for i in range(n):
        assert np.abs(2j * dA.coeff(i) - rhs.coeff(i)).max() < 1e-10


def test_rotation_examples():
    assert np.allclose(rotate_about_e3(S0, 0).as_vector(), S0.as_vector())
    assert np.allclose(rotate_about_e3(S0, 2 * np.pi).as_vector(), S0.as_vector(), atol=1e-12)
    r = rotate_about_e3(S0, np.pi / 2)
    assert np.allclose(r.x, [0, 0.6, 0.8]) and np.allclose(r.v, [-1, 0, 0])
    assert np.isclose(integrals(r)[1], 0.6)


@settings(max_examples=40, deadline=None)
@given(seeds, st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_rotation_invariance(seed, theta):
    s = random_state(np.random.default_rng(seed))
    H, K = integrals(s)
    H2, K2 = integrals(rotate_about_e3(s, theta))
    scale = max(1.0, abs(np.cos(theta)) ** 2 + abs(np.sin(theta)) ** 2)
    assert abs(H - H2) < 1e-12 * scale and abs(K - K2) < 1e-12 * scale


def test_cushman_intertwines_flows(rng):
    s = random_state(rng)
    t = 0.7
    end = integrate_pendulum(s, t, tol=1e-12, n_samples=2).states[-1]
    y0, u0 = cushman_map(s)
    y1, u1 = cushman_map(end)
    # along the image flow: y' = u x y, u' = e3 x y
    from scipy.integrate import solve_ivp

    def rhs(_, w):
        y, u = w[:3], w[3:]
        return np.concatenate([np.cross(u, y), np.cross([0, 0, 1.0], y)])

    sol = solve_ivp(rhs, (0, t), np.concatenate([y0.real, u0.real]),
                    method="DOP853", rtol=1e-12, atol=1e-12)
    assert np.allclose(sol.y[:, -1], np.concatenate([y1.real, u1.real]), atol=1e-9)


def test_state_on_level():
    s = state_on_level(1.3, 0.6)
    assert s.is_real
    assert np.allclose(integrals(s), (1.3, 0.6), atol=1e-12)
    assert abs(bdot(s.x, s.x) - 1) < 1e-12
