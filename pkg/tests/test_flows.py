import numpy as np
import pytest

from laxjac.flows import (Trajectory, commuting_flows_deviation, integrate_lax,
                          integrate_pendulum, isospectral_deviation, pendulum_trajectory_to_lax)
from laxjac.matpoly import MatrixPolynomial
from laxjac.pendulum import S0, PendulumState, integrals, lax_matrices, lax_vars_of, random_state

BOTTOM = PendulumState([0, 0, -1], [0, 0, 0])


def test_equilibrium_stays_put():
    tr = integrate_pendulum(BOTTOM, 7.0, n_samples=11)
    for s in tr.states:
        assert np.allclose(s.as_vector(), BOTTOM.as_vector(), atol=1e-14)


def test_s0_energy_conserved():
    tr = integrate_pendulum(S0, 10.0, tol=1e-12)
    H0 = integrals(S0)[0]
    assert max(abs(integrals(s)[0] - H0) for s in tr.states) < 1e-9


def test_constraint_drift_without_projection(rng):
    for _ in range(3):
        tr = integrate_pendulum(random_state(rng), 20.0, n_samples=21)
        assert max(s.constraint_residual() for s in tr.states) < 1e-8


def test_drift_decreases_with_tol(rng):
    st = random_state(rng)
    drift = []
    for tol in (1e-6, 1e-8, 1e-10):
        tr = integrate_pendulum(st, 10.0, tol=tol, n_samples=21)
        drift.append(float(tr.diagnostics["H_drift"].max()))
    assert drift[0] > drift[1] > drift[2]


def test_diagonal_lax_is_constant():
    A = MatrixPolynomial([np.diag([1.0, 2.0]), np.diag([0.5, -1.0])])
    tr = integrate_lax(A, 1, 0.0, t_end=3.0, n_samples=5)
    for B in tr.states:
        assert np.allclose(B.coeffs, A.coeffs)


def test_isospectral_deviation_constant_and_corrupted():
    A, _ = lax_matrices(lax_vars_of(S0))
    const = Trajectory([0.0, 1.0], [A, A], 1e-12)
    assert isospectral_deviation(const) == 0
    c = np.array(A.coeffs)
    c[0, 0, 1] += 1e-3
    bad = Trajectory([0.0, 1.0], [A, MatrixPolynomial(c)], 1e-12)
    assert isospectral_deviation(bad) >= 1e-3 * 0.5


def test_pendulum_lax_trajectory_isospectral():
    tr = pendulum_trajectory_to_lax(integrate_pendulum(S0, 10.0, n_samples=51))
    assert isospectral_deviation(tr) < 1e-9


def test_lax_flow_matches_pendulum():
    # physical time t is Lax time t / (2i)
    A, _ = lax_matrices(lax_vars_of(S0))
    lax = integrate_lax(A, 1, 0.0, t_end=2.0 / 2j, n_samples=2).states[-1]
    end = integrate_pendulum(S0, 2.0, n_samples=2).states[-1]
    ref, _ = lax_matrices(lax_vars_of(end))
    assert np.abs(lax.coeffs - ref.coeffs).max() < 1e-9


def test_commuting_flows():
    assert commuting_flows_deviation(S0, 0.0, 1.0) < 1e-12
    assert commuting_flows_deviation(S0, 1.0, 0.0) < 1e-12
    assert commuting_flows_deviation(S0, 1.0, 1.0) < 1e-8
    assert commuting_flows_deviation(BOTTOM, 1.0, 1.0) < 1e-12


def test_trajectory_requires_monotone_times():
    with pytest.raises(ValueError):
        Trajectory([0.0, 1.0, 0.5], [S0, S0, S0], 1e-12)


def test_trajectory_rows():
    tr = integrate_pendulum(S0, 1.0, n_samples=3)
    rows = tr.to_rows()
    assert len(rows) == 4 and rows[0][0] == "t" and len(rows[1]) == len(rows[0])
