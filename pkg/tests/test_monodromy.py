import numpy as np
import pytest
from scipy.integrate import quad

from laxjac.curves import CycleSpec
from laxjac.monodromy import (LoopSpec, continue_periods, discriminant, discriminant_locus,
                              frequency_jacobian, frequency_map, loop_clearance,
                              poincare_rotation)
from laxjac.pendulum import allowed_heights

AROUND = LoopSpec((1.0, 0.0), 0.3, 64)


@pytest.fixture(scope="module")
def around():
    return continue_periods(AROUND)


def radial_oracle(h, k):
    """Return time and azimuth advance from quadrature of the radial equation."""
    z1, z2 = allowed_heights(h, k)
    P = lambda z: 2 * (h - z) * (1 - z * z) - k * k
    # z = mid - half cos(s) removes the square-root endpoint singularities
    mid, half = 0.5 * (z1 + z2), 0.5 * (z2 - z1)

    def dt(s):
        z = mid - half * np.cos(s)
        return half * np.sin(s) / np.sqrt(max(P(z), 1e-300))

    T = 2 * quad(dt, 0, np.pi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    Th = 2 * quad(lambda s: k / (1 - (mid - half * np.cos(s)) ** 2) * dt(s), 0, np.pi,
                  epsabs=1e-12, epsrel=1e-12, limit=200)[0]
    return T, Th


def test_discriminant_zero_at_equilibrium():
    assert abs(discriminant(1.0, 0.0)) < 1e-14
    assert abs(discriminant(1.3, 0.6)) > 1e-3


def test_discriminant_locus_finds_isolated_point():
    lines, iso = discriminant_locus(grid=(181, 161))
    assert any(np.hypot(h - 1, k) < 1e-6 for h, k in iso)
    assert lines
    # contour points are linear interpolants: |D| is at most |grad D| times the grid step
    step = 4.5 / 180
    for ln in lines:
        h, k = ln[:, 0], ln[:, 1]
        gh = (discriminant(h + 1e-6, k) - discriminant(h - 1e-6, k)) / 2e-6
        gk = (discriminant(h, k + 1e-6) - discriminant(h, k - 1e-6)) / 2e-6
        assert np.all(np.abs(discriminant(h, k)) <= np.hypot(gh, gk) * step)


def test_loop_validation():
    with pytest.raises(ValueError):
        LoopSpec((1.0, 0.0), 0.3, 16)
    with pytest.raises(ValueError):
        LoopSpec((1.0, 0.0), -1.0)
    assert loop_clearance(AROUND)


def test_trivial_loop():
    r = continue_periods(LoopSpec((2.0, 0.5), 0.1, 64))
    assert np.array_equal(r.M, np.eye(2, dtype=int))
    assert np.array_equal(r.M_ext, np.eye(3, dtype=int))
    assert r.continuation_residual < 1e-6


def test_extended_monodromy_is_transvection(around):
    E = around.M_ext - np.eye(3, dtype=int)
    assert around.continuation_residual < 1e-6
    assert np.any(E) and not np.any(E @ E)
    assert round(np.linalg.det(around.M_ext)) == 1
    # block-triangular: g3 fixed, the C-part acts as M
    assert np.array_equal(around.M_ext[:2, :2], around.M)
    assert np.array_equal(around.M_ext[2], [0, 0, 1])


def test_lambda_block_is_trivial(around):
    # both pinching pairs contribute opposite transvections on H1 of the compact curve
    assert np.array_equal(around.M, np.eye(2, dtype=int))


def test_real_torus_monodromy(around):
    M = around.M_real
    assert M is not None
    assert np.trace(M) == 2 and round(np.linalg.det(M)) == 1
    E = M - np.eye(2, dtype=int)
    assert np.any(E) and not np.any(E @ E)
    # conjugate in GL(2, Z) to [[1, 1], [0, 1]]: the off-diagonal entry has modulus one
    assert np.abs(E).sum() == 1


def test_monodromy_stable_under_refinement(around):
    r = continue_periods(LoopSpec((1.0, 0.0), 0.3, 128))
    assert np.array_equal(r.M_ext, around.M_ext)
    assert np.array_equal(r.M_real, around.M_real)


def test_monodromy_stable_under_radius(around):
    # another base point gives another g-basis, but the return-lattice basis is canonical
    r = continue_periods(LoopSpec((1.0, 0.0), 0.2, 64))
    assert np.array_equal(r.M, around.M)
    assert np.array_equal(r.M_real, around.M_real)
    E = r.M_ext - np.eye(3, dtype=int)
    assert np.any(E) and not np.any(E @ E)


def test_reversed_loop_inverts(around):
    r = continue_periods(AROUND.reversed())
    assert np.array_equal(r.M_ext @ around.M_ext, np.eye(3, dtype=int))
    assert np.array_equal(r.M_real @ around.M_real, np.eye(2, dtype=int))


def test_concatenation_with_based_loops(around):
    # both loops start at (1.3, 0); B encloses nothing, C is homotopic to A
    b = continue_periods(LoopSpec((1.2, 0.0), 0.1, 64))
    c = continue_periods(LoopSpec((1.05, 0.0), 0.25, 64))
    assert np.array_equal(b.M_ext @ around.M_ext, around.M_ext)
    assert np.array_equal(c.M_ext, around.M_ext)


def test_frequency_against_oracles():
    fd = frequency_map(1.3, 0.6)
    T, Th = radial_oracle(1.3, 0.6)
    assert abs(fd.T_r - T) < 1e-9
    assert abs(fd.Theta_r - Th) < 1e-9
    Tp, dphi = poincare_rotation(1.3, 0.6)
    assert abs(fd.T_r - Tp) < 1e-8 and abs(fd.Theta_r - dphi) < 1e-8
    assert np.allclose(fd.omega, (2 * np.pi / T, Th / T))
    assert fd.fit_residual < 1e-6


@pytest.mark.parametrize("hk", [(0.5, 0.2), (2.0, -0.7), (-0.5, 0.1)])
def test_frequency_other_levels(hk):
    fd = frequency_map(*hk)
    T, Th = radial_oracle(*hk)
    assert abs(fd.T_r - T) < 1e-8 * T
    assert abs(fd.Theta_r - Th) < 1e-7


def test_frequency_independent_of_cycle_basis():
    a = frequency_map(1.3, 0.6)
    b = frequency_map(1.3, 0.6, cycle_spec=CycleSpec(a=(1, 2), b=(2, 3)))
    assert np.allclose(a.omega, b.omega, atol=1e-6)


def test_frequency_jacobian_nondegenerate():
    J, det = frequency_jacobian(1.3, 0.6)
    assert J.shape == (2, 2) and abs(det) > 1e-6
    assert np.isclose(det, np.linalg.det(J))
