import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gcww import coefficients as co
from gcww import reduced
from gcww.errors import SingularSylvesterError, StablePointError
from gcww.params import make_params

unit = st.floats(-1.0, 1.0)


@settings(max_examples=300)
@given(unit, unit, unit, unit, unit)
def test_closed_form_det_matches_numpy(a, b, c, d, e):
    A = reduced.sylvester_matrix(a, b, c, d, e)
    closed = reduced.sylvester_det(a, b, c, d, e)
    with np.errstate(divide="ignore"):  # exactly singular draws, e.g. all zeros
        numeric = np.linalg.det(A)
    assert abs(numeric - closed) <= 1e-12 * max(1.0, abs(closed))


@settings(max_examples=300)
@given(unit, unit, unit, unit, unit)
def test_cofactor_is_adjugate(a, b, c, d, e):
    A = reduced.sylvester_matrix(a, b, c, d, e)
    adj = reduced.sylvester_cofactor(a, b, c, d, e)
    det = reduced.sylvester_det(a, b, c, d, e)
    assert np.allclose(A @ adj, det * np.eye(4), atol=1e-13)


@settings(max_examples=200)
@given(unit, unit, unit, unit, unit)
def test_inverse_is_inverse(a, b, c, d, e):
    assume(abs(reduced.sylvester_det(a, b, c, d, e)) > 1e-8)
    s = reduced.sylvester_system(a, b, c, d, e)
    err = np.abs(s.A @ s.inv - np.eye(4)).max()
    assert err <= 1e-12 * max(1.0, np.linalg.cond(s.A))


def test_singular_system_raises():
    with pytest.raises(SingularSylvesterError) as info:
        reduced.sylvester_system(0.0, 0.0, 0.0, 0.0, 0.0)
    assert info.value.code == "SINGULAR_SYLVESTER"
    with pytest.raises(SingularSylvesterError):
        reduced.sylvester_system(1.0, 1.0, 0.0, 1.0, 0.0)  # (bd - a^2)^2 = 0


@pytest.mark.parametrize("mu", [1e-2, 1e-3])
@pytest.mark.parametrize("point", [(0.1, 2.0), (1.0, 1.0), (0.0, 1.0)])
def test_physical_det_is_mu4_D2(point, mu):
    p = make_params(*point)
    s = reduced.physical_sylvester(p, mu)
    expected = mu**4 * co.raw_D(*point) ** 2
    assert s.det_closed == pytest.approx(expected, rel=1e-10)
    assert np.linalg.det(s.A) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("point", [(0.1, 2.0), (1.0, 1.0), (0.3, 0.6)])
def test_decoupling_correction_gives_e11_tilde(point):
    p = make_params(*point)
    mu, eps = 1e-3, 1e-2
    corr = reduced.decoupling_correction(p, mu, eps) / (mu * eps**2)
    assert corr.real == pytest.approx(co.raw_e11_tilde(*point), rel=1e-10)
    assert abs(corr.imag) < 1e-12


def test_blocks_are_hermitian():
    b = reduced.assemble_blocks(make_params(0.1, 2.0), 0.01, 0.02)
    B = b.B()
    assert np.allclose(B, B.conj().T)


def test_block_matrix_reproduces_eigenvalue_formula():
    # Two routes to the same numbers: eigenvalues of the 4x4 Hamiltonian
    # matrix (drift removed) and the closed-form lambda1 pair.
    p = make_params(0.1, 2.0)
    eps = 0.02
    for mu in (0.005, 0.01, 0.02, 0.03):
        ev = np.linalg.eigvals(reduced.assemble_blocks(p, mu, eps).L()) + 1j * p.c_hk * mu
        l1p, l1m, _, _ = reduced.reduced_eigenvalues(p, mu, eps)
        top = max(ev, key=lambda z: z.real)
        assert top.real == pytest.approx(l1p.real, rel=1e-2)
        assert abs(top.imag - l1p.imag) < 0.05 * mu


def test_discriminant_and_band_edge():
    p = make_params(0.1, 2.0)
    eps = 0.02
    mc = reduced.critical_mu(p, eps)
    cs = co.coefficient_set(p)
    assert mc == pytest.approx(eps * math.sqrt(8 * cs.e_wb / cs.e22))
    assert reduced.bf_discriminant(p, mc, eps) == pytest.approx(0.0, abs=1e-15)
    assert reduced.bf_discriminant(p, 0.5 * mc, eps) > 0
    assert reduced.bf_discriminant(p, 1.5 * mc, eps) < 0


def test_eigenvalues_imaginary_past_band_edge():
    p = make_params(0.1, 2.0)
    eps = 0.02
    mc = reduced.critical_mu(p, eps)
    for z in reduced.reduced_eigenvalues(p, 1.2 * mc, eps):
        assert z.real == 0.0


def test_eigenvalue_pair_symmetry():
    p = make_params(0.1, 2.0)
    l1p, l1m, l0p, l0m = reduced.reduced_eigenvalues(p, 0.01, 0.02)
    assert l1m == pytest.approx(-l1p.conjugate())
    assert l0p.real == 0.0 and l0m.real == 0.0


def test_reduced_negative_mu_rejected():
    with pytest.raises(ValueError):
        reduced.reduced_eigenvalues(make_params(0.1, 2.0), -0.1, 0.01)


def test_stable_point_has_no_band():
    p = make_params(0.0, 1.0)
    assert reduced.critical_mu(p, 0.02) is None
    with pytest.raises(StablePointError) as info:
        reduced.figure8_locus(p, 0.02)
    assert info.value.code == "STABLE_POINT"
    with pytest.raises(StablePointError):
        reduced.max_growth_rate(p, 0.02)


def test_peak_of_locus_matches_max_growth():
    p = make_params(0.1, 2.0)
    eps = 0.02
    loc = reduced.figure8_locus(p, eps, 2001)
    arr = loc.as_array()
    mu_peak, g_peak = reduced.max_growth_rate(p, eps)
    assert arr[:, 0].max() == pytest.approx(g_peak, rel=1e-6)
    assert loc.branch == "upper"
    # Closed curve: starts and ends at the origin.
    assert np.allclose(arr[0], 0) and np.allclose(arr[-1], 0)


def test_locus_half_plane_follows_chat_sign():
    # Find an unstable point below curve 6 (c_hat < 0), if any, on a coarse grid.
    for k in np.linspace(0.0, 2.0, 21):
        for h in np.linspace(0.2, 4.0, 39):
            cs_chat = co.raw_c_hat(k, h)
            if cs_chat < -0.05 and co.raw_e22(k, h) * co.raw_e_wb(k, h) > 0 and abs(co.raw_D(k, h)) > 0.05:
                loc = reduced.figure8_locus(make_params(k, h), 0.01)
                assert loc.branch == "lower"
                assert np.all(loc.as_array()[:, 1] <= 0)
                return
    pytest.skip("no unstable point with c_hat < 0 on the sample grid")


def test_taylor_error_is_cubic():
    p = make_params(0.4, 1.1)
    errs = []
    for mu in (1e-2, 1e-3):
        approx = sorted(reduced.reduced_eigenvalues(p, mu, 0.0)[:2], key=lambda z: z.imag)
        exact = sorted(reduced.exact_flat_lambda1(p, mu), key=lambda z: z.imag)
        errs.append(max(abs(a - b) for a, b in zip(approx, exact)))
    assert errs[0] / errs[1] == pytest.approx(1e3, rel=0.2)
