import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gcww import coefficients as co
from gcww.errors import SingularPointError
from gcww.params import make_params, one_minus_c4

kappas = st.floats(0.0, 5.0)
depths = st.floats(0.05, 5.0)


def _regular(k, h, tube=1e-2):
    return abs(co.raw_den_r2(k, h)) > tube and abs(co.raw_D(k, h)) > tube


def test_degeneracy_function_definition():
    k, h = 0.3, 1.7
    assert co.raw_D(k, h) == pytest.approx(h - co.raw_e12(k, h) ** 2 / 4.0, rel=1e-14)


def test_chat_definition():
    k, h = 0.3, 1.7
    p = make_params(k, h)
    assert co.raw_c_hat(k, h) == pytest.approx(2.0 * p.c_hk - co.raw_e12(k, h), rel=1e-14)


def test_group_velocity_identity():
    # e12 / 2 is the group velocity of the mode-1 wave.
    k, h, dk = 0.4, 1.3, 1e-6

    def omega(x):
        return math.sqrt((1 + k * x * x) * x * math.tanh(x * h))

    cg = (omega(1 + dk) - omega(1 - dk)) / (2 * dk)
    assert co.raw_e12(k, h) / 2.0 == pytest.approx(cg, rel=1e-8)


def test_vectorised_matches_scalar():
    K = np.array([0.0, 0.5, 2.0])
    H = np.array([0.5, 1.0, 3.0])
    vec = co.raw_e_wb(K, H)
    for i in range(3):
        assert vec[i] == pytest.approx(co.raw_e_wb(K[i], H[i]), rel=1e-15)


@settings(max_examples=200)
@given(kappas, depths)
def test_e_wb_two_routes_agree(k, h):
    assume(_regular(k, h))
    a, b = co.raw_e_wb(k, h), co.raw_e_wb_composite(k, h)
    assert abs(a - b) <= 1e-11 * max(1.0, abs(a))


@settings(max_examples=200)
@given(kappas, depths)
def test_e22_two_routes_agree(k, h):
    assume(abs(co.raw_den_r2(k, h)) > 1e-2)
    a, b = co.raw_e22(k, h), co.raw_e22_composite(k, h)
    assert abs(a - b) <= 1e-11 * max(1.0, abs(a))


@settings(max_examples=200)
@given(kappas, depths)
def test_e11_numerator_and_e12_positive(k, h):
    assert co.raw_e11_numerator(k, h) > 0
    assert co.raw_e12(k, h) > 0


@settings(max_examples=200)
@given(st.floats(0.05, 5.0), st.floats(0.0, 1.0))
def test_D_negative_under_bond_condition(h, frac):
    k = h * h / 3.0 + 1e-9 + frac * 5.0
    assert co.raw_D(k, h) < 0


def test_D_vanishes_at_shallow_bond_boundary():
    h = 1e-2
    assert abs(co.raw_D(h * h / 3.0, h)) < 1e-3


def test_den_r2_zero_on_second_resonance():
    from gcww.params import resonance_kappa

    for h in (0.7, 1.5, 3.0):
        k = resonance_kappa(2, h)
        if k > 0:
            assert abs(co.raw_den_r2(k, h)) < 1e-12


def test_coefficient_set_guards_poles():
    from gcww.diagram import trace_curve

    k, h = trace_curve("D", "depth", (1.0, 1.0), (0.0, 2.0), n_samples=1)[0]
    with pytest.raises(SingularPointError) as info:
        co.coefficient_set(make_params(k, h))
    assert info.value.code == "SINGULAR_POINT"
    assert "D" in info.value.details


def test_coefficient_set_e_hk_only_when_unstable():
    unstable = co.coefficient_set(make_params(0.1, 2.0))
    assert unstable.e_hk == pytest.approx(math.sqrt(8 * unstable.e_wb / unstable.e22))
    stable = co.coefficient_set(make_params(0.0, 1.0))
    assert stable.e_hk is None


def test_public_composites_match_raw():
    p = make_params(0.2, 1.1)
    assert co.e_wb_composite(p) == pytest.approx(co.raw_e_wb(0.2, 1.1), rel=1e-11)
    assert co.e22_composite(p) == pytest.approx(co.raw_e22(0.2, 1.1), rel=1e-11)


def test_kato_constants_finite_and_consistent():
    p = make_params(0.2, 1.1)
    kc = co.kato_constants(p)
    vals = np.array(list(kc.as_dict().values()), dtype=float)
    assert np.all(np.isfinite(vals))
    c = p.c_h
    assert kc.b1 == pytest.approx(0.5 * 1.2**0.75 * c**2.5 * (1 - c**-4), rel=1e-14)
    assert kc.b3 == pytest.approx((c / math.sqrt(1.2)) ** -0.5 * (c**2 + 1.1 * one_minus_c4(1.1)), rel=1e-14)


def test_deep_water_limits_are_finite():
    # No overflow or NaN once tanh saturates.
    for k in (0.0, 0.1, 2.0):
        for f in (co.raw_e_wb, co.raw_e22, co.raw_D, co.raw_c_hat, co.raw_e11):
            assert np.isfinite(f(k, 60.0))


def test_e_wb_gravity_deep_water_value():
    # Pure gravity in deep water: e_wb = 1 - 1/h + O(h^-2), so unstable.
    for h in (100.0, 1000.0, 1e4):
        assert (1.0 - co.raw_e_wb(0.0, h)) * h == pytest.approx(1.0, abs=5.0 / h)
