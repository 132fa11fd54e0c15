import numpy as np
import pytest

from gcww import fourier as fr


def test_derivative_of_trig_polynomial():
    x = fr.grid(64)
    f = np.sin(3 * x) + 0.5 * np.cos(x)
    assert np.allclose(fr.deriv(f), 3 * np.cos(3 * x) - 0.5 * np.sin(x), atol=1e-12)
    assert np.allclose(fr.deriv(f, 2), -9 * np.sin(3 * x) - 0.5 * np.cos(x), atol=1e-11)


def test_cos_and_sin_coefficients():
    x = fr.grid(32)
    f = 0.25 + 2 * np.cos(2 * x) - 3 * np.sin(5 * x)
    assert fr.cos_coeff(f, 0) == pytest.approx(0.25)
    assert fr.cos_coeff(f, 2) == pytest.approx(2.0)
    assert fr.sin_coeff(f, 5) == pytest.approx(-3.0)
    assert fr.sin_coeff(f, 2) == pytest.approx(0.0, abs=1e-14)


def test_apply_symbol_drops_nyquist():
    m = 16
    x = fr.grid(m)
    f = np.cos(8 * x)
    out = fr.apply_symbol(f, lambda k: np.ones_like(k))
    assert np.allclose(out, 0.0)


def test_inner_is_normalised():
    x = fr.grid(64)
    assert fr.inner(np.cos(x), np.cos(x)) == pytest.approx(0.5)


def test_field_from_trig_round_trip():
    f = fr.FourierField.from_trig(cos={1: 2.0}, sin={2: 1.0}, mean=0.5)
    x = fr.grid(16)
    assert np.allclose(f.samples(16), 0.5 + 2 * np.cos(x) + np.sin(2 * x))
    assert np.allclose(f(x), f.samples(16))
    assert f.coeff(-1) == np.conj(f.coeff(1))
    assert f.parity == "none"


def test_field_parity_labels():
    assert fr.FourierField.from_trig(cos={1: 1.0}).parity == "even"
    assert fr.FourierField.from_trig(sin={1: 1.0}).parity == "odd"


def test_field_rejects_out_of_band_and_complex_mean():
    with pytest.raises(ValueError):
        fr.FourierField({3: 1.0}, n_modes=2)
    with pytest.raises(ValueError):
        fr.FourierField({0: 1j})
    with pytest.raises(ValueError):
        fr.FourierField({0: 1.0}, parity="weird")
