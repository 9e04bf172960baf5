import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcemotion.core import ObjectParams, Pulse, pulse_freq, pulse_time
from dcemotion.quadrature import (QuadratureConfig, QuadratureError, fourier_invert,
                                  gauss_legendre_bands, integrate_1d, integrate_2d)
from dcemotion.spectrum import momentum_direct, upsilon
from dcemotion.validation import KNOWN_INTEGRALS, honesty_suite

CFG = QuadratureConfig()


def test_exponential_tail():
    r = integrate_1d(lambda x: np.exp(-x), (0.0, np.inf))
    assert abs(r.value - 1.0) < CFG.abs_tol
    assert r.error < 1e-8


def test_squared_response_integral():
    p = ObjectParams(0.0, 1.0, 0.01)
    val, err = integrate_1d(lambda w: upsilon(w, p) ** 2, (0.0, np.inf))
    assert val == pytest.approx(np.pi / 4, rel=CFG.rel_tol)


def test_odd_function_on_full_line_cancels():
    val, err = integrate_1d(lambda x: x * np.exp(-x * x), (-np.inf, np.inf))
    assert abs(val) <= CFG.abs_tol


def test_reversed_and_empty_domains():
    f = np.cos
    fwd = integrate_1d(f, (0.0, 2.0)).value
    assert integrate_1d(f, (2.0, 0.0)).value == -fwd
    assert integrate_1d(f, (1.0, 1.0)).value == 0.0
    assert fwd == pytest.approx(np.sin(2.0), abs=1e-13)


def test_negative_half_line():
    val, _ = integrate_1d(np.exp, (-np.inf, 0.0))
    assert val == pytest.approx(1.0, abs=1e-10)


def test_complex_integrand():
    val, _ = integrate_1d(lambda x: np.exp(1j * x) * np.exp(-x), (0.0, np.inf))
    assert val == pytest.approx(1 / (1 - 1j), abs=1e-10)


def test_breakpoints_help_narrow_peaks():
    def f(x):
        return np.exp(-((x - 7.3) / 0.01) ** 2)

    val, _ = integrate_1d(f, (0.0, 20.0), points=[7.3])
    assert val == pytest.approx(0.01 * np.sqrt(np.pi), rel=1e-9)


def test_first_quadrant_exponential():
    val, err = integrate_2d(lambda x, y: np.exp(-x - y), (0.0, np.inf), (0.0, np.inf))
    assert val == pytest.approx(1.0, abs=1e-9)


def test_separable_product_factorises():
    fx = lambda x: 1.0 / (1.0 + x * x)
    fy = lambda y: np.exp(-y * y)
    a, ea = integrate_1d(fx, (0.0, np.inf))
    b, eb = integrate_1d(fy, (-1.0, 2.0))
    ab, eab = integrate_2d(lambda x, y: fx(x) * fy(y), (0.0, np.inf), (-1.0, 2.0))
    assert abs(ab - a * b) < 10 * (eab + abs(a) * eb + abs(b) * ea) + 1e-12


def test_momentum_integrand_against_grid_oracle():
    pulse = Pulse.gaussian_cosine(5.0, 2.0)
    p = ObjectParams(0.5, 1.0, 1.0)
    got, _ = momentum_direct(p, pulse)
    a = 1.25

    def trap(n):
        w = np.linspace(0.0, 4.0, n + 1)
        W, Wp = np.meshgrid(w, w, indexing="ij")
        f = W * upsilon(W, p) * upsilon(Wp, p) * np.abs(pulse_freq(pulse, W + Wp)) ** 2
        return np.trapezoid(np.trapezoid(f, w, axis=1), w) * 2 * p.lambda0 * a / np.pi ** 2

    oracle = (4 * trap(400) - trap(200)) / 3
    assert got == pytest.approx(oracle, rel=1e-6)


def test_error_estimates_are_honest():
    rows = honesty_suite(CFG)
    assert len(rows) == len(KNOWN_INTEGRALS) == 20
    honest = sum(r[-1] for r in rows)
    assert honest >= 0.95 * len(rows)


def test_determinism_bit_identical():
    f = lambda x: np.sin(3 * x) ** 2 / (1 + x ** 4)
    a = integrate_1d(f, (0.0, np.inf), points=[1.0, 2.0])
    b = integrate_1d(f, (0.0, np.inf), points=[1.0, 2.0])
    assert a.value == b.value and a.error == b.error and a.n_eval == b.n_eval


def test_mapping_scale_invariance():
    p = ObjectParams(0.3, 1.0, 0.01)
    f = lambda w: upsilon(w, p) * np.exp(-w / 5)
    a, ea = integrate_1d(f, (0.0, np.inf), scale=1.0)
    b, eb = integrate_1d(f, (0.0, np.inf), scale=2.0)
    assert abs(a - b) <= max(CFG.rel_tol * abs(a), ea + eb)


def test_nonconvergence_carries_best_estimate():
    cfg = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=10)
    with pytest.raises(QuadratureError) as exc:
        integrate_1d(lambda x: np.abs(np.sin(40 * x)) ** 0.5, (0.0, 10.0), cfg)
    assert exc.value.value is not None and exc.value.error > 0


def test_config_validation():
    for bad in (dict(abs_tol=0.0), dict(rel_tol=-1.0), dict(max_subdivisions=3),
                dict(omega_max=0.0)):
        with pytest.raises(ValueError):
            QuadratureConfig(**bad)
    assert CFG.tightened(0.1).rel_tol == pytest.approx(1e-9)


def test_vector_valued_integrand():
    val, err = integrate_1d(lambda x: np.vstack([x, x * x]), (0.0, 1.0))
    np.testing.assert_allclose(val, [0.5, 1 / 3], atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8), st.floats(-3, 3), st.floats(0.1, 4))
def test_polynomials_integrated_exactly(coeffs, a, width):
    b = a + width
    poly = np.polynomial.Polynomial(coeffs)
    exact = poly.integ()(b) - poly.integ()(a)
    val, _ = integrate_1d(poly, (a, b))
    assert abs(val - exact) <= 1e-12 * (1 + np.sum(np.abs(coeffs)) * (1 + abs(b)) ** 8)


def test_gauss_legendre_bands_integrate_polynomials():
    x, w = gauss_legendre_bands([(0.0, 1.0), (0.5, 3.0), (5.0, 6.0)], 40)
    assert np.all(np.diff(x) > 0)
    assert np.sum(w) == pytest.approx(4.0, rel=1e-14)
    assert np.sum(w * x ** 3) == pytest.approx((3 ** 4 + 6 ** 4 - 5 ** 4) / 4, rel=1e-13)


def _gaussian_grid(T):
    return gauss_legendre_bands([(-14 / T, 14 / T)], 40 * T)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_inverse_transform_recovers_pulse(k):
    T = 5.0
    pulse = Pulse.gaussian(T)
    w, wt = _gaussian_grid(T)
    res = fourier_invert(w, wt, pulse_freq(pulse, w), [k * T])
    assert abs(res.values[0] - pulse_time(pulse, k * T)) < 1e-6
    assert not res.flagged


def test_inverse_transform_of_zero():
    w, wt = _gaussian_grid(2.0)
    res = fourier_invert(w, wt, np.zeros_like(w), np.linspace(-5, 5, 11))
    np.testing.assert_array_equal(res.values, 0.0)
    assert res.max_imag_residue == 0 and not res.flagged


def test_asymmetric_spectrum_is_flagged():
    T = 2.0
    w, wt = _gaussian_grid(T)
    spec = pulse_freq(Pulse.gaussian(T), w) * (1 + 0.3 * 1j * (w > 0))
    res = fourier_invert(w, wt, spec, np.linspace(-3, 3, 13))
    assert res.flagged and res.max_imag_residue > 1e-3


def test_stacked_inverse_transform():
    T = 2.0
    pulse = Pulse.gaussian(T)
    w, wt = _gaussian_grid(T)
    f = pulse_freq(pulse, w)
    t = np.array([0.0, 1.0])
    res = fourier_invert(w, wt, np.vstack([f, -1j * w * f]), t)
    np.testing.assert_allclose(res.values[0], pulse_time(pulse, t), atol=1e-10)
    # derivative of exp(-t^2 / 2T^2)
    np.testing.assert_allclose(res.values[1], -t / T ** 2 * pulse_time(pulse, t), atol=1e-10)
