import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcemotion.core import ObjectParams, Pulse, pulse_freq
from dcemotion.forces import (ForceSeries, chi1, chi2, f1_tilde, f2_plane_integral, f2_tilde,
                              force_spectrum, force_time_series, h_kernel)
from dcemotion.quadrature import CutoffSensitivityError, QuadratureConfig
from dcemotion.spectrum import integrate_spectrum

PULSE = Pulse.gaussian_cosine(5.0, 2.0)
NOCHECK = QuadratureConfig(doubling_check=False)


def _params(lam=0.5, mu0=1.0, eps=0.01):
    return ObjectParams(lam, mu0, eps)


def _chi1_mp(w, lam, mu0):
    mp.mp.dps = 50
    w = mp.mpf(w)
    a = 1 + mp.mpf(lam) ** 2
    rho = a * w / mu0
    braces = (rho + 1j) / (rho + 2j) * (2j * mp.atan(rho) - mp.log(rho * rho + 1)) - 1j * rho
    return complex(2 * lam * w * w / (mp.pi * rho * rho * a) * braces)


@pytest.mark.parametrize("rho", [1e-6, 5e-4, 1e-3, 2e-3, 0.049, 0.051, 0.3, 1.0, 30.0, 1e4])
def test_chi1_against_arbitrary_precision(rho):
    lam, mu0 = 0.5, 2.0
    w = rho * mu0 / (1 + lam * lam)
    got = complex(chi1(w, _params(lam, mu0)))
    ref = _chi1_mp(w, lam, mu0)
    assert abs(got - ref) <= 1e-12 * abs(ref)


def test_chi1_small_frequency_leading_term():
    # the braces start at i rho**3 / 6, so chi1 ~ i lambda w**3 / (3 pi mu0)
    lam, mu0 = 0.5, 1.0
    w = 1e-3 * mu0 / (1 + lam * lam)
    lead = 1j * lam * w ** 3 / (3 * np.pi * mu0)
    assert abs(complex(chi1(w, _params(lam, mu0))) - lead) < 1e-2 * abs(lead)


def test_chi1_quadratic_bound_near_zero():
    lam = 0.5
    w = np.linspace(1e-6, 1e-2, 50)
    C = np.max(np.abs(chi1(w, _params(lam))) / w ** 2)
    assert C <= 1.1 * lam / (np.pi * (1 + lam * lam))


def test_chi1_zero_cases():
    assert chi1(0.0, _params()) == 0
    np.testing.assert_array_equal(chi1(np.linspace(-3, 3, 7), _params(0.0)), 0.0)
    with pytest.raises(ValueError):
        chi1(1.0, _params(mu0=0.0))


def test_chi1_symmetries():
    p = _params(0.5)
    assert chi1(-1.3, p) == pytest.approx(np.conj(chi1(1.3, p)), abs=1e-15)
    w = np.linspace(-5, 5, 101)
    np.testing.assert_array_equal(chi1(w, _params(-0.5)), -chi1(w, p))


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(0.01, 100), st.floats(-100, 100))
def test_chi1_conjugate_symmetry_property(lam, mu0, w):
    p = _params(lam, mu0)
    a, b = complex(chi1(w, p)), complex(chi1(-w, p))
    assert abs(a - np.conj(b)) <= 1e-14 * (1 + abs(a))


def test_f1_values():
    p = _params(0.5)
    assert f1_tilde(0.0, p, PULSE) == 0
    np.testing.assert_array_equal(f1_tilde([0.5, 1.0], _params(0.0), PULSE), 0.0)
    g = Pulse.gaussian(3.0)
    # the pulse factor alone suppresses F1 at 10/T by more than 1e-20
    w = 10 / 3.0
    peak = abs(pulse_freq(g, 0.0))
    assert abs(f1_tilde(w, p, g)) < 1e-20 * abs(chi1(w, p)) * peak


def test_h_kernel():
    p = _params(0.3)
    assert h_kernel(0.0, _params(mu0=1.0)) == pytest.approx(-1j, abs=1e-16)
    w = 1e6
    assert abs(h_kernel(w, p)) == pytest.approx(1 / (w * 1.09), rel=1e-5)
    assert abs(h_kernel(-0.7, p)) == pytest.approx(abs(np.conj(1 / (-1j + 0.7 * 1.09))),
                                                   rel=1e-15)
    assert h_kernel(-0.7, p) == pytest.approx(-np.conj(h_kernel(0.7, p)), rel=1e-15)


def test_chi2_zeros():
    p = _params(0.5)
    assert chi2(1.0, 0.4, 0.7, _params(0.0)) == 0
    assert chi2(1.0, 0.4, 0.0, p) == 0
    assert chi2(1.0, 0.4, 1.0, p) == 0
    assert chi2(1.0, 0.4, 0.7, p) != 0
    # the step factor removes the first bracket term for negative w''
    a = 1.25
    expected = 0.5 * (-0.5 * -0.7) * h_kernel(-0.7, p) * (-0.7 - 1.0) * -1 / np.pi ** 2
    assert chi2(1.0, 0.4, -0.7, p) == pytest.approx(expected, rel=1e-14)
    with_step = (0.5 * (h_kernel(-0.4, p) * 0.16 * a - 0.35) * h_kernel(0.7, p)
                 * (0.7 - 1.0) / np.pi ** 2)
    assert chi2(1.0, 0.4, 0.7, p) == pytest.approx(with_step, rel=1e-14)


def test_f2_zero_for_symmetric_object():
    r = f2_tilde(0.7, _params(0.0), PULSE)
    assert r.value == 0 and r.error == 0


def test_f2_excludes_epsilon():
    a = f2_tilde(0.8, _params(-0.5, eps=0.01), PULSE, NOCHECK)
    b = f2_tilde(0.8, _params(-0.5, eps=0.02), PULSE, NOCHECK)
    assert a.value == b.value


def test_f2_zero_frequency_equals_minus_momentum():
    p = _params(-0.5)
    r = f2_tilde(0.0, p, PULSE)
    P = integrate_spectrum(p, PULSE).P_net
    assert p.epsilon ** 2 * r.value.real == pytest.approx(-P, rel=0.02)
    # the identity holds far more tightly than the acceptance band
    assert p.epsilon ** 2 * r.value.real == pytest.approx(-P, rel=1e-8)
    assert r.value.imag == 0


def test_f2_mirror_antisymmetry_at_zero():
    a = f2_tilde(0.0, _params(0.5), PULSE)
    b = f2_tilde(0.0, _params(-0.5), PULSE)
    assert abs(a.value + b.value) <= a.error + b.error


def test_f2_hermitian():
    p = _params(-0.5)
    for w in (0.3, 1.7, 4.0):
        a = f2_tilde(w, p, PULSE, NOCHECK)
        b = f2_tilde(-w, p, PULSE, NOCHECK)
        assert abs(a.value - np.conj(b.value)) <= 1e-13 * abs(a.value)


def test_plane_integral_alone_is_not_hermitian():
    # the step in the kernel breaks w -> -w conjugation symmetry of the raw integral
    p = _params(-0.5)
    a = f2_plane_integral(0.3, p, PULSE, NOCHECK).value
    b = f2_plane_integral(-0.3, p, PULSE, NOCHECK).value
    assert abs(a - np.conj(b)) > 0.1 * abs(a)


def test_cutoff_sensitivity_detected():
    with pytest.raises(CutoffSensitivityError) as exc:
        f2_plane_integral(1.0, _params(-0.5), PULSE, QuadratureConfig(omega_max=1.0))
    assert "cutoff doubling" in str(exc.value)


def test_spectrum_grid_is_two_sided_and_hermitian(negative_forces):
    _, _, fs, _ = negative_forces
    np.testing.assert_array_equal(fs.omega, -fs.omega[::-1])
    for F in (fs.F1_tilde, fs.F2_tilde):
        asym = np.max(np.abs(F[::-1] - np.conj(F)))
        assert asym <= 1e-10 * np.max(np.abs(F))


def test_time_series_impulses(negative_forces):
    params, pulse, fs, ser = negative_forces
    P = integrate_spectrum(params, pulse).P_net
    dt = ser.dt
    i1 = np.trapezoid(ser.F1, dx=dt)
    assert abs(i1) < 1e-6 * np.max(np.abs(ser.F1)) * ser.window
    i2 = np.trapezoid(ser.F2, dx=dt)
    assert params.epsilon ** 2 * i2 == pytest.approx(-P, rel=0.02)
    assert ser.max_imag_residue <= 1e-8 * max(np.max(np.abs(ser.F1)), np.max(np.abs(ser.F2)))
    assert np.all(np.isreal(ser.F1)) and np.allclose(np.diff(ser.t), dt)


def test_time_series_derivatives_consistent(negative_forces):
    _, _, _, ser = negative_forces
    for order in (1, 2):
        F = getattr(ser, f"F{order}")
        dF = getattr(ser, f"dF{order}")
        # fourth-order central difference on the interior
        fd = (F[:-4] - 8 * F[1:-3] + 8 * F[3:-1] - F[4:]) / (12 * ser.dt)
        assert np.max(np.abs(fd - dF[2:-2])) < 1e-5 * np.max(np.abs(dF))


def test_series_evaluate_is_zero_outside_window(negative_forces):
    _, _, _, ser = negative_forces
    assert ser.evaluate(ser.window + 1.0, 2) == 0.0
    np.testing.assert_allclose(ser.evaluate(ser.t[::50], 1), ser.F1[::50], atol=1e-15)


def test_zero_lambda_series_and_small_grid():
    ser = force_time_series(_params(0.0), PULSE, n_t=101)
    assert isinstance(ser, ForceSeries)
    assert np.all(ser.F1 == 0) and np.all(ser.F2 == 0)
    with pytest.raises(ValueError):
        force_time_series(_params(0.5), PULSE, n_t=32)


def test_first_order_only_spectrum_is_cheap_and_exact():
    g = Pulse.gaussian(2.0)
    p = _params(0.5)
    fs = force_spectrum(p, g, NOCHECK, second_order=False)
    np.testing.assert_array_equal(fs.F2_tilde, 0.0)
    pos = fs.omega > 0
    np.testing.assert_allclose(fs.F1_tilde[pos], chi1(fs.omega[pos], p) *
                               pulse_freq(g, fs.omega[pos]), rtol=1e-15)
