import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcemotion.core import ObjectParams, Pulse, pulse_freq
from dcemotion.scattering import (DegenerateInputError, alpha_kernel, delta_s1, delta_s2,
                                  r_coeff, s0_matrix, s_aux_matrix, s_coeff)

P0 = ObjectParams(0.0, 1.0, 0.01)
SWAP = np.array([[0, 1], [1, 0]])


def test_transmission_closed_form_value():
    # 1 / (1 + i) evaluated in extended precision
    expected = complex(mp.mpf(1) / mp.mpc(1, 1))
    assert s_coeff("+", 1.0, P0) == pytest.approx(expected, abs=1e-16)
    assert s_coeff("+", 1.0, P0) == pytest.approx(0.5 - 0.5j, abs=1e-16)


def test_reflection_closed_form_value():
    expected = complex(-mp.mpc(0, 1) / mp.mpc(1, 1))
    assert r_coeff("+", 1.0, P0) == pytest.approx(expected, abs=1e-16)
    assert r_coeff("-", 1.0, P0) == pytest.approx(-0.5 - 0.5j, abs=1e-16)


def test_transparent_object():
    p = ObjectParams(0.0, 0.0, 0.01)
    w = np.array([0.1, 1.0, 30.0])
    np.testing.assert_array_equal(s_coeff("+", w, p), np.ones(3))


def test_dirichlet_limit_suppresses_transmission():
    p = ObjectParams(0.3, 1e8, 0.01)
    assert abs(s_coeff("-", 1.0, p)) < 1e-7


def test_degenerate_point_rejected():
    with pytest.raises(DegenerateInputError):
        s_coeff("+", 0.0, ObjectParams(0.2, 0.0, 0.01))
    with pytest.raises(DegenerateInputError):
        r_coeff("-", np.array([0.0, 1.0]), ObjectParams(0.2, 0.0, 0.01))


def test_zero_frequency_continuity_values():
    p = ObjectParams(0.4, 2.0, 0.01)
    assert s_coeff("+", 0.0, p) == 0
    assert r_coeff("+", 0.0, p) == -1
    assert r_coeff("-", 0.0, p) == -1


def test_side_labels():
    p = ObjectParams(0.3, 1.0, 0.01)
    assert r_coeff(1, 2.0, p) == r_coeff("+", 2.0, p)
    assert r_coeff(-1, 2.0, p) == r_coeff("-", 2.0, p)
    with pytest.raises(ValueError):
        r_coeff("left-ish", 2.0, p)


def test_side_swap_under_lambda_sign():
    p = ObjectParams(0.3, 1.0, 0.01)
    assert r_coeff("+", 2.0, p) == r_coeff("-", 2.0, p.replace(lambda0=-0.3))
    w = np.linspace(0.1, 4, 9)
    np.testing.assert_array_equal(r_coeff("+", w, P0), r_coeff("-", w, P0))


def test_row_norms_exact():
    S = s0_matrix(1.0, P0)
    norms = np.sum(np.abs(S) ** 2, axis=-1)
    np.testing.assert_allclose(norms, [1.0, 1.0], atol=1e-15, rtol=0)


def test_conjugate_symmetry_sample():
    p = ObjectParams(0.4, 2.0, 0.01)
    np.testing.assert_allclose(s0_matrix(-0.7, p), np.conj(s0_matrix(0.7, p)), atol=1e-15)
    np.testing.assert_allclose(s_aux_matrix(-0.7, p), np.conj(s_aux_matrix(0.7, p)),
                               atol=1e-15)


def test_perfect_reflector_blocks_transmission():
    S = s0_matrix(1.0, ObjectParams(1.0, 1.0, 0.01))
    assert abs(S[0, 0]) == 0 and abs(S[1, 1]) == 0
    for lam in (1.0, -1.0):
        S = s0_matrix(np.logspace(-3, 3, 50), ObjectParams(lam, 1.0, 0.01))
        np.testing.assert_allclose(np.abs(S[:, 0, 1]), 1.0, atol=1e-12)
        np.testing.assert_allclose(np.abs(S[:, 1, 0]), 1.0, atol=1e-12)


def test_unitarity_log_grid():
    w = np.logspace(-3, 3, 1000)
    worst = 0.0
    for lam in (0.0, 0.5, -0.5, 1.0, -1.0):
        S = s0_matrix(w, ObjectParams(lam, 1.0, 0.01))
        worst = max(worst, np.max(np.abs(np.sum(np.abs(S) ** 2, axis=-1) - 1)))
        assert np.max(np.abs(s0_matrix(-w, ObjectParams(lam, 1.0, 0.01)) - np.conj(S))) < 1e-12
    assert worst < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1), st.floats(1e-2, 1e2), st.floats(1e-3, 1e3))
def test_unitarity_property(lam, mu0, w):
    p = ObjectParams(lam, mu0, 0.01)
    for side in ("+", "-"):
        u = abs(s_coeff(side, w, p)) ** 2 + abs(r_coeff(side, w, p)) ** 2
        assert abs(u - 1) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(1e-2, 1e2), st.floats(-1e3, 1e3))
def test_mirror_swap_property(lam, mu0, w):
    p = ObjectParams(lam, mu0, 0.01)
    a = s0_matrix(w, p.replace(lambda0=-lam))
    b = SWAP @ s0_matrix(w, p) @ SWAP
    assert np.max(np.abs(a - b)) <= 1e-15


def test_transmission_decreases_with_mu0():
    mus = np.logspace(-2, 6, 40)
    mags = [abs(s_coeff("+", 1.3, ObjectParams(0.3, m, 0.01))) for m in mus]
    assert np.all(np.diff(mags) < 0)


def test_aux_matrix_elements():
    S = s_aux_matrix(1.0, P0)
    assert S[0, 1] == pytest.approx(0.5 - 0.5j, abs=1e-16)
    big = s_aux_matrix(np.array([0.5, 1.0, 3.0]), ObjectParams(0.3, 1e8, 0.01))
    assert np.max(np.abs(big)) < 1e-7


def test_alpha_kernel_properties():
    pulse = Pulse.gaussian(5.0)
    p = ObjectParams(0.3, 1.0, 0.01)
    assert alpha_kernel(1.0, 0.4, p.replace(mu0=0.0), pulse) == 0
    a = alpha_kernel(1.2, 1.2, p, pulse)
    assert a == pytest.approx(-1j * pulse_freq(pulse, 0.0) / (1j + 1.2 * 1.09), rel=1e-15)
    far = alpha_kernel(1.2, 1.2 + 10 / 5.0, p, pulse)
    assert abs(far) < 1e-20 * abs(a)


def test_first_and_second_order_corrections():
    pulse = Pulse.gaussian_cosine(5.0, 2.0)
    p = ObjectParams(0.3, 1.0, 0.02)
    assert np.all(delta_s1(1.0, 0.5, p.replace(epsilon=0.0), pulse) == 0)
    assert np.all(delta_s2(1.0, 0.5, 0.2, p.replace(epsilon=0.0), pulse) == 0)
    d2 = delta_s2(1.0, 0.5, 0.2, p, pulse)
    via_first = alpha_kernel(1.0, 0.5, p, pulse) * delta_s1(0.5, 0.2, p, pulse) * p.epsilon
    np.testing.assert_allclose(d2, via_first, rtol=1e-14, atol=0)
    big = p.replace(mu0=1e8)
    assert np.max(np.abs(delta_s1(1.0, 0.5, big, pulse))) < 1e-7
    assert np.max(np.abs(delta_s2(1.0, 0.5, 0.2, big, pulse))) < 1e-7


def test_perfect_reflector_couples_only_one_side():
    # at lambda0 = 1 the left-going row of SS vanishes: s = 0 and 1 + r- = 0
    S = s_aux_matrix(np.array([0.3, 1.0, 2.5]), ObjectParams(1.0, 1.0, 0.01))
    np.testing.assert_allclose(S[:, 1, :], 0.0, atol=1e-15)
