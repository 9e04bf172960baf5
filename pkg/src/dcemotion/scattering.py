"""Static scattering matrix of the delta/delta' object and its perturbative
corrections for a time-modulated ``mu(t) = mu0 [1 + epsilon f(t)]``.

Matrices are ordered rows (right-going out field, left-going out field) by
columns (in field from the left, in field from the right)::

    S0 = [[s+, r+],        SS = [[s+,     1 + r+],
          [r-, s-]]              [1 + r-, s-    ]]

All functions broadcast over array arguments; matrix-valued results carry
the 2x2 block in the last two axes.
"""

from __future__ import annotations

import numpy as np

from .core import pulse_freq

__all__ = [
    "DegenerateInputError",
    "s_coeff",
    "r_coeff",
    "s0_matrix",
    "s_aux_matrix",
    "alpha_kernel",
    "delta_s1",
    "delta_s2",
    "denominator",
]


class DegenerateInputError(ValueError):
    """omega = 0 together with mu0 = 0: the coefficients are 0/0."""


def _side(side):
    if side in ("+", 1, +1.0, "plus", "right"):
        return 1.0
    if side in ("-", -1, -1.0, "minus", "left"):
        return -1.0
    raise ValueError(f"side must be '+' or '-', got {side!r}")


def denominator(omega, params):
    """``i mu0 + omega (1 + lambda0**2)``; rejects the degenerate point."""
    w = np.asarray(omega, dtype=float)
    if params.mu0 == 0 and np.any(w == 0):
        raise DegenerateInputError("omega = 0 with mu0 = 0 has no unique limit")
    return 1j * params.mu0 + w * (1.0 + params.lambda0 ** 2)


def s_coeff(side, omega, params):
    """Transmission coefficient (identical on both sides)."""
    _side(side)
    w = np.asarray(omega, dtype=float)
    return w * (1.0 - params.lambda0 ** 2) / denominator(w, params)


def r_coeff(side, omega, params):
    """Reflection coefficient on the ``side`` face."""
    sg = _side(side)
    w = np.asarray(omega, dtype=float)
    return -(1j * params.mu0 - sg * 2.0 * w * params.lambda0) / denominator(w, params)


def s0_matrix(omega, params):
    s = s_coeff("+", omega, params)
    rp = r_coeff("+", omega, params)
    rm = r_coeff("-", omega, params)
    return np.stack([np.stack([s, rp], -1), np.stack([rm, s], -1)], -2)


def s_aux_matrix(omega, params):
    s = s_coeff("+", omega, params)
    rp = r_coeff("+", omega, params)
    rm = r_coeff("-", omega, params)
    return np.stack([np.stack([s, 1 + rp], -1), np.stack([1 + rm, s], -1)], -2)


def alpha_kernel(omega, omega_prime, params, pulse):
    """Mode-mixing kernel ``-i mu0 f~(w - w') / (i mu0 + w (1 + lambda0**2))``."""
    w = np.asarray(omega, dtype=float)
    wp = np.asarray(omega_prime, dtype=float)
    return -1j * params.mu0 * pulse_freq(pulse, w - wp) / denominator(w, params)


def delta_s1(omega, omega_prime, params, pulse):
    """First-order correction ``epsilon alpha(w, w') SS(w')``."""
    a = params.epsilon * alpha_kernel(omega, omega_prime, params, pulse)
    return np.asarray(a)[..., None, None] * s_aux_matrix(omega_prime, params)


def delta_s2(omega, omega_prime, omega_dprime, params, pulse):
    """Second-order correction ``epsilon**2 alpha(w, w') alpha(w', w'') SS(w'')``."""
    a = (params.epsilon ** 2 * alpha_kernel(omega, omega_prime, params, pulse)
         * alpha_kernel(omega_prime, omega_dprime, params, pulse))
    return np.asarray(a)[..., None, None] * s_aux_matrix(omega_dprime, params)
