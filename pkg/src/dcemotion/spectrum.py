"""Created-particle spectra and integrated totals.

All quadratures are carried out for ``epsilon = 1``; the ``epsilon**2``
factor is applied once at the end of each public function, which keeps the
epsilon scaling of every spectral quantity exact in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FrequencyGrid, pulse_freq, require_valid
from .quadrature import QuadratureConfig, integrate_1d, integrate_2d

__all__ = [
    "SpectrumResult",
    "upsilon",
    "eta_kernel",
    "side_factor",
    "spectral_density",
    "spectral_densities",
    "integrate_spectrum",
    "momentum_direct",
]


def upsilon(omega, params):
    """Single-frequency response ``mu0 w / (mu0**2 + w**2 (1 + lambda0**2)**2)``."""
    w = np.asarray(omega, dtype=float)
    a = 1.0 + params.lambda0 ** 2
    mu0 = params.mu0
    if mu0 == 0:
        return np.zeros_like(w)
    return mu0 * w / (mu0 * mu0 + (w * a) ** 2)


def eta_kernel(omega, omega_prime, params, pulse):
    """``Upsilon(w) Upsilon(w') |f~(w + w')|**2``."""
    w = np.asarray(omega, dtype=float)
    wp = np.asarray(omega_prime, dtype=float)
    return upsilon(w, params) * upsilon(wp, params) * np.abs(pulse_freq(pulse, w + wp)) ** 2


def side_factor(side, params):
    """``(1 +- lambda0)**2 (1 + lambda0**2) / (2 pi**2)`` without epsilon**2."""
    lam = params.lambda0
    sg = {"+": 1.0, "-": -1.0}[side]
    return (1.0 + sg * lam) ** 2 * (1.0 + lam * lam) / (2.0 * np.pi ** 2)


def _scale(params):
    return params.mu0 if params.mu0 > 0 else 1.0


def _inner(omega, params, pulse, cfg):
    """``int_0^inf dw' eta(w, w')`` for scalar ``w`` (epsilon-free)."""
    if params.mu0 == 0 or omega == 0:
        return 0.0, 0.0
    ups_w = float(upsilon(omega, params))

    def f(wp):
        return upsilon(wp, params) * np.abs(pulse_freq(pulse, omega + wp)) ** 2

    pts = [p - omega for p in pulse.peak_points(lo=omega)]
    r = integrate_1d(f, (0.0, np.inf), cfg, points=pts, scale=_scale(params))
    return ups_w * float(r.value), ups_w * float(r.error)


def spectral_densities(omegas, params, pulse, quad=None):
    """``n+(w)``, ``n-(w)`` and their error estimates on an array of frequencies.

    Both sides share the inner integral but get their own prefactor; the
    side ratio is never used to derive one from the other.
    """
    cfg = quad or QuadratureConfig()
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    if np.any(omegas < 0):
        raise ValueError("spectral density is defined for omega >= 0")
    base = np.empty(omegas.size)
    err = np.empty(omegas.size)
    for i, w in enumerate(omegas):
        base[i], err[i] = _inner(w, params, pulse, cfg)
    e2 = params.epsilon ** 2
    fp, fm = side_factor("+", params), side_factor("-", params)
    return (base * fp * e2, base * fm * e2, err * fp * e2, err * fm * e2)


def spectral_density(side, omega, params, pulse, quad=None):
    """``n_side(omega)`` and its quadrature error estimate."""
    require_valid(params, pulse)
    base, err = _inner(float(omega), params, pulse, quad or QuadratureConfig())
    k = side_factor(side, params) * params.epsilon ** 2
    return base * k, err * k


@dataclass
class SpectrumResult:
    """Spectrum on a grid plus integrated totals.

    ``P_net`` comes from the direct double integral of the net momentum;
    ``P_net_from_energies`` is ``E_plus - E_minus``.  ``quadrature_error``
    maps each integrated quantity to its absolute error estimate.
    """

    grid: FrequencyGrid
    omega: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray
    N_plus: float
    N_minus: float
    E_plus: float
    E_minus: float
    P_plus: float
    P_minus: float
    P_net: float
    P_net_from_energies: float
    quadrature_error: dict = field(default_factory=dict)

    @property
    def N_total(self):
        return self.N_plus + self.N_minus

    @property
    def E_total(self):
        return self.E_plus + self.E_minus

    def totals(self):
        keys = ["N_plus", "N_minus", "E_plus", "E_minus", "P_plus", "P_minus",
                "P_net", "P_net_from_energies"]
        return {k: {"value": float(getattr(self, k)),
                    "error": float(self.quadrature_error[k])} for k in keys}


def _iterated_moments(params, pulse, cfg):
    """``int dw [1, w] * int dw' eta`` by outer-over-inner quadrature."""
    def outer(ws):
        vals = np.empty((2, ws.size))
        errs = np.empty(ws.size)
        for i, w in enumerate(ws):
            b, e = _inner(w, params, pulse, inner_cfg)
            vals[0, i] = b
            vals[1, i] = w * b
            errs[i] = e
        return np.vstack([vals, errs, ws * errs])

    inner_cfg = cfg.tightened(0.1)
    r = integrate_1d(outer, (0.0, np.inf), cfg, points=pulse.peak_points(),
                     scale=_scale(params), ncheck=2)
    # outer estimate plus the propagated inner estimates
    return (float(r.value[0]), float(r.error[0] + abs(r.value[2])),
            float(r.value[1]), float(r.error[1] + abs(r.value[3])))


def momentum_direct(params, pulse, quad=None):
    """Net momentum from the direct double integral (epsilon included).

    The quadrant ``w, w' >= 0`` is parametrised by the sum frequency
    ``s = w + w'`` and the fraction ``v = w / s``, so the pulse ridge sits at
    fixed ``s`` breakpoints.
    """
    cfg = quad or QuadratureConfig()
    if params.mu0 == 0 or params.lambda0 == 0:
        return 0.0, 0.0
    a = 1.0 + params.lambda0 ** 2

    def f(s, v):
        w = s * v
        wp = s - w
        return s * w * eta_kernel(w, wp, params, pulse)

    r = integrate_2d(f, (0.0, np.inf), (0.0, 1.0), cfg, x_points=pulse.peak_points(),
                     x_scale=_scale(params))
    k = 2.0 * params.lambda0 * a / np.pi ** 2 * params.epsilon ** 2
    return float(r.value) * k, float(r.error) * abs(k)


def integrate_spectrum(params, pulse, quad=None, grid=None):
    """Densities on ``grid`` and all integrated totals with error estimates."""
    require_valid(params, pulse)
    cfg = quad or QuadratureConfig()
    if grid is None:
        wmax = cfg.omega_max or pulse.cutoff()
        grid = FrequencyGrid(wmax, 200)
    omega = grid.points()
    n_p, n_m, _, _ = spectral_densities(omega, params, pulse, cfg)

    e2 = params.epsilon ** 2
    fp, fm = side_factor("+", params), side_factor("-", params)
    if params.mu0 == 0:
        i_n = e_n = i_e = e_e = 0.0
    else:
        i_n, e_n, i_e, e_e = _iterated_moments(params, pulse, cfg)
    N_plus, N_minus = i_n * fp * e2, i_n * fm * e2
    E_plus, E_minus = i_e * fp * e2, i_e * fm * e2
    P_plus, P_minus = E_plus, -E_minus
    p_direct, p_err = momentum_direct(params, pulse, cfg)
    errors = {
        "N_plus": e_n * fp * e2,
        "N_minus": e_n * fm * e2,
        "E_plus": e_e * fp * e2,
        "E_minus": e_e * fm * e2,
        "P_plus": e_e * fp * e2,
        "P_minus": e_e * fm * e2,
        "P_net": p_err,
        "P_net_from_energies": e_e * (fp + fm) * e2,
    }
    return SpectrumResult(grid, omega, n_p, n_m, N_plus, N_minus, E_plus, E_minus,
                          P_plus, P_minus, p_direct, P_plus + P_minus, errors)
