"""Mean force on the static object, to second order in epsilon.

``F(t) ~ epsilon F1(t) + epsilon**2 F2(t)``.  The first-order force is the
product of the susceptibility ``chi1`` and the pulse transform; the
second-order spectrum is a double integral over the frequency plane.
Time series come from direct-quadrature Fourier inversion.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .core import pulse_freq, require_valid
from .quadrature import (CutoffSensitivityError, QuadratureConfig, QuadResult,
                         fourier_invert, gauss_legendre_bands, integrate_2d)
from .scattering import alpha_kernel, denominator

__all__ = [
    "ForceSpectrum",
    "ForceSeries",
    "chi1",
    "f1_tilde",
    "h_kernel",
    "chi2",
    "f2_tilde",
    "f2_plane_integral",
    "force_spectrum",
    "force_time_series",
    "default_s_cutoff",
]

# Taylor coefficients of {...}/rho**2 in chi1 about rho = 0.
_CHI1_SERIES = np.array([
    0.0, 1j / 6, -1 / 6, -2j / 15, 1 / 10, 31j / 420, -23 / 420, -13j / 315, 2 / 63,
    173j / 6930, -139 / 6930, -1481j / 90090, 353 / 25740, 4187j / 360360, -719 / 72072,
    -1327j / 153153, 388 / 51051,
])
# the closed form loses about 2 log10(1/rho) digits to cancellation
_SERIES_RHO = 0.05


def _need_mu0(params):
    if not params.mu0 > 0:
        raise ValueError("force susceptibilities need mu0 > 0")


def chi1(omega, params):
    """First-order force susceptibility.

    Uses principal branches of ``arctan`` and ``log`` for real ``rho``.  Below
    ``|rho| = 0.05`` the removable singularity is handled by the Taylor
    series of the braces (through ``rho**18``), which starts at
    ``i rho**3 / 6``.
    """
    _need_mu0(params)
    w = np.asarray(omega, dtype=float)
    lam = params.lambda0
    a = 1.0 + lam * lam
    rho = a * w / params.mu0
    small = np.abs(rho) < _SERIES_RHO
    # braces / rho**2
    ratio = np.zeros(w.shape, dtype=complex)
    rs = rho[small]
    ratio[small] = np.polynomial.polynomial.polyval(rs, _CHI1_SERIES)
    rl = rho[~small]
    braces = ((rl + 1j) / (rl + 2j) * (2j * np.arctan(rl) - np.log1p(rl * rl))
              - 1j * rl)
    ratio[~small] = braces / (rl * rl)
    return 2.0 * lam * w * w / (np.pi * a) * ratio


def f1_tilde(omega, params, pulse):
    return chi1(omega, params) * pulse_freq(pulse, omega)


def h_kernel(omega, params):
    """``1 / (i mu0 + w (1 + lambda0**2))``."""
    return 1.0 / denominator(omega, params)


def chi2(omega, omega_prime, omega_dprime, params):
    """Second-order kernel with ``Theta(0) = 1/2`` and ``sgn(0) = 0``."""
    _need_mu0(params)
    w = np.asarray(omega, dtype=float)
    wp = np.asarray(omega_prime, dtype=float)
    wpp = np.asarray(omega_dprime, dtype=float)
    lam = params.lambda0
    a = 1.0 + lam * lam
    bracket = h_kernel(-wp, params) * np.heaviside(wpp, 0.5) * wp * wp * a - 0.5 * wpp
    return lam * bracket * h_kernel(wpp, params) * (wpp - w) * np.sign(wpp) / np.pi ** 2


def _plane_integrand(omega, params, pulse):
    def point(wp, wpp):
        return (chi2(omega, wp, wpp, params) * alpha_kernel(wp, -wpp, params, pulse)
                * alpha_kernel(omega - wpp, wp, params, pulse))

    def g(s, y):
        # strip coordinates s = w' + w'', y = |w''|; the +-w'' tails cancel
        # at leading order only when paired at equal distance
        return point(s - y, y) + point(s + y, -y)

    def sym(s, y):
        # the (w', w'') -> (-w'', -w') image, taken in coordinates where its
        # own Theta/sgn jump lies on y = 0, is the same strip integrand at -s
        return g(s, y) + g(-s, y)

    return sym


def default_s_cutoff(pulse):
    """Sum-frequency cutoff, ``2 omega0 + 24/T`` for Gaussian-type pulses."""
    return 2.0 * pulse.omega0 + 24.0 / pulse.scale


def _s_points(omega, pulse, cutoff):
    T = pulse.scale
    pts = set()
    for c in pulse.centres():
        for base in (c, omega - c):
            for k in (-2, -1, 0, 1, 2):
                p = abs(base + k * 3.0 / T)
                if 0 < p < cutoff:
                    pts.add(round(p, 14))
    return sorted(pts)


def _f2_once(omega, params, pulse, cfg, cutoff):
    g = _plane_integrand(omega, params, pulse)
    a = 1.0 + params.lambda0 ** 2
    r = integrate_2d(g, (0.0, cutoff), (0.0, np.inf), cfg,
                     x_points=_s_points(omega, pulse, cutoff),
                     y_scale=params.mu0 / a)
    return r


def f2_plane_integral(omega, params, pulse, quad=None):
    """The second-order double integral exactly as written (epsilon-free).

    Evaluated in strip coordinates: the sum frequency ``s`` runs over
    ``[-S, S]`` with ``S = quad.omega_max`` (default ``2 omega0 + 24/T``) and
    the difference axis is mapped to ``[0, inf)``.  With
    ``quad.doubling_check`` the result is recomputed with ``2S`` and
    :class:`CutoffSensitivityError` is raised when it moves by more than the
    error estimate.

    The kernel's ``Theta(w'')`` factor is not mapped onto itself by
    ``w -> -w`` plus conjugation, so this integral alone is not Hermitian in
    ``omega``; see :func:`f2_tilde`.
    """
    _need_mu0(params)
    cfg = quad or QuadratureConfig()
    if params.lambda0 == 0:
        return QuadResult(0j, 0.0)
    cutoff = cfg.omega_max or default_s_cutoff(pulse)
    r = _f2_once(float(omega), params, pulse, cfg, cutoff)
    if cfg.doubling_check:
        r2 = _f2_once(float(omega), params, pulse, cfg, 2.0 * cutoff)
        shift = abs(r2.value - r.value)
        err = max(r.error, r2.error)
        if shift > err:
            raise CutoffSensitivityError(
                f"f2 integral at {omega} moved by {shift:.3g} under cutoff doubling "
                f"(error estimate {err:.3g})", r.value, err)
        return QuadResult(r.value, max(r.error, shift), r.n_eval + r2.n_eval, r.n_panels)
    return r


def f2_tilde(omega, params, pulse, quad=None):
    """Second-order force spectrum (without the epsilon**2 factor).

    The mean force is real, i.e. the expectation of the symmetrised
    stress-tensor product, which is the real part of the time-domain
    transform of :func:`f2_plane_integral`.  In frequency this is the
    Hermitian projection ``[I(w) + conj I(-w)] / 2``.  At ``w = 0`` it equals
    the plane integral itself.

    Returns a :class:`QuadResult` with a complex value.
    """
    w = float(omega)
    r = f2_plane_integral(w, params, pulse, quad)
    if w == 0.0:
        return QuadResult(complex(r.value.real), r.error, r.n_eval, r.n_panels)
    m = f2_plane_integral(-w, params, pulse, quad)
    return QuadResult(0.5 * (r.value + np.conj(m.value)), max(r.error, m.error),
                      r.n_eval + m.n_eval, r.n_panels + m.n_panels)


@dataclass
class ForceSpectrum:
    """Force spectra on a two-sided quadrature grid (nodes and weights)."""

    omega: np.ndarray
    weights: np.ndarray
    F1_tilde: np.ndarray
    F2_tilde: np.ndarray
    f2_error: np.ndarray


@dataclass
class ForceSeries:
    """Time-domain forces (epsilon factors excluded) and two derivatives.

    Arrays cover the uniform window ``t``; both forces are taken as zero
    outside it (they decay like the pulse envelope).
    """

    t: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    dF1: np.ndarray
    dF2: np.ndarray
    d2F1: np.ndarray
    d2F2: np.ndarray
    max_imag_residue: float = 0.0
    _splines: dict = field(default_factory=dict, repr=False)

    @property
    def dt(self):
        return float(self.t[1] - self.t[0])

    @property
    def window(self):
        return float(self.t[-1])

    def _spline(self, name):
        if name not in self._splines:
            self._splines[name] = CubicSpline(self.t, getattr(self, name))
        return self._splines[name]

    def evaluate(self, t, order, deriv=0):
        """Force of ``order`` (1 or 2), or its ``deriv``-th time derivative."""
        name = ("F", "dF", "d2F")[deriv] + str(order)
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) <= self.window
        return np.where(inside, self._spline(name)(np.clip(t, -self.window, self.window)), 0.0)


def _positive_bands(centres, half):
    bands = []
    for c in centres:
        lo, hi = c - half, c + half
        if hi <= 0:
            continue
        bands.append((max(lo, 0.0), hi))
    return bands


def force_spectrum(params, pulse, quad=None, t_max=None, panel_phase=12.0,
                   decades=14, second_order=True, doubling_stride=8):
    """Sample both force spectra on Gauss-Legendre bands covering the pulse
    bandwidth.

    Only ``w >= 0`` is computed; negative frequencies follow from the
    Hermitian symmetry of real forces.  The node density resolves
    ``exp(-i w t)`` for ``|t| <= t_max``.  When ``quad.doubling_check`` is on,
    the cutoff-doubling check runs at ``w = 0`` and at every
    ``doubling_stride``-th node.
    """
    require_valid(params, pulse)
    _need_mu0(params)
    cfg = quad or QuadratureConfig()
    t_max = t_max or pulse.tau
    density = 16.0 * t_max / panel_phase
    half1 = pulse.half_band(decades)
    cs = pulse.centres()
    sums = sorted({round(ci + cj, 12) for ci in cs for cj in cs})
    bands = _positive_bands(cs, half1)
    if second_order:
        # F2 lives where w is near a sum of two pulse centres
        bands += _positive_bands(sums, np.sqrt(2.0) * half1)
    omega, weights = gauss_legendre_bands(bands, density)
    F1 = f1_tilde(omega, params, pulse)
    F2 = np.zeros(omega.size, dtype=complex)
    E2 = np.zeros(omega.size)
    if second_order:
        unchecked = replace(cfg, doubling_check=False)
        if cfg.doubling_check:
            f2_tilde(0.0, params, pulse, cfg)
        for i, w in enumerate(omega):
            c = cfg if i % doubling_stride == 0 else unchecked
            F2[i], E2[i] = f2_tilde(w, params, pulse, c)
    full_w = np.concatenate([-omega[::-1], omega])
    full_wt = np.concatenate([weights[::-1], weights])
    return ForceSpectrum(full_w, full_wt,
                         np.concatenate([np.conj(F1[::-1]), F1]),
                         np.concatenate([np.conj(F2[::-1]), F2]),
                         np.concatenate([E2[::-1], E2]))


def force_time_series(params, pulse, quad=None, t_window=None, n_t=1201, spectrum=None,
                      second_order=True):
    """Invert the force spectra onto a uniform time grid over ``[-t_window, t_window]``.

    Derivatives come from the same inversion (``d/dt <-> -i w``).  Raises
    ``RuntimeError`` when the imaginary residue exceeds ``1e-8`` of the peak.
    """
    if n_t < 64:
        raise ValueError("n_t must be >= 64")
    t_window = t_window or pulse.tau
    t = np.linspace(-t_window, t_window, n_t)
    if params.lambda0 == 0:
        z = np.zeros(n_t)
        return ForceSeries(t, z, z.copy(), z.copy(), z.copy(), z.copy(), z.copy())
    fs = spectrum or force_spectrum(params, pulse, quad, t_max=t_window,
                                    second_order=second_order)
    w = fs.omega
    stack = np.vstack([fs.F1_tilde, fs.F2_tilde,
                       -1j * w * fs.F1_tilde, -1j * w * fs.F2_tilde,
                       -w * w * fs.F1_tilde, -w * w * fs.F2_tilde])
    inv = fourier_invert(w, fs.weights, stack, t, residue_tol=1e-8)
    if inv.flagged:
        raise RuntimeError(f"imaginary residue {inv.max_imag_residue:.3g} in force inversion")
    v = inv.values
    return ForceSeries(t, v[0], v[1], v[2], v[3], v[4], v[5], inv.max_imag_residue)
