"""Shared domain types, the Fourier convention and parameter validation.

Natural units (c = hbar = 1).  The Fourier convention used throughout the
package is

    f~(w) = int dt f(t) exp(+i w t),      f(t) = int dw/(2 pi) f~(w) exp(-i w t).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "ObjectParams",
    "PulseKind",
    "Pulse",
    "FrequencyGrid",
    "Diagnostic",
    "ParameterError",
    "validate_params",
    "validate_pulse",
    "require_valid",
    "pulse_time",
    "pulse_freq",
    "EPSILON_WARN",
]

EPSILON_WARN = 0.1
_SQRT2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class ObjectParams:
    """Couplings of the point object.

    ``mu0`` carries units of frequency; ``mass0`` is the rest mass before the
    pulse.
    """

    lambda0: float
    mu0: float
    epsilon: float
    mass0: float = 1.0

    def replace(self, **changes):
        values = dict(lambda0=self.lambda0, mu0=self.mu0, epsilon=self.epsilon,
                      mass0=self.mass0)
        values.update(changes)
        return ObjectParams(**values)


@dataclass(frozen=True)
class Diagnostic:
    field: str
    value: object
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.severity}: {self.field}={self.value!r}: {self.message}"


class ParameterError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def validate_params(params):
    """Return every diagnostic for ``params`` (errors and warnings).

    An empty list means the parameters are valid and inside the perturbative
    regime.  No short-circuiting: all violations are reported.
    """
    diags = []
    lam, mu0, eps, m0 = params.lambda0, params.mu0, params.epsilon, params.mass0
    if not np.isfinite(lam) or not -1.0 <= lam <= 1.0:
        diags.append(Diagnostic("lambda0", lam, "lambda0 out of [-1,1]"))
    if not np.isfinite(mu0) or mu0 < 0:
        diags.append(Diagnostic("mu0", mu0, "mu0 must be >= 0"))
    if not np.isfinite(eps) or eps < 0:
        diags.append(Diagnostic("epsilon", eps, "epsilon must be >= 0"))
    elif eps > EPSILON_WARN:
        diags.append(Diagnostic("epsilon", eps, "epsilon outside perturbative regime",
                                severity="warning"))
    if not np.isfinite(m0) or m0 <= 0:
        diags.append(Diagnostic("mass0", m0, "mass0 must be > 0"))
    return diags


def require_valid(params, pulse=None):
    """Raise :class:`ParameterError` on any error; emit warnings otherwise."""
    diags = validate_params(params)
    if pulse is not None:
        diags += validate_pulse(pulse)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise ParameterError(errors)
    for d in diags:
        warnings.warn(str(d), RuntimeWarning, stacklevel=3)
    return params


class PulseKind(str, Enum):
    GAUSSIAN = "gaussian"
    GAUSSIAN_COSINE = "gaussian-cosine"
    USER_SAMPLED = "user-sampled"


@dataclass(frozen=True, eq=False)
class Pulse:
    """Time profile ``f(t)`` of the coupling modulation.

    For the built-in kinds ``width`` is the Gaussian width T and ``omega0`` the
    carrier.  A user-sampled pulse is given by ``samples`` on the uniform grid
    ``t_start + k*dt``; it is linearly interpolated and zero outside.
    """

    kind: PulseKind = PulseKind.GAUSSIAN_COSINE
    width: float = 5.0
    omega0: float = 2.0
    n_sigma: float = 6.0
    samples: np.ndarray | None = field(default=None, repr=False)
    t_start: float = 0.0
    dt: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PulseKind(self.kind))
        if self.kind is PulseKind.GAUSSIAN:
            object.__setattr__(self, "omega0", 0.0)
        if self.samples is not None:
            object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))

    @classmethod
    def gaussian(cls, width, n_sigma=6.0):
        return cls(PulseKind.GAUSSIAN, width, 0.0, n_sigma)

    @classmethod
    def gaussian_cosine(cls, width, omega0, n_sigma=6.0):
        return cls(PulseKind.GAUSSIAN_COSINE, width, omega0, n_sigma)

    @classmethod
    def sampled(cls, samples, dt, t_start=None):
        samples = np.asarray(samples, dtype=float)
        if t_start is None:
            t_start = -0.5 * dt * (samples.size - 1)
        return cls(PulseKind.USER_SAMPLED, width=dt, omega0=0.0, samples=samples,
                   t_start=t_start, dt=dt)

    @property
    def tau(self):
        """Half-width of the window outside which ``f`` is treated as zero."""
        if self.kind is PulseKind.USER_SAMPLED:
            t_end = self.t_start + self.dt * (self.samples.size - 1)
            return max(abs(self.t_start), abs(t_end))
        return self.n_sigma * self.width

    @property
    def scale(self):
        """Time scale used for window margins (T, or the sample window)."""
        if self.kind is PulseKind.USER_SAMPLED:
            return self.tau / 6.0
        return self.width

    def centres(self):
        """Frequencies at which ``|f~|`` peaks."""
        if self.kind is PulseKind.GAUSSIAN_COSINE:
            return [-self.omega0, self.omega0]
        return [0.0]

    def half_band(self, decades=16):
        """Half-width around each centre outside which ``|f~|`` is below
        ``10**-decades`` of its peak."""
        if self.kind is PulseKind.USER_SAMPLED:
            return np.pi / self.dt
        return np.sqrt(2.0 * decades * np.log(10.0)) / self.width

    def cutoff(self):
        """Fallback frequency cutoff: omega0 + 12/T for Gaussian-type pulses."""
        if self.kind is PulseKind.USER_SAMPLED:
            return np.pi / self.dt
        return self.omega0 + 12.0 / self.width

    def peak_points(self, lo=0.0):
        """Breakpoints marking the pulse band (centres and +-3/T, +-6/T)."""
        if self.kind is PulseKind.USER_SAMPLED:
            # includes the band edge, where the transform drops to zero
            top = self.cutoff()
            return list(np.linspace(lo, top, 33)[1:]) if lo < top else []
        pts = []
        for c in self.centres():
            pts += [c + k * 3.0 / self.width for k in (-2, -1, 0, 1, 2)]
        return sorted(p for p in pts if p > lo)


def validate_pulse(pulse, n_check=10_000):
    diags = []
    if pulse.kind is PulseKind.USER_SAMPLED:
        if pulse.samples is None or pulse.samples.size < 2:
            diags.append(Diagnostic("samples", None, "user-sampled pulse needs >= 2 samples"))
            return diags
        if not pulse.dt > 0:
            diags.append(Diagnostic("dt", pulse.dt, "sample spacing must be > 0"))
    else:
        if not pulse.width > 0:
            diags.append(Diagnostic("width", pulse.width, "width must be > 0"))
            return diags
        if pulse.n_sigma < 6:
            diags.append(Diagnostic("n_sigma", pulse.n_sigma, "tau must be >= 6 T"))
        if pulse.omega0 < 0:
            diags.append(Diagnostic("omega0", pulse.omega0, "omega0 must be >= 0"))
    t = np.linspace(-pulse.tau, pulse.tau, n_check)
    peak = np.abs(pulse_time(pulse, t)).max()
    if pulse.kind is PulseKind.USER_SAMPLED:
        peak = max(peak, np.abs(pulse.samples).max())
    if peak > 1.0 + 1e-12:
        diags.append(Diagnostic("samples", float(peak), "|f(t)| must be <= 1"))
    return diags


def pulse_time(pulse, t):
    """``f(t)``."""
    t = np.asarray(t, dtype=float)
    if pulse.kind is PulseKind.USER_SAMPLED:
        n = pulse.samples.size
        grid = pulse.t_start + pulse.dt * np.arange(n)
        return np.interp(t, grid, pulse.samples, left=0.0, right=0.0)
    env = np.exp(-0.5 * (t / pulse.width) ** 2)
    if pulse.kind is PulseKind.GAUSSIAN_COSINE:
        return np.cos(pulse.omega0 * t) * env
    return env


def _half_hat(z):
    # (exp(z) - 1 - z) / z**2, with the series near z = 0
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-3
    zs = z[small]
    out[small] = 0.5 + zs / 6.0 + zs * zs / 24.0 + zs ** 3 / 120.0
    zl = z[~small]
    out[~small] = (np.expm1(zl) - zl) / (zl * zl)
    return out


def pulse_freq(pulse, omega):
    """``f~(omega) = int dt f(t) exp(i omega t)``.

    Closed forms for the Gaussian kinds.  For sampled pulses this is the exact
    transform of the piecewise-linear interpolant (trapezoid sum with the
    ``sinc**2`` hat factor), which converges as ``dt**2``, band-limited to
    ``|omega| <= pi/dt``: above the Nyquist frequency the interpolant's
    power-law tail carries no information about the samples.
    """
    w = np.asarray(omega, dtype=float)
    T = pulse.width
    if pulse.kind is PulseKind.GAUSSIAN:
        return T * _SQRT2PI * np.exp(-0.5 * (w * T) ** 2) + 0j
    if pulse.kind is PulseKind.GAUSSIAN_COSINE:
        w0 = pulse.omega0
        return 0.5 * T * _SQRT2PI * (np.exp(-0.5 * (T * (w - w0)) ** 2)
                                     + np.exp(-0.5 * (T * (w + w0)) ** 2)) + 0j
    g = pulse.samples
    h = pulse.dt
    flat = np.atleast_1d(w).ravel()
    first = np.exp(1j * flat * pulse.t_start)
    step = np.exp(1j * flat * h)
    last = first * np.exp(1j * flat * h * (g.size - 1))
    # interior sum of g_k exp(i w t_k) by Horner's rule in exp(i w h)
    inner = np.zeros(g.size)
    inner[1:-1] = g[1:-1]
    hat = h * np.sinc(flat * h / (2 * np.pi)) ** 2
    total = hat * first * np.polynomial.polynomial.polyval(step, inner)
    z = 1j * flat * h
    total += g[0] * first * h * _half_hat(z)
    total += g[-1] * last * h * _half_hat(-z)
    total[np.abs(flat) > np.pi / h] = 0.0
    return total.reshape(w.shape)


@dataclass(frozen=True)
class FrequencyGrid:
    omega_max: float
    n_points: int = 200
    spacing: str = "uniform"
    scale: float = 1.0

    def __post_init__(self):
        if not self.omega_max > 0:
            raise ValueError("omega_max must be > 0")
        if self.n_points < 16:
            raise ValueError("n_points must be >= 16")
        if self.spacing not in ("uniform", "mapped-semi-infinite"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def points(self):
        if self.spacing == "uniform":
            return np.linspace(0.0, self.omega_max, self.n_points)
        c = self.scale
        u_max = self.omega_max / (self.omega_max + c)
        u = np.linspace(0.0, u_max, self.n_points)
        w = c * u / (1.0 - u)
        w[-1] = self.omega_max
        return w
