"""Known-answer integrals and the invariant suite behind ``dcemotion validate``.

Every check returns a :class:`Check` with the measured residual and the
threshold it is compared against, so a report shows how close each
invariant came to failing.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import forces as _forces
from .core import ObjectParams, Pulse
from .dynamics import mass_correction
from .quadrature import QuadratureConfig, QuadratureError, integrate_1d
from .scattering import r_coeff, s0_matrix, s_coeff
from .spectrum import integrate_spectrum, spectral_densities

__all__ = ["Check", "KNOWN_INTEGRALS", "honesty_suite", "run_invariants"]


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""

    def to_dict(self):
        d = asdict(self)
        d["residual"] = float(d["residual"])
        d["threshold"] = float(d["threshold"])
        return d


def _c(f):
    return lambda x: np.asarray(f(np.asarray(x, dtype=float)))


# (name, integrand, domain, exact, keyword arguments)
KNOWN_INTEGRALS = [
    ("exp(-x) on [0,inf)", _c(lambda x: np.exp(-x)), (0, np.inf), 1.0, {}),
    ("x^2/(1+x^2)^2 on [0,inf)", _c(lambda x: x * x / (1 + x * x) ** 2), (0, np.inf),
     np.pi / 4, {}),
    ("sqrt(x) on [0,1]", _c(np.sqrt), (0, 1), 2 / 3, {}),
    ("log(x) on [0,1]", _c(lambda x: np.log(x)), (0, 1), -1.0, {}),
    ("1/(1+x^2) on [0,inf)", _c(lambda x: 1 / (1 + x * x)), (0, np.inf), np.pi / 2, {}),
    ("exp(-x^2) on R", _c(lambda x: np.exp(-x * x)), (-np.inf, np.inf), math.sqrt(np.pi), {}),
    ("sin(x) on [0,pi]", _c(np.sin), (0, np.pi), 2.0, {}),
    ("cos(5x)^2 on [0,2pi]", _c(lambda x: np.cos(5 * x) ** 2), (0, 2 * np.pi), np.pi, {}),
    ("x exp(-x^2) on [0,inf)", _c(lambda x: x * np.exp(-x * x)), (0, np.inf), 0.5, {}),
    ("1/sqrt(x) on [0,1]", _c(lambda x: 1 / np.sqrt(x)), (0, 1), 2.0, {}),
    ("exp(-x) sin(x) on [0,inf)", _c(lambda x: np.exp(-x) * np.sin(x)), (0, np.inf), 0.5, {}),
    ("x^3/(e^x-1) on [0,inf)", _c(lambda x: x ** 3 * np.exp(-x) / -np.expm1(-x)), (0, np.inf),
     np.pi ** 4 / 15, {}),
    ("4/(1+x^2) on [0,1]", _c(lambda x: 4 / (1 + x * x)), (0, 1), np.pi, {}),
    ("1/(1+x^4) on R", _c(lambda x: 1 / (1 + x ** 4)), (-np.inf, np.inf), np.pi / math.sqrt(2), {}),
    ("exp(-x^2) cos(3x) on [0,inf)", _c(lambda x: np.exp(-x * x) * np.cos(3 * x)), (0, np.inf),
     0.5 * math.sqrt(np.pi) * math.exp(-2.25), {}),
    ("exp(x) on [0,1]", _c(np.exp), (0, 1), math.e - 1, {}),
    ("|x| on [-1,1]", _c(np.abs), (-1, 1), 1.0, {}),
    ("log(1+x^2)/(1+x^2) on [0,inf)", _c(lambda x: np.log1p(x * x) / (1 + x * x)), (0, np.inf),
     np.pi * math.log(2), {}),
    ("narrow Gaussian on [0,10]", _c(lambda x: np.exp(-100 * (x - 5) ** 2)), (0, 10),
     math.sqrt(np.pi) / 10, {}),
    ("exp(-(1+i)x) on [0,inf)", lambda x: np.exp(-(1 + 1j) * np.asarray(x)), (0, np.inf),
     (1 - 1j) / 2, {}),
]


def honesty_suite(cfg=None):
    """Run the known-answer integrals; returns rows of
    ``(name, value, exact, true_error, estimate, honest)``."""
    cfg = cfg or QuadratureConfig()
    rows = []
    for name, f, dom, exact, kw in KNOWN_INTEGRALS:
        try:
            r = integrate_1d(f, dom, cfg, **kw)
            value, est = r.value, float(r.error)
        except QuadratureError as exc:
            value, est = exc.value, float(exc.error)
        true = float(abs(value - exact))
        rows.append((name, value, exact, true, est, true <= est))
    return rows


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def _check_scattering(params):
    w = np.logspace(-3, 3, 1000) * max(params.mu0, 1e-300)
    out = []
    worst_u, worst_c = 0.0, 0.0
    for lam in (0.0, 0.5, -0.5, 1.0, -1.0):
        p = params.replace(lambda0=lam)
        for side in ("+", "-"):
            u = np.abs(np.abs(s_coeff(side, w, p)) ** 2 + np.abs(r_coeff(side, w, p)) ** 2 - 1)
            worst_u = max(worst_u, float(u.max()))
        d = np.abs(s0_matrix(-w, p) - np.conj(s0_matrix(w, p)))
        worst_c = max(worst_c, float(d.max()))
    out.append(Check("scattering.unitarity", worst_u < 1e-12, worst_u, 1e-12))
    out.append(Check("scattering.conjugate_symmetry", worst_c < 1e-12, worst_c, 1e-12))
    big = params.replace(mu0=1e8)
    s_big = float(np.abs(s_coeff("+", np.linspace(0.01, 10, 50), big)).max())
    out.append(Check("scattering.dirichlet_limit", s_big < 1e-7, s_big, 1e-7))
    return out


def _check_spectrum(params, pulse, quad):
    out = []
    w = np.linspace(0.05, pulse.cutoff(), 50)
    worst = 0.0
    for lam in (0.25, 0.5, 0.75):
        p = params.replace(lambda0=lam)
        n_p, n_m, _, _ = spectral_densities(w, p, pulse, quad)
        ratio = ((1 - lam) / (1 + lam)) ** 2
        peak = max(float(np.abs(n_p).max()), 1e-300)
        worst = max(worst, float(np.abs(n_m - ratio * n_p).max()) / peak)
    out.append(Check("spectrum.side_ratio", worst < 1e-8, worst, 1e-8))

    res = integrate_spectrum(params, pulse, quad)
    err = res.quadrature_error
    diff = abs(res.P_net - res.P_net_from_energies)
    tol = 10.0 * (err["P_net"] + err["P_net_from_energies"])
    out.append(Check("spectrum.momentum_routes", diff <= tol, diff, tol))

    mirror = integrate_spectrum(params.replace(lambda0=-params.lambda0), pulse, quad)
    s = abs(res.P_net + mirror.P_net)
    tol = 2.0 * (err["P_net"] + mirror.quadrature_error["P_net"])
    out.append(Check("spectrum.mirror_momentum", s <= tol, s, tol))

    for lam, kept, dropped in ((1.0, "+", "-"), (-1.0, "-", "+")):
        r = integrate_spectrum(params.replace(lambda0=lam), pulse, quad)
        big, small = getattr(r, "N_" + {"+": "plus", "-": "minus"}[kept]), \
            getattr(r, "N_" + {"+": "plus", "-": "minus"}[dropped])
        val = 0.0 if big == 0 else small / big
        out.append(Check(f"spectrum.one_sided_lambda{lam:+g}", val < 1e-12, val, 1e-12))
    ref = integrate_spectrum(params.replace(lambda0=params.lambda0), pulse, quad).N_total
    hi = integrate_spectrum(params.replace(mu0=1e8), pulse, quad).N_total
    val = 0.0 if ref == 0 else hi / ref
    out.append(Check("spectrum.dirichlet_suppression", val < 1e-6, val, 1e-6))
    return out, res


def _check_forces(params, pulse, quad, p_net):
    out = []
    mirror = params.replace(lambda0=-params.lambda0)
    w = np.linspace(-pulse.cutoff(), pulse.cutoff(), 401)
    c = _forces.chi1(w, params)
    cm = _forces.chi1(w, mirror)
    peak = max(float(np.abs(c).max()), 1e-300)
    val = float(np.abs(c + cm).max()) / peak
    out.append(Check("forces.chi1_mirror", val <= 1e-14, val, 1e-14))

    val = float(np.abs(c - np.conj(c[::-1])).max()) / peak
    out.append(Check("forces.chi1_conjugate_symmetry", val < 1e-10, val, 1e-10))

    # near zero |chi1| stays below C w**2 with C = |lambda0| / (pi (1 + lambda0**2))
    ws = np.logspace(-6, -3, 20) * params.mu0
    bound = abs(params.lambda0) / (np.pi * (1 + params.lambda0 ** 2)) * ws ** 2
    val = float(np.max(np.abs(_forces.chi1(ws, params)) / np.where(bound > 0, bound, 1.0)))
    out.append(Check("forces.chi1_small_omega_bound", val <= 1.1, val, 1.1))

    f1 = _forces.f1_tilde(w, params, pulse)
    peak1 = float(np.abs(f1).max())
    val = 0.0 if peak1 == 0 else float(abs(_forces.f1_tilde(0.0, params, pulse))) / peak1
    out.append(Check("forces.f1_null_impulse", val < 1e-10, val, 1e-10))

    f2 = _forces.f2_tilde(0.0, params, pulse, quad)
    f2m = _forces.f2_tilde(0.0, mirror, pulse, quad)
    e2 = params.epsilon ** 2
    val = _rel(e2 * f2.value.real, -p_net)
    out.append(Check("forces.f2_zero_vs_momentum", val < 0.02, val, 0.02))
    s = abs(f2.value + f2m.value)
    tol = max(f2.error + f2m.error, 1e-300)
    out.append(Check("forces.f2_mirror", s <= tol, s, tol))

    # two-sided conjugate symmetry on a few frequencies, F2 included
    wp = np.array([0.3, 1.7, 4.0])
    f2p = np.array([_forces.f2_tilde(x, params, pulse, quad).value for x in wp])
    f2n = np.array([_forces.f2_tilde(-x, params, pulse, quad).value for x in wp])
    peak2 = max(float(np.abs(f2p).max()), 1e-300)
    val = float(np.abs(f2n - np.conj(f2p)).max()) / peak2
    tol = 1e-6
    out.append(Check("forces.f2_conjugate_symmetry", val < tol, val, tol))
    return out


def _check_quadrature(quad):
    rows = honesty_suite()
    frac = sum(r[5] for r in rows) / len(rows)
    out = [Check("quadrature.honesty", frac >= 0.95, frac, 0.95,
                 f"{sum(r[5] for r in rows)}/{len(rows)} estimates bound the true error")]
    again = honesty_suite()
    same = all(np.array_equal(np.asarray(a[1]), np.asarray(b[1])) and a[4] == b[4]
               for a, b in zip(rows, again))
    out.append(Check("quadrature.determinism", same, 0.0 if same else 1.0, 0.0))
    # semi-infinite mapping scale invariance
    f = _c(lambda x: x * x / (1 + x * x) ** 2)
    r1 = integrate_1d(f, (0, np.inf), quad, scale=1.0).value
    r2 = integrate_1d(f, (0, np.inf), quad, scale=2.0).value
    val = _rel(r1, r2)
    out.append(Check("quadrature.mapping_scale", val < 1e-8, val, 1e-8))
    return out


def _check_misc(params):
    m = float(mass_correction(1e-7 * params.mass0, 1e-4, params))
    val = _rel(m, params.mass0)
    return [Check("dynamics.mass_approximation", val < 2e-6, val, 2e-6)]


def _check_zero_epsilon(params, pulse, quad):
    res = integrate_spectrum(params, pulse, quad)
    vals = [res.N_plus, res.N_minus, res.E_plus, res.E_minus, res.P_net,
            res.P_net_from_energies, *res.n_plus, *res.n_minus]
    nz = sum(1 for v in vals if v != 0)
    return [Check("epsilon_zero.exact_zeros", nz == 0, float(nz), 0.0)]


def run_invariants(params=None, pulse=None, quad=None, include_dynamics=False):
    """Evaluate the invariant suite; returns a list of :class:`Check`."""
    params = params or ObjectParams(0.5, 1.0, 0.01)
    pulse = pulse or Pulse.gaussian_cosine(5.0, 2.0)
    quad = quad or QuadratureConfig()
    checks = []
    checks += _check_quadrature(quad)
    checks += _check_scattering(params)
    spec_checks, res = _check_spectrum(params, pulse, quad)
    checks += spec_checks
    if params.mu0 > 0:
        checks += _check_forces(params, pulse, quad, res.P_net)
    checks += _check_misc(params)
    if params.epsilon == 0:
        checks += _check_zero_epsilon(params, pulse, quad)
    return checks
