"""Adaptive quadrature kernels with error estimates.

Everything here is deterministic: panels are refined in a fixed order and
partial sums are combined sequentially, so repeated calls with identical
inputs return bit-identical results.

Integrands are vectorised: they receive a 1-D array of abscissae and return
either an array of the same length or an array of shape ``(m, n)`` for an
``m``-component integrand.  Complex values are supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureConfig",
    "QuadResult",
    "InversionResult",
    "QuadratureError",
    "CutoffSensitivityError",
    "integrate_1d",
    "integrate_2d",
    "fourier_invert",
    "gauss_legendre_bands",
]

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, 7 from each end).
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[[9, 11, 13]] = _WG[2::-1]
_WG15[7] = _WG[3]

_EPS = np.finfo(float).eps


class QuadratureError(RuntimeError):
    """Adaptive refinement hit ``max_subdivisions`` before meeting tolerance.

    The best available value and error estimate are attached.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class CutoffSensitivityError(QuadratureError):
    """Doubling the frequency cutoff moved the result by more than its error."""


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    omega_max: float | None = None
    doubling_check: bool = True

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")
        if self.omega_max is not None and not self.omega_max > 0:
            raise ValueError("omega_max must be positive")

    def tightened(self, factor):
        return QuadratureConfig(self.abs_tol, self.rel_tol * factor, self.max_subdivisions,
                                self.omega_max, self.doubling_check)


@dataclass(frozen=True)
class QuadResult:
    value: complex | float | np.ndarray
    error: float | np.ndarray
    n_eval: int = 0
    n_panels: int = 0

    def __iter__(self):
        # allows ``value, error = integrate_1d(...)``
        yield self.value
        yield self.error


def _gk15_panels(f, a, b, ncheck):
    """Apply the 15-point Kronrod rule and its embedded Gauss rule on panels.

    Returns Kronrod sums, error estimates and the raw per-component values.
    """
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = (centre[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(f(x))
    vector = fx.ndim == 2
    if not vector:
        fx = fx[None, :]
    m = fx.shape[0]
    fx = fx.reshape(m, a.size, 15)
    k = fx @ _WK
    g = fx @ _WG15
    mean = k * 0.5
    resabs = np.abs(fx) @ _WK
    resasc = np.abs(fx - mean[..., None]) @ _WK
    k = k * half
    g = g * half
    resabs = resabs * np.abs(half)
    resasc = resasc * np.abs(half)
    diff = np.abs(k - g)
    err = diff.copy()
    nz = (resasc != 0) & (diff != 0)
    err[nz] = resasc[nz] * np.minimum(1.0, (200.0 * diff[nz] / resasc[nz]) ** 1.5)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    # only the checked components drive refinement
    perr = err[:ncheck].max(axis=0) if ncheck else err.max(axis=0)
    return k, err, perr, vector


def _adaptive(f, a, b, cfg, ncheck=None, min_panels=1):
    """Globally adaptive GK15 on a finite interval [a, b] split at ``a``/``b`` arrays.

    ``a`` and ``b`` are arrays of initial panel edges.
    """
    lo = np.asarray(a, dtype=float)
    hi = np.asarray(b, dtype=float)
    if min_panels > 1:
        edges = [np.linspace(l, h, min_panels + 1) for l, h in zip(lo, hi)]
        lo = np.concatenate([e[:-1] for e in edges])
        hi = np.concatenate([e[1:] for e in edges])
    k, err, perr, vector = _gk15_panels(f, lo, hi, ncheck)
    n_eval = 15 * lo.size
    while True:
        total = k.sum(axis=1)
        total_err = err.sum(axis=1)
        chk = slice(None) if ncheck is None else slice(0, ncheck)
        scale = np.abs(total[chk]).max() if total[chk].size else 0.0
        target = max(cfg.abs_tol, cfg.rel_tol * scale)
        if total_err[chk].max() <= target:
            break
        if lo.size >= cfg.max_subdivisions:
            val = total if vector else total[0]
            e = total_err if vector else total_err[0]
            raise QuadratureError(
                f"no convergence after {lo.size} panels (error {total_err[chk].max():.3g} "
                f"> target {target:.3g})", val, e)
        order = np.argsort(-perr, kind="stable")
        # split the worst panels that together hold half of the excess
        cum = np.cumsum(perr[order])
        excess = perr.sum() - 0.5 * target
        nsplit = int(np.searchsorted(cum, 0.5 * excess)) + 1
        nsplit = min(nsplit, order.size, cfg.max_subdivisions - lo.size)
        nsplit = max(nsplit, 1)
        split = np.sort(order[:nsplit])
        keep = np.ones(lo.size, dtype=bool)
        keep[split] = False
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        nk, nerr, nperr, _ = _gk15_panels(f, new_lo, new_hi, ncheck)
        n_eval += 15 * new_lo.size
        # keep panels ordered by left edge for a reproducible summation order
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        k = np.concatenate([k[:, keep], nk], axis=1)
        err = np.concatenate([err[:, keep], nerr], axis=1)
        perr = np.concatenate([perr[keep], nperr])
        idx = np.argsort(lo, kind="stable")
        lo, hi, k, err, perr = lo[idx], hi[idx], k[:, idx], err[:, idx], perr[idx]
    value = total if vector else total[0]
    error = total_err if vector else total_err[0]
    return QuadResult(value, error, n_eval, lo.size)


def _edges(a, b, points):
    pts = sorted({float(p) for p in (points or ()) if a < p < b})
    return np.array([a, *pts]), np.array([*pts, b])


def _semi_infinite(f, a, cfg, points, scale, ncheck, min_panels):
    """Integral over [a, inf) via x = a + c*u/(1-u), u in [0, 1)."""
    c = float(scale)

    def g(u):
        om = 1.0 - u
        x = a + c * u / om
        return np.asarray(f(x)) * (c / (om * om))

    upts = [(p - a) / (p - a + c) for p in (points or ()) if p > a]
    lo, hi = _edges(0.0, 1.0, upts)
    return _adaptive(g, lo, hi, cfg, ncheck, min_panels)


def integrate_1d(f, domain, cfg=None, *, points=None, scale=1.0, min_panels=4,
                 ncheck=None):
    """Adaptive Gauss-Kronrod integration of a vectorised integrand.

    Parameters
    ----------
    f : callable
        ``f(x)`` for a 1-D array ``x``; returns shape ``(n,)`` or ``(m, n)``.
    domain : tuple
        ``(a, b)``.  Either end may be infinite.  ``(0, inf)`` and
        ``(-inf, inf)`` are mapped to [0, 1) with ``x = c*u/(1-u)`` where
        ``c = scale``.  Full-line integrals are evaluated symmetrically as
        ``int_0^inf [f(x) + f(-x)] dx`` so odd integrands cancel exactly.
    points : sequence of float, optional
        Interior breakpoints (peaks, kinks) that seed the initial panels.
    ncheck : int, optional
        Only the first ``ncheck`` components drive the tolerance test.

    Returns
    -------
    QuadResult
    """
    cfg = cfg or QuadratureConfig()
    a, b = float(domain[0]), float(domain[1])
    if a == b:
        return QuadResult(0.0, 0.0)
    if a > b:
        r = integrate_1d(f, (b, a), cfg, points=points, scale=scale,
                         min_panels=min_panels, ncheck=ncheck)
        return QuadResult(-r.value, r.error, r.n_eval, r.n_panels)
    if np.isfinite(a) and np.isfinite(b):
        lo, hi = _edges(a, b, points)
        return _adaptive(f, lo, hi, cfg, ncheck, min_panels)
    if np.isfinite(a):
        return _semi_infinite(f, a, cfg, points, scale, ncheck, min_panels)
    if np.isfinite(b):
        def g(x):
            return f(b - x)
        pts = [b - p for p in (points or ())]
        return _semi_infinite(g, 0.0, cfg, pts, scale, ncheck, min_panels)

    def sym(x):
        return np.asarray(f(x)) + np.asarray(f(-x))

    pts = sorted({abs(float(p)) for p in (points or ()) if p != 0})
    return _semi_infinite(sym, 0.0, cfg, pts, scale, ncheck, min_panels)


def integrate_2d(f, x_domain, y_domain, cfg=None, *, x_points=None, y_points=None,
                 x_scale=1.0, y_scale=1.0, min_panels=4, inner_cfg=None):
    """Iterated adaptive cubature over a product domain.

    ``f(x, y)`` is called with broadcastable arrays ``x[:, None]`` and
    ``y[None, :]`` and must return an array of shape ``(len(x), len(y))``.
    Each axis accepts the same domains as :func:`integrate_1d`; the inner
    integral is evaluated for all outer nodes of a refinement sweep at once.

    The returned error is the outer estimate plus the outer-rule integral of
    the inner estimates.
    """
    cfg = cfg or QuadratureConfig()
    if inner_cfg is None:
        inner_cfg = cfg.tightened(0.1)

    def outer(xs):
        def inner(ys):
            return np.asarray(f(xs[:, None], ys[None, :]))

        r = integrate_1d(inner, y_domain, inner_cfg, points=y_points, scale=y_scale,
                         min_panels=min_panels)
        val = np.atleast_1d(r.value)
        err = np.atleast_1d(r.error)
        return np.stack([val, err.astype(val.dtype)])

    r = integrate_1d(outer, x_domain, cfg, points=x_points, scale=x_scale,
                     min_panels=min_panels, ncheck=1)
    value = r.value[0]
    error = float(r.error[0] + abs(r.value[1]))
    return QuadResult(value, error, r.n_eval, r.n_panels)


@dataclass(frozen=True)
class InversionResult:
    t: np.ndarray
    values: np.ndarray
    max_imag_residue: float
    flagged: bool


def gauss_legendre_bands(bands, nodes_per_unit, min_nodes=32):
    """Composite Gauss-Legendre nodes and weights covering the given bands.

    ``bands`` is a list of ``(lo, hi)`` intervals; overlapping bands are
    merged first.  Each band gets panels of at most ``1/nodes_per_unit * 16``
    width with 16 nodes per panel.
    """
    merged = []
    for lo, hi in sorted(bands):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    xg, wg = np.polynomial.legendre.leggauss(16)
    nodes, weights = [], []
    for lo, hi in merged:
        n = max(min_nodes, int(np.ceil((hi - lo) * nodes_per_unit)))
        npan = max(1, int(np.ceil(n / 16)))
        edges = np.linspace(lo, hi, npan + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            nodes.append(0.5 * (a + b) + 0.5 * (b - a) * xg)
            weights.append(0.5 * (b - a) * wg)
    return np.concatenate(nodes), np.concatenate(weights)


def fourier_invert(omega, weights, spectrum, t, residue_tol=1e-6):
    """Direct-quadrature inverse transform ``int dw/(2 pi) F(w) exp(-i w t)``.

    ``omega``/``weights`` are quadrature nodes on a two-sided frequency grid;
    ``spectrum`` holds samples (last axis matches ``omega``).  The real part is
    returned; ``flagged`` is set when the imaginary residue exceeds
    ``residue_tol`` of the peak, which signals a non-Hermitian spectrum.
    """
    omega = np.asarray(omega, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    spec = np.asarray(spectrum, dtype=complex)
    kernel = np.exp(-1j * np.outer(t, omega)) * (np.asarray(weights) / (2 * np.pi))
    series = spec @ kernel.T
    re = series.real
    peak = np.abs(re).max() if re.size else 0.0
    resid = float(np.abs(series.imag).max()) if re.size else 0.0
    flagged = resid > residue_tol * peak if peak > 0 else resid > 0
    return InversionResult(t, re, resid, bool(flagged))
