"""Mean motion of the object under the pulse-induced forces.

The equation of motion is ``M q'' = eps F1(t) + eps**2 F2(t) [+ F_q]`` with
the forces evaluated on the static object.  ``F_q`` (Dirichlet/Robin limit)
contains third and fourth derivatives of ``q``; it is treated by reduction of
order, ``q''' -> F'/M`` and ``q'''' -> F''/M``, which leaves an ordinary
second-order equation with no runaway branch.

Rescaling ``eps -> 10**p eps`` and ``M0 -> 10**(2p) M0`` keeps the
second-order drift ``-P/M0`` fixed while suppressing the first-order
transient by ``10**-p``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import require_valid

__all__ = [
    "Scenario",
    "TrajectoryResult",
    "RunawayError",
    "DEFAULT_P",
    "casimir_force",
    "mass_correction",
    "integrate_motion",
    "dissipated_energy",
]

DEFAULT_P = {"A": 3.0, "B": 0.0, "C": 0.0, "D": 0.0}
_TERMS = {"A": (False, True, False), "B": (True, False, False),
          "C": (True, True, False), "D": (True, True, True)}
FQ_LAMBDA_MAX = -0.9
VELOCITY_WARN = 0.1


class RunawayError(RuntimeError):
    """Velocity keeps growing after the pulse has ended."""


@dataclass(frozen=True)
class Scenario:
    """Which force terms act: A (F2), B (F1), C (F1+F2), D (F1+F2+F_q)."""

    label: str
    p_exponent: float | None = None

    def __post_init__(self):
        if self.label not in _TERMS:
            raise ValueError(f"scenario must be one of A, B, C, D, got {self.label!r}")
        if self.p_exponent is None:
            object.__setattr__(self, "p_exponent", DEFAULT_P[self.label])
        if not np.isfinite(self.p_exponent) or self.p_exponent < 0:
            raise ValueError("p_exponent must be >= 0")

    @property
    def uses_f1(self):
        return _TERMS[self.label][0]

    @property
    def uses_f2(self):
        return _TERMS[self.label][1]

    @property
    def uses_fq(self):
        return _TERMS[self.label][2]

    def scaled(self, params):
        """``(epsilon, M0)`` after the ``10**p`` rescaling."""
        k = 10.0 ** self.p_exponent
        return params.epsilon * k, params.mass0 * k * k


@dataclass
class TrajectoryResult:
    scenario: Scenario
    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    v_f: float
    v_f_predicted: float
    mass: float
    fq: np.ndarray | None = None
    energy_dissipated_by_Fq: float = 0.0
    valid: bool = True
    quiet_start: float = 0.0

    @property
    def max_speed(self):
        return float(np.max(np.abs(self.qdot)))


def casimir_force(q3, q4, params):
    """``q'''/(6 pi) - q''''/(6 pi mu0)``, the perfectly reflecting limit.

    Only meaningful for ``lambda0 -> -1``; a warning is issued above -0.9.
    """
    if not params.mu0 > 0:
        raise ValueError("casimir_force needs mu0 > 0")
    if params.lambda0 > FQ_LAMBDA_MAX:
        warnings.warn(f"F_q is the lambda0 -> -1 limit; lambda0={params.lambda0} > "
                      f"{FQ_LAMBDA_MAX}", RuntimeWarning, stacklevel=2)
    q3 = np.asarray(q3, dtype=float)
    q4 = np.asarray(q4, dtype=float)
    return q3 / (6.0 * np.pi) - q4 / (6.0 * np.pi * params.mu0)


def mass_correction(E_field, qdot, params):
    """``M0 (1 - E/M0) / (1 + qdot**2 / 2)``."""
    E = np.asarray(E_field, dtype=float)
    v = np.asarray(qdot, dtype=float)
    if np.any(np.abs(v) >= 1.0):
        raise ValueError("|qdot| must be < 1")
    if np.any(E < 0):
        raise ValueError("E_field must be >= 0")
    m0 = params.mass0
    return m0 * (1.0 - E / m0) / (1.0 + 0.5 * v * v)


def _smooth_step(t, width):
    return 0.5 * (1.0 + np.tanh(np.asarray(t) / width))


def integrate_motion(scenario, params, pulse, forces, quad=None, *, p_net=None,
                     t_end=None, n_t=None, rtol=1e-10, max_step=None,
                     created_energy=None):
    """Integrate the mean trajectory from rest at ``-t_end``.

    ``forces`` is a :class:`~dcemotion.forces.ForceSeries`; both forces
    vanish outside its window.  ``t_end`` defaults to ``3 tau``.

    ``p_net`` (unscaled, epsilon included) sets ``v_f_predicted = -p_net/M0``.
    ``created_energy`` switches on the time-dependent mass with the created
    field energy ramped in over the pulse.  The integrator is DOP853 with
    dense output, run separately inside and outside the force window so no
    step straddles the window edge.
    """
    require_valid(params, pulse)
    if not isinstance(scenario, Scenario):
        scenario = Scenario(str(scenario))
    tau = pulse.tau
    t_end = float(t_end or 3.0 * tau)
    if t_end < tau:
        raise ValueError("t_end must be >= tau")
    n_t = n_t or int(round(2.0 * t_end / 0.05)) + 1
    eps, mass = scenario.scaled(params)
    if scenario.uses_fq:
        casimir_force(0.0, 0.0, params)  # parameter checks and the lambda0 warning

    c1 = eps if scenario.uses_f1 else 0.0
    c2 = eps * eps if scenario.uses_f2 else 0.0

    def base(t, deriv=0):
        out = 0.0
        if c1:
            out = out + c1 * forces.evaluate(t, 1, deriv)
        if c2:
            out = out + c2 * forces.evaluate(t, 2, deriv)
        return out

    def fq(t):
        if not scenario.uses_fq:
            return 0.0 * np.asarray(t, dtype=float)
        return (base(t, 1) / (6.0 * np.pi * mass)
                - base(t, 2) / (6.0 * np.pi * params.mu0 * mass))

    def mass_at(t, v):
        if created_energy is None:
            return mass
        e = created_energy * (eps / params.epsilon) ** 2 * _smooth_step(t, pulse.scale)
        return float(mass_correction(e, v, params.replace(mass0=mass)))

    def rhs(t, y):
        return [y[1], (base(t) + fq(t)) / mass_at(t, y[1])]

    w = min(forces.window, t_end)
    cuts = [-t_end, -w, w, t_end]
    if w >= t_end:
        cuts = [-t_end, t_end]
    t = np.linspace(-t_end, t_end, n_t)
    y = np.zeros((2, n_t))
    state = [0.0, 0.0]
    # absolute tolerances from the velocity the forces can build up
    f_scale = (abs(c1) * np.max(np.abs(forces.F1)) + abs(c2) * np.max(np.abs(forces.F2)))
    v_scale = max(f_scale * pulse.scale / mass, 1e-300)
    atol = [rtol * v_scale * t_end, rtol * v_scale]
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        kw = {} if max_step is None else {"max_step": max_step}
        sol = solve_ivp(rhs, (lo, hi), state, method="DOP853", dense_output=True,
                        rtol=rtol, atol=atol, **kw)
        if not sol.success:
            raise RuntimeError(f"integration failed on [{lo}, {hi}]: {sol.message}")
        sel = (t >= lo) & (t <= hi)
        y[:, sel] = sol.sol(t[sel])
        state = sol.y[:, -1]
    q, qdot = y
    if not np.all(np.isfinite(qdot)):
        raise RunawayError("non-finite velocity")

    quiet_start = tau + 2.0 * pulse.scale
    quiet = t >= quiet_start
    if not np.any(quiet):
        raise ValueError("t_end leaves no quiet window after the pulse")
    v_f = float(np.mean(qdot[quiet]))
    pulse_max = float(np.max(np.abs(qdot[~quiet]))) if np.any(~quiet) else 0.0
    if np.max(np.abs(qdot[quiet])) > 10.0 * max(pulse_max, 1e-300):
        raise RunawayError("velocity grows after the pulse window")

    valid = bool(np.max(np.abs(qdot)) < VELOCITY_WARN)
    if not valid:
        warnings.warn("|qdot| exceeds 0.1: non-relativistic assumption violated",
                      RuntimeWarning, stacklevel=2)
    predicted = float("nan") if p_net is None else -p_net / params.mass0
    traj = TrajectoryResult(scenario, t, q, qdot, v_f, predicted, mass,
                            fq(t) if scenario.uses_fq else None, 0.0, valid, quiet_start)
    traj.energy_dissipated_by_Fq = dissipated_energy(traj, params)
    return traj


def dissipated_energy(trajectory, params=None):
    """``-int F_q qdot dt`` along the trajectory (0 when ``F_q`` is absent)."""
    if trajectory.fq is None:
        return 0.0
    return float(-np.trapezoid(trajectory.fq * trajectory.qdot, trajectory.t))
