r"""
Trajectories under the vacuum force
===================================

Scenarios A to D.  A (second-order force only) drifts off at the
velocity fixed by the radiated momentum; B (first-order force only)
comes back to rest; C adds both; D adds the radiation-reaction term,
whose net impulse vanishes because it is a total derivative of the
applied force.
"""

from pathlib import Path
import warnings

from dcemotion.core import FrequencyGrid, ObjectParams, Pulse
from dcemotion.dynamics import Scenario, integrate_motion
from dcemotion.forces import force_spectrum, force_time_series
from dcemotion.output import svg_line_chart
from dcemotion.quadrature import QuadratureConfig
from dcemotion.spectrum import integrate_spectrum

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

p = ObjectParams(-0.95, 1.0, 0.01)
pulse = Pulse.gaussian_cosine(3.0, 2.0)
quad = QuadratureConfig(doubling_check=False)
P = integrate_spectrum(p, pulse, grid=FrequencyGrid(pulse.cutoff(), 32)).P_net
series = force_time_series(p, pulse, quad, spectrum=force_spectrum(p, pulse, quad), n_t=801)

runs = {}
for label in "ABCD":
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        runs[label] = integrate_motion(Scenario(label), p, pulse, series, p_net=P)
    r = runs[label]
    print(f"{label}: v_f = {r.v_f:+.6e}  predicted {r.v_f_predicted:+.6e}  max|qdot| {r.max_speed:.3e}")
print("energy dissipated by F_q in D:", runs["D"].energy_dissipated_by_Fq)

a = runs["A"]
svg_line_chart(out / "trajectory_A.svg", a.t, {"qdot": a.qdot},
               markers=[("-P_net / M", a.v_f_predicted)],
               title="scenario A, p = 3", xlabel="t", ylabel="velocity")
print("wrote", out / "trajectory_A.svg")
