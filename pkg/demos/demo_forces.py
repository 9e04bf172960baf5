r"""
Mean force on the object
========================

First- and second-order force spectra, the zero-frequency check against
the radiated momentum, and the force in the time domain.  The cutoff
doubling check is off to keep this quick.
"""

from pathlib import Path

import numpy as np

from dcemotion.core import FrequencyGrid, ObjectParams, Pulse
from dcemotion.forces import f2_tilde, force_spectrum, force_time_series
from dcemotion.output import svg_line_chart
from dcemotion.quadrature import QuadratureConfig
from dcemotion.spectrum import integrate_spectrum

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

p = ObjectParams(-0.5, 1.0, 0.01)
pulse = Pulse.gaussian_cosine(3.0, 2.0)
quad = QuadratureConfig(doubling_check=False)

# total impulse delivered by the field equals minus the momentum it carries away
P = integrate_spectrum(p, pulse, grid=FrequencyGrid(pulse.cutoff(), 32)).P_net
F0 = p.epsilon ** 2 * f2_tilde(0.0, p, pulse, quad).value.real
print(f"eps^2 F2~(0) = {F0:.10e}, -P_net = {-P:.10e}")

spec = force_spectrum(p, pulse, quad)
series = force_time_series(p, pulse, quad, spectrum=spec, n_t=801)
print("int F1 dt =", np.trapezoid(series.F1, series.t))
print("int F2 dt =", np.trapezoid(series.F2, series.t), "(times eps^2:",
      p.epsilon ** 2 * np.trapezoid(series.F2, series.t), ")")

svg_line_chart(out / "forces.svg", series.t,
               {"eps F1": p.epsilon * series.F1, "eps^2 F2": p.epsilon ** 2 * series.F2},
               title="lambda0 = -0.5, T = 3", xlabel="t", ylabel="force")
print("wrote", out / "forces.svg")
