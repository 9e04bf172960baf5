r"""
Scattering off a static delta/delta' object
===========================================

Transmission and reflection on both sides of the object, and the
unitarity residual of the 2x2 matrix across six decades of frequency.
"""

from pathlib import Path

import numpy as np

from dcemotion.core import ObjectParams
from dcemotion.output import svg_line_chart
from dcemotion.scattering import r_coeff, s0_matrix, s_coeff

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

p = ObjectParams(lambda0=0.5, mu0=1.0, epsilon=0.01)
w = np.logspace(-3, 3, 400)

S = s0_matrix(w, p)
residual = np.abs(np.sum(np.abs(S) ** 2, axis=-1) - 1).max()
print(f"max unitarity residual: {residual:.2e}")

# equal magnitudes, but the delta' term gives the two sides different phases
print("r+, r- at w = mu0:", r_coeff("+", 1.0, p), r_coeff("-", 1.0, p))

svg_line_chart(out / "scattering.svg", np.log10(w),
               {"|s|^2": np.abs(s_coeff("+", w, p)) ** 2,
                "|r+|^2": np.abs(r_coeff("+", w, p)) ** 2,
                "|r-|^2": np.abs(r_coeff("-", w, p)) ** 2},
               title="lambda0 = 0.5, mu0 = 1", xlabel="log10 omega", ylabel="probability")
print("wrote", out / "scattering.svg")
