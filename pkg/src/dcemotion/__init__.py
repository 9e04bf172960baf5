"""Recoil of a point object with a time-modulated delta/delta' coupling to a
1+1 dimensional massless scalar field.

Modules:

* :mod:`~dcemotion.core` - parameters, pulses, Fourier convention
* :mod:`~dcemotion.scattering` - scattering matrix and its corrections
* :mod:`~dcemotion.spectrum` - created-particle spectra, energy, momentum
* :mod:`~dcemotion.forces` - first- and second-order mean force
* :mod:`~dcemotion.dynamics` - mean trajectories of the freed object
* :mod:`~dcemotion.quadrature` - adaptive quadrature and Fourier inversion
* :mod:`~dcemotion.cli` - command-line interface
"""

from .core import (FrequencyGrid, ObjectParams, ParameterError, Pulse, PulseKind,
                   pulse_freq, pulse_time, validate_params, validate_pulse)
from .dynamics import Scenario, TrajectoryResult, integrate_motion
from .forces import ForceSeries, ForceSpectrum, f2_tilde, force_spectrum, force_time_series
from .quadrature import QuadratureConfig
from .spectrum import SpectrumResult, integrate_spectrum

__version__ = "0.1.0"

__all__ = [
    "FrequencyGrid", "ObjectParams", "ParameterError", "Pulse", "PulseKind", "pulse_freq",
    "pulse_time", "validate_params", "validate_pulse", "Scenario", "TrajectoryResult",
    "integrate_motion", "ForceSeries", "ForceSpectrum", "f2_tilde", "force_spectrum",
    "force_time_series", "QuadratureConfig", "SpectrumResult", "integrate_spectrum",
]
