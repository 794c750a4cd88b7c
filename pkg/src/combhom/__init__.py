"""Fourth-order interference with comb-like two-photon states.

Simulates the coincidence rate of a Hong-Ou-Mandel interferometer whose
signal arm contains a plane-mirror etalon, and predicts the dip/peak/flat
character of each recurrent feature from a firing-scheme enumeration.
"""

from .engine import (CoincidenceTrace, ConvergenceReport, DelaySweep,
                     FrequencyGrid, baseline_rate, coincidence_rate,
                     convergence_report, default_grid, interference_term,
                     sweep_direct, sweep_fft)
from .errors import ConfigError, NumericalConsistencyError, ResolutionError
from .feynman import (Feature, FeaturePrediction, FiringScheme,
                      enumerate_schemes, predict_trace_skeleton, relative_rate)
from .spectral import (EtalonSpec, FilterSpec, JointSpectralAmplitude,
                       OpticalSetup, PhaseMatchingModel, PhaseMatchingSpec,
                       PumpSpec, build_jsa, etalon_from_geometry,
                       etalon_transfer, filter_amplitude, phase_matching,
                       pump_envelope)

__all__ = [
    "CoincidenceTrace", "ConvergenceReport", "DelaySweep", "FrequencyGrid",
    "baseline_rate", "coincidence_rate", "convergence_report", "default_grid",
    "interference_term", "sweep_direct", "sweep_fft",
    "ConfigError", "NumericalConsistencyError", "ResolutionError",
    "Feature", "FeaturePrediction", "FiringScheme", "enumerate_schemes",
    "predict_trace_skeleton", "relative_rate",
    "EtalonSpec", "FilterSpec", "JointSpectralAmplitude", "OpticalSetup",
    "PhaseMatchingModel", "PhaseMatchingSpec", "PumpSpec", "build_jsa",
    "etalon_from_geometry", "etalon_transfer", "filter_amplitude",
    "phase_matching", "pump_envelope",
]

__version__ = "0.1.0"
