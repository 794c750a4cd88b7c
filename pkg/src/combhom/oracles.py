"""Independent reference computations used only for verification.

Nothing here reuses the quadrature engine or the firing-scheme formulas; each
oracle is derived separately (closed form, geometric series, or literal
amplitude enumeration) so it can arbitrate the implementations it checks.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConfigError
from .spectral import (EtalonSpec, FilterSpec, OpticalSetup, PhaseMatchingModel,
                       PhaseMatchingSpec, PumpSpec, etalon_from_geometry,
                       etalon_transfer)

MAX_BRUTE_FORCE_INDEX = 12


def hom_closed_form_params(setup: OpticalSetup) -> tuple[float, float]:
    """(visibility, width) of the no-etalon HOM dip, derived in closed form.

    With flat phase matching and Gaussian pump and filters, the double
    integral separates in the sum/difference detunings.  The delay phase only
    couples to the difference coordinate, where the integrand is
    exp(-u^2 / (4 sigma_f^2)); its Fourier transform gives

        normalized rate = 1 - exp(-sigma_f^2 tau^2)

    i.e. unit visibility and Gaussian width s = 1 / (sqrt(2) sigma_f), with
    sigma_f the filter intensity standard deviation.  The pump width cancels
    between the two terms.
    """
    if setup.etalon.enabled:
        raise ConfigError("closed-form HOM oracle requires the etalon to be disabled")
    if setup.phase_matching.model is not PhaseMatchingModel.FLAT:
        raise ConfigError("closed-form HOM oracle requires flat phase matching")
    sigma_f = setup.filter.intensity_sigma
    return 1.0, 1.0 / (math.sqrt(2.0) * sigma_f)


def hom_closed_form(setup: OpticalSetup, tau) -> np.ndarray:
    """Normalized no-etalon coincidence rate 1 - V exp(-tau^2 / (2 s^2))."""
    visibility, width = hom_closed_form_params(setup)
    tau = np.asarray(tau, dtype=float)
    return 1.0 - visibility * np.exp(-tau**2 / (2.0 * width * width))


def etalon_impulse_train(etalon: EtalonSpec, n_pulses: int) -> list[tuple[float, complex]]:
    """Time-domain picture of the etalon: (delay m T, amplitude (1-R) R^m e^{i m dphi})."""
    if not etalon.enabled:
        raise ConfigError("impulse train requires an enabled etalon")
    r = etalon.reflectivity
    return [(m * etalon.round_trip_time,
             (1.0 - r) * r**m * cmath.exp(1j * m * etalon.tune_phase))
            for m in range(n_pulses)]


def geometric_intensity_sum(reflectivity: float) -> float:
    """Total transmitted intensity sum (1-R)^2 R^(2m) = (1-R)/(1+R)."""
    return (1.0 - reflectivity) / (1.0 + reflectivity)


def mean_transfer_intensity(etalon: EtalonSpec, center_frequency: float,
                            n_points: int = 1 << 16) -> float:
    """Numerical mean of |f_e|^2 over one free spectral range (Parseval check)."""
    fsr = etalon.free_spectral_range
    nu = (np.arange(n_points) + 0.5) / n_points * fsr
    return float(np.mean(np.abs(etalon_transfer(nu, etalon, center_frequency)) ** 2))


def brute_force_schemes(j: int, delta_phi: float, weights,
                        coherence_factor: float = 1.0) -> float:
    """Relative rate at delay index j by literal amplitude enumeration.

    For each scheme m the two interfering amplitudes are built explicitly:
    the first with weights[m], the second with weights[j-m] and a phase
    accumulated one round trip at a time.  Partial pump coherence mixes the
    coherent and incoherent scheme probabilities.  Deliberately independent of
    feynman.relative_rate, which this function arbitrates.
    """
    if j < 0:
        raise ConfigError(f"delay index must be >= 0, got {j}")
    if j > MAX_BRUTE_FORCE_INDEX:
        raise ConfigError(f"brute-force enumeration refuses j > {MAX_BRUTE_FORCE_INDEX}")
    if len(weights) < j + 1:
        raise ConfigError(f"need {j + 1} weights, got {len(weights)}")
    if not 0.0 <= coherence_factor <= 1.0:
        raise ConfigError(f"coherence factor must lie in [0, 1], got {coherence_factor}")

    step = cmath.exp(1j * delta_phi)
    coincident = 0.0
    incoherent = 0.0
    for m in range(j + 1):
        first = complex(weights[m])
        second = complex(weights[j - m])
        for _ in range(j - m):       # round trips of the second amplitude
            second *= step
        for _ in range(m):           # minus those of the first
            second /= step
        interfered = abs(first - second) ** 2
        separate = abs(first) ** 2 + abs(second) ** 2
        coincident += coherence_factor * interfered + (1.0 - coherence_factor) * separate
        incoherent += separate
    return coincident / incoherent


def high_r_reference_setup(delta_phi: float = 0.0) -> OpticalSetup:
    """Configuration in the regime where the firing-scheme model is exact.

    Near-unit mirror reflectivity and a pump much longer than the interesting
    delays, with the standard filter and etalon geometry; here the engine's
    feature signs must match the firing-scheme classifications.
    """
    return OpticalSetup(
        pump=PumpSpec(center_wavelength=393.0, duration_fwhm=20.0),
        phase_matching=PhaseMatchingSpec(model=PhaseMatchingModel.FLAT),
        filter=FilterSpec(center_wavelength=786.0, fwhm=10.0),
        etalon=etalon_from_geometry(spacing_um=100.0, incidence_angle=0.0,
                                    reflectivity=0.98, tune_phase=delta_phi),
        spdc_center_wavelength=786.0,
    )
