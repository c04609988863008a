"""Parity-dependent vibronic dynamics of a two-level ion coupled to two
vibrational modes: exact closed forms, fluctuation-averaged observables,
imperfect-preparation mixtures, and independent numerical propagators that
cross-check every formula."""

from .states import (
    PhysicalParams,
    TwoModeState,
    VibronicState,
    inner_product,
    make_fock_pair,
)
from .dynamics import (
    ParityTimes,
    RabiSpectrum,
    Su2CoherentSpec,
    binary_entropy,
    build_su2_state,
    evolve_closed_form,
    ground_probability,
    parity_times,
    rabi_spectrum,
    symmetric_binomial_amplitudes,
    vibrational_entropy,
    von_neumann_entropy,
)
from .fluctuations import (
    FluctuationModel,
    MonteCarloEstimate,
    averaged_cosine,
    averaged_ground_probability,
    gamma_kernel,
    gaussian_kernel,
    monte_carlo_cosine,
    parity_delta,
)
from .preparation import (
    PreparationModel,
    averaged_ground_probability_mixed,
    delta_from_efficiency,
    efficiency,
    parity_delta_mixed,
)
from .propagators import (
    EffectiveHamiltonian,
    LambDickeHamiltonian,
    PulseAreaSample,
    TruncationError,
    ground_population_trajectory,
    propagate_effective,
    propagate_lamb_dicke,
    sample_pulse_area,
)

__version__ = "0.1.0"

__all__ = [
    "EffectiveHamiltonian",
    "FluctuationModel",
    "LambDickeHamiltonian",
    "MonteCarloEstimate",
    "ParityTimes",
    "PhysicalParams",
    "PreparationModel",
    "PulseAreaSample",
    "RabiSpectrum",
    "Su2CoherentSpec",
    "TruncationError",
    "TwoModeState",
    "VibronicState",
    "averaged_cosine",
    "averaged_ground_probability",
    "averaged_ground_probability_mixed",
    "binary_entropy",
    "build_su2_state",
    "delta_from_efficiency",
    "efficiency",
    "evolve_closed_form",
    "gamma_kernel",
    "gaussian_kernel",
    "ground_population_trajectory",
    "ground_probability",
    "inner_product",
    "make_fock_pair",
    "monte_carlo_cosine",
    "parity_delta",
    "parity_delta_mixed",
    "parity_times",
    "propagate_effective",
    "propagate_lamb_dicke",
    "rabi_spectrum",
    "sample_pulse_area",
    "symmetric_binomial_amplitudes",
    "vibrational_entropy",
    "von_neumann_entropy",
]
