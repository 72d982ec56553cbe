"""Entanglement of Gaussian states of coupled harmonic oscillator systems."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .gaussian import (  # noqa: F401
    GaussianState,
    QuadraticHamiltonian,
    SymplecticSpectrum,
    entropy,
    ground_state,
    local_scaling,
    log_negativity,
    mutual_information,
    partial_transpose,
    reduce,
    symplectic_spectrum,
    thermal_state,
)
