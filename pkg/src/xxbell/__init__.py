"""Thermal Bell nonlocality of the open XX chain with couplings sqrt(n (N - n))."""

from .operators import ChainSpec, build_field_hamiltonian, build_xx_hamiltonian, coupling_profile
from .spectral import EigenSystem, canonical_eigensystem_n4, eigendecompose
from .thermal import gibbs_state, ground_state_projector, partition_function
from .threshold import SearchConfig, ThresholdReport, bell_max_vs_temperature, field_sweep, threshold_temperature

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "EigenSystem",
    "SearchConfig",
    "ThresholdReport",
    "bell_max_vs_temperature",
    "build_field_hamiltonian",
    "build_xx_hamiltonian",
    "canonical_eigensystem_n4",
    "coupling_profile",
    "eigendecompose",
    "field_sweep",
    "gibbs_state",
    "ground_state_projector",
    "partition_function",
    "threshold_temperature",
]
