"""Partition functions and Gibbs states (Boltzmann constant = 1)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import XXBellError
from .spectral import EigenSystem

# relative window for "same energy" when grouping a degenerate ground level
DEGENERACY_TOL = 1e-9


def partition_function(eigenvalues: Sequence[float], beta: float) -> float:
    """``Z = sum_mu exp(-beta E_mu)``."""
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and nonnegative, got {beta!r}")
    e = np.asarray(eigenvalues, dtype=float)
    return float(np.exp(-beta * e).sum())


def boltzmann_weights(eigenvalues: Sequence[float], temperature: float) -> np.ndarray:
    """Normalized populations ``exp(-E/T)/Z``, computed relative to the
    ground energy so that very small T does not overflow."""
    if not np.isfinite(temperature) or temperature <= 0:
        raise ValueError(f"temperature must be finite and positive, got {temperature!r}")
    e = np.asarray(eigenvalues, dtype=float)
    w = np.exp(-(e - e.min()) / temperature)
    return w / w.sum()


def gibbs_state(eigensystem: EigenSystem, temperature: float) -> np.ndarray:
    """``rho(T) = sum_mu p_mu |phi_mu><phi_mu|`` for T > 0.

    Use :func:`ground_state_projector` for the T -> 0 limit.
    """
    p = boltzmann_weights(eigensystem.values, temperature)
    v = eigensystem.vectors
    rho = (v * p) @ v.T
    return 0.5 * (rho + rho.T)


def ground_state_projector(eigensystem: EigenSystem) -> np.ndarray:
    """Uniform mixture over the lowest energy level (trace 1)."""
    e = np.asarray(eigensystem.values)
    e0 = e.min()
    scale = max(1.0, np.abs(e).max())
    mask = e <= e0 + DEGENERACY_TOL * scale
    v = eigensystem.vectors[:, mask]
    rho = v @ v.T / mask.sum()
    return 0.5 * (rho + rho.T)


def pure_state(vector: np.ndarray) -> np.ndarray:
    """Density operator of a (not necessarily normalized) real vector."""
    v = np.asarray(vector, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("cannot normalize a zero or non-finite state vector")
    v = v / norm
    return np.outer(v, v)


def maximally_mixed(n_sites: int) -> np.ndarray:
    dim = 2**n_sites
    return np.eye(dim) / dim


def check_density(rho: np.ndarray, tol: float = 1e-12) -> None:
    """Raise if ``rho`` is not symmetric, unit trace and PSD within ``tol``."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise XXBellError(f"density operator must be square, got {rho.shape}")
    if np.abs(rho - rho.T).max() > tol:
        raise XXBellError("density operator is not symmetric")
    if abs(np.trace(rho) - 1.0) > tol:
        raise XXBellError(f"trace is {np.trace(rho)!r}, expected 1")
    lowest = np.linalg.eigvalsh(rho).min()
    if lowest < -tol:
        raise XXBellError(f"density operator has negative eigenvalue {lowest:.3e}")


def purity(rho: np.ndarray) -> float:
    return float(np.einsum("ij,ji->", rho, rho))
