"""Correlation functions computed directly as traces against the state."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from ..errors import DimensionError
from ..operators import SIGMA_X, SIGMA_Z, measurement_derivative, measurement_operator, tensor_chain
from .expressions import BellExpression

# component axis order used by every correlation tensor: 0 -> x, 1 -> z
PAULI_XZ = np.stack([SIGMA_X, SIGMA_Z])


def n_sites_of(state: np.ndarray) -> int:
    state = np.asarray(state)
    if state.ndim != 2 or state.shape[0] != state.shape[1]:
        raise DimensionError(f"state must be a square matrix, got shape {state.shape}")
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionError(f"state dimension {dim} is not a power of two")
    return n


def _check_thetas(state: np.ndarray, thetas: Sequence[float]) -> np.ndarray:
    n = n_sites_of(state)
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (n,):
        raise DimensionError(f"expected {n} angles for a {n}-site state, got shape {thetas.shape}")
    return thetas


def correlation(state: np.ndarray, thetas: Sequence[float]) -> float:
    """``tr[rho (x) n_k . sigma]`` with n_k = (sin t_k, 0, cos t_k)."""
    thetas = _check_thetas(state, thetas)
    op = tensor_chain([measurement_operator(t) for t in thetas])
    # both factors symmetric, so the trace is an elementwise sum
    return float(np.sum(np.asarray(state) * op))


def correlation_gradient(state: np.ndarray, thetas: Sequence[float]) -> np.ndarray:
    """Partial derivatives of :func:`correlation` with respect to each angle."""
    thetas = _check_thetas(state, thetas)
    locals_ = [measurement_operator(t) for t in thetas]
    grad = np.empty(len(thetas))
    for k, t in enumerate(thetas):
        factors = list(locals_)
        factors[k] = measurement_derivative(t)
        grad[k] = np.sum(np.asarray(state) * tensor_chain(factors))
    return grad


def bell_quantity(state: np.ndarray, expr: BellExpression, settings: np.ndarray) -> float:
    """Signed sum of correlations over all setting tuples.

    ``settings[n, s]`` is the angle of setting ``s`` (0 or 1) at site ``n``.
    """
    n = n_sites_of(state)
    settings = np.asarray(settings, dtype=float)
    if expr.n_sites != n or settings.shape != (n, 2):
        raise DimensionError(
            f"expression for {expr.n_sites} sites, state for {n}, settings shape {settings.shape}"
        )
    total = 0.0
    for idx in itertools.product((0, 1), repeat=n):
        thetas = settings[np.arange(n), idx]
        total += expr.signs[idx] * correlation(state, thetas)
    return float(total)


def correlation_tensor(state: np.ndarray) -> np.ndarray:
    """Expectations ``tr[rho sigma_a1 (x) ... (x) sigma_aN]`` for a_k in {x, z}.

    Shape ``(2,) * N``; axis value 0 means sigma_x, 1 means sigma_z. Any
    x-z plane correlation is the multilinear form of this tensor with the
    vectors (sin t_k, cos t_k).
    """
    n = n_sites_of(state)
    # axes of t: (i_k..i_N, j_k..j_N, a_1..a_{k-1}); each pass consumes
    # i_k (axis 0) and j_k (axis m) against sigma_a[j, i] and appends a_k
    t = np.asarray(state, dtype=float).reshape((2,) * (2 * n))
    for m in range(n, 0, -1):
        t = np.tensordot(t, PAULI_XZ, axes=([0, m], [2, 1]))
    return t
