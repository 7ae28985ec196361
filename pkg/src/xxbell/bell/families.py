"""Real superpositions within one excitation sector of four sites.

Amplitudes use nested spherical coordinates: for alphas a_1..a_K the
K + 1 amplitudes are cos a_1, sin a_1 cos a_2, ..., sin a_1 ... sin a_K.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional, Sequence

import numpy as np

from ..operators import basis_state, tensor_chain
from .correlations import PAULI_XZ
from .expressions import BellExpression, ZB4
from .optimize import (
    TWO_PI,
    BellObjective,
    OptimizationReport,
    OptimizerConfig,
    gradient_ascent,
    initial_points,
)


class StateFamily(str, Enum):
    SINGLE_EXCITATION = "single-excitation"
    TRIPLE_EXCITATION = "triple-excitation"
    DOUBLE_EXCITATION = "double-excitation"

    @property
    def bitstrings(self) -> tuple[str, ...]:
        return _BITSTRINGS[self]

    @property
    def n_alphas(self) -> int:
        return len(self.bitstrings) - 1


_BITSTRINGS = {
    StateFamily.SINGLE_EXCITATION: ("1000", "0100", "0010", "0001"),
    StateFamily.TRIPLE_EXCITATION: ("1110", "1101", "1011", "0111"),
    StateFamily.DOUBLE_EXCITATION: ("1100", "1010", "1001", "0110", "0101", "0011"),
}


def spherical_amplitudes(alphas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Amplitudes and their Jacobian for a batch of alpha vectors.

    Returns ``amps`` of shape (batch, K+1) and ``jac`` of shape
    (batch, K+1, K) with ``jac[z, j, i] = d amps[z, j] / d alphas[z, i]``.
    """
    alphas = np.atleast_2d(np.asarray(alphas, dtype=float))
    z, k = alphas.shape
    s, c = np.sin(alphas), np.cos(alphas)
    # factors[z, j, i]: contribution of alpha_i to amplitude j
    factors = np.ones((z, k + 1, k))
    dfactors = np.zeros((z, k + 1, k))
    for j in range(k + 1):
        for i in range(min(j, k)):
            factors[:, j, i] = s[:, i]
            dfactors[:, j, i] = c[:, i]
        if j < k:
            factors[:, j, j] = c[:, j]
            dfactors[:, j, j] = -s[:, j]
    amps = factors.prod(axis=2)
    jac = np.zeros((z, k + 1, k))
    for i in range(k):
        others = np.delete(factors, i, axis=2).prod(axis=2)
        jac[:, :, i] = others * dfactors[:, :, i]
    return amps, jac


def alphas_from_amplitudes(amplitudes: Sequence[float]) -> np.ndarray:
    """Inverse of the spherical parametrization for a unit real vector."""
    a = np.asarray(amplitudes, dtype=float)
    a = a / np.linalg.norm(a)
    k = len(a) - 1
    alphas = np.zeros(k)
    for j in range(k - 1):
        r = np.linalg.norm(a[j:])
        alphas[j] = np.arccos(np.clip(a[j] / r, -1.0, 1.0)) if r > 0 else 0.0
    alphas[k - 1] = np.arctan2(a[k], a[k - 1])
    return alphas


def family_basis(family: StateFamily) -> np.ndarray:
    """Rows are the computational basis vectors spanned by the family."""
    return np.array([basis_state(b) for b in StateFamily(family).bitstrings])


def family_vector(family: StateFamily, alphas: Sequence[float]) -> np.ndarray:
    family = StateFamily(family)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (family.n_alphas,):
        raise ValueError(
            f"{family.value} takes {family.n_alphas} alphas, got shape {alphas.shape}"
        )
    amps, _ = spherical_amplitudes(alphas)
    return amps[0] @ family_basis(family)


def parametrized_state(family: StateFamily, alphas: Sequence[float]) -> np.ndarray:
    """Pure-state density operator of the family member at ``alphas``."""
    v = family_vector(family, alphas)
    return np.outer(v, v)


def _pauli_strings(n_sites: int) -> np.ndarray:
    """All x/z Pauli strings, shape (2**n, 2**n, 2**n), index order as in
    the correlation tensor."""
    return np.stack(
        [tensor_chain([PAULI_XZ[a] for a in idx]) for idx in np.ndindex(*(2,) * n_sites)]
    )


def maximize_bell_over_state_family(
    family: StateFamily,
    config: OptimizerConfig = OptimizerConfig(),
    expr: BellExpression = ZB4,
    warm: Optional[np.ndarray] = None,
) -> OptimizationReport:
    """Joint ascent over the family's alphas and the measurement angles.

    The decision vector of each start is ``[alphas..., angles...]``.
    """
    family = StateFamily(family)
    n = expr.n_sites
    k = family.n_alphas
    basis = family_basis(family)
    strings = _pauli_strings(n)
    objective = BellObjective(expr)

    def fg(x):
        alphas, angles = x[:, :k], x[:, k:]
        amps, jac = spherical_amplitudes(alphas)
        psi = amps @ basis
        tensor = np.einsum("zi,cij,zj->zc", psi, strings, psi).reshape((-1,) + (2,) * n)
        value, grad_angles = objective.value_and_grad(angles, tensor)
        w = objective.weights(angles).reshape(len(x), -1)
        grad_psi = 2.0 * np.einsum("zc,cij,zj->zi", w, strings, psi)
        grad_alphas = np.einsum("zj,zjk->zk", grad_psi @ basis.T, jac)
        return value, np.hstack([grad_alphas, grad_angles])

    x0 = initial_points(config, k + 2 * n, warm)
    res = gradient_ascent(
        fg, x0, gtol=config.gtol, max_iter=config.max_iter, stall_gtol=config.stall_gtol
    )
    best = int(np.argmax(res.values))
    xb = res.x[best]
    return OptimizationReport(
        best_value=float(res.values[best]),
        best_settings=np.mod(xb[k:], TWO_PI).reshape(n, 2).copy(),
        starts=len(x0),
        converged_starts=int(res.converged.sum()),
        iterations_total=res.iterations,
        start_values=res.values.copy(),
        best_alphas=xb[:k].copy(),
    )
