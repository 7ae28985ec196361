"""Eigendecompositions: numeric for any chain, hard-coded for four sites."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConvergenceError, DimensionError, XXBellError
from .operators import ChainSpec, basis_state, build_field_hamiltonian

MAX_DIM = 2**12


class EigenSource(str, Enum):
    NUMERIC = "numeric"
    CANONICAL = "canonical"


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues with matching unit eigenvectors stored as columns.

    Numeric systems are sorted ascending. The canonical four-site system keeps
    the conventional state labels 0..15, so ``values[mu]`` and
    ``vectors[:, mu]`` belong to state ``mu`` and are not sorted.
    """

    values: np.ndarray
    vectors: np.ndarray
    source: EigenSource = EigenSource.NUMERIC

    def __post_init__(self):
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def pairs(self) -> list[tuple[float, np.ndarray]]:
        return [(float(e), self.vectors[:, i]) for i, e in enumerate(self.values)]

    def vector(self, index: int) -> np.ndarray:
        return self.vectors[:, index]

    def projector(self, index: int) -> np.ndarray:
        v = self.vectors[:, index]
        return np.outer(v, v)

    def residuals(self, op: np.ndarray) -> np.ndarray:
        """Norm of ``op v - E v`` for each pair."""
        return np.linalg.norm(op @ self.vectors - self.vectors * self.values, axis=0)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component positive; earliest index wins near-ties
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mags = np.abs(col)
        lead = int(np.argmax(mags >= mags.max() - 1e-12))
        if col[lead] < 0:
            out[:, k] = -col
    return out


def eigendecompose(op: np.ndarray) -> EigenSystem:
    """Full spectrum of a real symmetric operator, ascending."""
    op = np.asarray(op, dtype=float)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {op.shape}")
    if op.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {op.shape[0]} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(op)):
        raise XXBellError("operator contains non-finite entries")
    asym = np.abs(op - op.T).max(initial=0.0)
    if asym > 1e-12 * max(1.0, np.abs(op).max(initial=0.0)):
        raise DimensionError(f"operator is not symmetric (max asymmetry {asym:.3e})")
    values, vectors = _block_eigh(op)
    return EigenSystem(values, _fix_signs(vectors), EigenSource.NUMERIC)


def _sectors(op: np.ndarray) -> list[np.ndarray] | None:
    """Index groups by excitation number, if ``op`` has no entries between
    groups; otherwise None."""
    dim = op.shape[0]
    n = dim.bit_length() - 1
    if 2**n != dim:
        return None
    weight = np.array([bin(i).count("1") for i in range(dim)])
    if np.any(op[weight[:, None] != weight[None, :]] != 0.0):
        return None
    return [np.flatnonzero(weight == w) for w in range(n + 1)]


def _eigh(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(block)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"symmetric eigensolver did not converge for a block of dim {block.shape[0]}: {exc}"
        ) from exc


def _block_eigh(op: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # number-conserving operators are solved sector by sector so that each
    # eigenvector has an exact excitation number
    sectors = _sectors(op)
    if sectors is None:
        return _eigh(op)
    dim = op.shape[0]
    values = np.empty(dim)
    vectors = np.zeros((dim, dim))
    col = 0
    for idx in sectors:
        w, v = _eigh(op[np.ix_(idx, idx)])
        values[col:col + len(idx)] = w
        vectors[idx, col:col + len(idx)] = v
        col += len(idx)
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


_S3 = np.sqrt(3.0)
_R8 = 2.0 * np.sqrt(2.0)

# (zero-field energy, excitation number, [(amplitude, bitstring), ...])
_CANONICAL_N4 = [
    (0.0, 0, [(1.0, "0000")]),
    (-3.0, 1, [(-1 / _R8, "1000"), (_S3 / _R8, "0100"), (-_S3 / _R8, "0010"), (1 / _R8, "0001")]),
    (3.0, 1, [(1 / _R8, "1000"), (_S3 / _R8, "0100"), (_S3 / _R8, "0010"), (1 / _R8, "0001")]),
    (-1.0, 1, [(_S3 / _R8, "1000"), (-1 / _R8, "0100"), (-1 / _R8, "0010"), (_S3 / _R8, "0001")]),
    (1.0, 1, [(-_S3 / _R8, "1000"), (-1 / _R8, "0100"), (1 / _R8, "0010"), (_S3 / _R8, "0001")]),
    (-4.0, 2, [(0.25, "1100"), (-0.5, "1010"), (_S3 / 4, "1001"),
               (_S3 / 4, "0110"), (-0.5, "0101"), (0.25, "0011")]),
    (-2.0, 2, [(-0.5, "1100"), (0.5, "1010"), (-0.5, "0101"), (0.5, "0011")]),
    (0.0, 2, [(np.sqrt(0.3), "1100"), (-2 / np.sqrt(10), "1001"), (np.sqrt(0.3), "0011")]),
    (0.0, 2, [(-_S3 / (2 * np.sqrt(10)), "1100"), (-3 / (2 * np.sqrt(10)), "1001"),
              (5 / (2 * np.sqrt(10)), "0110"), (-_S3 / (2 * np.sqrt(10)), "0011")]),
    (2.0, 2, [(-0.5, "1100"), (-0.5, "1010"), (0.5, "0101"), (0.5, "0011")]),
    (4.0, 2, [(0.25, "1100"), (0.5, "1010"), (_S3 / 4, "1001"),
              (_S3 / 4, "0110"), (0.5, "0101"), (0.25, "0011")]),
    (-3.0, 3, [(-1 / _R8, "1110"), (_S3 / _R8, "1101"), (-_S3 / _R8, "1011"), (1 / _R8, "0111")]),
    (3.0, 3, [(1 / _R8, "1110"), (_S3 / _R8, "1101"), (_S3 / _R8, "1011"), (1 / _R8, "0111")]),
    (-1.0, 3, [(_S3 / _R8, "1110"), (-1 / _R8, "1101"), (-1 / _R8, "1011"), (_S3 / _R8, "0111")]),
    (1.0, 3, [(-_S3 / _R8, "1110"), (-1 / _R8, "1101"), (1 / _R8, "1011"), (_S3 / _R8, "0111")]),
    (0.0, 4, [(1.0, "1111")]),
]


def canonical_energies_n4(field: float = 0.0) -> np.ndarray:
    """Closed-form energies of the sixteen labelled four-site states."""
    return np.array([e + field * (4 - 2 * w) for e, w, _ in _CANONICAL_N4])


def canonical_eigensystem_n4(field: float = 0.0) -> EigenSystem:
    """Hard-coded four-site eigenbasis, in label order 0..15.

    Each vector is checked against the field Hamiltonian on construction;
    a residual above 1e-12 means the table above was mistyped.
    """
    vectors = np.zeros((16, 16))
    for mu, (_, _, terms) in enumerate(_CANONICAL_N4):
        for amp, bits in terms:
            vectors[:, mu] += amp * basis_state(bits)
    system = EigenSystem(canonical_energies_n4(field), vectors, EigenSource.CANONICAL)
    h = build_field_hamiltonian(ChainSpec(4, field=field))
    scale = max(1.0, abs(field))
    bad = np.flatnonzero(system.residuals(h) > 1e-12 * scale)
    if bad.size:
        raise XXBellError(f"canonical eigenvectors {bad.tolist()} fail the eigen-equation")
    gram = vectors.T @ vectors
    if np.abs(gram - np.eye(16)).max() > 1e-12:
        raise XXBellError("canonical eigenvectors are not orthonormal")
    return system
