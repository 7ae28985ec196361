"""Dense real operators for the open XX chain.

Basis convention: computational basis states are indexed by bitstrings
with site 1 as the most significant bit, and bit 0 is the sigma_z = +1
state. All operators are real symmetric numpy arrays; measurement
directions live in the x-z plane so no complex arithmetic is needed.

The hopping form ``J (s+ s- + s- s+)`` fixes the energy scale. The
alternative ``2 J (sx sx + sy sy)`` prefactor is 4x larger and does not
give the integer spectrum -4..4 for four sites, so it is not used.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvalidChainError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
IDENTITY_2 = np.eye(2)
# sigma^+ = |0><1| raises toward the sigma_z = +1 state
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])
SIGMA_MINUS = SIGMA_PLUS.T.copy()

for _m in (SIGMA_X, SIGMA_Z, IDENTITY_2, SIGMA_PLUS, SIGMA_MINUS):
    _m.setflags(write=False)


def coupling_profile(n_sites: int) -> list[float]:
    """Return the bond strengths ``sqrt(n (N - n))`` for n = 1..N-1."""
    if int(n_sites) != n_sites or n_sites < 2:
        raise InvalidChainError(f"a chain needs at least 2 sites, got {n_sites!r}")
    n_sites = int(n_sites)
    return [float(np.sqrt(n * (n_sites - n))) for n in range(1, n_sites)]


@dataclass(frozen=True)
class ChainSpec:
    """Physical model: chain length, bond couplings and uniform z field.

    ``couplings`` defaults to :func:`coupling_profile` when omitted.
    """

    n_sites: int
    couplings: tuple[float, ...] = dataclasses.field(default=())
    field: float = 0.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise InvalidChainError(f"a chain needs at least 2 sites, got {self.n_sites!r}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        if not self.couplings:
            object.__setattr__(self, "couplings", tuple(coupling_profile(self.n_sites)))
        else:
            object.__setattr__(self, "couplings", tuple(float(j) for j in self.couplings))
        if len(self.couplings) != self.n_sites - 1:
            raise InvalidChainError(
                f"expected {self.n_sites - 1} couplings for {self.n_sites} sites, "
                f"got {len(self.couplings)}"
            )
        if any(not np.isfinite(j) or j < 0 for j in self.couplings):
            raise InvalidChainError(f"couplings must be finite and nonnegative: {self.couplings}")
        if not np.isfinite(self.field):
            raise InvalidChainError(f"field must be finite, got {self.field!r}")
        object.__setattr__(self, "field", float(self.field))

    @property
    def dim(self) -> int:
        return 2**self.n_sites

    def with_field(self, field: float) -> "ChainSpec":
        return ChainSpec(self.n_sites, self.couplings, field)


def embed(local: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Place a 2x2 operator on ``site`` (0-based) of an ``n_sites`` chain."""
    if not 0 <= site < n_sites:
        raise DimensionError(f"site {site} outside chain of length {n_sites}")
    factors = [IDENTITY_2] * n_sites
    factors[site] = local
    return tensor_chain(factors)


def tensor_chain(locals_: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of single-site operators in site order."""
    if len(locals_) == 0:
        raise DimensionError("need at least one local operator")
    for op in locals_:
        if np.shape(op) != (2, 2):
            raise DimensionError(f"local operators must be 2x2, got shape {np.shape(op)}")
    return reduce(np.kron, (np.asarray(op, dtype=float) for op in locals_))


def excitation_numbers(n_sites: int) -> np.ndarray:
    """Number of 1-bits of each computational basis index."""
    idx = np.arange(2**n_sites)
    return np.array([bin(i).count("1") for i in idx])


def build_xx_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Hopping Hamiltonian ``sum_n J_n (s+_n s-_{n+1} + s-_n s+_{n+1})``.

    Entries are filled directly from bit flips, so the result is exactly
    symmetric and has no roundoff from matrix products.
    """
    n = spec.n_sites
    dim = spec.dim
    h = np.zeros((dim, dim))
    for bond, j in enumerate(spec.couplings):
        # site k occupies bit (n - 1 - k)
        hi_bit = 1 << (n - 1 - bond)
        lo_bit = 1 << (n - 2 - bond)
        mask = hi_bit | lo_bit
        for s in range(dim):
            pair = s & mask
            if pair == hi_bit or pair == lo_bit:
                h[s ^ mask, s] = j
    return h


def total_sigma_z(n_sites: int) -> np.ndarray:
    """Diagonal operator ``sum_n sigma_z^(n)``."""
    return np.diag((n_sites - 2 * excitation_numbers(n_sites)).astype(float))


def build_field_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """XX Hamiltonian plus the uniform term ``B sum_n sigma_z^(n)``."""
    h = build_xx_hamiltonian(spec)
    if spec.field != 0.0:
        h[np.diag_indices_from(h)] += spec.field * (spec.n_sites - 2 * excitation_numbers(spec.n_sites))
    return h


def measurement_operator(theta: float) -> np.ndarray:
    """Spin observable along ``(sin theta, 0, cos theta)``."""
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [s, -c]])


def measurement_derivative(theta: float) -> np.ndarray:
    """d/dtheta of :func:`measurement_operator`."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[-s, c], [c, s]])


def basis_state(bits: str) -> np.ndarray:
    """Unit vector for a bitstring such as ``"0110"``."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    v = np.zeros(2 ** len(bits))
    v[int(bits, 2)] = 1.0
    return v
