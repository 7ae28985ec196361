import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xxbell.errors import DimensionError, InvalidChainError
from xxbell.operators import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Z,
    ChainSpec,
    basis_state,
    build_field_hamiltonian,
    build_xx_hamiltonian,
    coupling_profile,
    embed,
    measurement_derivative,
    measurement_operator,
    tensor_chain,
    total_sigma_z,
)

FOUR_SITE_SPECTRUM = [-4, -3, -3, -2, -1, -1, 0, 0, 0, 0, 1, 1, 2, 3, 3, 4]


@pytest.mark.parametrize(
    "n, expected",
    [(4, [np.sqrt(3), 2.0, np.sqrt(3)]), (2, [1.0]), (3, [np.sqrt(2), np.sqrt(2)])],
)
def test_coupling_profile(n, expected):
    assert coupling_profile(n) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n", [1, 0, -3, 2.5])
def test_coupling_profile_rejects_short_chains(n):
    with pytest.raises(InvalidChainError):
        coupling_profile(n)


def test_chain_spec_defaults_and_validation():
    spec = ChainSpec(5)
    assert spec.couplings == tuple(coupling_profile(5))
    assert spec.dim == 32
    with pytest.raises(InvalidChainError):
        ChainSpec(4, couplings=(1.0, 1.0))
    with pytest.raises(InvalidChainError):
        ChainSpec(3, couplings=(1.0, -1.0))
    with pytest.raises(InvalidChainError):
        ChainSpec(3, field=float("nan"))
    with pytest.raises(InvalidChainError):
        ChainSpec(1)


def test_two_site_hamiltonian_is_single_hop():
    h = build_xx_hamiltonian(ChainSpec(2))
    expected = np.zeros((4, 4))
    expected[1, 2] = expected[2, 1] = 1.0
    np.testing.assert_array_equal(h, expected)


def test_hopping_form_matches_pauli_sum():
    # s+ s- + s- s+ = (sx sx + sy sy) / 2; the sy sy part is real
    spec = ChainSpec(4)
    sy_sy = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float)
    h = np.zeros((16, 16))
    for bond, j in enumerate(spec.couplings):
        left = [IDENTITY_2] * bond
        right = [IDENTITY_2] * (4 - bond - 2)
        xx = tensor_chain(left + [SIGMA_X, SIGMA_X] + right)
        yy = np.kron(np.kron(np.eye(2**bond), sy_sy), np.eye(2 ** (4 - bond - 2)))
        h += 0.5 * j * (xx + yy)
    np.testing.assert_allclose(build_xx_hamiltonian(spec), h, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_xx_hamiltonian_exactly_symmetric(n):
    h = build_xx_hamiltonian(ChainSpec(n))
    assert np.array_equal(h, h.T)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_all_zero_state_is_annihilated(n):
    h = build_xx_hamiltonian(ChainSpec(n))
    np.testing.assert_array_equal(h @ basis_state("0" * n), np.zeros(2**n))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 6), b=st.floats(-5, 5, allow_nan=False))
def test_hamiltonian_conserves_excitation_number(n, b):
    h = build_field_hamiltonian(ChainSpec(n, field=b))
    sz = total_sigma_z(n)
    assert np.abs(h @ sz - sz @ h).max() <= 1e-12


def test_four_site_spectrum():
    values = np.linalg.eigvalsh(build_xx_hamiltonian(ChainSpec(4)))
    np.testing.assert_allclose(np.sort(values), FOUR_SITE_SPECTRUM, atol=1e-10)


def test_field_diagonal_entries():
    h = build_field_hamiltonian(ChainSpec(4, field=1.0))
    assert h[0, 0] == 4.0
    assert h[15, 15] == -4.0
    np.testing.assert_array_equal(build_field_hamiltonian(ChainSpec(4)), build_xx_hamiltonian(ChainSpec(4)))


def test_field_term_equals_embedded_sigma_z_sum():
    spec = ChainSpec(3, field=0.7)
    zsum = sum(embed(SIGMA_Z, k, 3) for k in range(3))
    np.testing.assert_allclose(build_field_hamiltonian(spec) - build_xx_hamiltonian(spec), 0.7 * zsum)


@pytest.mark.parametrize(
    "theta, expected",
    [(0.0, SIGMA_Z), (np.pi / 2, SIGMA_X), (np.pi / 4, (SIGMA_X + SIGMA_Z) / np.sqrt(2))],
)
def test_measurement_operator_examples(theta, expected):
    np.testing.assert_allclose(measurement_operator(theta), expected, atol=1e-15)


def test_measurement_operator_is_involutive(rng):
    for theta in rng.uniform(-10, 10, 100):
        m = measurement_operator(theta)
        assert np.abs(m @ m - np.eye(2)).max() <= 1e-14


def test_measurement_derivative_matches_finite_difference(rng):
    h = 1e-6
    for theta in rng.uniform(0, 2 * np.pi, 10):
        fd = (measurement_operator(theta + h) - measurement_operator(theta - h)) / (2 * h)
        np.testing.assert_allclose(measurement_derivative(theta), fd, atol=1e-9)


def test_measurement_operator_rejects_non_finite():
    with pytest.raises(ValueError):
        measurement_operator(float("inf"))


def test_tensor_chain_examples():
    np.testing.assert_array_equal(tensor_chain([SIGMA_Z, SIGMA_Z]), np.diag([1.0, -1, -1, 1]))
    np.testing.assert_array_equal(tensor_chain([IDENTITY_2] * 4), np.eye(16))
    with pytest.raises(DimensionError):
        tensor_chain([SIGMA_Z, np.eye(3)])
    with pytest.raises(DimensionError):
        tensor_chain([])


def test_bit_flip_example():
    # sx sx maps |00> to |11>
    out = tensor_chain([SIGMA_X, SIGMA_X]) @ basis_state("00")
    np.testing.assert_array_equal(out, basis_state("11"))


def test_site_one_is_most_significant_bit():
    z1 = embed(SIGMA_Z, 0, 3)
    assert basis_state("100") @ z1 @ basis_state("100") == -1.0
    assert basis_state("011") @ z1 @ basis_state("011") == 1.0
