import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xxbell.operators import ChainSpec, build_field_hamiltonian, build_xx_hamiltonian
from xxbell.spectral import canonical_eigensystem_n4, eigendecompose
from xxbell.thermal import (
    check_density,
    gibbs_state,
    ground_state_projector,
    maximally_mixed,
    partition_function,
    purity,
)

SPECTRUM = [-4, -3, -3, -2, -1, -1, 0, 0, 0, 0, 1, 1, 2, 3, 3, 4]


def closed_form_z(beta):
    return 4 + 4 * np.cosh(3 * beta) + 4 * np.cosh(beta) + 2 * np.cosh(4 * beta) + 2 * np.cosh(2 * beta)


@pytest.mark.parametrize("beta", [0.1, 1.0, 5.0, 20.0])
def test_partition_function_closed_form(beta):
    assert partition_function(SPECTRUM, beta) == pytest.approx(closed_form_z(beta), rel=1e-10)


def test_partition_function_examples():
    assert partition_function(SPECTRUM, 1.0) == pytest.approx(112.5838, abs=1e-4)
    assert partition_function(SPECTRUM, 0.0) == 16.0
    assert partition_function([0.0], 3.7) == 1.0


@pytest.mark.parametrize("beta", [-1.0, float("nan"), float("inf")])
def test_partition_function_rejects_bad_beta(beta):
    with pytest.raises(ValueError):
        partition_function(SPECTRUM, beta)


@pytest.mark.parametrize("t", [0.0, -1.0, float("nan")])
def test_gibbs_state_rejects_bad_temperature(t):
    with pytest.raises(ValueError):
        gibbs_state(canonical_eigensystem_n4(0.0), t)


def test_high_temperature_is_maximally_mixed():
    rho = gibbs_state(eigendecompose(build_xx_hamiltonian(ChainSpec(4))), 1e9)
    assert np.abs(rho - maximally_mixed(4)).max() <= 1e-8


def test_low_temperature_is_ground_state():
    canon = canonical_eigensystem_n4(0.0)
    rho = gibbs_state(eigendecompose(build_xx_hamiltonian(ChainSpec(4))), 0.01)
    assert np.abs(rho - canon.projector(5)).max() <= 1e-8


def test_very_small_temperature_does_not_overflow():
    rho = gibbs_state(canonical_eigensystem_n4(0.0), 1e-3)
    assert np.all(np.isfinite(rho))
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("t", [0.05, 0.3, 1.0, 4.0])
def test_two_site_off_diagonal_entry(t):
    beta = 1.0 / t
    rho = gibbs_state(eigendecompose(build_xx_hamiltonian(ChainSpec(2))), t)
    z = 2 + 2 * np.cosh(beta)
    assert rho[1, 2] == pytest.approx(-np.sinh(beta) / z, abs=1e-14)
    assert rho[2, 1] == rho[1, 2]


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(2, 5),
    b=st.floats(-3, 3, allow_nan=False),
    t=st.floats(0.02, 50, allow_nan=False),
)
def test_gibbs_invariants(n, b, t):
    h = build_field_hamiltonian(ChainSpec(n, field=b))
    rho = gibbs_state(eigendecompose(h), t)
    assert abs(np.trace(rho) - 1) <= 1e-12
    assert np.array_equal(rho, rho.T)
    assert np.linalg.eigvalsh(rho).min() >= -1e-12
    assert np.abs(rho @ h - h @ rho).max() <= 1e-10


def test_basis_independence(rng):
    for _ in range(10):
        t, b = rng.uniform(0.05, 3.0), rng.uniform(0.0, 3.0)
        numeric = eigendecompose(build_field_hamiltonian(ChainSpec(4, field=b)))
        canon = canonical_eigensystem_n4(b)
        assert np.abs(gibbs_state(numeric, t) - gibbs_state(canon, t)).max() <= 1e-9


def test_purity_decreases_with_temperature():
    system = eigendecompose(build_xx_hamiltonian(ChainSpec(4)))
    values = [purity(gibbs_state(system, t)) for t in np.arange(1, 51) / 10]
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))


def test_ground_state_projectors():
    canon = canonical_eigensystem_n4(0.0)
    rho = ground_state_projector(eigendecompose(build_xx_hamiltonian(ChainSpec(4))))
    np.testing.assert_allclose(rho, canon.projector(5), atol=1e-12)

    half = ground_state_projector(eigendecompose(build_field_hamiltonian(ChainSpec(4, field=0.5))))
    assert np.linalg.matrix_rank(half, tol=1e-10) == 2
    assert np.trace(half) == pytest.approx(1.0, abs=1e-12)
    c = canonical_eigensystem_n4(0.5)
    np.testing.assert_allclose(half, 0.5 * (c.projector(5) + c.projector(11)), atol=1e-12)
    check_density(half)


def test_identity_hamiltonian_gives_maximally_mixed():
    system = eigendecompose(np.eye(8))
    np.testing.assert_allclose(ground_state_projector(system), maximally_mixed(3), atol=1e-15)
    np.testing.assert_allclose(gibbs_state(system, 0.3), maximally_mixed(3), atol=1e-15)
