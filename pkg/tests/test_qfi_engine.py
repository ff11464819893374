import numpy as np
import pytest
from conftest import random_mixed_state, random_pure_state
from pydantic import ValidationError
from scipy.stats import unitary_group

from metrobound.core.errors import DomainError
from metrobound.schemas.operators import OperatorMatrix, Representation
from metrobound.schemas.qfi import QfiMethod, QfiResult
from metrobound.schemas.states import OptimalStateParams, QuantumState, StateKind
from metrobound.services.collective_ops import collective_power
from metrobound.services.qfi_engine import (
    noisy_qfi_factor,
    qfi_general,
    qfi_noisy_closed,
    qfi_phi_closed,
    qfi_pure,
    qfi_upper_bound,
    variance,
)
from metrobound.services.separability_bounds import cent
from metrobound.services.state_factory import (
    ghz_state,
    noisy_state,
    optimal_state,
    random_symmetric_state,
)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_general_matches_pure_on_pure_states(rng, n, k):
    op = collective_power("x", n, k)
    for _ in range(12):
        psi = random_pure_state(rng, n)
        pure = qfi_pure(psi, op).value
        general = qfi_general(psi, op).value
        assert general == pytest.approx(pure, rel=1e-8, abs=1e-9)


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_noisy_closed_form_matches_explicit(rng, n, k):
    op = collective_power("z", n, k)
    for _ in range(4):
        # (λ1, λ2) uniforme no triângulo λ1 + λ2 ≤ 1
        low, high = sorted(float(u) for u in rng.uniform(0.0, 1.0, 2))
        eta = float(rng.uniform(0.05, 1.0))
        params = OptimalStateParams.from_pair(low, high - low)
        rho = noisy_state(optimal_state(params, "z", n), eta)
        explicit = qfi_general(rho, op).value
        closed = qfi_noisy_closed(params, eta, n, k).value
        assert explicit == pytest.approx(closed, rel=1e-8, abs=1e-8)


def test_qfi_is_convex(rng):
    n = 3
    op = collective_power("z", n, 2)
    for _ in range(100):
        r1 = random_mixed_state(rng, n)
        r2 = random_mixed_state(rng, n)
        p = float(rng.uniform())
        mix = QuantumState(
            kind=StateKind.DENSITY,
            data=p * r1.data + (1 - p) * r2.data,
            representation=Representation.FULL,
            n_qubits=n,
        )
        lhs = qfi_general(mix, op).value
        rhs = p * qfi_general(r1, op).value + (1 - p) * qfi_general(r2, op).value
        assert lhs <= rhs + 1e-9


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pure_qfi_below_cent(k):
    n = 8
    op = collective_power("z", n, k, Representation.DICKE)
    for seed in range(20):
        psi = random_symmetric_state(n, seed)
        assert qfi_pure(psi, op).value <= cent(n, k) + 1e-9
    assert qfi_upper_bound(op) == pytest.approx(cent(n, k))


def test_phi_closed_form_ghz():
    params = OptimalStateParams.from_pair(0.5, 0.5)
    assert qfi_phi_closed(params, 4, 1).value == pytest.approx(16.0)
    # GHZ é autoestado de J_z²
    assert qfi_phi_closed(params, 4, 2).value == pytest.approx(0.0)


def test_noisy_factor_limits():
    assert noisy_qfi_factor(1.0, 6) == 1.0
    assert noisy_qfi_factor(0.0, 6) == 0.0
    # η² 2^{N−1} / (1 + η(2^{N−1} − 1)) com N = 3, η = 1/2
    assert noisy_qfi_factor(0.5, 3) == pytest.approx(0.25 * 4 / (1 + 0.5 * 3))
    with pytest.raises(DomainError):
        noisy_qfi_factor(1.5, 4)


def test_noisy_factor_large_n_does_not_overflow():
    assert noisy_qfi_factor(0.5, 2000) == pytest.approx(0.5)


def test_incompatible_representation():
    psi = random_symmetric_state(3, 1)
    op = collective_power("z", 3, 1, Representation.FULL)
    with pytest.raises(DomainError):
        qfi_pure(psi, op)


def test_pure_only_for_pure_states():
    rho = noisy_state(ghz_state(2), 0.5)
    with pytest.raises(DomainError):
        qfi_pure(rho, collective_power("z", 2, 1))


def test_variance_of_mixed_state():
    rho = noisy_state(ghz_state(2), 0.0)
    # estado maximamente misto: Var(J_z) = N/4
    assert variance(rho, collective_power("z", 2, 1)) == pytest.approx(0.5)


def test_qfi_result_clamps_tiny_negatives():
    assert QfiResult(value=-1e-12, method=QfiMethod.EIGEN).value == 0.0
    with pytest.raises(ValidationError):
        QfiResult(value=-1e-3, method=QfiMethod.EIGEN)


@pytest.mark.parametrize("k", [1, 2])
def test_qfi_is_unitarily_covariant(rng, k):
    n = 3
    op = collective_power("y", n, k)
    for _ in range(5):
        rho = random_mixed_state(rng, n)
        u = unitary_group.rvs(2**n, random_state=rng)
        rotated = QuantumState(
            kind=StateKind.DENSITY,
            data=u @ rho.data @ u.conj().T,
            representation=Representation.FULL,
            n_qubits=n,
        )
        rotated_op = OperatorMatrix(
            entries=u @ op.entries @ u.conj().T,
            representation=Representation.FULL,
            n_qubits=n,
        )
        expected = qfi_general(rho, op).value
        assert qfi_general(rotated, rotated_op).value == pytest.approx(
            expected, rel=1e-8, abs=1e-9
        )


def test_noisy_ghz_spectrum():
    rho = noisy_state(ghz_state(4), 0.5)
    evals = np.linalg.eigvalsh(rho.data)
    expected = np.array([0.5 / 16] * 15 + [0.5 + 0.5 / 16])
    assert np.allclose(evals, expected, atol=1e-12)
