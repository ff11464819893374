import numpy as np
import pytest
from scipy.stats import unitary_group

from metrobound.core.errors import DomainError
from metrobound.schemas.operators import Representation
from metrobound.schemas.states import OptimalStateParams, StateKind
from metrobound.services.collective_ops import build_collective, collective_power
from metrobound.services.qfi_engine import qfi_pure
from metrobound.services.separability_bounds import cent
from metrobound.services.state_factory import (
    aligned_product,
    dicke_isometry,
    dicke_state,
    expectation,
    ghz_state,
    noisy_state,
    optimal_lambda_state,
    optimal_state,
    product_state,
    random_symmetric_batch,
    random_symmetric_state,
    singlet_state,
    singlet_subspace_dimension,
)


@pytest.mark.parametrize("n", [2, 4, 6])
@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_singlet_is_annihilated_by_collective_operators(n, axis):
    singlet = singlet_state(n)
    j = build_collective(axis, n).entries
    assert np.linalg.norm(j @ singlet.data) < 1e-12


def test_singlet_n2_is_the_usual_singlet():
    vec = singlet_state(2).data
    assert np.allclose(vec, np.array([0, 1, -1, 0]) / np.sqrt(2))


def test_singlet_n6_has_twenty_terms():
    vec = singlet_state(6).data
    assert np.count_nonzero(np.abs(vec) > 1e-14) == 20


@pytest.mark.parametrize("n", [2, 4, 6])
def test_singlet_invariant_under_local_unitaries(n):
    singlet = singlet_state(n).data
    for u in unitary_group.rvs(2, size=20, random_state=7 + n):
        u_all = u
        for _ in range(n - 1):
            u_all = np.kron(u_all, u)
        # invariante a menos de fase global
        overlap = abs(np.vdot(singlet, u_all @ singlet))
        assert overlap == pytest.approx(1.0, abs=1e-10)


def test_singlet_n6_matches_explicit_expansion():
    sixths = {
        "000111": 3,
        "001011": -1,
        "001101": -1,
        "001110": -1,
        "010011": -1,
        "010101": -1,
        "010110": -1,
        "011001": 1,
        "011010": 1,
        "011100": 1,
        "100011": -1,
        "100101": -1,
        "100110": -1,
        "101001": 1,
        "101010": 1,
        "101100": 1,
        "110001": 1,
        "110010": 1,
        "110100": 1,
        "111000": -3,
    }
    expected = np.zeros(64)
    for bits, coef in sixths.items():
        expected[int(bits, 2)] = coef / 6
    assert np.allclose(singlet_state(6).data, expected, atol=1e-14)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_singlet_orthogonal_to_aligned_products(n, rng):
    singlet = singlet_state(n).data
    for _ in range(10):
        direction = rng.standard_normal(3)
        axis = tuple(direction / np.linalg.norm(direction))
        for which in (+1, -1):
            aligned = aligned_product(which, axis, n)
            assert abs(np.vdot(aligned, singlet)) < 1e-12


@pytest.mark.parametrize("n,expected", [(2, 1), (4, 2), (6, 5), (8, 14), (5, 0)])
def test_singlet_subspace_dimension(n, expected):
    assert singlet_subspace_dimension(n) == expected


@pytest.mark.parametrize("n", [1, 3])
def test_singlet_requires_even_n(n):
    with pytest.raises(DomainError):
        singlet_state(n)


def test_ghz_has_zero_qfi_for_jz_squared():
    ghz = ghz_state(4)
    op = collective_power("z", 4, 2)
    assert qfi_pure(ghz, op).value == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("k", [1, 3])
def test_equal_ghz_saturates_cent_for_odd_k(n, k):
    state = optimal_state(OptimalStateParams.from_pair(0.5, 0.5), "x", n)
    op = collective_power("x", n, k)
    assert qfi_pure(state, op).value == pytest.approx(cent(n, k), rel=1e-10)


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("lam", [0.0, 0.25, 0.5])
def test_phi_lambda_saturates_cent_for_even_k(n, lam):
    state = optimal_lambda_state(lam, "z", n)
    op = collective_power("z", n, 2)
    assert qfi_pure(state, op).value == pytest.approx(cent(n, 2), rel=1e-10)


def test_optimal_state_odd_n_with_singlet_fails():
    with pytest.raises(DomainError):
        optimal_state(OptimalStateParams.from_lambda(0.25), "z", 5)


def test_optimal_lambda_out_of_range():
    with pytest.raises(DomainError):
        optimal_lambda_state(0.75, "z", 4)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_dicke_state_full_matches_isometry(m):
    full = dicke_state(3, m, Representation.FULL).data
    assert np.allclose(full, dicke_isometry(3)[:, m])
    dicke = dicke_state(3, m, Representation.DICKE)
    assert dicke.dim == 4


def test_product_state_bloch_components():
    alphas = [0.3, -0.7, 1.0, 0.0]
    state = product_state(alphas, "z")
    jz = build_collective("z", 4)
    # ⟨J_z⟩ = Σ α_i / 2
    assert expectation(state, jz).real == pytest.approx(sum(alphas) / 2)


def test_product_state_rejects_out_of_box():
    with pytest.raises(DomainError):
        product_state([1.2, 0.0], "z")


def test_noisy_state_trace_and_limits():
    phi = ghz_state(3)
    rho = noisy_state(phi, 0.3)
    assert rho.kind is StateKind.DENSITY
    assert np.trace(rho.data).real == pytest.approx(1.0)
    mixed = noisy_state(phi, 0.0)
    assert np.allclose(mixed.data, np.eye(8) / 8)
    with pytest.raises(DomainError):
        noisy_state(phi, 1.5)


def test_random_symmetric_state_is_seeded():
    a = random_symmetric_state(10, 42)
    b = random_symmetric_state(10, 42)
    c = random_symmetric_state(10, 43)
    assert a.representation is Representation.DICKE
    assert np.linalg.norm(a.data) == pytest.approx(1.0)
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)


def test_random_symmetric_single_qubit_has_no_preferred_direction():
    vecs = random_symmetric_batch(1, 20_000, 11)
    a, b = vecs[:, 0], vecs[:, 1]
    cross = np.conj(a) * b
    bloch = np.stack(
        [2 * cross.real, 2 * cross.imag, np.abs(a) ** 2 - np.abs(b) ** 2], axis=1
    )
    # desvio padrão da média ≈ 0.004 por componente
    assert np.all(np.abs(bloch.mean(axis=0)) < 0.02)


def test_random_symmetric_fidelity_average_is_one_over_dimension():
    n = 2
    fixed = np.array([1.0, 1.0j, -1.0]) / np.sqrt(3)
    vecs = random_symmetric_batch(n, 20_000, 23)
    fidelity = np.abs(vecs @ np.conj(fixed)) ** 2
    assert fidelity.mean() == pytest.approx(1 / (n + 1), abs=0.01)
