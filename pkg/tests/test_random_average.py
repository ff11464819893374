from fractions import Fraction

import numpy as np
import pytest

from metrobound.core.errors import DomainError
from metrobound.core.settings import settings
from metrobound.schemas.average import AverageQfiResult
from metrobound.schemas.operators import Representation
from metrobound.schemas.states import QuantumState, StateKind
from metrobound.services.collective_ops import collective_power
from metrobound.services.qfi_engine import qfi_pure
from metrobound.services.random_average import (
    _tau_direct,
    _tau_faulhaber,
    average_record,
    average_sample_records,
    avg_qfi_analytic,
    avg_qfi_asymptotic_ratio,
    avg_qfi_closed_form,
    avg_qfi_exact,
    avg_qfi_mc,
    bernoulli_numbers,
    concentration_confidence,
    confidence_table,
    faulhaber_sum,
    sample_symmetric_qfi,
    t_ratio,
    tau,
)
from metrobound.services.separability_bounds import cent
from metrobound.services.state_factory import random_symmetric_batch
from metrobound.utils.rng import make_rng


def test_bernoulli_numbers_plus_convention():
    expected = [
        1,
        Fraction(1, 2),
        Fraction(1, 6),
        0,
        Fraction(-1, 30),
        0,
        Fraction(1, 42),
    ]
    assert bernoulli_numbers(6) == expected


@pytest.mark.parametrize(
    "n,p,expected", [(10, 1, 55), (10, 2, 385), (100, 3, 25_502_500), (7, 0, 7)]
)
def test_faulhaber_sum(n, p, expected):
    assert faulhaber_sum(n, p) == expected


def test_tau_small_values():
    assert tau(2, 2) == 2
    assert tau(3, 2) == 5
    assert tau(9, 0) == 10
    assert tau(5, 1) == 0
    assert tau(4, 3) == 0


def test_tau_two_paths_agree():
    for n in range(0, 201, 7):
        for k in range(0, 13):
            assert _tau_faulhaber(n, k) == _tau_direct(n, k)


def test_tau_rejects_negative():
    with pytest.raises(DomainError):
        tau(3, -1)


@pytest.mark.parametrize(
    "n,k,expected",
    [
        (2, 1, 2),
        (4, 2, Fraction(28, 3)),
        (1, 1, Fraction(2, 3)),
        (3, 2, Fraction(16, 5)),
    ],
)
def test_avg_qfi_small_values(n, k, expected):
    assert avg_qfi_exact(n, k) == expected


@pytest.mark.parametrize("k", [1, 2, 3])
def test_closed_forms_match_moments(k):
    for n in range(1, 101):
        assert avg_qfi_closed_form(n, k) == avg_qfi_exact(n, k)


def test_average_below_cent():
    for n in range(1, 60):
        for k in range(1, 7):
            assert avg_qfi_analytic(n, k) <= cent(n, k) * (1 + 1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_asymptotic_ratio(k):
    n = 2000
    ratio = avg_qfi_analytic(n, k) / cent(n, k)
    assert ratio == pytest.approx(avg_qfi_asymptotic_ratio(k), rel=1e-2)


def test_asymptotic_ratio_values():
    assert avg_qfi_asymptotic_ratio(1) == pytest.approx(1 / 3)
    assert avg_qfi_asymptotic_ratio(3) == pytest.approx(1 / 7)
    assert avg_qfi_asymptotic_ratio(2) == pytest.approx(16 / 45)


def test_t_ratio_values():
    assert t_ratio(4, 1) == pytest.approx(5 / 3)
    assert t_ratio(4, 2) == pytest.approx(350 / 405)
    with pytest.raises(DomainError):
        t_ratio(4, 4)


@pytest.mark.parametrize("n", range(4, 31))
def test_t_ratio_ordering(n):
    t1, t2, t3 = (t_ratio(n, k) for k in (1, 2, 3))
    assert t2 < t3 < t1


def test_concentration_confidence_range_and_monotone():
    ns = [10, 100, 1000, 10**4, 10**6, 10**8]
    for k in (1, 2, 3):
        for n in ns:
            assert 0.0 <= concentration_confidence(n, k) <= 1.0
    gammas = [concentration_confidence(n, 1) for n in ns]
    assert gammas == sorted(gammas)
    assert gammas[-1] > 0.99


@pytest.mark.parametrize("n", [1, 2])
def test_confidence_zero_without_gap(n):
    # F̄_Q ≤ C_sep: sem garantia
    assert concentration_confidence(n, 1) == 0.0


def test_confidence_table(fast_settings):
    records = confidence_table(n_values=[10, 1000], ks=[1, 2])
    assert [(r.k, r.n) for r in records] == [(1, 10), (1, 1000), (2, 10), (2, 1000)]
    for r in records:
        assert r.epsilon == pytest.approx(r.avg_qfi - r.csep)
        assert 0.0 <= r.gamma <= 1.0


def test_sample_matches_qfi_pure():
    n, seed = 6, 21
    sampled = sample_symmetric_qfi(n, [1, 2, 3], 1, seed=seed)
    psi = random_symmetric_batch(n, 1, make_rng(seed, 0))[0]
    state = QuantumState(
        kind=StateKind.PURE, data=psi, representation=Representation.DICKE, n_qubits=n
    )
    for col, k in enumerate((1, 2, 3)):
        op = collective_power("z", n, k, Representation.DICKE)
        assert sampled[0, col] == pytest.approx(qfi_pure(state, op).value, rel=1e-10)


def test_mc_consistent_with_analytic(fast_settings):
    result = avg_qfi_mc(10, 1, n_samples=10_000, seed=3)
    assert result.consistent
    assert result.analytic == pytest.approx(110 / 3)


def test_mc_single_qubit(fast_settings):
    result = avg_qfi_mc(1, 1, n_samples=20_000, seed=4)
    assert result.mc_mean == pytest.approx(2 / 3, abs=5 * result.mc_stderr)


def test_mc_is_deterministic(fast_settings):
    a = avg_qfi_mc(8, 2, n_samples=3000, seed=9, threads=1)
    b = avg_qfi_mc(8, 2, n_samples=3000, seed=9, threads=3)
    assert a == b


def test_mc_needs_two_samples():
    with pytest.raises(DomainError):
        avg_qfi_mc(4, 1, n_samples=1)


@pytest.mark.slow
@pytest.mark.parametrize(
    "n,k", [(10, 1), (10, 2), (10, 3), (20, 3), (30, 2), (100, 3)]
)
def test_mc_acceptance(n, k):
    assert avg_qfi_mc(n, k, n_samples=100_000, seed=settings.DEFAULT_SEED).consistent


def test_average_record_fields(fast_settings):
    record = average_record(4, 2, n_samples=2000, seed=1)
    assert record.error is None
    assert record.analytic == pytest.approx(28 / 3)
    assert record.cent == 16.0
    assert record.t_k == pytest.approx(350 / 405)
    assert average_record(4, 5, n_samples=2000, seed=1).t_k is None
    assert average_record(4, 1, n_samples=1, seed=1).error is not None


def test_average_sample_records_layout(fast_settings):
    records = average_sample_records(20, [1, 3], 5, seed=2)
    assert [(r.sample, r.k) for r in records] == [
        (i, k) for i in range(5) for k in (1, 3)
    ]
    for r in records:
        assert r.ratio == pytest.approx(r.qfi / r.csep)


def test_average_result_z_score():
    result = AverageQfiResult(
        n_qubits=2,
        k=1,
        analytic=2.0,
        mc_mean=2.1,
        mc_stderr=0.05,
        n_samples=10,
        seed=0,
    )
    assert result.z_score == pytest.approx(2.0)
    assert result.consistent
    assert np.isfinite(result.z_score)
