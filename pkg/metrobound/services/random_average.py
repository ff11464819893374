"""
QFI média sobre estados puros simétricos Haar-aleatórios.

Os momentos τ_{N,k} = Σ_m (N/2 − m)^k saem exatos (Fraction) por dois
caminhos independentes: soma direta e fórmula de Faulhaber com números de
Bernoulli (convenção B_1 = +1/2).
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb, expm1, sqrt

import numpy as np

from metrobound.core.errors import ComputationError, DomainError
from metrobound.core.logging import get_logger
from metrobound.core.settings import settings
from metrobound.schemas.average import AverageQfiResult
from metrobound.schemas.records import (
    AverageRecord,
    AverageSampleRecord,
    ConfidenceRecord,
)
from metrobound.services.separability_bounds import (
    cent,
    csep,
    csep3_closed_form,
    csep_analytic,
)
from metrobound.services.state_factory import random_symmetric_batch
from metrobound.utils.numeric import log_grid
from metrobound.utils.parallel import map_ordered
from metrobound.utils.rng import batch_sizes, make_rng

log = get_logger()

CLOSED_FORM_KS = (1, 2, 3)
T_RATIO_RTOL = 1e-9


# ----------------------------------------------------------------------------
# Bernoulli, Faulhaber e τ
# ----------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> tuple[Fraction, ...]:
    numbers: list[Fraction] = []
    for m in range(n + 1):
        if m == 0:
            numbers.append(Fraction(1))
            continue
        acc = sum(comb(m + 1, j) * numbers[j] for j in range(m))
        numbers.append(-acc / (m + 1))
    if n >= 1:
        numbers[1] = Fraction(1, 2)
    return tuple(numbers)


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0..B_n exatos, com B_1 = +1/2."""
    if n < 0:
        raise DomainError("n deve ser >= 0")
    return list(_bernoulli(n))


def faulhaber_sum(n: int, p: int) -> int:
    """Σ_{i=1}^n i^p = 1/(p+1) Σ_j C(p+1, j) B_j n^{p+1−j}."""
    if n < 0 or p < 0:
        raise DomainError("n e p devem ser >= 0")
    if n == 0:
        return 0
    b = _bernoulli(p)
    total = sum(comb(p + 1, j) * b[j] * n ** (p + 1 - j) for j in range(p + 1))
    value = total / (p + 1)
    if value.denominator != 1:
        raise ComputationError(f"Faulhaber não inteiro para n={n}, p={p}")
    return int(value)


def _tau_faulhaber(n: int, k: int) -> Fraction:
    parity = 1 + (-1) ** k
    if n % 2 == 0:
        # valores inteiros −N/2..N/2
        zero_term = 1 if k == 0 else 0
        return Fraction(zero_term + parity * faulhaber_sum(n // 2, k))
    # semi-inteiros ±1/2, ±3/2, …, ±N/2: soma dos ímpares até N
    odd_sum = faulhaber_sum(n, k) - 2**k * faulhaber_sum((n - 1) // 2, k)
    return Fraction(parity * odd_sum, 2**k)


def _tau_direct(n: int, k: int) -> Fraction:
    return sum((Fraction(n - 2 * m, 2) ** k for m in range(n + 1)), Fraction(0))


@lru_cache(maxsize=4096)
def tau(n_qubits: int, k: int) -> Fraction:
    """
    τ_{N,k} = Σ_{m=0}^N (N/2 − m)^k. Até TAU_DIRECT_CAP a soma direta confere
    o caminho de Faulhaber exatamente.
    """
    if k < 0:
        raise DomainError("k deve ser >= 0")
    if n_qubits < 0:
        raise DomainError("N deve ser >= 0")
    value = _tau_faulhaber(n_qubits, k)
    if n_qubits <= settings.TAU_DIRECT_CAP:
        direct = _tau_direct(n_qubits, k)
        if direct != value:
            raise ComputationError(
                f"τ(N={n_qubits}, k={k}): soma direta {direct} != Faulhaber {value}"
            )
    return value


# ----------------------------------------------------------------------------
# QFI média analítica
# ----------------------------------------------------------------------------


def _check_nk(n_qubits: int, k: int) -> None:
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    if k < 1:
        raise DomainError("k deve ser >= 1")


def avg_qfi_exact(n_qubits: int, k: int) -> Fraction:
    """(4/(N+1)) [τ_{2k} − (τ_k² + τ_{2k})/(N+2)]."""
    _check_nk(n_qubits, k)
    t_k, t_2k = tau(n_qubits, k), tau(n_qubits, 2 * k)
    n = n_qubits
    return Fraction(4, n + 1) * (t_2k - (t_k**2 + t_2k) / (n + 2))


def avg_qfi_closed_form(n_qubits: int, k: int) -> Fraction:
    """Formas fechadas para k = 1, 2, 3."""
    _check_nk(n_qubits, k)
    n = n_qubits
    if k == 1:
        return Fraction(n * (n + 1), 3)
    if k == 2:
        return Fraction(n * (n - 1) * (n + 1) * (n + 3), 45)
    if k == 3:
        return Fraction(n * (n + 1) * (3 * n * (n**3 + 4 * n**2 - 8) + 16), 336)
    raise DomainError("forma fechada só para k em {1, 2, 3}")


def avg_qfi_analytic(n_qubits: int, k: int) -> float:
    value = avg_qfi_exact(n_qubits, k)
    if k in CLOSED_FORM_KS:
        closed = avg_qfi_closed_form(n_qubits, k)
        if closed != value:
            raise ComputationError(
                f"F̄_Q(N={n_qubits}, k={k}): forma fechada {closed} != τ {value}"
            )
    return float(value)


def avg_qfi_asymptotic_ratio(k: int) -> float:
    """lim F̄_Q/C_ent para N grande: 1/(2k+1) (k ímpar), 4/(2k+1) − 4/(k+1)² (par)."""
    if k < 1:
        raise DomainError("k deve ser >= 1")
    if k % 2:
        return 1.0 / (2 * k + 1)
    return 4.0 / (2 * k + 1) - 4.0 / (k + 1) ** 2


# ----------------------------------------------------------------------------
# Monte Carlo
# ----------------------------------------------------------------------------


def _qfi_batch(psi: np.ndarray, y: np.ndarray) -> np.ndarray:
    """4‖(H − ⟨H⟩)ψ‖² por linha, com H = diag(y) na base de Dicke."""
    probs = np.abs(psi) ** 2
    mean = probs @ y
    return 4.0 * np.sum(probs * (y[None, :] - mean[:, None]) ** 2, axis=1)


def sample_symmetric_qfi(
    n_qubits: int,
    ks: Sequence[int],
    n_samples: int,
    seed: int | None = None,
    threads: int | None = None,
) -> np.ndarray:
    """F_Q(ψ, J_z^k) por amostra, todos os k no mesmo ψ: forma (n_samples, len(ks))."""
    if n_samples < 1:
        raise DomainError("n_samples deve ser >= 1")
    for k in ks:
        _check_nk(n_qubits, k)
    seed = settings.DEFAULT_SEED if seed is None else seed
    j = n_qubits / 2.0 - np.arange(n_qubits + 1, dtype=float)
    supports = [j**k for k in ks]
    sizes = batch_sizes(n_samples, settings.MC_BATCH_SIZE)

    def run(batch: int) -> np.ndarray:
        psi = random_symmetric_batch(n_qubits, sizes[batch], make_rng(seed, batch))
        return np.column_stack([_qfi_batch(psi, y) for y in supports])

    return np.vstack(map_ordered(run, range(len(sizes)), threads))


def _merge_stats(
    left: tuple[int, float, float], right: tuple[int, float, float]
) -> tuple[int, float, float]:
    """(n, média, M2) de duas partes."""
    n_a, mean_a, m2_a = left
    n_b, mean_b, m2_b = right
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * n_b / n
    m2 = m2_a + m2_b + delta**2 * n_a * n_b / n
    return n, mean, m2


def avg_qfi_mc(
    n_qubits: int,
    k: int,
    n_samples: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
) -> AverageQfiResult:
    """Média e erro padrão de F_Q(ψ, J_z^k) sobre ψ Haar-aleatório simétrico."""
    _check_nk(n_qubits, k)
    n_samples = settings.DEFAULT_SAMPLES if n_samples is None else n_samples
    if n_samples < 2:
        raise DomainError("Monte Carlo exige n_samples >= 2")
    seed = settings.DEFAULT_SEED if seed is None else seed
    y = (n_qubits / 2.0 - np.arange(n_qubits + 1, dtype=float)) ** k
    sizes = batch_sizes(n_samples, settings.MC_BATCH_SIZE)

    def run(batch: int) -> tuple[int, float, float]:
        psi = random_symmetric_batch(n_qubits, sizes[batch], make_rng(seed, batch))
        values = _qfi_batch(psi, y)
        mean = float(values.mean())
        stats = (values.size, mean, float(np.sum((values - mean) ** 2)))
        log.debug("mc.batch", n=n_qubits, k=k, batch=batch, size=values.size)
        return stats

    parts = map_ordered(run, range(len(sizes)), threads)
    count, mean, m2 = parts[0]
    for part in parts[1:]:
        count, mean, m2 = _merge_stats((count, mean, m2), part)
    stderr = sqrt(m2 / (count - 1)) / sqrt(count)

    result = AverageQfiResult(
        n_qubits=n_qubits,
        k=k,
        analytic=avg_qfi_analytic(n_qubits, k),
        mc_mean=mean,
        mc_stderr=stderr,
        n_samples=count,
        seed=seed,
    )
    log.info(
        "mc.done",
        n=n_qubits,
        k=k,
        mean=mean,
        stderr=stderr,
        z_score=result.z_score,
    )
    return result


# ----------------------------------------------------------------------------
# t_k e confiança
# ----------------------------------------------------------------------------


def t_ratio(n_qubits: int, k: int) -> float:
    """t_k = F̄_Q(J^k)/C_sep(J^k) pelas formas fechadas, k ∈ {1, 2, 3}."""
    if k not in CLOSED_FORM_KS:
        raise DomainError("t_k só para k em {1, 2, 3}")
    c_sep = csep_analytic(n_qubits, k).value
    n = float(n_qubits)
    if k == 1:
        value = (n + 1) / 3
    elif k == 2:
        value = 2 * (n + 1) * (n + 3) * (2 * n - 3) / (45 * (n - 1) ** 2)
    else:
        avg3 = n * (n + 1) * (3 * n * (n**3 + 4 * n**2 - 8) + 16) / 336
        value = avg3 / csep3_closed_form(n_qubits)
    ratio = avg_qfi_analytic(n_qubits, k) / c_sep
    if abs(value - ratio) > T_RATIO_RTOL * max(1.0, abs(ratio)):
        raise ComputationError(f"t_{k}(N={n_qubits}) diverge de F̄_Q/C_sep")
    return value


def concentration_confidence(n_qubits: int, k: int) -> float:
    """
    γ = 1 − exp[−(N+1)ε²/(4096 (N/2)^{4k})] com ε = F̄_Q − C_sep; γ = 0 se ε ≤ 0.
    """
    _check_nk(n_qubits, k)
    epsilon = avg_qfi_analytic(n_qubits, k) - csep(n_qubits, k).value
    if epsilon <= 0.0:
        return 0.0
    exponent = (n_qubits + 1) * epsilon**2 / (4096.0 * (n_qubits / 2.0) ** (4 * k))
    return min(1.0, max(0.0, -expm1(-exponent)))


def default_confidence_n_values() -> list[int]:
    """Grade log de N entre 10 e 10^8."""
    return log_grid(10.0, 1e8, 57)


def confidence_table(
    n_values: Sequence[int] | None = None,
    ks: Sequence[int] = CLOSED_FORM_KS,
    seed: int | None = None,
) -> list[ConfidenceRecord]:
    n_values = default_confidence_n_values() if n_values is None else n_values
    records = []
    for k in ks:
        for n in n_values:
            avg = avg_qfi_analytic(n, k)
            c_sep = csep(n, k).value
            records.append(
                ConfidenceRecord(
                    n=n,
                    k=k,
                    avg_qfi=avg,
                    csep=c_sep,
                    epsilon=avg - c_sep,
                    gamma=concentration_confidence(n, k),
                    seed=seed,
                )
            )
    return records


def average_sample_records(
    n_qubits: int,
    ks: Sequence[int],
    n_samples: int,
    seed: int | None = None,
    threads: int | None = None,
) -> list[AverageSampleRecord]:
    """Uma linha por (amostra, k): F_Q, C_sep, F_Q/C_sep e a referência t_k."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    qfis = sample_symmetric_qfi(n_qubits, ks, n_samples, seed, threads)
    bounds = {k: csep_analytic(n_qubits, k).value for k in ks}
    refs = {k: t_ratio(n_qubits, k) for k in ks}
    return [
        AverageSampleRecord(
            n=n_qubits,
            sample=i,
            k=k,
            qfi=float(qfis[i, col]),
            csep=bounds[k],
            ratio=float(qfis[i, col]) / bounds[k],
            t_k=refs[k],
            seed=seed,
        )
        for i in range(qfis.shape[0])
        for col, k in enumerate(ks)
    ]


def average_record(
    n_qubits: int,
    k: int,
    n_samples: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
) -> AverageRecord:
    """QFI média analítica e Monte Carlo, com C_ent e t_k quando definido."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    try:
        result = avg_qfi_mc(n_qubits, k, n_samples, seed, threads)
    except DomainError as exc:
        return AverageRecord(n=n_qubits, k=k, seed=seed, error=str(exc))
    t_k = None
    if k in CLOSED_FORM_KS and (k == 1 or n_qubits >= 3):
        t_k = t_ratio(n_qubits, k)
    return AverageRecord(
        n=n_qubits,
        k=k,
        analytic=result.analytic,
        mc_mean=result.mc_mean,
        mc_stderr=result.mc_stderr,
        n_samples=result.n_samples,
        consistent=result.consistent,
        cent=cent(n_qubits, k),
        t_k=t_k,
        seed=seed,
    )

