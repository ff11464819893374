"""
Desigualdades ótimas de compressão de spin e classificação de regiões de
detecção para ρ_η = η|Φ⟩⟨Φ| + (1−η) 1/2^N.

Para Φ ao longo de z as matrizes de ρ_η são diagonais em (x, y, z) e têm
forma fechada (N ≥ 3); as varreduras usam só essas formas.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence

import numpy as np

from metrobound.core.errors import DomainError
from metrobound.core.logging import get_logger
from metrobound.core.settings import settings
from metrobound.domain.constants import DETECTION_SLACK, SQUEEZING_SLACK
from metrobound.schemas.records import DetectionRecord
from metrobound.schemas.run_config import Fig5Variant
from metrobound.schemas.squeezing import SqueezingReport
from metrobound.schemas.states import QuantumState, StateKind
from metrobound.services.collective_ops import build_collective
from metrobound.services.separability_bounds import csep_analytic
from metrobound.utils.parallel import map_ordered
from metrobound.utils.rng import batch_sizes, make_rng

log = get_logger()

DETECTION_KS = (1, 2, 3)

# painéis da varredura em grade: (valores de N, λ2 = 0 ou λ1 = λ2)
FIG5_PANELS: dict[Fig5Variant, tuple[tuple[int, ...], bool]] = {
    Fig5Variant.A: ((6, 10, 20, 30), False),
    Fig5Variant.B: ((10,), False),
    Fig5Variant.C: ((6,), True),
}


def _slack(rhs):
    return SQUEEZING_SLACK * np.maximum(1.0, np.abs(rhs))


def _expect(rho: QuantumState, op: np.ndarray) -> float:
    if rho.kind is StateKind.PURE:
        return float(np.vdot(rho.data, op @ rho.data).real)
    return float(np.trace(rho.data @ op).real)


def _report(
    n: int, c: np.ndarray, gamma: np.ndarray, flags: bool = False
) -> SqueezingReport:
    x = (n - 1) * gamma + c
    chi = np.linalg.eigvalsh(x)
    report = SqueezingReport(
        n_qubits=n,
        c_matrix=c,
        gamma_matrix=gamma,
        x_matrix=x,
        trace_gamma=float(np.trace(gamma)),
        trace_c=float(np.trace(c)),
        chi_min=float(chi[0]),
        chi_max=float(chi[-1]),
    )
    if not flags:
        return report
    return report.model_copy(update={"violated": _violations(report)})


def _violations(report: SqueezingReport) -> tuple[bool, bool, bool]:
    n = report.n_qubits
    rhs1 = n / 2.0
    rhs2 = report.trace_c - n / 2.0
    rhs3 = (n - 1) * report.trace_gamma - n * (n - 2) / 4.0
    return (
        bool(report.trace_gamma < rhs1 - _slack(rhs1)),
        bool(report.chi_min < rhs2 - _slack(rhs2)),
        bool(report.chi_max > rhs3 + _slack(rhs3)),
    )


def correlation_matrices(
    rho: QuantumState, full_space_cap: int | None = None
) -> SqueezingReport:
    """
    C_kl = ⟨J_kJ_l + J_lJ_k⟩/2, Γ_kl = C_kl − ⟨J_k⟩⟨J_l⟩ e 𝔛 = (N−1)Γ + C,
    k, l ∈ {x, y, z}.
    """
    n = rho.n_qubits
    if n < 2:
        raise DomainError("desigualdades de compressão exigem N >= 2")
    ops = [
        build_collective(axis, n, rho.representation, full_space_cap).entries
        for axis in ("x", "y", "z")
    ]
    means = np.array([_expect(rho, op) for op in ops])
    c = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            anti = 0.5 * (ops[i] @ ops[j] + ops[j] @ ops[i])
            c[i, j] = c[j, i] = _expect(rho, anti)
    gamma = c - np.outer(means, means)
    return _report(n, c, gamma)


def squeezing_classify(
    rho: QuantumState, full_space_cap: int | None = None
) -> SqueezingReport:
    """
    Avalia tr Γ ≥ N/2, χ_min(𝔛) ≥ tr C − N/2 e
    χ_max(𝔛) ≤ (N−1) tr Γ − N(N−2)/4; violação indica emaranhamento.
    """
    report = correlation_matrices(rho, full_space_cap)
    return report.model_copy(update={"violated": _violations(report)})


def _closed_terms(n: int, lambda1, lambda2, eta):
    """(f, g, h): C_xx = C_yy = Γ_xx = Γ_yy = f, C_zz = g, Γ_zz = h."""
    weight = np.asarray(lambda1) + np.asarray(lambda2)
    diff = np.asarray(lambda1) - np.asarray(lambda2)
    eta = np.asarray(eta)
    f = eta * n / 4.0 * weight + (1.0 - eta) * n / 4.0
    g = eta * n**2 / 4.0 * weight + (1.0 - eta) * n / 4.0
    h = g - eta**2 * n**2 / 4.0 * diff**2
    return f, g, h


def _check_closed_domain(n: int) -> None:
    if n < 3:
        raise DomainError("formas fechadas de ρ_η exigem N >= 3")


def noisy_matrices_closed(
    n_qubits: int, lambda1: float, lambda2: float, eta: float
) -> SqueezingReport:
    """Matrizes de ρ_η(Φ) com Φ ao longo de z, pelas formas fechadas."""
    _check_closed_domain(n_qubits)
    f, g, h = (float(v) for v in _closed_terms(n_qubits, lambda1, lambda2, eta))
    c = np.diag([f, f, g])
    gamma = np.diag([f, f, h])
    return _report(n_qubits, c, gamma, flags=True)


def closed_form_flags(
    n_qubits: int, lambda1, lambda2, eta
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(ss1, ss2, ss3) vetorizados sobre arrays de (λ1, λ2, η)."""
    _check_closed_domain(n_qubits)
    n = n_qubits
    f, g, h = _closed_terms(n, lambda1, lambda2, eta)
    x_perp = n * f
    x_par = (n - 1) * h + g
    chi_min = np.minimum(x_perp, x_par)
    chi_max = np.maximum(x_perp, x_par)
    trace_gamma = 2.0 * f + h
    trace_c = 2.0 * f + g

    rhs1 = n / 2.0
    rhs2 = trace_c - n / 2.0
    rhs3 = (n - 1) * trace_gamma - n * (n - 2) / 4.0
    ss1 = trace_gamma < rhs1 - _slack(rhs1)
    ss2 = chi_min < rhs2 - _slack(rhs2)
    ss3 = chi_max > rhs3 + _slack(rhs3)
    return ss1, ss2, ss3


def ss3_threshold(n_qubits: int) -> float:
    """η acima do qual ρ_η(Φ(λ)) viola a terceira desigualdade: 2(N−1)/(3N−4)."""
    return 2.0 * (n_qubits - 1) / (3.0 * n_qubits - 4.0)


def _noisy_qfi_closed_array(n: int, k: int, lambda1, lambda2, eta) -> np.ndarray:
    # mesmo fator de qfi_engine.noisy_qfi_factor, vetorizado
    factor = eta**2 / (eta + np.ldexp(1.0 - eta, 1 - n))
    signed = lambda1 + (-1) ** k * lambda2
    pure = float(n) ** (2 * k) / 4.0 ** (k - 1) * (lambda1 + lambda2 - signed**2)
    return factor * pure


def _region(k1: bool, k2: bool) -> str:
    if k1 and k2:
        return "both"
    if k2:
        return "only_k2"
    if k1:
        return "only_k1"
    return "neither"


def _check_sweep_n(n_qubits: int) -> None:
    if n_qubits < 4 or n_qubits % 2:
        raise DomainError("varreduras de detecção exigem N par >= 4")


def detection_region_table(
    n_qubits: int,
    lambda1: Sequence[float] | np.ndarray,
    lambda2: Sequence[float] | np.ndarray,
    eta: Sequence[float] | np.ndarray,
    first_point: int = 0,
    seed: int | None = None,
) -> list[DetectionRecord]:
    """
    Um registro por ponto (λ1, λ2, η): F_Q(ρ_η, J_z^k) contra C_sep(J_z^k)
    para k = 1, 2, 3 e as três desigualdades de compressão.
    """
    _check_sweep_n(n_qubits)
    l1 = np.asarray(lambda1, dtype=float)
    l2 = np.asarray(lambda2, dtype=float)
    et = np.asarray(eta, dtype=float)
    if np.any(l1 < 0) or np.any(l2 < 0) or np.any(l1 + l2 > 1.0 + 1e-12):
        raise DomainError("exige λ1, λ2 >= 0 e λ1 + λ2 <= 1")
    if np.any((et < 0) | (et > 1)):
        raise DomainError("η deve estar em [0, 1]")

    csep = {k: csep_analytic(n_qubits, k).value for k in DETECTION_KS}
    qfi = {
        k: _noisy_qfi_closed_array(n_qubits, k, l1, l2, et) for k in DETECTION_KS
    }
    detected = {
        k: qfi[k] > csep[k] + DETECTION_SLACK * max(1.0, csep[k]) for k in DETECTION_KS
    }
    ss1, ss2, ss3 = closed_form_flags(n_qubits, l1, l2, et)

    return [
        DetectionRecord(
            point=first_point + i,
            n=n_qubits,
            lambda1=float(l1[i]),
            lambda2=float(l2[i]),
            eta=float(et[i]),
            qfi_k1=float(qfi[1][i]),
            qfi_k2=float(qfi[2][i]),
            qfi_k3=float(qfi[3][i]),
            csep_k1=csep[1],
            csep_k2=csep[2],
            csep_k3=csep[3],
            detected_k1=bool(detected[1][i]),
            detected_k2=bool(detected[2][i]),
            detected_k3=bool(detected[3][i]),
            ss1=bool(ss1[i]),
            ss2=bool(ss2[i]),
            ss3=bool(ss3[i]),
            squeezed=bool(ss1[i] or ss2[i] or ss3[i]),
            region=_region(bool(detected[1][i]), bool(detected[2][i])),
            seed=seed,
        )
        for i in range(l1.size)
    ]


def sample_triangle(
    size: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(λ1, λ2) uniformes em λ1, λ2 ≥ 0, λ1+λ2 ≤ 1 e η uniforme em [0, 1]."""
    u = rng.uniform(0.0, 1.0, size)
    v = rng.uniform(0.0, 1.0, size)
    outside = u + v > 1.0
    u[outside], v[outside] = 1.0 - u[outside], 1.0 - v[outside]
    eta = rng.uniform(0.0, 1.0, size)
    return u, v, eta


def iter_detection_region_sweep(
    n_qubits: int,
    n_samples: int,
    seed: int | None = None,
    threads: int | None = None,
) -> Iterator[list[DetectionRecord]]:
    """Lotes de registros em ordem; o lote b usa o fluxo (seed, b)."""
    _check_sweep_n(n_qubits)
    if n_samples < 1:
        raise DomainError("n_samples deve ser >= 1")
    seed = settings.DEFAULT_SEED if seed is None else seed
    sizes = batch_sizes(n_samples, settings.MC_BATCH_SIZE)
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    workers = threads or settings.THREADS

    def run(batch: int) -> list[DetectionRecord]:
        l1, l2, eta = sample_triangle(sizes[batch], make_rng(seed, batch))
        return detection_region_table(
            n_qubits, l1, l2, eta, first_point=int(offsets[batch]), seed=seed
        )

    # janelas de `workers` lotes: memória limitada e ordem preservada
    for start in range(0, len(sizes), workers):
        window = range(start, min(start + workers, len(sizes)))
        for records in map_ordered(run, window, threads):
            log.debug("detection.batch", n=n_qubits, size=len(records))
            yield records


def detection_region_sweep(
    n_qubits: int,
    n_samples: int,
    seed: int | None = None,
    threads: int | None = None,
) -> list[DetectionRecord]:
    return [
        record
        for batch in iter_detection_region_sweep(n_qubits, n_samples, seed, threads)
        for record in batch
    ]


def detection_grid(
    n_qubits: int, grid: int, equal_split: bool, seed: int | None = None
) -> list[DetectionRecord]:
    """
    Grade (λ, η) ∈ [0, 1]²: λ2 = 0 e λ1 = λ, ou λ1 = λ2 = λ/2
    (`equal_split`). O resto vai para o singleto.
    """
    if grid < 2:
        raise DomainError("grade precisa de ao menos 2 pontos")
    lam, eta = np.meshgrid(
        np.linspace(0.0, 1.0, grid), np.linspace(0.0, 1.0, grid), indexing="ij"
    )
    lam, eta = lam.ravel(), eta.ravel()
    if equal_split:
        l1 = l2 = 0.5 * lam
    else:
        l1, l2 = lam, np.zeros_like(lam)
    return detection_region_table(n_qubits, l1, l2, eta, seed=seed)


def fig5_grid(
    variant: Fig5Variant, grid: int = 201, seed: int | None = None
) -> list[DetectionRecord]:
    n_values, equal_split = FIG5_PANELS[Fig5Variant(variant)]
    return [
        record
        for n in n_values
        for record in detection_grid(n, grid, equal_split, seed=seed)
    ]
