"""
Operadores coletivos J_α = (1/2) Σ_i σ_α^{(i)} e potências J_α^k.

Duas representações:
- FULL: espaço 2^N por produtos de Kronecker; qubit 1 é o bit mais
  significativo e |0⟩ é o autovetor +1 de σ_z.
- DICKE: subespaço simétrico (N+1 estados); índice m conta excitações e
  J_z = diag(N/2 − m).
"""

from __future__ import annotations

from math import factorial

import numpy as np

from metrobound.core.errors import CapacityError, DomainError, UnsupportedError
from metrobound.core.logging import get_logger
from metrobound.core.settings import settings
from metrobound.domain.constants import PAULI_EXPANSION_MAX_K
from metrobound.schemas.operators import Axis, OperatorMatrix, Representation

log = get_logger()

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def check_full_capacity(n_qubits: int, full_space_cap: int | None = None) -> None:
    cap = full_space_cap if full_space_cap is not None else settings.FULL_SPACE_CAP
    if n_qubits > cap:
        raise CapacityError(n_qubits, cap)


def single_qubit_pauli(axis: Axis | str) -> np.ndarray:
    """n·σ para o eixo n."""
    nx, ny, nz = Axis.parse(axis).vector
    return nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z


def axis_eigenstates(axis: Axis | str) -> tuple[np.ndarray, np.ndarray]:
    """(|α+⟩, |α−⟩) com a primeira componente não nula real e positiva."""
    _, vecs = np.linalg.eigh(single_qubit_pauli(axis))
    return _fix_phase(vecs[:, 1]), _fix_phase(vecs[:, 0])


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    pivot = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
    return vec * (abs(pivot) / pivot)


def pauli_power_check(axis: Axis | str, m: int) -> float:
    """Resíduo de σ_α^m = σ_α (m ímpar) ou 1 (m par)."""
    sigma = single_qubit_pauli(axis)
    expected = sigma if m % 2 else IDENTITY_2
    return float(np.max(np.abs(np.linalg.matrix_power(sigma, m) - expected)))


def _embed(single: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    left = np.eye(2**site, dtype=complex)
    right = np.eye(2 ** (n_qubits - site - 1), dtype=complex)
    return np.kron(np.kron(left, single), right)


def site_operators(
    axis: Axis | str, n_qubits: int, full_space_cap: int | None = None
) -> list[np.ndarray]:
    """σ_α^{(i)} no espaço completo, i = 1..N."""
    check_full_capacity(n_qubits, full_space_cap)
    sigma = single_qubit_pauli(axis)
    return [_embed(sigma, i, n_qubits) for i in range(n_qubits)]


def _full_collective(axis: Axis, n_qubits: int) -> np.ndarray:
    sigma = single_qubit_pauli(axis)
    total = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for i in range(n_qubits):
        total += _embed(sigma, i, n_qubits)
    return 0.5 * total


def ladder_coefficients(n_qubits: int) -> np.ndarray:
    """⟨m−1|J_+|m⟩ = √(m(N−m+1)) para m = 1..N."""
    m = np.arange(1, n_qubits + 1, dtype=float)
    return np.sqrt(m * (n_qubits - m + 1))


def dicke_tridiagonal(
    axis: Axis | str, n_qubits: int
) -> tuple[np.ndarray, np.ndarray]:
    """(diagonal, superdiagonal) de J_α na base de Dicke."""
    nx, ny, nz = Axis.parse(axis).vector
    diag = nz * (n_qubits / 2.0 - np.arange(n_qubits + 1, dtype=float))
    # J_x = (J+ + J−)/2 e J_y = (J+ − J−)/(2i): J+ entra com (nx − i ny)/2
    upper = 0.5 * (nx - 1j * ny) * ladder_coefficients(n_qubits)
    return diag.astype(complex), upper


def _dicke_collective(axis: Axis, n_qubits: int) -> np.ndarray:
    diag, upper = dicke_tridiagonal(axis, n_qubits)
    return np.diag(diag) + np.diag(upper, 1) + np.diag(upper.conj(), -1)


def build_collective(
    axis: Axis | str,
    n_qubits: int,
    representation: Representation = Representation.FULL,
    full_space_cap: int | None = None,
) -> OperatorMatrix:
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    axis = Axis.parse(axis)
    representation = Representation(representation)
    if representation is Representation.FULL:
        check_full_capacity(n_qubits, full_space_cap)
        entries = _full_collective(axis, n_qubits)
    else:
        entries = _dicke_collective(axis, n_qubits)
    return OperatorMatrix(
        entries=entries, representation=representation, n_qubits=n_qubits
    )


def operator_power(op: OperatorMatrix, k: int) -> OperatorMatrix:
    if k < 1:
        raise DomainError("k deve ser >= 1")
    if k == 1:
        return op
    powered = np.linalg.matrix_power(op.entries, k)
    return OperatorMatrix(
        entries=0.5 * (powered + powered.conj().T),
        representation=op.representation,
        n_qubits=op.n_qubits,
    )


def collective_power(
    axis: Axis | str,
    n_qubits: int,
    k: int,
    representation: Representation = Representation.FULL,
    full_space_cap: int | None = None,
) -> OperatorMatrix:
    return operator_power(
        build_collective(axis, n_qubits, representation, full_space_cap), k
    )


def extreme_eigenvalues(op: OperatorMatrix) -> tuple[float, float]:
    spectrum = op.eigenvalues()
    return float(spectrum[0]), float(spectrum[-1])


def _elementary_sums(sites: list[np.ndarray], k: int) -> list[np.ndarray]:
    """E_r = Σ_{i1<…<ir} σ^{(i1)}…σ^{(ir)}, r = 0..k."""
    dim = sites[0].shape[0]
    sums = [np.eye(dim, dtype=complex)] + [np.zeros((dim, dim), complex)] * k
    for sigma in sites:
        for r in range(k, 0, -1):
            sums[r] = sums[r] + sigma @ sums[r - 1]
    return sums


def pauli_expansion(
    axis: Axis | str, n_qubits: int, k: int, full_space_cap: int | None = None
) -> np.ndarray:
    """J_α^k reescrito como soma de cadeias de Pauli em sítios distintos."""
    if k > PAULI_EXPANSION_MAX_K:
        raise UnsupportedError(
            f"expansão de Pauli disponível só até k={PAULI_EXPANSION_MAX_K}"
        )
    if k < 1:
        raise DomainError("k deve ser >= 1")
    sites = site_operators(axis, n_qubits, full_space_cap)
    e = _elementary_sums(sites, k)
    # S_r: soma sobre índices distintos ordenados = r! E_r
    s = [factorial(r) * e[r] for r in range(k + 1)]
    one = s[0]
    n = float(n_qubits)

    if k == 1:
        return s[1] / 2
    if k == 2:
        return (n * one + s[2]) / 4
    if k == 3:
        return ((3 * n - 2) * s[1] + s[3]) / 8
    if k == 4:
        return ((3 * n - 2) * n * one + 2 * (3 * n - 4) * s[2] + s[4]) / 16
    if k == 5:
        return ((15 * n * (n - 2) + 16) * s[1] + 10 * (n - 2) * s[3] + s[5]) / 32
    return (
        n * (15 * n * (n - 2) + 16) * one
        + (15 * n * (3 * n - 10) + 136) * s[2]
        + 5 * (3 * n - 8) * s[4]
        + s[6]
    ) / 64


def pauli_expansion_check(
    axis: Axis | str, n_qubits: int, k: int, full_space_cap: int | None = None
) -> float:
    """Máximo |J_α^k (potência) − J_α^k (expansão)| entrada a entrada."""
    expanded = pauli_expansion(axis, n_qubits, k, full_space_cap)
    powered = collective_power(
        axis, n_qubits, k, Representation.FULL, full_space_cap
    ).entries
    residual = float(np.max(np.abs(powered - expanded)))
    log.debug("pauli.expansion", n=n_qubits, k=k, residual=residual)
    return residual
