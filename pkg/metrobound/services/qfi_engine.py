from __future__ import annotations

from math import ldexp

import numpy as np

from metrobound.core.errors import DomainError
from metrobound.domain.constants import QFI_EIG_CUT
from metrobound.schemas.operators import OperatorMatrix
from metrobound.schemas.qfi import QfiMethod, QfiResult
from metrobound.schemas.states import OptimalStateParams, QuantumState, StateKind
from metrobound.services.collective_ops import extreme_eigenvalues


def _check_compatible(state: QuantumState, op: OperatorMatrix) -> None:
    if (
        state.dim != op.dim
        or state.representation is not op.representation
        or state.n_qubits != op.n_qubits
    ):
        raise DomainError(
            f"estado {state.representation.value}({state.n_qubits}) e operador "
            f"{op.representation.value}({op.n_qubits}) incompatíveis"
        )


def variance(state: QuantumState, op: OperatorMatrix) -> float:
    """Var(H) = ⟨H²⟩ − ⟨H⟩², na forma centrada para estados puros."""
    _check_compatible(state, op)
    h = op.entries
    if state.kind is StateKind.PURE:
        psi = state.data
        h_psi = h @ psi
        mean = np.vdot(psi, h_psi).real
        return float(np.linalg.norm(h_psi - mean * psi) ** 2)
    rho = state.data
    mean = np.trace(rho @ h).real
    second = np.trace(rho @ h @ h).real
    return float(max(second - mean**2, 0.0))


def qfi_pure(psi: QuantumState, op: OperatorMatrix) -> QfiResult:
    if psi.kind is not StateKind.PURE:
        raise DomainError("qfi_pure exige estado puro")
    return QfiResult(value=4.0 * variance(psi, op), method=QfiMethod.PURE_VARIANCE)


def qfi_general(rho: QuantumState, op: OperatorMatrix) -> QfiResult:
    """F_Q = 2 Σ_{k,l} (λ_k−λ_l)²/(λ_k+λ_l) |⟨k|H|l⟩|² sobre λ_k+λ_l > corte."""
    _check_compatible(rho, op)
    if rho.kind is StateKind.PURE:
        matrix = np.outer(rho.data, rho.data.conj())
    else:
        matrix = rho.data
    evals, evecs = np.linalg.eigh(matrix)
    evals = np.clip(evals, 0.0, None)
    h_eig = evecs.conj().T @ op.entries @ evecs

    sums = evals[:, None] + evals[None, :]
    diffs = evals[:, None] - evals[None, :]
    mask = sums > QFI_EIG_CUT * rho.dim
    weights = np.zeros_like(sums)
    np.divide(2.0 * diffs**2, sums, out=weights, where=mask)
    value = float(np.sum(weights * np.abs(h_eig) ** 2))
    return QfiResult(value=value, method=QfiMethod.EIGEN)


def qfi_phi_closed(params: OptimalStateParams, n_qubits: int, k: int) -> QfiResult:
    """(N^{2k}/4^{k−1}) {λ1+λ2 − [λ1 + (−1)^k λ2]²}."""
    if k < 1:
        raise DomainError("k deve ser >= 1")
    scale = float(n_qubits) ** (2 * k) / 4.0 ** (k - 1)
    signed = params.lambda1 + (-1) ** k * params.lambda2
    return QfiResult(
        value=scale * (params.weight - signed**2), method=QfiMethod.CLOSED_FORM_PHI
    )


def noisy_qfi_factor(eta: float, n_qubits: int) -> float:
    """η² 2^{N−1} / (1 + η(2^{N−1} − 1)), escrito sem 2^{N−1} explícito."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError("η deve estar em [0, 1]")
    if eta == 0.0:
        return 0.0
    return eta**2 / (eta + ldexp(1.0 - eta, 1 - n_qubits))


def qfi_noisy_closed(
    params: OptimalStateParams, eta: float, n_qubits: int, k: int
) -> QfiResult:
    pure = qfi_phi_closed(params, n_qubits, k).value
    return QfiResult(
        value=noisy_qfi_factor(eta, n_qubits) * pure,
        method=QfiMethod.CLOSED_FORM_NOISY,
    )


def variance_upper_bound(op: OperatorMatrix) -> float:
    """Var(H) ≤ (h_max − h_min)²/4 para qualquer estado."""
    h_min, h_max = extreme_eigenvalues(op)
    return (h_max - h_min) ** 2 / 4.0


def qfi_upper_bound(op: OperatorMatrix) -> float:
    return 4.0 * variance_upper_bound(op)
