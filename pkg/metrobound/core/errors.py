from __future__ import annotations


class MetroboundError(Exception):
    """Erro base da biblioteca."""


class DomainError(MetroboundError, ValueError):
    """Pré-condição violada (paridade de N, faixas, k, λ, pureza)."""


class UnsupportedError(DomainError):
    """Caso fora do que a biblioteca sabe calcular (ex.: expansão de Pauli k > 6)."""


class CapacityError(MetroboundError):
    """Dimensão acima do teto do espaço completo."""

    def __init__(self, n_qubits: int, cap: int) -> None:
        super().__init__(
            f"N={n_qubits} excede o teto do espaço completo (N <= {cap}); "
            "use a representação de Dicke ou --full-space-cap"
        )
        self.n_qubits = n_qubits
        self.cap = cap


class ComputationError(MetroboundError):
    """Inconsistência interna entre caminhos de cálculo independentes."""
