from __future__ import annotations

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from metrobound.domain.constants import (
    HERMITIAN_TOL,
    LAMBDA_SUM_TOL,
    MIN_EIG_TOL,
    PURE_NORM_TOL,
    TRACE_TOL,
)
from metrobound.schemas.operators import Representation, dimension_for


class StateKind(str, Enum):
    PURE = "pure"
    DENSITY = "density"


class QuantumState(BaseModel):
    """Vetor puro ou matriz densidade, normalizado, numa representação declarada."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: StateKind
    data: np.ndarray
    representation: Representation
    n_qubits: int = Field(..., ge=1)

    @field_validator("data", mode="after")
    @classmethod
    def _as_readonly(cls, value: np.ndarray) -> np.ndarray:
        arr = np.array(value, dtype=complex, copy=True)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_invariants(self):
        dim = dimension_for(self.representation, self.n_qubits)
        if self.kind is StateKind.PURE:
            if self.data.shape != (dim,):
                raise ValueError(f"vetor puro deve ter forma ({dim},)")
            norm = float(np.linalg.norm(self.data))
            if abs(norm - 1.0) > PURE_NORM_TOL:
                raise ValueError(f"vetor não normalizado (norma={norm!r})")
            return self

        if self.data.shape != (dim, dim):
            raise ValueError(f"matriz densidade deve ter forma ({dim}, {dim})")
        dev = np.max(np.abs(self.data - self.data.conj().T), initial=0.0)
        if dev > HERMITIAN_TOL:
            raise ValueError(f"matriz densidade não hermitiana (desvio {dev:.3e})")
        trace = complex(np.trace(self.data))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"traço deve ser 1 (traço={trace!r})")
        min_eig = float(np.linalg.eigvalsh(self.data)[0])
        if min_eig < -MIN_EIG_TOL:
            raise ValueError(f"autovalor negativo {min_eig:.3e}")
        return self

    @property
    def dim(self) -> int:
        return int(self.data.shape[0])

    @property
    def is_pure(self) -> bool:
        return self.kind is StateKind.PURE


class OptimalStateParams(BaseModel):
    """Pesos (λ1, λ2, λ3) de √λ1|α+^N⟩ + √λ2|α−^N⟩ + √λ3|S̃_N⟩."""

    model_config = ConfigDict(frozen=True)

    lambda1: float = Field(..., ge=0.0)
    lambda2: float = Field(..., ge=0.0)
    lambda3: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def _check_sum(self):
        total = self.lambda1 + self.lambda2 + self.lambda3
        if abs(total - 1.0) > LAMBDA_SUM_TOL:
            raise ValueError(f"λ1+λ2+λ3 deve ser 1 (soma={total!r})")
        return self

    @classmethod
    def from_pair(cls, lambda1: float, lambda2: float) -> OptimalStateParams:
        # λ3 absorve o resto; ruído de arredondamento negativo vira 0
        return cls(
            lambda1=lambda1, lambda2=lambda2, lambda3=max(0.0, 1.0 - lambda1 - lambda2)
        )

    @classmethod
    def from_lambda(cls, lam: float) -> OptimalStateParams:
        """Família Φ(λ) = (λ, 1/2 − λ, 1/2)."""
        return cls(lambda1=lam, lambda2=0.5 - lam, lambda3=0.5)

    @property
    def weight(self) -> float:
        """λ1 + λ2."""
        return self.lambda1 + self.lambda2
