from __future__ import annotations

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from metrobound.domain.constants import ANALYTIC_VS_NUMERIC_RTOL


class ProductBloch(BaseModel):
    """(α_1, …, α_N) ∈ [−1, 1]^N: ⟨σ_α⟩ de cada qubit."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    alphas: np.ndarray

    @field_validator("alphas", mode="after")
    @classmethod
    def _check_bounds(cls, value: np.ndarray) -> np.ndarray:
        arr = np.array(value, dtype=float, copy=True).reshape(-1)
        if arr.size == 0:
            raise ValueError("ProductBloch precisa de ao menos um qubit")
        if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0):
            raise ValueError("cada α_i deve estar em [-1, 1]")
        arr.setflags(write=False)
        return arr

    @classmethod
    def uniform(cls, alpha: float, n_qubits: int) -> ProductBloch:
        return cls(alphas=np.full(n_qubits, alpha))

    @property
    def n_qubits(self) -> int:
        return int(self.alphas.size)

    @property
    def spread(self) -> float:
        return float(np.ptp(self.alphas))


class BoundMethod(str, Enum):
    ANALYTIC = "analytic"
    NUMERIC_SYMMETRIC = "numeric_symmetric"
    NUMERIC_FULL = "numeric_full"


class BoundReport(BaseModel):
    """Valor de um limite com proveniência e diagnósticos do otimizador."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0)
    method: BoundMethod
    argmax: ProductBloch | None = None
    # ponto (α, β) do disco para H_{α,β}
    disk_point: tuple[float, float] | None = None
    hessian_max_eig: float | None = None
    n_starts: int = Field(0, ge=0)
    converged: bool = True
    # valor de uma execução independente anexada (numérica ou produto completo)
    numeric_value: float | None = None

    @model_validator(mode="after")
    def _check_attached(self):
        if self.method is BoundMethod.ANALYTIC and self.numeric_value is not None:
            gap = abs(self.value - self.numeric_value)
            if gap > ANALYTIC_VS_NUMERIC_RTOL * max(1.0, self.value):
                raise ValueError(
                    f"analítico {self.value!r} e numérico {self.numeric_value!r} "
                    "divergem"
                )
        return self


class HessianCertificate(BaseModel):
    """Autovalores da Hessiana da variância no argmax simétrico."""

    model_config = ConfigDict(frozen=True)

    n_qubits: int
    k: int
    alpha_star: float
    q: float | None = None
    q_prime: float | None = None
    eigenvalues: tuple[float, ...]
    fd_eigenvalues: tuple[float, ...]
    max_abs_diff: float | None = None

    @property
    def max_eigenvalue(self) -> float:
        return max(self.fd_eigenvalues)


class RatioMethod(str, Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


class UsefulnessRatio(BaseModel):
    """s = C_ent / C_sep."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., gt=0.0)
    cent: float
    csep: float
    method: RatioMethod
    converged: bool = True
