from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

_X_TOL = 1e-10


class SqueezingReport(BaseModel):
    """Matrizes C, Γ e 𝔛 = (N−1)Γ + C e o resultado das três desigualdades."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_qubits: int
    c_matrix: np.ndarray
    gamma_matrix: np.ndarray
    x_matrix: np.ndarray
    trace_gamma: float
    trace_c: float
    chi_min: float
    chi_max: float
    # (ss1, ss2, ss3); None quando só as matrizes foram pedidas
    violated: tuple[bool, bool, bool] | None = None

    @field_validator("c_matrix", "gamma_matrix", "x_matrix", mode="after")
    @classmethod
    def _symmetric_3x3(cls, value: np.ndarray) -> np.ndarray:
        arr = np.array(value, dtype=float, copy=True)
        if arr.shape != (3, 3):
            raise ValueError("matriz de correlação deve ser 3x3")
        if np.max(np.abs(arr - arr.T)) > _X_TOL:
            raise ValueError("matriz de correlação deve ser simétrica")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_x(self):
        expected = (self.n_qubits - 1) * self.gamma_matrix + self.c_matrix
        if np.max(np.abs(expected - self.x_matrix)) > _X_TOL * max(
            1.0, float(np.max(np.abs(expected)))
        ):
            raise ValueError("𝔛 difere de (N−1)Γ + C")
        if self.chi_min > self.chi_max:
            raise ValueError("chi_min > chi_max")
        return self

    @property
    def entangled(self) -> bool:
        return bool(self.violated and any(self.violated))
