from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

# portão estatístico: |analítico − média MC| ≤ 4σ
CONSISTENCY_SIGMAS = 4.0


class AverageQfiResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_qubits: int
    k: int
    analytic: float | None = None
    mc_mean: float
    mc_stderr: float = Field(..., ge=0.0)
    n_samples: int = Field(..., ge=2)
    seed: int

    @property
    def z_score(self) -> float | None:
        if self.analytic is None:
            return None
        if self.mc_stderr == 0.0:
            return 0.0 if self.analytic == self.mc_mean else float("inf")
        return abs(self.analytic - self.mc_mean) / self.mc_stderr

    @property
    def consistent(self) -> bool:
        z = self.z_score
        return z is None or z <= CONSISTENCY_SIGMAS
