from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

from metrobound.schemas.operators import Axis


class MixedHamiltonianParams(BaseModel):
    """H_{α,β} = μ J_α + ν J_β²; eixos padrão α = x, β = z."""

    model_config = ConfigDict(frozen=True)

    mu: float
    nu: float
    n_qubits: int = Field(..., ge=1)
    axis_a: Axis = Field(default_factory=lambda: Axis(label="x"))
    axis_b: Axis = Field(default_factory=lambda: Axis(label="z"))

    @field_validator("axis_a", "axis_b", mode="before")
    @classmethod
    def _parse_axis(cls, value):
        return Axis.parse(value)

    @property
    def same_axis(self) -> bool:
        return abs(float(self.axis_a.unit @ self.axis_b.unit)) > 1.0 - 1e-12

    @property
    def trivial(self) -> bool:
        """Mesmo eixo com μ e ν não nulos: H é função de um único J."""
        return self.same_axis and self.mu != 0.0 and self.nu != 0.0

    @property
    def orthogonal(self) -> bool:
        return abs(float(self.axis_a.unit @ self.axis_b.unit)) < 1e-12
