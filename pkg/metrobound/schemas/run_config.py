from __future__ import annotations

from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from metrobound.core.settings import settings
from metrobound.schemas.operators import Axis


class Command(str, Enum):
    BOUNDS = "bounds"
    FIG2A = "fig2a"
    FIG2B = "fig2b"
    FIG3 = "fig3"
    FIG4 = "fig4"
    FIG5 = "fig5"
    FIG6 = "fig6"
    FIG7 = "fig7"
    QFI = "qfi"
    AVERAGE = "average"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class Fig5Variant(str, Enum):
    A = "a"  # λ2 = 0, N ∈ {6, 10, 20, 30}
    B = "b"  # λ2 = 0, N = 10
    C = "c"  # λ1 = λ2 = λ/2, N = 6


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    n_values: list[int] = Field(default_factory=list)
    k_values: list[int] = Field(default_factory=list)
    axis: Axis = Field(default_factory=lambda: Axis(label="z"))
    eta_values: list[float] = Field(default_factory=list)
    lambda1_values: list[float] = Field(default_factory=list)
    lambda2_values: list[float] = Field(default_factory=list)
    mu_values: list[float] = Field(default_factory=list)
    samples: int = Field(default_factory=lambda: settings.DEFAULT_SAMPLES, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    starts: int = Field(default_factory=lambda: settings.OPTIMIZER_STARTS, ge=0)
    grid: int = Field(201, ge=2)
    variant: Fig5Variant = Fig5Variant.B
    full_range: bool = False
    full_space_cap: int = Field(default_factory=lambda: settings.FULL_SPACE_CAP, ge=1)
    format: OutputFormat = OutputFormat.CSV
    out: Path | None = None

    @field_validator("axis", mode="before")
    @classmethod
    def _parse_axis(cls, value):
        return Axis.parse(value)

    @field_validator("n_values", "k_values")
    @classmethod
    def _positive_ints(cls, value: list[int]) -> list[int]:
        if any(v < 1 for v in value):
            raise ValueError("N e k devem ser >= 1")
        return value

    @field_validator("eta_values", "lambda1_values", "lambda2_values")
    @classmethod
    def _unit_interval(cls, value: list[float]) -> list[float]:
        if any(not 0.0 <= v <= 1.0 for v in value):
            raise ValueError("η e λ devem estar em [0, 1]")
        return value

    def require(self, *names: str) -> None:
        """Falha se alguma das grades pedidas estiver vazia."""
        empty = [name for name in names if not getattr(self, name)]
        if empty:
            raise ValueError(f"grade vazia: {', '.join(empty)}")
