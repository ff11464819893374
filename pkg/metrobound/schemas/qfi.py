from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, field_validator

from metrobound.domain.constants import QFI_NEG_CLAMP


class QfiMethod(str, Enum):
    EIGEN = "eigen"
    PURE_VARIANCE = "pure_variance"
    CLOSED_FORM_PHI = "closed_form_phi"
    CLOSED_FORM_NOISY = "closed_form_noisy"


class QfiResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    method: QfiMethod

    @field_validator("value", mode="after")
    @classmethod
    def _clamp(cls, value: float) -> float:
        if value < -QFI_NEG_CLAMP:
            raise ValueError(f"QFI negativa {value!r}")
        return max(value, 0.0)
