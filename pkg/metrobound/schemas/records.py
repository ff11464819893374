from __future__ import annotations

from typing import ClassVar

from pydantic import BaseModel, ConfigDict

from metrobound.version import LIBRARY_VERSION

_TRAILER = ("seed", "version", "error")


class SweepRecord(BaseModel):
    """Uma linha de dados de figura; subclasses fixam o cabeçalho de cada comando."""

    model_config = ConfigDict(extra="forbid")

    command: ClassVar[str] = ""

    seed: int | None = None
    version: str = LIBRARY_VERSION
    error: str | None = None

    @classmethod
    def csv_header(cls) -> list[str]:
        own = [name for name in cls.model_fields if name not in _TRAILER]
        return [*own, *_TRAILER]

    def csv_row(self) -> dict[str, object]:
        return {name: getattr(self, name) for name in self.csv_header()}


class BoundsRecord(SweepRecord):
    command: ClassVar[str] = "bounds"

    n: int
    k: int
    csep_analytic: float | None = None
    csep_numeric: float | None = None
    cent: float | None = None
    s: float | None = None
    converged: bool | None = None
    hessian_max_eig: float | None = None


class STableRecord(SweepRecord):
    command: ClassVar[str] = "fig7"

    n: int
    k: int
    csep: float | None = None
    cent: float | None = None
    s: float | None = None
    converged: bool | None = None
    # s_k > s_{k+2}; vazio quando k+2 está fora da grade
    s_k_gt_s_k2: bool | None = None


class HabRecord(SweepRecord):
    command: ClassVar[str] = "fig3"

    n: int
    mu: float
    nu: float
    csep: float | None = None
    cent: float | None = None
    s: float | None = None
    alpha: float | None = None
    beta: float | None = None
    cent_method: str | None = None


class DetectionRecord(SweepRecord):
    command: ClassVar[str] = "detection"

    point: int
    n: int
    lambda1: float
    lambda2: float
    eta: float
    qfi_k1: float
    qfi_k2: float
    qfi_k3: float
    csep_k1: float
    csep_k2: float
    csep_k3: float
    detected_k1: bool
    detected_k2: bool
    detected_k3: bool
    ss1: bool
    ss2: bool
    ss3: bool
    squeezed: bool
    region: str


class AverageSampleRecord(SweepRecord):
    command: ClassVar[str] = "fig2b"

    n: int
    sample: int
    k: int
    qfi: float
    csep: float
    ratio: float
    t_k: float


class ConfidenceRecord(SweepRecord):
    command: ClassVar[str] = "fig6"

    n: int
    k: int
    avg_qfi: float
    csep: float
    epsilon: float
    gamma: float


class AverageRecord(SweepRecord):
    command: ClassVar[str] = "average"

    n: int
    k: int
    analytic: float | None = None
    mc_mean: float | None = None
    mc_stderr: float | None = None
    n_samples: int | None = None
    consistent: bool | None = None
    cent: float | None = None
    t_k: float | None = None


class QfiRecord(SweepRecord):
    command: ClassVar[str] = "qfi"

    n: int
    k: int
    lambda1: float
    lambda2: float
    lambda3: float
    eta: float
    qfi_closed: float | None = None
    qfi_explicit: float | None = None
    cent: float | None = None
    csep: float | None = None


RECORD_TYPES: dict[str, type[SweepRecord]] = {
    "bounds": BoundsRecord,
    "fig2a": DetectionRecord,
    "fig4": DetectionRecord,
    "fig5": DetectionRecord,
    "fig2b": AverageSampleRecord,
    "fig3": HabRecord,
    "fig6": ConfidenceRecord,
    "fig7": STableRecord,
    "average": AverageRecord,
    "qfi": QfiRecord,
}
