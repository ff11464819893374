from __future__ import annotations

from collections.abc import Sequence
from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from metrobound.domain.constants import AXIS_NORM_TOL, HERMITIAN_TOL

_LABEL_VECTORS: dict[str, tuple[float, float, float]] = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}


class Representation(str, Enum):
    FULL = "full"  # espaço 2^N
    DICKE = "dicke"  # subespaço simétrico, dimensão N+1


def dimension_for(representation: Representation, n_qubits: int) -> int:
    if representation is Representation.FULL:
        return 2**n_qubits
    return n_qubits + 1


class Axis(BaseModel):
    """Direção α: rótulo x/y/z ou vetor de Bloch unitário."""

    model_config = ConfigDict(frozen=True)

    label: Literal["x", "y", "z"] | None = None
    vector: tuple[float, float, float]

    @model_validator(mode="before")
    @classmethod
    def _fill_vector(cls, data):
        if isinstance(data, dict) and data.get("vector") is None:
            label = data.get("label")
            if label not in _LABEL_VECTORS:
                raise ValueError("informe label em {x, y, z} ou um vetor de Bloch")
            data = {**data, "vector": _LABEL_VECTORS[label]}
        return data

    @model_validator(mode="after")
    def _check_norm(self):
        norm = float(np.linalg.norm(self.vector))
        if abs(norm - 1.0) > AXIS_NORM_TOL:
            raise ValueError(f"vetor de Bloch deve ter norma 1 (norma={norm!r})")
        if self.label is not None and not np.allclose(
            self.vector, _LABEL_VECTORS[self.label], atol=AXIS_NORM_TOL
        ):
            raise ValueError("label e vector não correspondem")
        return self

    @classmethod
    def parse(cls, value: Axis | str | Sequence[float]) -> Axis:
        if isinstance(value, Axis):
            return value
        if isinstance(value, str):
            return cls(label=value.strip().lower())
        return cls(vector=tuple(float(c) for c in value))

    @property
    def unit(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float)

    def __str__(self) -> str:
        if self.label:
            return self.label
        return "({:.6g},{:.6g},{:.6g})".format(*self.vector)


class OperatorMatrix(BaseModel):
    """Matriz hermitiana densa marcada com a representação e o número de qubits."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray
    representation: Representation
    n_qubits: int = Field(..., ge=1)

    @field_validator("entries", mode="after")
    @classmethod
    def _as_readonly(cls, value: np.ndarray) -> np.ndarray:
        arr = np.array(value, dtype=complex, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("entries deve ser uma matriz quadrada")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_invariants(self):
        expected = dimension_for(self.representation, self.n_qubits)
        if self.dim != expected:
            raise ValueError(
                f"dimensão {self.dim} incompatível com {self.representation.value}"
                f"({self.n_qubits}) = {expected}"
            )
        dev = np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0)
        if dev > HERMITIAN_TOL:
            raise ValueError(f"operador não hermitiano (desvio {dev:.3e})")
        return self

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)
