import os
import sys

# Add the current directory to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from functools import reduce

import numpy as np
import pytest

from metrobound.core.logging import configure_logging
from metrobound.core.settings import settings
from metrobound.schemas.operators import Representation
from metrobound.schemas.states import QuantumState, StateKind
from metrobound.utils.rng import make_rng


@pytest.fixture(autouse=True)
def quiet_logging():
    """Cada teste começa com logs em WARNING no stderr."""
    configure_logging(level="WARNING")


@pytest.fixture
def rng():
    """Gerador determinístico por teste."""
    return make_rng(12345)


@pytest.fixture
def fast_settings(monkeypatch):
    """Configuração enxuta: poucas partidas, uma thread e grade H_{α,β} grossa."""
    monkeypatch.setattr(settings, "OPTIMIZER_STARTS", 20)
    monkeypatch.setattr(settings, "THREADS", 1)
    monkeypatch.setattr(settings, "HAB_GRID_ANGLES", 181)
    monkeypatch.setattr(settings, "HAB_GRID_RADII", 91)
    monkeypatch.setattr(settings, "MC_BATCH_SIZE", 1000)
    return settings


def random_pure_state(rng: np.random.Generator, n_qubits: int) -> QuantumState:
    """Estado puro Haar-aleatório no espaço completo 2^N."""
    dim = 2**n_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return QuantumState(
        kind=StateKind.PURE,
        data=vec / np.linalg.norm(vec),
        representation=Representation.FULL,
        n_qubits=n_qubits,
    )


def random_mixed_state(
    rng: np.random.Generator, n_qubits: int, rank: int = 3
) -> QuantumState:
    dim = 2**n_qubits
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return QuantumState(
        kind=StateKind.DENSITY,
        data=rho / np.trace(rho).real,
        representation=Representation.FULL,
        n_qubits=n_qubits,
    )


def random_product_state(rng: np.random.Generator, n_qubits: int) -> QuantumState:
    """Produto de qubits puros com vetores de Bloch arbitrários (fases complexas)."""
    factors = []
    for _ in range(n_qubits):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        factors.append(v / np.linalg.norm(v))
    vec = reduce(np.kron, factors)
    return QuantumState(
        kind=StateKind.PURE,
        data=vec / np.linalg.norm(vec),
        representation=Representation.FULL,
        n_qubits=n_qubits,
    )
