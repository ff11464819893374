from __future__ import annotations

from collections.abc import Sequence
from functools import reduce
from itertools import combinations
from math import comb, factorial, sqrt

import numpy as np
from pydantic import ValidationError

from metrobound.core.errors import DomainError
from metrobound.schemas.bounds import ProductBloch
from metrobound.schemas.operators import Axis, OperatorMatrix, Representation
from metrobound.schemas.states import OptimalStateParams, QuantumState, StateKind
from metrobound.services.collective_ops import axis_eigenstates, check_full_capacity
from metrobound.utils.rng import as_rng


def _pure(vec: np.ndarray, representation: Representation, n: int) -> QuantumState:
    return QuantumState(
        kind=StateKind.PURE, data=vec, representation=representation, n_qubits=n
    )


def _popcounts(n_qubits: int) -> np.ndarray:
    idx = np.arange(2**n_qubits)
    counts = np.zeros_like(idx)
    for bit in range(n_qubits):
        counts += (idx >> bit) & 1
    return counts


def as_product_bloch(
    bloch: ProductBloch | Sequence[float] | np.ndarray,
) -> ProductBloch:
    if isinstance(bloch, ProductBloch):
        return bloch
    try:
        return ProductBloch(alphas=np.asarray(bloch, dtype=float))
    except ValidationError as exc:
        raise DomainError(f"ProductBloch inválido: {exc.errors()[0]['msg']}") from exc


def product_state(
    bloch: ProductBloch | Sequence[float] | np.ndarray,
    axis: Axis | str = "z",
    full_space_cap: int | None = None,
) -> QuantumState:
    """⊗_i [cos θ_i |α+⟩ + sin θ_i |α−⟩], cos 2θ_i = α_i, amplitudes reais ≥ 0."""
    bloch = as_product_bloch(bloch)
    n = bloch.n_qubits
    check_full_capacity(n, full_space_cap)
    plus, minus = axis_eigenstates(axis)
    factors = [
        np.sqrt((1.0 + a) / 2.0) * plus + np.sqrt((1.0 - a) / 2.0) * minus
        for a in bloch.alphas
    ]
    vec = reduce(np.kron, factors)
    return _pure(vec / np.linalg.norm(vec), Representation.FULL, n)


def aligned_product(
    which: int, axis: Axis | str, n_qubits: int, full_space_cap: int | None = None
) -> np.ndarray:
    """|α+⟩^{⊗N} (which=+1) ou |α−⟩^{⊗N} (which=−1), espaço completo."""
    check_full_capacity(n_qubits, full_space_cap)
    plus, minus = axis_eigenstates(axis)
    single = plus if which > 0 else minus
    return reduce(np.kron, [single] * n_qubits)


def ghz_state(
    n_qubits: int, axis: Axis | str = "z", full_space_cap: int | None = None
) -> QuantumState:
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    vec = aligned_product(+1, axis, n_qubits, full_space_cap) + aligned_product(
        -1, axis, n_qubits, full_space_cap
    )
    return _pure(vec / np.sqrt(2.0), Representation.FULL, n_qubits)


def dicke_state(
    n_qubits: int,
    m: int,
    representation: Representation = Representation.FULL,
    full_space_cap: int | None = None,
) -> QuantumState:
    """|D_{N,m}⟩: superposição simétrica com m excitações (|1⟩)."""
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    if not 0 <= m <= n_qubits:
        raise DomainError(f"m deve estar em [0, {n_qubits}]")
    representation = Representation(representation)
    if representation is Representation.DICKE:
        vec = np.zeros(n_qubits + 1, dtype=complex)
        vec[m] = 1.0
        return _pure(vec, representation, n_qubits)

    check_full_capacity(n_qubits, full_space_cap)
    vec = (_popcounts(n_qubits) == m).astype(complex)
    return _pure(vec / sqrt(comb(n_qubits, m)), representation, n_qubits)


def dicke_isometry(n_qubits: int, full_space_cap: int | None = None) -> np.ndarray:
    """Matriz 2^N × (N+1) cujas colunas são |D_{N,m}⟩ no espaço completo."""
    check_full_capacity(n_qubits, full_space_cap)
    counts = _popcounts(n_qubits)
    iso = np.zeros((2**n_qubits, n_qubits + 1), dtype=complex)
    for m in range(n_qubits + 1):
        iso[counts == m, m] = 1.0 / sqrt(comb(n_qubits, m))
    return iso


def singlet_subspace_dimension(n_qubits: int) -> int:
    """d(N) = N!/[(N/2)!(N/2+1)!]; zero para N ímpar."""
    if n_qubits % 2:
        return 0
    half = n_qubits // 2
    return factorial(n_qubits) // (factorial(half) * factorial(half + 1))


def singlet_state(n_qubits: int, full_space_cap: int | None = None) -> QuantumState:
    """
    |S̃_N⟩: soma sobre os arranjos distintos de |01⟩^{⊗N/2}.

    O coeficiente depende só de z, o número de zeros nas primeiras N/2
    posições: z!(N/2−z)!(−1)^{N/2−z} / [(N/2)! √(N/2+1)].
    """
    if n_qubits < 2 or n_qubits % 2:
        raise DomainError("estado singleto exige N par >= 2")
    check_full_capacity(n_qubits, full_space_cap)
    half = n_qubits // 2
    norm = factorial(half) * sqrt(half + 1)
    vec = np.zeros(2**n_qubits, dtype=complex)
    for ones in combinations(range(n_qubits), half):
        index = sum(1 << (n_qubits - 1 - pos) for pos in ones)
        z = half - sum(1 for pos in ones if pos < half)
        vec[index] = factorial(z) * factorial(half - z) * (-1) ** (half - z) / norm
    return _pure(vec, Representation.FULL, n_qubits)


def optimal_state(
    params: OptimalStateParams,
    axis: Axis | str,
    n_qubits: int,
    full_space_cap: int | None = None,
) -> QuantumState:
    """√λ1|α+^N⟩ + √λ2|α−^N⟩ + √λ3|S̃_N⟩."""
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    if params.lambda3 > 0.0 and n_qubits % 2:
        raise DomainError("componente singleto (λ3 > 0) exige N par")
    vec = np.sqrt(params.lambda1) * aligned_product(
        +1, axis, n_qubits, full_space_cap
    ) + np.sqrt(params.lambda2) * aligned_product(-1, axis, n_qubits, full_space_cap)
    if params.lambda3 > 0.0:
        singlet = singlet_state(n_qubits, full_space_cap).data
        vec = vec + np.sqrt(params.lambda3) * singlet
    return _pure(vec / np.linalg.norm(vec), Representation.FULL, n_qubits)


def optimal_lambda_state(
    lam: float, axis: Axis | str, n_qubits: int, full_space_cap: int | None = None
) -> QuantumState:
    """Φ(λ) = √λ|α+^N⟩ + √(1/2−λ)|α−^N⟩ + √(1/2)|S̃_N⟩."""
    try:
        params = OptimalStateParams.from_lambda(lam)
    except ValidationError as exc:
        raise DomainError("λ deve estar em [0, 1/2]") from exc
    return optimal_state(params, axis, n_qubits, full_space_cap)


def to_density_matrix(state: QuantumState) -> QuantumState:
    if state.kind is StateKind.DENSITY:
        return state
    return QuantumState(
        kind=StateKind.DENSITY,
        data=np.outer(state.data, state.data.conj()),
        representation=state.representation,
        n_qubits=state.n_qubits,
    )


def noisy_state(phi: QuantumState, eta: float) -> QuantumState:
    """ρ_η = η|Φ⟩⟨Φ| + (1−η) 1/2^N."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError("η deve estar em [0, 1]")
    if phi.kind is not StateKind.PURE:
        raise DomainError("ρ_η é construído a partir de um estado puro")
    if phi.representation is not Representation.FULL:
        raise DomainError("ρ_η usa a representação completa")
    dim = phi.dim
    rho = eta * np.outer(phi.data, phi.data.conj()) + (1.0 - eta) * np.eye(dim) / dim
    return QuantumState(
        kind=StateKind.DENSITY,
        data=rho,
        representation=Representation.FULL,
        n_qubits=phi.n_qubits,
    )


def random_symmetric_batch(
    n_qubits: int, size: int, rng: int | np.random.Generator
) -> np.ndarray:
    """`size` vetores de Dicke Haar-aleatórios (uma linha por estado)."""
    gen = as_rng(rng)
    raw = gen.standard_normal((size, n_qubits + 1)) + 1j * gen.standard_normal(
        (size, n_qubits + 1)
    )
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def random_symmetric_state(
    n_qubits: int, rng_seed: int | np.random.Generator
) -> QuantumState:
    """Estado puro Haar-uniforme no subespaço simétrico (representação de Dicke)."""
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    vec = random_symmetric_batch(n_qubits, 1, rng_seed)[0]
    return _pure(vec, Representation.DICKE, n_qubits)


def expectation(state: QuantumState, op: OperatorMatrix) -> complex:
    if state.kind is StateKind.PURE:
        return complex(np.vdot(state.data, op.entries @ state.data))
    return complex(np.trace(state.data @ op.entries))
