"""
H_{α,β} = μ J_α + ν J_β²: C_sep pelo ansatz simétrico no disco α²+β² ≤ 1,
C_ent pelos autovalores extremos e a razão s = C_ent/C_sep.

No ansatz simétrico cada qubit tem ⟨σ_α⟩ = α e ⟨σ_β⟩ = β, com eixos
ortogonais. Para N grande os autovalores extremos saem do setor de spin
máximo (base de Dicke); até SECTOR_CHECK_MAX_N o espaço completo confirma.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.linalg import eig_banded
from scipy.optimize import minimize, minimize_scalar

from metrobound.core.errors import (
    CapacityError,
    ComputationError,
    DomainError,
    UnsupportedError,
)
from metrobound.core.logging import get_logger
from metrobound.core.settings import settings
from metrobound.domain.constants import (
    FIG3_MUS,
    FULL_PRODUCT_MAX_N,
    HAB_REFINE_TOL,
    SECTOR_CHECK_TOL,
)
from metrobound.schemas.bounds import BoundMethod, BoundReport, ProductBloch
from metrobound.schemas.mixed import MixedHamiltonianParams
from metrobound.schemas.operators import Representation
from metrobound.schemas.records import HabRecord
from metrobound.services.collective_ops import (
    build_collective,
    dicke_tridiagonal,
)
from metrobound.services.separability_bounds import (
    _raw_variance,
    outcome_distribution,
)
from metrobound.utils.numeric import log_grid
from metrobound.utils.parallel import map_ordered
from metrobound.utils.rng import make_rng

log = get_logger()

_PURITY_TOL = 1e-12
_SAME_AXIS_GRID = 2001


def _disk_variance(alpha, beta, mu: float, nu: float, n: int):
    """Var(H) no ansatz simétrico; aceita escalares ou arrays."""
    a2 = np.square(alpha)
    b2 = np.square(beta)
    m = n - 1
    return (n / 8.0) * (
        2.0 * (1.0 - a2) * mu**2
        - 4.0 * alpha * b2 * mu * nu * m
        + (1.0 - b2) * nu**2 * m * (b2 * (2 * n - 3) + 1.0)
    )


def _uses_disk_formula(params: MixedHamiltonianParams) -> bool:
    return params.orthogonal or params.mu == 0.0 or params.nu == 0.0


def _same_axis_variance(alpha: float, params: MixedHamiltonianParams) -> float:
    # H = μJ + νJ²: variância exata da distribuição de J no produto simétrico
    n = params.n_qubits
    dist = outcome_distribution(np.full(n, alpha))
    j = n / 2.0 - np.arange(n + 1, dtype=float)
    y = params.mu * j + params.nu * j**2
    mean = float(dist @ y)
    return float(dist @ (y - mean) ** 2)


def hab_symmetric_variance(
    alpha: float, beta: float, params: MixedHamiltonianParams
) -> float:
    """
    (N/8){2(1−α²)μ² − 4αβ²μν(N−1) + (1−β²)ν²(N−1)[β²(2N−3)+1]}.

    Com eixos iguais β é ignorado e α é a componente comum.
    """
    if alpha**2 + beta**2 > 1.0 + _PURITY_TOL:
        raise DomainError(f"(α, β) = ({alpha}, {beta}) fora do disco α²+β² ≤ 1")
    if _uses_disk_formula(params):
        value = _disk_variance(alpha, beta, params.mu, params.nu, params.n_qubits)
        return max(float(value), 0.0)
    if params.same_axis:
        return max(_same_axis_variance(alpha, params), 0.0)
    raise UnsupportedError("H_{α,β} só para eixos ortogonais ou iguais")


def _project_disk(point: np.ndarray) -> np.ndarray:
    radius = float(np.hypot(point[0], point[1]))
    return point / radius if radius > 1.0 else point


def _csep_same_axis(params: MixedHamiltonianParams) -> BoundReport:
    grid = np.linspace(-1.0, 1.0, _SAME_AXIS_GRID)
    values = np.array([_same_axis_variance(a, params) for a in grid])
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    res = minimize_scalar(
        lambda a: -_same_axis_variance(a, params),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": HAB_REFINE_TOL},
    )
    alpha, var = grid[best], values[best]
    if -res.fun > var:
        alpha, var = float(res.x), -float(res.fun)
    return BoundReport(
        value=max(4.0 * var, 0.0),
        method=BoundMethod.NUMERIC_SYMMETRIC,
        argmax=ProductBloch.uniform(alpha, params.n_qubits),
        converged=bool(res.success),
    )


def _csep_disk(
    params: MixedHamiltonianParams, n_angles: int, n_radii: int
) -> BoundReport:
    n = params.n_qubits
    radii = np.linspace(0.0, 1.0, n_radii)
    angles = np.linspace(0.0, 2.0 * np.pi, n_angles)
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    alphas, betas = rr * np.cos(aa), rr * np.sin(aa)
    values = _disk_variance(alphas, betas, params.mu, params.nu, n)
    idx = np.unravel_index(int(np.argmax(values)), values.shape)
    start = np.array([alphas[idx], betas[idx]])

    def objective(x: np.ndarray) -> float:
        a, b = _project_disk(x)
        return -float(_disk_variance(a, b, params.mu, params.nu, n))

    res = minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"xatol": HAB_REFINE_TOL, "fatol": HAB_REFINE_TOL, "maxiter": 4000},
    )
    point, var = start, float(values[idx])
    refined = _project_disk(np.asarray(res.x, dtype=float))
    if -res.fun >= var:
        point, var = refined, -float(res.fun)

    return BoundReport(
        value=max(4.0 * var, 0.0),
        method=BoundMethod.NUMERIC_SYMMETRIC,
        disk_point=(float(point[0]), float(point[1])),
        converged=bool(res.success),
    )


def _full_product_variance(
    a: np.ndarray, b: np.ndarray, mu: float, nu: float
) -> float:
    linear = 0.25 * float(np.sum(1.0 - a**2))
    quadratic = _raw_variance(b, 2)
    cross = -0.5 * float(np.sum(a * b * (b.sum() - b)))
    return mu**2 * linear + nu**2 * quadratic + mu * nu * cross


def csep_hab_full_product(
    params: MixedHamiltonianParams,
    n_starts: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
) -> BoundReport:
    """
    max 4·Var(H) sobre estados produto arbitrários (um vetor de Bloch por qubit),
    com ⟨σ_α⟩_i = sin θ_i cos φ_i e ⟨σ_β⟩_i = cos θ_i.
    """
    n = params.n_qubits
    if n > FULL_PRODUCT_MAX_N:
        raise DomainError(
            f"otimizador de produto completo só até N={FULL_PRODUCT_MAX_N}"
        )
    if not params.orthogonal:
        raise UnsupportedError("otimizador de produto completo exige eixos ortogonais")
    n_starts = settings.OPTIMIZER_STARTS if n_starts is None else n_starts
    seed = settings.DEFAULT_SEED if seed is None else seed
    if n_starts < 1:
        raise DomainError("n_starts deve ser >= 1")

    def split(angles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        theta, phi = angles[:n], angles[n:]
        return np.sin(theta) * np.cos(phi), np.cos(theta)

    def objective(angles: np.ndarray) -> float:
        a, b = split(angles)
        return -4.0 * _full_product_variance(a, b, params.mu, params.nu)

    def run(index: int) -> tuple[float, np.ndarray, bool]:
        x0 = make_rng(seed, index).uniform(0.0, 2.0 * np.pi, 2 * n)
        res = minimize(
            objective,
            x0,
            method="L-BFGS-B",
            options={"gtol": settings.OPTIMIZER_GTOL, "ftol": 1e-15},
        )
        return -float(res.fun), res.x, bool(res.success)

    results = map_ordered(run, range(n_starts), threads)
    value, angles, converged = max(results, key=lambda r: r[0])
    a, _ = split(angles)
    log.info("hab.full_product", n=n, mu=params.mu, nu=params.nu, value=value)
    return BoundReport(
        value=max(value, 0.0),
        method=BoundMethod.NUMERIC_FULL,
        argmax=ProductBloch(alphas=np.clip(a, -1.0, 1.0)),
        n_starts=n_starts,
        converged=converged,
    )


def csep_hab(
    params: MixedHamiltonianParams,
    n_angles: int | None = None,
    n_radii: int | None = None,
    cross_check: bool = False,
    n_starts: int | None = None,
    seed: int | None = None,
) -> BoundReport:
    """
    4·max Var(H) no disco: grade polar densa e refinamento Nelder-Mead.
    Com `cross_check` (N ≤ 8) o valor do produto completo vai em `numeric_value`.
    """
    if _uses_disk_formula(params):
        report = _csep_disk(
            params,
            n_angles or settings.HAB_GRID_ANGLES,
            n_radii or settings.HAB_GRID_RADII,
        )
    elif params.same_axis:
        report = _csep_same_axis(params)
    else:
        raise UnsupportedError("H_{α,β} só para eixos ortogonais ou iguais")

    if not cross_check:
        return report
    full = csep_hab_full_product(params, n_starts=n_starts, seed=seed)
    if report.value < full.value - 1e-6:
        log.warning(
            "hab.symmetric_below_full",
            n=params.n_qubits,
            mu=params.mu,
            nu=params.nu,
            symmetric=report.value,
            full=full.value,
        )
    return report.model_copy(update={"numeric_value": full.value})


def _hab_dense(
    params: MixedHamiltonianParams,
    representation: Representation,
    full_space_cap: int | None = None,
):
    n = params.n_qubits
    ja = build_collective(params.axis_a, n, representation, full_space_cap).entries
    jb = build_collective(params.axis_b, n, representation, full_space_cap).entries
    h = params.mu * ja + params.nu * (jb @ jb)
    h = 0.5 * (h + h.conj().T)
    if not np.any(h.imag):
        h = h.real
    return np.linalg.eigvalsh(h)


def _hab_banded_extremes(params: MixedHamiltonianParams) -> tuple[float, float]:
    """Extremos de H no setor de Dicke via matriz pentadiagonal (eig_banded)."""
    n = params.n_qubits
    dim = n + 1
    d_a, up_a = dicke_tridiagonal(params.axis_a, n)
    d_b, up_b = dicke_tridiagonal(params.axis_b, n)
    d_b = d_b.real

    # T² com T tridiagonal: banda 2
    up_abs2 = np.abs(up_b) ** 2
    diag = d_b**2
    diag[:-1] += up_abs2
    diag[1:] += up_abs2
    super1 = up_b * (d_b[:-1] + d_b[1:])
    super2 = up_b[:-1] * up_b[1:]

    band = np.zeros((3, dim), dtype=complex)
    band[2] = params.nu * diag + params.mu * d_a.real
    band[1, 1:] = params.nu * super1 + params.mu * up_a
    band[0, 2:] = params.nu * super2
    if not np.any(band.imag):
        band = band.real

    low = eig_banded(
        band, lower=False, eigvals_only=True, select="i", select_range=(0, 0)
    )
    high = eig_banded(
        band, lower=False, eigvals_only=True, select="i", select_range=(n, n)
    )
    return float(low[0]), float(high[0])


def hab_extremes(
    params: MixedHamiltonianParams, full_space_cap: int | None = None
) -> tuple[float, float, str]:
    """
    (h_min, h_max, método). Até SECTOR_CHECK_MAX_N, e dentro do teto do espaço
    completo, usa o espaço completo e confere com o setor de Dicke; fora disso
    só o setor.
    """
    n = params.n_qubits
    cap = settings.FULL_SPACE_CAP if full_space_cap is None else full_space_cap
    if n <= min(settings.SECTOR_CHECK_MAX_N, cap):
        full = _hab_dense(params, Representation.FULL, cap)
        sector = _hab_dense(params, Representation.DICKE)
        gap = max(abs(full[0] - sector[0]), abs(full[-1] - sector[-1]))
        scale = max(1.0, float(np.max(np.abs(full))))
        log.info("hab.sector_check", n=n, mu=params.mu, nu=params.nu, max_abs_diff=gap)
        if gap > SECTOR_CHECK_TOL * scale:
            raise ComputationError(
                f"H_{{α,β}} N={n}: extremos fora do setor de spin máximo "
                f"(diferença {gap:.3e})"
            )
        return float(full[0]), float(full[-1]), "full"
    h_min, h_max = _hab_banded_extremes(params)
    return h_min, h_max, "dicke_sector"


def cent_hab(
    params: MixedHamiltonianParams, full_space_cap: int | None = None
) -> float:
    """C_ent(H_{α,β}) = (h_max − h_min)²."""
    h_min, h_max, _ = hab_extremes(params, full_space_cap)
    return (h_max - h_min) ** 2


def default_hab_n_values(full_range: bool = False) -> list[int]:
    """Grade log de N: 3..10^4 (ou 10^6 com `full_range`)."""
    if full_range:
        return log_grid(3.0, 1e6, 49)
    return log_grid(3.0, 1e4, 33)


def s_hab_sweep(
    mu_values: Sequence[float] = FIG3_MUS,
    n_values: Sequence[int] | None = None,
    full_range: bool = False,
    axis_a: str = "x",
    axis_b: str = "z",
    full_space_cap: int | None = None,
    threads: int | None = None,
    seed: int | None = None,
) -> list[HabRecord]:
    """
    Registros (N, μ, C_sep, C_ent, s) com ν = 1 − μ, ordenados por (N, μ).
    A varredura é determinística; `seed` só identifica a execução nos registros.
    """
    if n_values is None:
        n_values = default_hab_n_values(full_range)
    cells = sorted({(int(n), float(mu)) for n in n_values for mu in mu_values})

    def run(cell: tuple[int, float]) -> HabRecord:
        n, mu = cell
        nu = 1.0 - mu
        try:
            params = MixedHamiltonianParams(
                mu=mu, nu=nu, n_qubits=n, axis_a=axis_a, axis_b=axis_b
            )
            bound = csep_hab(params)
            h_min, h_max, method = hab_extremes(params, full_space_cap)
        except (DomainError, CapacityError) as exc:
            return HabRecord(n=n, mu=mu, nu=nu, seed=seed, error=str(exc))
        c_ent = (h_max - h_min) ** 2
        alpha, beta = bound.disk_point or (None, None)
        return HabRecord(
            n=n,
            mu=mu,
            nu=nu,
            csep=bound.value,
            cent=c_ent,
            s=c_ent / bound.value if bound.value > 0.0 else None,
            alpha=alpha,
            beta=beta,
            cent_method=method,
            seed=seed,
        )

    return map_ordered(run, cells, threads)
