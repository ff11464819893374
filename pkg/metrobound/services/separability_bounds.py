"""
Limites de separabilidade C_sep(J_α^k), de emaranhamento C_ent(J_α^k) e a
razão s_k = C_ent/C_sep.

Num estado produto os resultados de σ_α em cada qubit são variáveis ±1
independentes com P(+1) = (1+α_i)/2, então Var(J_α^k) sai exata da
distribuição de J_α obtida por convoluções sucessivas. O otimizador
numérico trabalha sobre essa redução clássica.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import acos, cos, sqrt

import numpy as np
from pydantic import ValidationError
from scipy.optimize import brentq, minimize, minimize_scalar

from metrobound.core.errors import ComputationError, DomainError
from metrobound.core.logging import get_logger
from metrobound.core.settings import settings
from metrobound.domain.constants import (
    ANALYTIC_CSEP_KS,
    RADICAND_CLAMP,
)
from metrobound.schemas.bounds import (
    BoundMethod,
    BoundReport,
    HessianCertificate,
    ProductBloch,
    RatioMethod,
    UsefulnessRatio,
)
from metrobound.schemas.records import STableRecord
from metrobound.services.state_factory import as_product_bloch
from metrobound.utils.numeric import fd_hessian, projected_gradient_norm, safe_sqrt
from metrobound.utils.parallel import map_ordered
from metrobound.utils.rng import make_rng

log = get_logger()

_SYMMETRIC_GRID = 2001
_TIE_RTOL = 1e-9
_CONVERGED_PG = 1e-7
_FD_STEP = 1e-3

BlochLike = ProductBloch | Sequence[float] | np.ndarray


def _check_k(k: int) -> None:
    if k < 1:
        raise DomainError("k deve ser >= 1")


def _alphas(bloch: BlochLike) -> np.ndarray:
    return as_product_bloch(bloch).alphas


# ----------------------------------------------------------------------------
# Redução clássica: distribuição de J_α num estado produto
# ----------------------------------------------------------------------------


def _outcome_distribution(alphas: np.ndarray) -> np.ndarray:
    """d_m = P(m resultados −1), m = 0..N; J_α vale N/2 − m."""
    dist = np.ones(1)
    for a in alphas:
        p = 0.5 * (1.0 + a)
        dist = np.convolve(dist, [p, 1.0 - p])
    return dist


def outcome_distribution(bloch: BlochLike) -> np.ndarray:
    """P(m resultados −1) num estado produto, m = 0..N."""
    return _outcome_distribution(_alphas(bloch))


def _support(n_qubits: int, k: int) -> np.ndarray:
    return (n_qubits / 2.0 - np.arange(n_qubits + 1, dtype=float)) ** k


def _variance_from_dist(dist: np.ndarray, y: np.ndarray) -> float:
    mean = float(dist @ y)
    return float(dist @ (y - mean) ** 2)


def product_variance(bloch: BlochLike, k: int) -> float:
    """Var(J_α^k) exata num estado produto (a QFI é 4× este valor)."""
    _check_k(k)
    alphas = _alphas(bloch)
    value = _variance_from_dist(_outcome_distribution(alphas), _support(alphas.size, k))
    return max(value, 0.0)


def _raw_variance(alphas: np.ndarray, k: int) -> float:
    # sem checagem de caixa: usado por diferenças finitas perto da borda
    return _variance_from_dist(_outcome_distribution(alphas), _support(alphas.size, k))


def _raw_gradient(alphas: np.ndarray, k: int) -> np.ndarray:
    n = alphas.size
    y = _support(n, k)
    dist = _outcome_distribution(alphas)
    centered_sq = (y - float(dist @ y)) ** 2

    # prefixos e sufixos para a distribuição "deixa-um-de-fora"
    prefix = [np.ones(1)]
    for a in alphas[:-1]:
        p = 0.5 * (1.0 + a)
        prefix.append(np.convolve(prefix[-1], [p, 1.0 - p]))
    suffix = [np.ones(1)]
    for a in alphas[:0:-1]:
        p = 0.5 * (1.0 + a)
        suffix.append(np.convolve(suffix[-1], [p, 1.0 - p]))
    suffix.reverse()

    grad = np.empty(n)
    for i in range(n):
        loo = np.convolve(prefix[i], suffix[i])
        # ∂d/∂α_i = ½ (L deslocado 0 − L deslocado 1)
        d_dist = 0.5 * (np.append(loo, 0.0) - np.insert(loo, 0, 0.0))
        grad[i] = float(d_dist @ centered_sq)
    return grad


def product_variance_gradient(bloch: BlochLike, k: int) -> np.ndarray:
    """∇_α Var(J_α^k) exato."""
    _check_k(k)
    return _raw_gradient(_alphas(bloch), k)


def p2_polynomial(bloch: BlochLike) -> float:
    """Var(J_α²) num estado produto pelo polinômio explícito em α (oráculo k=2)."""
    a = _alphas(bloch)
    sq = a**2
    total = a.sum()
    pair_term = 0.5 * (np.sum(1.0 - np.outer(sq, sq)) - np.sum(1.0 - sq**2))
    others = total - a
    shared = np.sum((1.0 - sq) * (others**2 - (sq.sum() - sq)))
    return float(0.25 * (pair_term + shared))


# ----------------------------------------------------------------------------
# C_ent
# ----------------------------------------------------------------------------


def entanglement_extremes(n_qubits: int, k: int) -> tuple[float, float]:
    """(h_min, h_max) de J_α^k."""
    _check_k(k)
    h_max = (n_qubits / 2.0) ** k
    if k % 2:
        return -h_max, h_max
    h_min = 0.0 if n_qubits % 2 == 0 else 0.5**k
    return h_min, h_max


def cent_exact(n_qubits: int, k: int) -> Fraction:
    _check_k(k)
    n = n_qubits
    if k % 2:
        return Fraction(n ** (2 * k), 4 ** (k - 1))
    if n % 2 == 0:
        return Fraction(n ** (2 * k), 4**k)
    return Fraction((n**k - 1) ** 2, 4**k)


def cent(n_qubits: int, k: int) -> float:
    """C_ent(J_α^k) = (h_max − h_min)²."""
    return float(cent_exact(n_qubits, k))


# ----------------------------------------------------------------------------
# Formas fechadas k = 1, 2, 3
# ----------------------------------------------------------------------------


def _require_analytic_domain(n_qubits: int, k: int) -> None:
    if k not in ANALYTIC_CSEP_KS:
        raise DomainError("forma analítica só para k em {1, 2, 3}")
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    if k >= 2 and n_qubits < 3:
        raise DomainError("forma analítica para k >= 2 exige N >= 3")


def _k3_terms(n: float) -> tuple[float, float, float]:
    """(b, c1, c2) da forma fechada de C_sep(J_α³)."""
    b = 3 * (n - 5) * n + 20
    c3 = 3 * n * (n * (3 * (n - 9) * n + 128) - 360) + 1720
    c1 = 380 * (164 - 71 * n) / b + 12800 * (n - 1) / b**2 - 3084
    radicand = n**2 * (n * (n * c3 - 1440) + 480) ** 3 / ((n - 2) * (n - 1) * b**4)
    c2 = 3 * safe_sqrt(radicand, RADICAND_CLAMP)
    return b, c1, c2


def _k3_denominator(n: float) -> float:
    """9N⁵ − 18N⁴ − 120N³ − 180N² − 1020N + c1 + c2 (= 216 C_sep(J³))."""
    _, c1, c2 = _k3_terms(n)
    poly = 3 * n * (n * (3 * n**3 - 6 * n**2 - 40 * n - 60) - 340)
    return poly + c1 + c2


def csep3_closed_form(n_qubits: int) -> float:
    _require_analytic_domain(n_qubits, 3)
    return _k3_denominator(float(n_qubits)) / 216.0


def symmetric_qfi_k3(alpha: float, n_qubits: int) -> float:
    """4·Var(J_α³) no estado produto simétrico com ⟨σ_α⟩ = α em todos os qubits."""
    n = float(n_qubits)
    u = alpha**2
    a_coef = 15 * n**2 - 30 * n + 16
    b_coef = (n - 2) * (n - 1) * (3 * (n - 5) * n + 20)
    c_coef = (n - 2) * (n - 1) * (3 * n - 5)
    return n * (1 - u) / 16 * (a_coef + 3 * u**2 * b_coef + 12 * u * c_coef)


def alpha_star(n_qubits: int, k: int) -> float:
    """α* > 0 do máximo simétrico, exato para k ≤ 3."""
    _require_analytic_domain(n_qubits, k)
    n = float(n_qubits)
    if k == 1:
        return 0.0
    if k == 2:
        return sqrt((n - 2) / (2 * n - 3))
    a_coef = 15 * n**2 - 30 * n + 16
    b_coef = (n - 2) * (n - 1) * (3 * (n - 5) * n + 20)
    c_coef = (n - 2) * (n - 1) * (3 * n - 5)
    # raiz positiva de 9B u² + (24C − 6B) u + (A − 12C) = 0, u = α²
    qa, qb, qc = 9 * b_coef, 24 * c_coef - 6 * b_coef, a_coef - 12 * c_coef
    u = (-qb + sqrt(qb**2 - 4 * qa * qc)) / (2 * qa)
    return sqrt(u)


def theta_star(n_qubits: int, k: int) -> float:
    """θ* com cos 2θ* = α*; para k=2 vale (1/4) arcsec(3 − 2N)."""
    return 0.5 * acos(alpha_star(n_qubits, k))


def csep_analytic(n_qubits: int, k: int) -> BoundReport:
    _require_analytic_domain(n_qubits, k)
    n = float(n_qubits)
    if k == 1:
        value = n
    elif k == 2:
        value = (n - 1) ** 3 * n / (2 * (2 * n - 3))
    else:
        value = csep3_closed_form(n_qubits)
        check = symmetric_qfi_k3(alpha_star(n_qubits, 3), n_qubits)
        if abs(value - check) > 1e-9 * max(1.0, value):
            raise ComputationError(
                f"C_sep(J³) N={n_qubits}: forma fechada {value!r} "
                f"!= máximo simétrico {check!r}"
            )
    return BoundReport(
        value=value,
        method=BoundMethod.ANALYTIC,
        argmax=ProductBloch.uniform(alpha_star(n_qubits, k), n_qubits),
        n_starts=0,
        converged=True,
    )


# ----------------------------------------------------------------------------
# Otimização numérica
# ----------------------------------------------------------------------------


class _Candidate:
    __slots__ = ("alphas", "converged", "value")

    def __init__(self, alphas: np.ndarray, value: float, converged: bool) -> None:
        self.alphas = alphas
        self.value = value
        self.converged = converged


def _symmetric_optimum(n_qubits: int, k: int) -> float:
    """α* ≥ 0 maximizando Var no eixo simétrico: grade, busca 1-D e brentq."""
    ones = np.ones(n_qubits)

    def var(a: float) -> float:
        return _raw_variance(a * ones, k)

    def slope(a: float) -> float:
        return float(_raw_gradient(a * ones, k).sum())

    grid = np.linspace(-1.0, 1.0, _SYMMETRIC_GRID)
    values = np.array([var(a) for a in grid])
    best = int(np.flatnonzero(values >= values.max() * (1 - _TIE_RTOL))[-1])
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]

    res = minimize_scalar(
        lambda a: -var(a), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
    )
    a_star = float(res.x)
    if slope(lo) > 0 > slope(hi):
        a_star = brentq(slope, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return abs(a_star)


def _run_start(
    x0: np.ndarray, k: int, scale: float, gtol: float, max_iter: int
) -> _Candidate:
    def objective(x: np.ndarray) -> tuple[float, np.ndarray]:
        return (
            -4.0 * _raw_variance(x, k) / scale,
            -4.0 * _raw_gradient(x, k) / scale,
        )

    res = minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=[(-1.0, 1.0)] * x0.size,
        options={"gtol": gtol, "ftol": 1e-15, "maxiter": max_iter},
    )
    x = np.clip(res.x, -1.0, 1.0)
    _, grad = objective(x)
    converged = bool(res.success) or projected_gradient_norm(grad, x) <= _CONVERGED_PG
    return _Candidate(x, 4.0 * _raw_variance(x, k), converged)


def _select_best(candidates: list[_Candidate]) -> _Candidate:
    """Maior valor; empate (relativo 1e-9) fica com o argmax lexicográfico maior."""
    top = max(c.value for c in candidates)
    tied = [c for c in candidates if c.value >= top - _TIE_RTOL * max(1.0, abs(top))]
    return max(tied, key=lambda c: tuple(c.alphas))


def variance_hessian(alphas: np.ndarray, k: int, h: float = _FD_STEP) -> np.ndarray:
    """Hessiana de Var(J_α^k) por diferenças centrais do gradiente exato."""
    return fd_hessian(lambda x: _raw_gradient(x, k), np.asarray(alphas, float), h)


def csep_numeric(
    n_qubits: int,
    k: int,
    n_starts: int | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
) -> BoundReport:
    """
    max 4·Var(J_α^k) sobre [−1,1]^N: partidas uniformes com L-BFGS-B mais
    uma partida simétrica refinada em 1-D.
    """
    _check_k(k)
    if n_qubits < 1:
        raise DomainError("N deve ser >= 1")
    n_starts = settings.OPTIMIZER_STARTS if n_starts is None else n_starts
    gtol = settings.OPTIMIZER_GTOL if tol is None else tol
    max_iter = settings.OPTIMIZER_MAX_ITER if max_iter is None else max_iter
    seed = settings.DEFAULT_SEED if seed is None else seed
    scale = cent(n_qubits, k) or 1.0

    a_sym = _symmetric_optimum(n_qubits, k)
    x_sym = np.full(n_qubits, a_sym)
    sym_grad = -4.0 * _raw_gradient(x_sym, k) / scale
    candidates = [
        _Candidate(
            x_sym,
            4.0 * _raw_variance(x_sym, k),
            projected_gradient_norm(sym_grad, x_sym) <= _CONVERGED_PG,
        )
    ]

    starts = [x_sym.copy()] + [
        make_rng(seed, i).uniform(-1.0, 1.0, n_qubits) for i in range(n_starts)
    ]
    candidates += map_ordered(
        lambda x0: _run_start(x0, k, scale, gtol, max_iter), starts, threads
    )

    best = _select_best(candidates)
    symmetric = candidates[0]
    if np.ptp(best.alphas) <= 1e-4 and symmetric.value >= best.value * (1 - _TIE_RTOL):
        # quase simétrico: troca pelo ponto simétrico polido, mesmo sinal
        sign = 1.0 if best.alphas.mean() >= 0 else -1.0
        best = _Candidate(
            sign * x_sym, symmetric.value, symmetric.converged or best.converged
        )
    hessian = 4.0 * variance_hessian(best.alphas, k)
    hess_max = float(np.linalg.eigvalsh(hessian)[-1])
    log.info(
        "csep.numeric.done",
        n=n_qubits,
        k=k,
        value=best.value,
        starts=n_starts,
        converged=best.converged,
        hessian_max_eig=hess_max,
    )
    symmetric_argmax = float(np.ptp(best.alphas)) <= 1e-6
    return BoundReport(
        value=max(best.value, 0.0),
        method=(
            BoundMethod.NUMERIC_SYMMETRIC
            if symmetric_argmax
            else BoundMethod.NUMERIC_FULL
        ),
        argmax=ProductBloch(alphas=best.alphas),
        hessian_max_eig=hess_max,
        n_starts=n_starts,
        converged=best.converged,
    )


def csep(
    n_qubits: int,
    k: int,
    with_numeric: bool = False,
    **numeric_kwargs,
) -> BoundReport:
    """Analítico quando existe (opcionalmente com execução numérica anexada)."""
    analytic_ok = k in ANALYTIC_CSEP_KS and (k == 1 or n_qubits >= 3)
    if not analytic_ok:
        return csep_numeric(n_qubits, k, **numeric_kwargs)
    report = csep_analytic(n_qubits, k)
    if not with_numeric:
        return report
    numeric = csep_numeric(n_qubits, k, **numeric_kwargs)
    try:
        return BoundReport(**{**dict(report), "numeric_value": numeric.value})
    except ValidationError as exc:
        raise ComputationError(
            f"C_sep(N={n_qubits}, k={k}): analítico e numérico divergem"
        ) from exc


# ----------------------------------------------------------------------------
# Certificado de Hessiana
# ----------------------------------------------------------------------------


def hessian_certificate_k2(n_qubits: int, h: float = _FD_STEP) -> HessianCertificate:
    """
    Hessiana de Var(J_α²) no máximo simétrico: −(q−q')·1 − q'·𝕁, com
    autovalores −(q−q') (multiplicidade N−1) e −(q−q') − N q'.
    """
    if n_qubits < 3:
        raise DomainError("certificado k=2 exige N >= 3")
    n = float(n_qubits)
    q = (n - 2) * (n - 1) ** 2 / (2 * (2 * n - 3))
    q_prime = (n - 2) * (3 * n - 5) / (2 * (2 * n - 3))
    shift = -(q - q_prime)
    analytic = sorted([shift] * (n_qubits - 1) + [shift - n * q_prime])
    if max(analytic) > 1e-12:
        raise ComputationError(
            f"Hessiana k=2 não é negativa semidefinida em N={n_qubits}"
        )

    a_star = alpha_star(n_qubits, 2)
    fd = np.linalg.eigvalsh(variance_hessian(np.full(n_qubits, a_star), 2, h))
    diff = float(np.max(np.abs(np.sort(fd) - np.asarray(analytic))))
    log.info("hessian.k2", n=n_qubits, q=q, q_prime=q_prime, max_abs_diff=diff)
    return HessianCertificate(
        n_qubits=n_qubits,
        k=2,
        alpha_star=a_star,
        q=q,
        q_prime=q_prime,
        eigenvalues=tuple(analytic),
        fd_eigenvalues=tuple(float(v) for v in np.sort(fd)),
        max_abs_diff=diff,
    )


def hessian_certificate(
    n_qubits: int, k: int, h: float = _FD_STEP
) -> HessianCertificate:
    """Autovalores numéricos da Hessiana de 4·Var(J_α^k) no máximo simétrico."""
    _check_k(k)
    a_star = _symmetric_optimum(n_qubits, k)
    hessian = 4.0 * variance_hessian(np.full(n_qubits, a_star), k, h)
    fd = np.sort(np.linalg.eigvalsh(hessian))
    values = tuple(float(v) for v in fd)
    return HessianCertificate(
        n_qubits=n_qubits,
        k=k,
        alpha_star=a_star,
        eigenvalues=values,
        fd_eigenvalues=values,
    )


# ----------------------------------------------------------------------------
# s_k = C_ent / C_sep
# ----------------------------------------------------------------------------


def s2_closed_form(n_qubits: int) -> float:
    n = float(n_qubits)
    top = n**4 if n_qubits % 2 == 0 else (n**2 - 1) ** 2
    return (2 * n - 3) * top / (8 * (n - 1) ** 3 * n)


def s3_closed_form(n_qubits: int) -> float:
    n = float(n_qubits)
    return 13.5 * n**6 / _k3_denominator(n)


def s_ratio(
    n_qubits: int, k: int, numeric: bool | None = None, **numeric_kwargs
) -> UsefulnessRatio:
    """
    s_k = C_ent/C_sep. Analítico para k ≤ 3 (N ≥ 3 quando k ≥ 2), numérico
    nos demais casos ou quando `numeric=True`.
    """
    _check_k(k)
    c_ent = cent(n_qubits, k)
    analytic_ok = k in ANALYTIC_CSEP_KS and (k == 1 or n_qubits >= 3)
    if numeric or not analytic_ok:
        report = csep_numeric(n_qubits, k, **numeric_kwargs)
        if report.value <= 0.0:
            raise DomainError(f"C_sep(N={n_qubits}, k={k}) = 0: s indefinido")
        return UsefulnessRatio(
            value=c_ent / report.value,
            cent=c_ent,
            csep=report.value,
            method=RatioMethod.NUMERIC,
            converged=report.converged,
        )

    c_sep = csep_analytic(n_qubits, k).value
    if k == 1:
        value = float(n_qubits)
    elif k == 2:
        value = s2_closed_form(n_qubits)
    else:
        value = s3_closed_form(n_qubits)
    if abs(value - c_ent / c_sep) > 1e-9 * value:
        raise ComputationError(f"s_{k}(N={n_qubits}) diverge de C_ent/C_sep")
    return UsefulnessRatio(
        value=value, cent=c_ent, csep=c_sep, method=RatioMethod.ANALYTIC
    )


def s_table(
    n_values: Sequence[int],
    k_values: Sequence[int],
    n_starts: int | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
) -> list[STableRecord]:
    """Grade de s_k por C_sep numérico, com a conjectura s_k > s_{k+2} por N."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    cells = [(n, k) for n in n_values for k in k_values]

    def run(cell: tuple[int, int]) -> STableRecord:
        n, k = cell
        try:
            report = csep_numeric(
                n,
                k,
                n_starts=n_starts,
                tol=tol,
                max_iter=max_iter,
                seed=seed,
                threads=1,
            )
            c_ent = cent(n, k)
            return STableRecord(
                n=n,
                k=k,
                csep=report.value,
                cent=c_ent,
                s=c_ent / report.value,
                converged=report.converged,
                seed=seed,
            )
        except (DomainError, ComputationError, ZeroDivisionError) as exc:
            return STableRecord(n=n, k=k, seed=seed, error=str(exc))

    records = map_ordered(run, cells, threads)
    by_cell = {(r.n, r.k): r for r in records}
    for record in records:
        later = by_cell.get((record.n, record.k + 2))
        if record.s is not None and later is not None and later.s is not None:
            record.s_k_gt_s_k2 = record.s > later.s
    return records


def cos_theta_star(n_qubits: int, k: int) -> float:
    return cos(theta_star(n_qubits, k))
