"""Um handler por comando: RunConfig -> registros em ordem."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator

from metrobound.core.errors import DomainError, MetroboundError
from metrobound.domain.constants import ANALYTIC_CSEP_KS, FIG3_MUS
from metrobound.schemas.records import BoundsRecord, QfiRecord, SweepRecord
from metrobound.schemas.run_config import Command, RunConfig
from metrobound.schemas.states import OptimalStateParams
from metrobound.services.collective_ops import collective_power
from metrobound.services.mixed_hamiltonian import s_hab_sweep
from metrobound.services.qfi_engine import qfi_general, qfi_noisy_closed
from metrobound.services.random_average import (
    average_record,
    average_sample_records,
    confidence_table,
)
from metrobound.services.separability_bounds import (
    cent,
    csep_analytic,
    csep_numeric,
    s_table,
)
from metrobound.services.spin_squeezing import (
    FIG5_PANELS,
    detection_grid,
    iter_detection_region_sweep,
)
from metrobound.services.state_factory import noisy_state, optimal_state

# estado explícito (2^N) só até aqui no comando qfi
QFI_EXPLICIT_MAX_N = 10

CommandHandler = Callable[[RunConfig], Iterable[SweepRecord]]


def _analytic_available(n: int, k: int) -> bool:
    return k in ANALYTIC_CSEP_KS and (k == 1 or n >= 3)


def cmd_bounds(config: RunConfig) -> Iterator[SweepRecord]:
    config.require("n_values", "k_values")
    for n in config.n_values:
        for k in config.k_values:
            try:
                analytic = (
                    csep_analytic(n, k).value if k in ANALYTIC_CSEP_KS else None
                )
                numeric = csep_numeric(n, k, n_starts=config.starts, seed=config.seed)
                c_ent = cent(n, k)
                c_sep = analytic if analytic is not None else numeric.value
                yield BoundsRecord(
                    n=n,
                    k=k,
                    csep_analytic=analytic,
                    csep_numeric=numeric.value,
                    cent=c_ent,
                    s=c_ent / c_sep if c_sep > 0.0 else None,
                    converged=numeric.converged,
                    hessian_max_eig=numeric.hessian_max_eig,
                    seed=config.seed,
                )
            except MetroboundError as exc:
                yield BoundsRecord(n=n, k=k, seed=config.seed, error=str(exc))


def cmd_detection_sampled(config: RunConfig) -> Iterator[SweepRecord]:
    """fig2a e fig4: amostras uniformes de (λ1, λ2, η)."""
    for n in config.n_values or [6]:
        for batch in iter_detection_region_sweep(n, config.samples, config.seed):
            yield from batch


def cmd_fig5(config: RunConfig) -> Iterator[SweepRecord]:
    panel_ns, equal_split = FIG5_PANELS[config.variant]
    for n in config.n_values or panel_ns:
        yield from detection_grid(n, config.grid, equal_split, seed=config.seed)


def cmd_fig2b(config: RunConfig) -> Iterator[SweepRecord]:
    ks = config.k_values or [1, 2, 3]
    for n in config.n_values or [100]:
        yield from average_sample_records(n, ks, config.samples, config.seed)


def cmd_fig3(config: RunConfig) -> Iterator[SweepRecord]:
    yield from s_hab_sweep(
        mu_values=config.mu_values or FIG3_MUS,
        n_values=config.n_values or None,
        full_range=config.full_range,
        full_space_cap=config.full_space_cap,
        seed=config.seed,
    )


def cmd_fig6(config: RunConfig) -> Iterator[SweepRecord]:
    yield from confidence_table(
        n_values=config.n_values or None,
        ks=config.k_values or [1, 2, 3],
        seed=config.seed,
    )


def cmd_fig7(config: RunConfig) -> Iterator[SweepRecord]:
    yield from s_table(
        config.n_values or list(range(3, 10)),
        config.k_values or list(range(1, 10)),
        n_starts=config.starts,
        seed=config.seed,
    )


def _qfi_row(
    config: RunConfig, n: int, k: int, l1: float, l2: float, eta: float
) -> QfiRecord:
    params = OptimalStateParams.from_pair(l1, l2)
    if params.lambda3 > 0.0 and n % 2:
        raise DomainError("componente singleto (λ3 > 0) exige N par")
    closed = qfi_noisy_closed(params, eta, n, k).value
    explicit = None
    if n <= min(QFI_EXPLICIT_MAX_N, config.full_space_cap):
        phi = optimal_state(params, config.axis, n, config.full_space_cap)
        op = collective_power(config.axis, n, k, full_space_cap=config.full_space_cap)
        explicit = qfi_general(noisy_state(phi, eta), op).value
    return QfiRecord(
        n=n,
        k=k,
        lambda1=params.lambda1,
        lambda2=params.lambda2,
        lambda3=params.lambda3,
        eta=eta,
        qfi_closed=closed,
        qfi_explicit=explicit,
        cent=cent(n, k),
        csep=csep_analytic(n, k).value if _analytic_available(n, k) else None,
        seed=config.seed,
    )


def cmd_qfi(config: RunConfig) -> Iterator[SweepRecord]:
    for n in config.n_values or [4]:
        for k in config.k_values or [1, 2, 3]:
            for l1 in config.lambda1_values or [0.5]:
                for l2 in config.lambda2_values or [0.5]:
                    for eta in config.eta_values or [1.0]:
                        try:
                            yield _qfi_row(config, n, k, l1, l2, eta)
                        except (MetroboundError, ValueError) as exc:
                            yield QfiRecord(
                                n=n,
                                k=k,
                                lambda1=l1,
                                lambda2=l2,
                                lambda3=max(0.0, 1.0 - l1 - l2),
                                eta=eta,
                                seed=config.seed,
                                error=str(exc),
                            )


def cmd_average(config: RunConfig) -> Iterator[SweepRecord]:
    config.require("n_values")
    for n in config.n_values:
        for k in config.k_values or [1, 2, 3]:
            yield average_record(n, k, config.samples, config.seed)


COMMANDS: dict[Command, CommandHandler] = {
    Command.BOUNDS: cmd_bounds,
    Command.FIG2A: cmd_detection_sampled,
    Command.FIG4: cmd_detection_sampled,
    Command.FIG5: cmd_fig5,
    Command.FIG2B: cmd_fig2b,
    Command.FIG3: cmd_fig3,
    Command.FIG6: cmd_fig6,
    Command.FIG7: cmd_fig7,
    Command.QFI: cmd_qfi,
    Command.AVERAGE: cmd_average,
}
