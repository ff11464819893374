from __future__ import annotations

import argparse
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from math import floor
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from metrobound.cli.commands import COMMANDS
from metrobound.cli.emit import RecordSink
from metrobound.core.errors import MetroboundError
from metrobound.core.logging import configure_logging
from metrobound.core.settings import settings
from metrobound.core.telemetry import run_context
from metrobound.schemas.records import RECORD_TYPES
from metrobound.schemas.run_config import Command, RunConfig
from metrobound.version import CSV_SCHEMA_VERSION, LIBRARY_VERSION

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _split_range(item: str) -> tuple[str, str, str | None]:
    bounds, _, step = item.partition(":")
    low, _, high = bounds.partition("..")
    return low, high, step or None


def parse_int_grid(text: str) -> list[int]:
    """'3..9', '3..9:2' ou '1,2,5' (itens podem ser faixas)."""
    values: list[int] = []
    try:
        for item in filter(None, (p.strip() for p in text.split(","))):
            if ".." not in item:
                values.append(int(item))
                continue
            low, high, step = _split_range(item)
            stride = int(step) if step else 1
            if stride < 1 or int(high) < int(low):
                raise ValueError(item)
            values.extend(range(int(low), int(high) + 1, stride))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grade inteira inválida: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("grade vazia")
    return values


def parse_float_grid(text: str) -> list[float]:
    """'0.1,0.5' ou 'a..b:passo' (extremos incluídos)."""
    values: list[float] = []
    try:
        for item in filter(None, (p.strip() for p in text.split(","))):
            if ".." not in item:
                values.append(float(item))
                continue
            low, high, step = _split_range(item)
            if step is None:
                raise ValueError(item)
            a, b, h = float(low), float(high), float(step)
            if h <= 0 or b < a:
                raise ValueError(item)
            count = floor((b - a) / h + 1e-9) + 1
            values.extend(round(a + i * h, 12) for i in range(count))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grade real inválida: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("grade vazia")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=parse_int_grid, help="N: '3..9', '4,6,10'")
    common.add_argument("--k", type=parse_int_grid, help="ordem k de J^k")
    common.add_argument("--axis", choices=["x", "y", "z"], default="z")
    common.add_argument("--eta", type=parse_float_grid)
    common.add_argument("--lambda1", type=parse_float_grid)
    common.add_argument("--lambda2", type=parse_float_grid)
    common.add_argument("--mu", type=parse_float_grid, help="μ de fig3 (ν = 1 − μ)")
    common.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    common.add_argument(
        "--starts",
        type=int,
        default=settings.OPTIMIZER_STARTS,
        help="partidas aleatórias do otimizador de C_sep",
    )
    common.add_argument("--grid", type=int, default=201, help="pontos por eixo (fig5)")
    common.add_argument("--variant", choices=["a", "b", "c"], default="b")
    common.add_argument(
        "--full-range", action="store_true", help="fig3 até N = 10^6"
    )
    common.add_argument(
        "--full-space-cap", type=int, default=settings.FULL_SPACE_CAP
    )
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", type=Path, help="arquivo de saída (padrão: stdout)")
    common.add_argument("--log-json", action="store_true", default=settings.LOG_JSON)
    common.add_argument("--log-level", default=settings.LOG_LEVEL)

    parser = argparse.ArgumentParser(
        prog="metrobound",
        description="Limites de QFI para geradores coletivos e dados das figuras.",
    )
    parser.add_argument("--version", action="version", version=LIBRARY_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        sub.add_parser(command.value, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n_values=args.n or [],
        k_values=args.k or [],
        axis=args.axis,
        eta_values=args.eta or [],
        lambda1_values=args.lambda1 or [],
        lambda2_values=args.lambda2 or [],
        mu_values=args.mu or [],
        samples=args.samples,
        seed=args.seed,
        starts=args.starts,
        grid=args.grid,
        variant=args.variant,
        full_range=args.full_range,
        full_space_cap=args.full_space_cap,
        format=args.format,
        out=args.out,
    )


@contextmanager
def _output(path: Path | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        yield fh


def _error(message: str) -> None:
    print(f"metrobound: erro: {message}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(json=args.log_json, level=args.log_level)
    try:
        config = config_from_args(args)
    except ValidationError as exc:
        _error(str(exc.errors()[0]["msg"]))
        return EXIT_USAGE

    command = config.command
    record_type = RECORD_TYPES[command.value]
    sink: RecordSink | None = None
    try:
        with run_context(
            command.value, seed=config.seed, schema=CSV_SCHEMA_VERSION
        ) as log, _output(config.out) as stream:
            sink = RecordSink(stream, record_type, config.format.value)
            sink.open()
            try:
                sink.write_all(COMMANDS[command](config))
            finally:
                sink.close()
            log.info("command.records", written=sink.written, failed=sink.failed)
    except ValueError as exc:
        # DomainError também é ValueError: pré-condição do comando inteiro
        _error(str(exc))
        return EXIT_USAGE
    except MetroboundError as exc:
        _error(str(exc))
        return EXIT_FAILED

    return EXIT_FAILED if sink.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
