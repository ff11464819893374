from __future__ import annotations

import time
from collections.abc import Iterator
from contextlib import contextmanager

import structlog

from metrobound.core.logging import get_logger, set_command, set_run_id


@contextmanager
def run_context(
    command: str, run_id: str | None = None, **fields: object
) -> Iterator[structlog.BoundLogger]:
    """Envolve a execução de um comando: run_id, início/fim e duração."""
    rid = set_run_id(run_id)
    set_command(command)

    log = get_logger().bind(run_id=rid, command=command, **fields)
    log.info("command.start")

    started = time.perf_counter()
    try:
        yield log
    except Exception as exc:
        duration_ms = (time.perf_counter() - started) * 1000.0
        log.exception(
            "command.error", error=str(exc), duration_ms=round(duration_ms, 2)
        )
        raise
    finally:
        structlog.contextvars.unbind_contextvars("run_id", "command")

    duration_ms = (time.perf_counter() - started) * 1000.0
    log.bind(duration_ms=round(duration_ms, 2)).info("command.end")
