from __future__ import annotations

import contextvars
import logging
import sys
import uuid

import structlog

run_id_ctx: contextvars.ContextVar[str | None] = contextvars.ContextVar(
    "run_id", default=None
)
command_ctx: contextvars.ContextVar[str | None] = contextvars.ContextVar(
    "command", default=None
)


def get_logger() -> structlog.BoundLogger:
    return structlog.get_logger()


def _configure_structlog(json: bool, level: str) -> None:
    shared_processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso", key="ts"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if json:
        renderer = structlog.processors.JSONRenderer()
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[*shared_processors, renderer],
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        wrapper_class=structlog.make_filtering_bound_logger(
            getattr(logging, level.upper(), logging.WARNING)
        ),
        cache_logger_on_first_use=False,
    )


def configure_logging(json: bool = False, level: str = "WARNING") -> None:
    # stderr: stdout fica reservado para CSV/JSON
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING), stream=sys.stderr
    )
    _configure_structlog(json, level)


def set_run_id(run_id: str | None = None) -> str:
    rid = run_id or uuid.uuid4().hex[:12]
    run_id_ctx.set(rid)
    structlog.contextvars.bind_contextvars(run_id=rid)
    return rid


def set_command(command: str | None) -> None:
    if command:
        command_ctx.set(command)
        structlog.contextvars.bind_contextvars(command=command)


# padrão para uso como biblioteca: WARNING em stderr até configure_logging
if not structlog.is_configured():
    _configure_structlog(json=False, level="WARNING")
