"""Application entry point for the causal-deficiency command line."""

from __future__ import annotations

import logging
import sys
from collections.abc import Sequence
from typing import Any

import structlog

from ..core.errors import DeficiencyError, UsageError
from .commands import build_parser
from .config import AppConfig, load_settings
from .handlers import ExitCode


def configure_logging(config: AppConfig) -> None:
    """Configure structured JSON logging on standard error."""

    level = config.logging.level
    timestamper = structlog.processors.TimeStamper(fmt="iso", utc=True)
    shared_processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        timestamper,
    ]

    formatter = structlog.stdlib.ProcessorFormatter(
        processor=structlog.processors.JSONRenderer(),
        foreign_pre_chain=shared_processors,
    )
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.addHandler(handler)
    root_logger.setLevel(level)

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            *shared_processors,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def _report(prefix: str, exc: BaseException, logger: Any | None = None) -> None:
    # Before logging is configured only the plain message is written.
    if logger is not None:
        logger.warning("command_failed", error=type(exc).__name__, reason=prefix)
    print(f"{prefix}: {exc}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, dispatch to a handler and return the exit code."""

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_settings(
            log_level=args.log_level,
            output_dir=args.output_dir,
            precision=args.precision,
        )
    except UsageError as exc:
        _report("usage error", exc)
        return ExitCode.USAGE
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)

    configure_logging(config)
    logger = structlog.get_logger("cli").bind(command=args.command)
    try:
        code = args.handler(args, config)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _report("usage error", exc, logger)
        return ExitCode.USAGE
    except DeficiencyError as exc:
        _report("error", exc, logger)
        return ExitCode.INPUT_DATA
    logger.debug("command_finished", exit_code=int(code))
    return int(code)


def run() -> None:
    """Entry-point helper used by command line scripts."""

    sys.exit(main())


if __name__ == "__main__":
    run()
