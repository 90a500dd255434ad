# app/main.py
"""Command-line entry point: ``autalg <subcommand> ...``.

Reports go to standard output (text, or JSON with ``--json``); logs go to
standard error. Exit codes: 0 ok, 1 property violation, 2 usage error,
3 inconclusive.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from app.config import settings
from app.core.errors import AutAlgError, error_envelope, exit_code_for
from app.routers import register_all
from app.schemas.report import CommandOutcome
from app.services.storage import canonical_json, write_text

logger = logging.getLogger("app.main")


def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autalg",
        description="Exact construction and verification of algebras with prescribed automorphism groups.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all(subparsers)
    return parser


def _failure(command: str | None, exc: BaseException) -> CommandOutcome:
    envelope = error_envelope(exc)
    code = exit_code_for(exc)
    return CommandOutcome(exit_code=code, payload={"command": command, "exit_code": code, **envelope},
                          text=f"error: {envelope['error']}: {envelope['message']}")


def dispatch(argv: Sequence[str] | None = None) -> CommandOutcome:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        result = args.handler(args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return CommandOutcome(exit_code=code, payload={"command": None, "exit_code": code})
    except AutAlgError as exc:
        logger.warning("%s failed: %s", getattr(args, "command", None), exc.message)
        result = _failure(getattr(args, "command", None), exc)
    except Exception as exc:  # noqa: BLE001
        logger.exception("Unexpected failure in %s", getattr(args, "command", None))
        result = _failure(getattr(args, "command", None), exc)
    if args is not None:
        result.as_json = args.json
        if args.report:
            write_text(args.report, canonical_json(result.payload))
    return result


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    result = dispatch(argv)
    if result.payload.get("command") is not None or result.text:
        sys.stdout.write(canonical_json(result.payload) if result.as_json else result.text + "\n")
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
