# app/api/v1/router.py
import argparse
import logging
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from app.api.v1.endpoints import envelope, operators, representation, verification
from app.core.config import settings
from app.core.errors import EXIT_FAILED, EXIT_USAGE, AlgebraError, UsageError
from app.models.command import Command, OutputFormat
from app.services.storage.report_sink import ReportSink

logger = logging.getLogger(__name__)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        default=settings.default_format)
    common.add_argument("--out", default=None, help="Write output to this file instead of stdout")
    common.add_argument("--lambda", dest="lam", default=None, help="Exact p/q value for λ")
    common.add_argument("--nu", default=None, help="Exact p/q value for ν")
    common.add_argument("--omega", default=None, help="Exact p/q value for ω")
    common.add_argument("--s", type=int, default=None, help="Grading parameter s")
    common.add_argument("--mark", default="0", help="Exact p/q mark n for gen.* generators")
    common.add_argument("--n", type=int, default=None, help="Flag level, or product degree for decompose")
    common.add_argument("--force", action="store_true", help="Ignore the decomposition size guard")
    return common


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wolfes", description="Exact operator algebra for the G2 and A2 rational models")
    subparsers = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    common = _common_options()
    operators.register(subparsers, common)
    representation.register(subparsers, common)
    verification.register(subparsers, common)
    envelope.register(subparsers, common)
    return parser


def to_command(args: argparse.Namespace) -> Command:
    targets = [getattr(args, key) for key in ("name", "poly", "other") if getattr(args, key, None) is not None]
    targets += getattr(args, "groups", None) or []
    try:
        return Command(
            verb=args.verb,
            targets=targets,
            params={"lam": args.lam, "nu": args.nu, "omega": args.omega},
            output_format=args.output_format,
            out=args.out,
            s=args.s,
            n=args.n,
            force=args.force,
            mark=args.mark,
        )
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise UsageError(f"Invalid {location}: {error['msg']}")


def dispatch(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None,
             stderr: Optional[TextIO] = None) -> int:
    """Parse argv, run the handler and map errors to exit codes"""
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        command = to_command(args)
        sink = ReportSink(command.out, stdout)
        return args.handler(command, sink)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except AlgebraError as e:
        logger.debug(f"Command failed: {e.detail}")
        stderr.write(f"error: {e.detail}\n")
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        stderr.write(f"error: {e}\n")
        return EXIT_FAILED
