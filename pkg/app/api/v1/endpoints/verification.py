# app/api/v1/endpoints/verification.py
from app.core.errors import EXIT_FAILED, EXIT_OK
from app.models.command import Command, OutputFormat
from app.services.storage.report_sink import ReportSink
from app.services.verification import verifysuite


def verify(command: Command, sink: ReportSink) -> int:
    """Run relation groups; exit 0 iff every report passes"""
    names = command.targets or ["all"]
    verifysuite.expand_names(names)
    reports = verifysuite.run_checks(names)
    if command.output_format == OutputFormat.JSON:
        sink.write_json([r.summary() for r in reports])
    else:
        sink.write(verifysuite.summary_table(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("verify", parents=[common], help="Check integrals and their algebras")
    parser.add_argument("groups", nargs="*", help=f"Groups: all, {', '.join(verifysuite.CHECKS)}")
    parser.set_defaults(handler=verify)
