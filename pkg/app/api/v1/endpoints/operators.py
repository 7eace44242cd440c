# app/api/v1/endpoints/operators.py
import logging

from app.core.errors import EXIT_OK, UsageError
from app.models.command import Command, OutputFormat
from app.services.algebra.diffop2 import DISPLAY_TAGS, DiffOp, op_apply, op_commutator, op_substitute
from app.services.algebra.textform import op_render, op_to_json, op_to_latex, poly2_parse, poly2_serialize
from app.services.catalog.registry import get_registry
from app.services.storage.report_sink import ReportSink

logger = logging.getLogger(__name__)


def _resolve(command: Command, name: str) -> DiffOp:
    op = get_registry().resolve(name, command.mark)
    params = command.params
    return op_substitute(op, params.lam, params.nu, params.omega)


def _render(op: DiffOp, output_format: OutputFormat) -> str:
    if output_format == OutputFormat.JSON:
        return op_to_json(op)
    if output_format == OutputFormat.LATEX:
        return op_to_latex(op)
    if output_format == OutputFormat.TEXT:
        return op_render(op)
    raise UsageError(f"Format {output_format.value} is not available for operators")


def show(command: Command, sink: ReportSink) -> int:
    """Print one model operator, optionally with parameters substituted"""
    op = _resolve(command, command.targets[0])
    sink.write(_render(op, command.output_format))
    return EXIT_OK


def export(command: Command, sink: ReportSink) -> int:
    op = _resolve(command, command.targets[0])
    sink.write(_render(op, command.output_format))
    return EXIT_OK


def apply(command: Command, sink: ReportSink) -> int:
    name, text = command.targets
    op = _resolve(command, name)
    image = op_apply(op, poly2_parse(text))
    sink.write(poly2_serialize(image, DISPLAY_TAGS[op.tag]))
    return EXIT_OK


def commute(command: Command, sink: ReportSink) -> int:
    registry = get_registry()
    for name in command.targets:
        registry.validate(name)
    a, b = (_resolve(command, name) for name in command.targets)
    logger.info(f"Commuting {command.targets[0]} with {command.targets[1]}")
    sink.write(_render(op_commutator(a, b), command.output_format))
    return EXIT_OK


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("show", parents=[common], help="Print a model operator")
    parser.add_argument("name")
    parser.set_defaults(handler=show)

    parser = subparsers.add_parser("export", parents=[common], help="Write an operator as text, JSON or LaTeX")
    parser.add_argument("name")
    parser.set_defaults(handler=export)

    parser = subparsers.add_parser("apply", parents=[common], help="Apply an operator to a polynomial")
    parser.add_argument("name")
    parser.add_argument("poly", help='Polynomial in canonical text, e.g. "(1) s1^2 s2"')
    parser.set_defaults(handler=apply)

    parser = subparsers.add_parser("commute", parents=[common], help="Commutator of two operators")
    parser.add_argument("name")
    parser.add_argument("other")
    parser.set_defaults(handler=commute)
