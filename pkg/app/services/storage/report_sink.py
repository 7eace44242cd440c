# app/services/storage/report_sink.py
import json
import logging
import os
import sys
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, TextIO

from pydantic import BaseModel

from app.services.algebra.exactcoeff import ParamPoly, format_rational

logger = logging.getLogger(__name__)


def safe_serialize(obj: Any) -> Any:
    """Recursively convert results into JSON-ready values with exact rationals as text"""
    if obj is None:
        return None
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, ParamPoly):
        return str(obj)
    if isinstance(obj, BaseModel):
        return safe_serialize(obj.model_dump())
    if isinstance(obj, dict):
        return {str(k): safe_serialize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [safe_serialize(item) for item in obj]
    if isinstance(obj, (str, int, float)):
        return obj
    return str(obj)


def dump_json(data: Any) -> str:
    return json.dumps(safe_serialize(data), indent=2, ensure_ascii=False)


class ReportSink:
    """Writes command output to stdout or to a file given by --out"""

    def __init__(self, path: Optional[str] = None, stream: Optional[TextIO] = None):
        self.path = path
        self.stream = stream if stream is not None else sys.stdout

    def write(self, text: str) -> None:
        if not text.endswith("\n"):
            text += "\n"
        if self.path is None:
            self.stream.write(text)
            return
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        try:
            with open(self.path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Error writing {self.path}: {e}")
            raise
        logger.info(f"Wrote output to {self.path}")

    def write_json(self, data: Any) -> None:
        self.write(dump_json(data))
