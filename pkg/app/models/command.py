# app/models/command.py
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.params import ParamPoint, parse_rational


class Verb(str, Enum):
    """CLI subcommands"""
    SHOW = "show"
    APPLY = "apply"
    COMMUTE = "commute"
    MATRIX = "matrix"
    SPECTRUM = "spectrum"
    FLAGCHECK = "flagcheck"
    VERIFY = "verify"
    DECOMPOSE = "decompose"
    EXPORT = "export"


class OutputFormat(str, Enum):
    """Output encodings"""
    TEXT = "text"
    JSON = "json"
    LATEX = "latex"
    CSV = "csv"


class Command(BaseModel):
    """A parsed command line"""
    verb: Verb = Field(..., description="Subcommand")
    targets: List[str] = Field(default_factory=list, description="Operator names or relation groups")
    params: ParamPoint = Field(default_factory=ParamPoint, description="Parameter substitutions")
    output_format: OutputFormat = Field(default=OutputFormat.TEXT, description="Output encoding")
    out: Optional[str] = Field(None, description="Optional output file path")
    s: Optional[int] = Field(None, ge=1, description="Grading parameter")
    n: Optional[int] = Field(None, ge=0, description="Flag level or degree bound")
    mark: Fraction = Field(default=Fraction(0), description="Representation mark n of gen.* generators")
    force: bool = Field(default=False, description="Bypass the decomposition size guard")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @field_validator("mark", mode="before")
    @classmethod
    def exact_mark(cls, v):
        return parse_rational(v)

    @field_validator("targets")
    @classmethod
    def targets_are_names(cls, v):
        if any(not name.strip() for name in v):
            raise ValueError("Empty target name")
        return v
