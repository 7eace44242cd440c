# app/models/envelope.py
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.models.generators import GeneratorId

Sequence = Tuple[GeneratorId, ...]


class EnvBasis(BaseModel):
    """Canonically ordered generator products up to a degree bound"""
    s: int = Field(..., ge=1, description="Grading parameter of the algebra")
    n: Fraction = Field(default=Fraction(0), description="Mark of representation")
    max_degree: int = Field(..., ge=0, description="Largest product length")
    exclude_raising: bool = Field(default=True, description="Leave raising generators out")
    sequences: List[Sequence] = Field(default_factory=list, description="Products, identity first")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def size(self) -> int:
        return len(self.sequences)


class Decomposition(BaseModel):
    """Target = Σ coefficient · product + residual"""
    target_name: str = Field(default="", description="Name of the decomposed operator")
    target: Any = Field(..., description="Target DiffOp")
    basis: EnvBasis = Field(..., description="Candidate products")
    coefficients: Dict[Sequence, Any] = Field(default_factory=dict, description="Nonzero ParamPoly coefficients")
    residual: Any = Field(..., description="Target minus recomposition")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def success(self) -> bool:
        return self.residual.is_zero()
