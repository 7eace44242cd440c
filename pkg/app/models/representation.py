# app/models/representation.py
from fractions import Fraction
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator


class FlagBasis(BaseModel):
    """Ordered monomial basis of the level-n member of the s-flag"""
    s: int = Field(..., ge=1, description="Grading parameter")
    n: int = Field(..., ge=0, description="Flag level")
    monomials: List[Tuple[int, int]] = Field(..., description="(p, q) sorted by p + s*q, then q")

    model_config = ConfigDict(frozen=True)

    @property
    def size(self) -> int:
        return len(self.monomials)

    def grading(self, index: int) -> int:
        p, q = self.monomials[index]
        return p + self.s * q

    def index_map(self) -> dict:
        return {monomial: i for i, monomial in enumerate(self.monomials)}


class OpMatrix(BaseModel):
    """Exact matrix of an operator on a flag basis; column j is the image of monomial j"""
    basis: FlagBasis = Field(..., description="Row and column basis")
    entries: List[List[Fraction]] = Field(..., description="Square array of exact rationals")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def square(self):
        size = self.basis.size
        if len(self.entries) != size or any(len(row) != size for row in self.entries):
            raise ValueError(f"Matrix must be {size}x{size}")
        return self

    @field_serializer("entries")
    def exact_entries(self, entries):
        return [[f"{e.numerator}/{e.denominator}" for e in row] for row in entries]

    @property
    def diagonal(self) -> List[Fraction]:
        return [self.entries[i][i] for i in range(self.basis.size)]
