# app/models/operator.py
from typing import List

from pydantic import BaseModel, Field


class RationalTerm(BaseModel):
    """One λ^el ν^en ω^ew term with an exact "num/den" coefficient"""
    el: int = Field(..., ge=0, description="Exponent of λ")
    en: int = Field(..., ge=0, description="Exponent of ν")
    ew: int = Field(..., ge=0, description="Exponent of ω")
    r: str = Field(..., description="Reduced rational coefficient")


class CoefficientTerm(BaseModel):
    """Coefficient of slot1^p slot2^q"""
    p: int = Field(..., ge=0, description="Exponent of the first variable")
    q: int = Field(..., ge=0, description="Exponent of the second variable")
    c: List[RationalTerm] = Field(default_factory=list, description="Parameter polynomial")


class OperatorTerm(BaseModel):
    """Coefficient polynomial standing in front of ∂1^da ∂2^db"""
    da: int = Field(..., ge=0, description="Order in the first variable")
    db: int = Field(..., ge=0, description="Order in the second variable")
    coeff: List[CoefficientTerm] = Field(default_factory=list, description="Polynomial coefficient")


class OperatorDocument(BaseModel):
    """JSON export of a normal-ordered operator"""
    terms: List[OperatorTerm] = Field(default_factory=list, description="Terms in canonical order")
