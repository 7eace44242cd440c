# app/models/params.py
from fractions import Fraction
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

COUPLING_BOUND = Fraction(-1, 4)


class Branch(str, Enum):
    """Which of the two dual parameter maps is used"""
    BRANCH1 = "branch1"
    BRANCH2 = "branch2"


def parse_rational(value: Any) -> Fraction:
    """Accept ints, Fractions and "p/q" literals; decimals are rejected"""
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or "." in text or "e" in text.lower():
            raise ValueError(f"Not an exact p/q literal: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"Zero denominator in {value!r}")
    raise ValueError(f"Not an exact rational: {value!r}")


class ModelParams(BaseModel):
    """Physical parameters of the three-body model"""
    nu_tilde: Fraction = Field(..., description="Two-body exponent ν̃, g_s = ν̃(ν̃-1)")
    mu_tilde: Fraction = Field(..., description="Three-body exponent μ̃, g_l = μ̃(μ̃-1)")
    omega: Fraction = Field(default=Fraction(1), description="Oscillator frequency ω")
    branch: Branch = Field(default=Branch.BRANCH1, description="Dual parameter map")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("nu_tilde", "mu_tilde", "omega", mode="before")
    @classmethod
    def exact_rational(cls, v):
        return parse_rational(v)

    @model_validator(mode="after")
    def couplings_above_bound(self):
        for name, exponent in (("g_s", self.nu_tilde), ("g_l", self.mu_tilde)):
            if exponent * (exponent - 1) <= COUPLING_BOUND:
                raise ValueError(f"Coupling {name} must exceed -1/4")
        return self

    @property
    def g_s(self) -> Fraction:
        return self.nu_tilde * (self.nu_tilde - 1)

    @property
    def g_l(self) -> Fraction:
        return self.mu_tilde * (self.mu_tilde - 1)


class ParamPoint(BaseModel):
    """Exact (λ, ν, ω) substitution point; unset values stay symbolic"""
    lam: Fraction | None = Field(None, description="λ value")
    nu: Fraction | None = Field(None, description="ν value")
    omega: Fraction | None = Field(None, description="ω value")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("lam", "nu", "omega", mode="before")
    @classmethod
    def exact_rational(cls, v):
        return None if v is None else parse_rational(v)

    def is_complete(self) -> bool:
        return None not in (self.lam, self.nu, self.omega)


class ShiftSample(BaseModel):
    """Coefficients of the polynomial ambiguity added to the two integrals"""
    A: Fraction = Field(default=Fraction(0), description="h added to the second-order integral")
    B1: Fraction = Field(default=Fraction(0), description="h^3")
    B2: Fraction = Field(default=Fraction(0), description="h^2 x")
    B3: Fraction = Field(default=Fraction(0), description="h x^2")
    B4: Fraction = Field(default=Fraction(0), description="x^3")
    C1: Fraction = Field(default=Fraction(0), description="h^2")
    C2: Fraction = Field(default=Fraction(0), description="h x")
    C3: Fraction = Field(default=Fraction(0), description="x^2")
    D1: Fraction = Field(default=Fraction(0), description="h")
    D2: Fraction = Field(default=Fraction(0), description="x")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("*", mode="before")
    @classmethod
    def exact_rational(cls, v):
        return parse_rational(v)

    def is_zero(self) -> bool:
        return not any(getattr(self, name) for name in type(self).model_fields)
