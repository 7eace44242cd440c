# app/models/generators.py
from fractions import Fraction
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.params import parse_rational


class GeneratorFamily(str, Enum):
    """Families of the hidden-algebra generators"""
    J0TILDE = "J0tilde"
    J1 = "J1"
    J2 = "J2"
    J3 = "J3"
    J4 = "J4"
    R = "R"
    T = "T"


INDEXED_FAMILIES = (GeneratorFamily.R, GeneratorFamily.T)


class GeneratorId(BaseModel):
    """One generator of g^(s) with its mark n"""
    family: GeneratorFamily = Field(..., description="Generator family")
    s: int = Field(..., ge=1, description="Flag parameter s")
    index: int = Field(default=0, ge=0, description="Index i for R_i and T_i")
    n: Fraction = Field(default=Fraction(0), description="Mark of representation")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("n", mode="before")
    @classmethod
    def exact_mark(cls, v):
        return parse_rational(v)

    @model_validator(mode="after")
    def index_in_bounds(self):
        if self.family in INDEXED_FAMILIES:
            if self.index > self.s:
                raise ValueError(f"{self.family.value}_{self.index} needs index <= s={self.s}")
        elif self.index != 0:
            raise ValueError(f"{self.family.value} takes no index")
        return self

    @property
    def is_raising(self) -> bool:
        # J4 always; for s=1 the top T generator is the second positive root of gl(3)
        if self.family == GeneratorFamily.J4:
            return True
        return self.s == 1 and self.family == GeneratorFamily.T and self.index == self.s

    @property
    def name(self) -> str:
        return f"gen.{self.family.value}.{self.s}.{self.index}"

    @property
    def label(self) -> str:
        if self.family in INDEXED_FAMILIES:
            return f"{self.family.value}{self.index}"
        return self.family.value


def generator_order(s: int, n: Fraction = Fraction(0), include_raising: bool = True) -> list[GeneratorId]:
    """Fixed generator order used by envelope bases"""
    ids = [GeneratorId(family=family, s=s, n=n) for family in (
        GeneratorFamily.J0TILDE, GeneratorFamily.J1, GeneratorFamily.J2, GeneratorFamily.J3,
        GeneratorFamily.J4,
    )]
    ids += [GeneratorId(family=GeneratorFamily.R, s=s, index=i, n=n) for i in range(s + 1)]
    ids += [GeneratorId(family=GeneratorFamily.T, s=s, index=i, n=n) for i in range(s + 1)]
    if not include_raising:
        ids = [gid for gid in ids if not gid.is_raising]
    return ids
