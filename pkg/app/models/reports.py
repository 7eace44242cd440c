# app/models/reports.py
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class FlagWitness(BaseModel):
    """Monomial whose image leaves its own flag level"""
    monomial: Tuple[int, int] = Field(..., description="Input monomial (p, q)")
    image: Tuple[int, int] = Field(..., description="Offending output monomial (p, q)")
    s: int = Field(..., description="Grading parameter")

    @property
    def source_grading(self) -> int:
        return self.monomial[0] + self.s * self.monomial[1]

    @property
    def image_grading(self) -> int:
        return self.image[0] + self.s * self.image[1]


class GradingReport(BaseModel):
    """Result of a flag preservation check"""
    s: int = Field(..., description="Grading parameter s")
    n_max: int = Field(..., description="Largest flag level checked")
    preserved: bool = Field(..., description="Whether every level maps into itself")
    witness: Optional[FlagWitness] = Field(None, description="Counterexample when not preserved")


class RelationReport(BaseModel):
    """Outcome of one exact operator identity check"""
    name: str = Field(..., description="Relation name")
    lhs_order: int = Field(..., description="Order of the left-hand side operator")
    residual: Any = Field(..., description="LHS - RHS as a DiffOp")
    ok: bool = Field(..., description="True iff the residual vanishes (or, with expect_zero off, does not)")
    expect_zero: bool = Field(default=True, description="False for checks that must fail to decompose")
    elapsed: float = Field(default=0.0, description="Wall time in seconds")
    term_count_peak: int = Field(default=0, description="Peak accumulated coefficient terms")
    expected_order: Optional[int] = Field(None, description="Order stated for the left-hand side")
    omega_zero: bool = Field(default=True, description="Checked with ω substituted by 0")
    note: str = Field(default="", description="Free-form remark")
    side_conditions: bool = Field(default=True, description="Postconditions beside the residual, e.g. orders of shifted integrals")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def order_matches(self) -> bool:
        return self.expected_order is None or self.expected_order == self.lhs_order

    @property
    def passed(self) -> bool:
        return self.ok and self.order_matches and self.side_conditions

    def summary(self) -> Dict[str, Any]:
        """JSON-ready view; elapsed time is left out so reports stay reproducible"""
        return {
            "name": self.name,
            "ok": self.ok,
            "lhs_order": self.lhs_order,
            "expected_order": self.expected_order,
            "residual_terms": self.residual.size() if self.residual is not None else 0,
            "term_count_peak": self.term_count_peak,
            "omega_zero": self.omega_zero,
            "side_conditions": self.side_conditions,
            "note": self.note,
        }


class DecompositionTerm(BaseModel):
    """One generator product with its coefficient in text form"""
    product: List[str] = Field(..., description="Generator labels, left to right")
    coefficient: str = Field(..., description="ParamPoly coefficient")


class DecompositionSummary(BaseModel):
    """Printable view of an envelope decomposition"""
    target: str = Field(..., description="Target operator name")
    s: int = Field(..., description="Grading parameter of the algebra")
    max_degree: int = Field(..., description="Largest product length")
    basis_size: int = Field(..., description="Number of candidate products")
    success: bool = Field(..., description="True iff the residual vanishes")
    residual_terms: int = Field(..., description="Coefficient terms left in the residual")
    terms: List[DecompositionTerm] = Field(default_factory=list, description="Nonzero coefficients")


class PushforwardReport(BaseModel):
    """Squared cubic A2 integral pushed forward under v = y^2, monomial by monomial"""
    n_max: int = Field(..., description="Largest p + 2q checked (degree of x^p y^(2q))")
    checked: int = Field(..., description="Number of monomials compared")
    odd_images: List[Tuple[int, int]] = Field(default_factory=list, description="Images not even in y")
    mismatches: List[Tuple[int, int]] = Field(default_factory=list, description="Monomials u^p v^q that differ")

    @property
    def ok(self) -> bool:
        return not self.odd_images and not self.mismatches
