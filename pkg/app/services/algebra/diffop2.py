# app/services/algebra/diffop2.py
"""
Sparse polynomials in two spatial variables and normal-ordered linear
differential operators with polynomial coefficients.

Every coefficient is an element of Q[s1, s2, λ, ν, ω] (a sympy sparse ring);
an operator is a finite map (a, b) -> coefficient meaning
    Σ coeff(a, b)(s1, s2) ∂^a_{s1} ∂^b_{s2}
with all multiplications standing to the left of all derivatives.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from app.models.reports import FlagWitness, GradingReport
from app.services.algebra.exactcoeff import (
    ParamPoly,
    PARAM_RING,
    Scalar,
    to_qq,
)

logger = logging.getLogger(__name__)

SPACE_RING, SLOT1_GEN, SLOT2_GEN, _L, _N, _W = ring("s1,s2,l,n,w", QQ)
PARAM_GENS = (_L, _N, _W)

MultiIndex = Tuple[int, int]
Coefficient = Union["Poly2", ParamPoly, int, Fraction]

DISPLAY_TAGS = {
    "uv": ("u", "v"),
    "xy": ("x", "y"),
}


def lift_param(p: ParamPoly) -> PolyElement:
    """Embed a ParamPoly into the spatial coefficient ring"""
    rep = SPACE_RING.zero
    for exponent, coeff in p.rep.items():
        rep[(0, 0) + tuple(exponent)] = coeff
    return rep


def _ground(value: Scalar) -> PolyElement:
    return SPACE_RING.ground_new(to_qq(value))


class Poly2:
    """Immutable polynomial in (slot1, slot2) with ParamPoly coefficients"""

    __slots__ = ("_rep",)

    def __init__(self, rep: Optional[PolyElement] = None):
        if rep is None:
            rep = SPACE_RING.zero
        self._rep = rep

    @classmethod
    def coerce(cls, value: Coefficient) -> "Poly2":
        if isinstance(value, Poly2):
            return value
        if isinstance(value, ParamPoly):
            return cls(lift_param(value))
        return cls(_ground(value))

    @classmethod
    def monomial(cls, p: int, q: int, coeff: Union[ParamPoly, Scalar] = 1) -> "Poly2":
        coeff = ParamPoly.coerce(coeff)
        rep = SPACE_RING.zero
        for exponent, c in coeff.rep.items():
            rep[(p, q) + tuple(exponent)] = c
        return cls(rep)

    @classmethod
    def from_terms(cls, terms: Dict[MultiIndex, Union[ParamPoly, Scalar]]) -> "Poly2":
        result = cls()
        for (p, q), coeff in terms.items():
            result = result + cls.monomial(p, q, coeff)
        return result

    @classmethod
    def slot1(cls) -> "Poly2":
        return cls(SLOT1_GEN)

    @classmethod
    def slot2(cls) -> "Poly2":
        return cls(SLOT2_GEN)

    @property
    def rep(self) -> PolyElement:
        return self._rep

    @property
    def terms(self) -> Dict[MultiIndex, ParamPoly]:
        grouped: Dict[MultiIndex, Dict] = {}
        for monom, c in self._rep.items():
            grouped.setdefault(monom[:2], {})[monom[2:]] = c
        result = {}
        for key, rep_terms in grouped.items():
            rep = PARAM_RING.zero
            for exponent, c in rep_terms.items():
                rep[exponent] = c
            result[key] = ParamPoly(rep)
        return result

    def coefficient(self, p: int, q: int) -> ParamPoly:
        return self.terms.get((p, q), ParamPoly())

    def monomials(self) -> List[MultiIndex]:
        return sorted({monom[:2] for monom in self._rep})

    def is_zero(self) -> bool:
        return not self._rep

    def size(self) -> int:
        return len(self._rep)

    def grading(self, s: int) -> int:
        """Largest p + s*q over stored monomials; -1 for zero"""
        if not self._rep:
            return -1
        return max(monom[0] + s * monom[1] for monom in self._rep)

    def degree_in(self, symbol: str) -> int:
        index = {"l": 2, "n": 3, "w": 4}[symbol]
        if not self._rep:
            return -1
        return max(monom[index] for monom in self._rep)

    def __add__(self, other):
        return Poly2(self._rep + Poly2.coerce(other)._rep)

    __radd__ = __add__

    def __neg__(self):
        return Poly2(-self._rep)

    def __sub__(self, other):
        return Poly2(self._rep - Poly2.coerce(other)._rep)

    def __rsub__(self, other):
        return Poly2.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly2(self._rep * to_qq(other))
        return Poly2(self._rep * Poly2.coerce(other)._rep)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        return Poly2(self._rep ** exponent)

    def __eq__(self, other):
        if not isinstance(other, (Poly2, ParamPoly, int, Fraction)):
            return NotImplemented
        return dict(self._rep) == dict(Poly2.coerce(other)._rep)

    def __hash__(self):
        return hash(frozenset(self._rep.items()))

    def __bool__(self):
        return bool(self._rep)

    def diff(self, slot: int, times: int = 1) -> "Poly2":
        gen = SLOT1_GEN if slot == 1 else SLOT2_GEN
        rep = self._rep
        for _ in range(times):
            if not rep:
                break
            rep = rep.diff(gen)
        return Poly2(rep)

    def substitute(self, lam: Optional[Scalar] = None, nu: Optional[Scalar] = None,
                   omega: Optional[Scalar] = None) -> "Poly2":
        return Poly2(_substitute_rep(self._rep, lam, nu, omega))

    def is_even_in_slot2(self) -> bool:
        return all(monom[1] % 2 == 0 for monom in self._rep)

    def squash_slot2(self) -> "Poly2":
        """Transport an even-in-slot2 polynomial under slot2² -> slot2"""
        if not self.is_even_in_slot2():
            raise ValueError("polynomial is not even in the second variable")
        rep = SPACE_RING.zero
        for monom, c in self._rep.items():
            rep[(monom[0], monom[1] // 2) + monom[2:]] = c
        return Poly2(rep)

    def __str__(self):
        from app.services.algebra.textform import poly2_serialize

        return poly2_serialize(self)

    def __repr__(self):
        return f"Poly2({str(self)!r})"


def _substitute_rep(rep: PolyElement, lam, nu, omega) -> PolyElement:
    for gen, value in zip(PARAM_GENS, (lam, nu, omega)):
        if value is not None and rep:
            rep = rep.subs(gen, to_qq(value))
    return rep


def poly_mul(a: Poly2, b: Poly2) -> Poly2:
    return a * b


@dataclass
class CompositionStats:
    """Peak number of coefficient terms seen while composing"""

    peak_terms: int = 0
    compositions: int = 0

    def record(self, size: int) -> None:
        self.compositions += 1
        if size > self.peak_terms:
            self.peak_terms = size


class DiffOp:
    """Immutable normal-ordered differential operator in two variables"""

    __slots__ = ("_terms", "tag")

    def __init__(self, terms: Optional[Dict[MultiIndex, PolyElement]] = None, tag: str = "uv"):
        if tag not in DISPLAY_TAGS:
            raise ValueError(f"Unknown display tag: {tag}")
        self._terms: Dict[MultiIndex, PolyElement] = {
            tuple(index): rep for index, rep in (terms or {}).items() if rep
        }
        self.tag = tag

    # construction

    @classmethod
    def from_terms(cls, terms: Dict[MultiIndex, Coefficient], tag: str = "uv") -> "DiffOp":
        collected: Dict[MultiIndex, PolyElement] = {}
        for index, coeff in terms.items():
            rep = Poly2.coerce(coeff).rep
            collected[index] = collected.get(index, SPACE_RING.zero) + rep
        return cls(collected, tag)

    @classmethod
    def build(cls, pairs: Iterable[Tuple[Coefficient, MultiIndex]], tag: str = "uv") -> "DiffOp":
        """Sum of (coefficient, derivative index) pairs, in any order"""
        collected: Dict[MultiIndex, PolyElement] = {}
        for coeff, index in pairs:
            rep = Poly2.coerce(coeff).rep
            collected[index] = collected.get(index, SPACE_RING.zero) + rep
        return cls(collected, tag)

    @classmethod
    def zero(cls, tag: str = "uv") -> "DiffOp":
        return cls({}, tag)

    @classmethod
    def identity(cls, tag: str = "uv") -> "DiffOp":
        return cls({(0, 0): SPACE_RING.one}, tag)

    @classmethod
    def derivative(cls, a: int, b: int, tag: str = "uv") -> "DiffOp":
        return cls({(a, b): SPACE_RING.one}, tag)

    @classmethod
    def multiplication(cls, coeff: Coefficient, tag: str = "uv") -> "DiffOp":
        return cls({(0, 0): Poly2.coerce(coeff).rep}, tag)

    # inspection

    @property
    def terms(self) -> Dict[MultiIndex, Poly2]:
        return {index: Poly2(rep) for index, rep in self._terms.items()}

    def raw_terms(self) -> Dict[MultiIndex, PolyElement]:
        return dict(self._terms)

    def coefficient(self, a: int, b: int) -> Poly2:
        return Poly2(self._terms.get((a, b), SPACE_RING.zero))

    @property
    def order(self) -> int:
        if not self._terms:
            return -1
        return max(a + b for a, b in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def size(self) -> int:
        return sum(len(rep) for rep in self._terms.values())

    def indices(self) -> List[MultiIndex]:
        return sorted(self._terms, key=lambda ab: (-(ab[0] + ab[1]), -ab[0]))

    def degree_in(self, symbol: str) -> int:
        degrees = [Poly2(rep).degree_in(symbol) for rep in self._terms.values()]
        return max(degrees) if degrees else -1

    def grading_shift(self, s: int) -> Optional[int]:
        """Largest change of the s-grading p+sq over all terms; None for zero"""
        shifts = [
            Poly2(rep).grading(s) - (a + s * b) for (a, b), rep in self._terms.items()
        ]
        return max(shifts) if shifts else None

    def with_tag(self, tag: str) -> "DiffOp":
        return DiffOp(self._terms, tag)

    # arithmetic

    def _combine(self, other: "DiffOp", sign: int) -> "DiffOp":
        terms = dict(self._terms)
        for index, rep in other._terms.items():
            current = terms.get(index)
            if current is None:
                terms[index] = rep if sign > 0 else -rep
            else:
                terms[index] = current + rep if sign > 0 else current - rep
        return DiffOp(terms, self.tag)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        return self._combine(other, 1)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self._combine(other, -1)

    def __neg__(self) -> "DiffOp":
        return DiffOp({index: -rep for index, rep in self._terms.items()}, self.tag)

    def __rmul__(self, factor: Coefficient) -> "DiffOp":
        return op_scale(self, factor)

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        return op_compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self._terms.keys() != other._terms.keys():
            return False
        return all(dict(rep) == dict(other._terms[index]) for index, rep in self._terms.items())

    def __hash__(self):
        return hash(frozenset((index, frozenset(rep.items())) for index, rep in self._terms.items()))

    def __str__(self):
        from app.services.algebra.textform import op_render

        return op_render(self)

    def __repr__(self):
        return f"DiffOp(order={self.order}, terms={len(self._terms)}, tag={self.tag!r})"


def _sub_indices(alpha: MultiIndex) -> Iterator[Tuple[MultiIndex, int]]:
    a, b = alpha
    for i in range(a + 1):
        for j in range(b + 1):
            yield (i, j), comb(a, i) * comb(b, j)


class _DerivativeCache:
    """Memoized partial derivatives ∂^γ of the right factor's coefficients"""

    def __init__(self, terms: Dict[MultiIndex, PolyElement]):
        self._polys: Dict[Tuple[MultiIndex, MultiIndex], PolyElement] = {}
        self._items: Dict[Tuple[MultiIndex, MultiIndex], list] = {}
        for beta, rep in terms.items():
            self._polys[(beta, (0, 0))] = rep

    def _poly(self, beta: MultiIndex, gamma: MultiIndex) -> PolyElement:
        key = (beta, gamma)
        rep = self._polys.get(key)
        if rep is None:
            i, j = gamma
            if j > 0:
                rep = self._poly(beta, (i, j - 1)).diff(SLOT2_GEN)
            else:
                rep = self._poly(beta, (i - 1, 0)).diff(SLOT1_GEN)
            self._polys[key] = rep
        return rep

    def items(self, beta: MultiIndex, gamma: MultiIndex) -> list:
        key = (beta, gamma)
        cached = self._items.get(key)
        if cached is None:
            cached = self._items[key] = list(self._poly(beta, gamma).items())
        return cached


def op_compose(a: DiffOp, b: DiffOp, stats: Optional[CompositionStats] = None) -> DiffOp:
    """
    Normal-ordered product a∘b.

    Each pair f·∂^α, g·∂^β contributes f · Σ_{γ≤α} C(α,γ) (∂^γ g) ∂^{α-γ+β};
    products are streamed term by term into one accumulator per output
    derivative index, so no unreduced cross product is ever materialized.
    """
    monomial_mul = SPACE_RING.monomial_mul
    zero = QQ.zero
    accumulator: Dict[MultiIndex, Dict[tuple, object]] = {}
    derivatives = _DerivativeCache(b._terms)
    right_terms = list(b._terms)

    for alpha, f in a._terms.items():
        for gamma, weight in _sub_indices(alpha):
            w = QQ(weight)
            left_items = [(monom, c * w) for monom, c in f.items()]
            shift = (alpha[0] - gamma[0], alpha[1] - gamma[1])
            for beta in right_terms:
                right_items = derivatives.items(beta, gamma)
                if not right_items:
                    continue
                key = (shift[0] + beta[0], shift[1] + beta[1])
                target = accumulator.get(key)
                if target is None:
                    target = accumulator[key] = {}
                get = target.get
                for m1, c1 in left_items:
                    for m2, c2 in right_items:
                        m = monomial_mul(m1, m2)
                        target[m] = get(m, zero) + c1 * c2

    terms: Dict[MultiIndex, PolyElement] = {}
    total = 0
    for key, collected in accumulator.items():
        total += len(collected)
        rep = SPACE_RING.zero
        for monom, c in collected.items():
            if c:
                rep[monom] = c
        if rep:
            terms[key] = rep
    if stats is not None:
        stats.record(total)
    logger.debug(f"Composed order {a.order} with order {b.order}: {total} accumulated terms")
    return DiffOp(terms, a.tag)


def op_commutator(a: DiffOp, b: DiffOp, stats: Optional[CompositionStats] = None) -> DiffOp:
    """[a, b] = a∘b - b∘a"""
    return op_compose(a, b, stats) - op_compose(b, a, stats)


def op_scale(d: DiffOp, factor: Coefficient) -> DiffOp:
    rep = Poly2.coerce(factor).rep
    if not rep:
        return DiffOp.zero(d.tag)
    return DiffOp({index: rep * coeff for index, coeff in d._terms.items()}, d.tag)


def op_linear(coeffs: Sequence[Tuple[Union[ParamPoly, Scalar], DiffOp]], tag: Optional[str] = None) -> DiffOp:
    """Exact linear combination Σ c_i · D_i"""
    if tag is None:
        tag = coeffs[0][1].tag if coeffs else "uv"
    result = DiffOp.zero(tag)
    for coeff, op in coeffs:
        result = result + op_scale(op, ParamPoly.coerce(coeff))
    return result


def op_product(factors: Sequence[DiffOp], stats: Optional[CompositionStats] = None) -> DiffOp:
    """Left-to-right composition D1∘D2∘…∘Dk; identity for an empty list"""
    if not factors:
        return DiffOp.identity()
    result = factors[-1]
    for factor in reversed(factors[:-1]):
        result = op_compose(factor, result, stats)
    return result


def op_power(d: DiffOp, exponent: int, stats: Optional[CompositionStats] = None) -> DiffOp:
    if exponent < 0:
        raise ValueError("operator powers must be non-negative")
    if exponent == 0:
        return DiffOp.identity(d.tag)
    return op_product([d] * exponent, stats)


def op_apply(d: DiffOp, f: Poly2) -> Poly2:
    """Exact image of f under d"""
    result = SPACE_RING.zero
    for (a, b), coeff in d._terms.items():
        image = f.rep
        for _ in range(a):
            if not image:
                break
            image = image.diff(SLOT1_GEN)
        for _ in range(b):
            if not image:
                break
            image = image.diff(SLOT2_GEN)
        if image:
            result = result + coeff * image
    return Poly2(result)


def op_substitute(d: DiffOp, lam: Optional[Scalar] = None, nu: Optional[Scalar] = None,
                  omega: Optional[Scalar] = None) -> DiffOp:
    """Substitute any subset of (λ, ν, ω); other parameters stay symbolic"""
    return DiffOp(
        {index: _substitute_rep(rep, lam, nu, omega) for index, rep in d._terms.items()},
        d.tag,
    )


def flag_monomials(s: int, n: int) -> List[MultiIndex]:
    """Monomials (p, q) with p + s*q <= n, grading-major then q ascending"""
    monomials = []
    for grading in range(n + 1):
        for q in range(grading // s + 1):
            monomials.append((grading - s * q, q))
    return monomials


def check_flag_preservation(d: DiffOp, s: int, n_max: int) -> GradingReport:
    """
    Apply d to every monomial of P^(s)_{n_max}; the flag is preserved iff no
    image has a larger s-grading than its source monomial.
    """
    if s < 1 or n_max < 0:
        raise ValueError("flag check needs s >= 1 and n_max >= 0")
    for p, q in flag_monomials(s, n_max):
        source = p + s * q
        image = op_apply(d, Poly2.monomial(p, q))
        offending = [(pp, qq) for pp, qq in image.monomials() if pp + s * qq > source]
        if offending:
            worst = max(offending, key=lambda m: (m[0] + s * m[1], m[1]))
            logger.debug(f"Flag s={s} broken: {(p, q)} -> {worst}")
            return GradingReport(
                s=s,
                n_max=n_max,
                preserved=False,
                witness=FlagWitness(monomial=(p, q), image=worst, s=s),
            )
    return GradingReport(s=s, n_max=n_max, preserved=True, witness=None)
