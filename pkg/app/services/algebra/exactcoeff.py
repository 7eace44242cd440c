# app/services/algebra/exactcoeff.py
"""
Exact coefficients: arbitrary-precision rationals and the parameter ring
Q[λ, ν, ω] that every operator coefficient lives in.

ParamPoly wraps an element of a sympy sparse polynomial ring over QQ, so all
arithmetic stays exact; the public rational type is ``fractions.Fraction``.
"""
import logging
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

logger = logging.getLogger(__name__)

Rational = Fraction
Exponent = Tuple[int, int, int]
Scalar = Union[int, Fraction]

PARAM_RING, LAMBDA_GEN, NU_GEN, OMEGA_GEN = ring("l,n,w", QQ)
PARAM_SYMBOLS = ("l", "n", "w")


def to_qq(value: Scalar):
    """Convert an int or Fraction into a ground-domain element"""
    if isinstance(value, int):
        return QQ(value)
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    """Convert a ground-domain element back into a Fraction"""
    return Fraction(int(value.numerator), int(value.denominator))


def format_rational(value: Fraction) -> str:
    """Reduced "p/q" text, or "p" for integers"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _grlex_key(exponent: Exponent):
    # graded, then λ-major lexicographic within a degree
    return (sum(exponent), tuple(-e for e in exponent))


class ParamPoly:
    """Immutable polynomial in (λ, ν, ω) with exact rational coefficients"""

    __slots__ = ("_rep",)

    def __init__(self, rep: Optional[PolyElement] = None):
        if rep is None:
            rep = PARAM_RING.zero
        self._rep = rep

    # construction

    @classmethod
    def constant(cls, value: Scalar) -> "ParamPoly":
        return cls(PARAM_RING.ground_new(to_qq(value)))

    @classmethod
    def lam(cls) -> "ParamPoly":
        return cls(LAMBDA_GEN)

    @classmethod
    def nu(cls) -> "ParamPoly":
        return cls(NU_GEN)

    @classmethod
    def omega(cls) -> "ParamPoly":
        return cls(OMEGA_GEN)

    @classmethod
    def from_terms(cls, terms: Dict[Exponent, Scalar]) -> "ParamPoly":
        rep = PARAM_RING.zero
        for exponent, coeff in terms.items():
            if coeff:
                rep[tuple(exponent)] = rep.get(tuple(exponent), QQ.zero) + to_qq(coeff)
        rep.strip_zero()
        return cls(rep)

    @classmethod
    def coerce(cls, value: Union["ParamPoly", Scalar]) -> "ParamPoly":
        if isinstance(value, ParamPoly):
            return value
        return cls.constant(value)

    # inspection

    @property
    def rep(self) -> PolyElement:
        return self._rep

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return {exp: from_qq(c) for exp, c in self._rep.items()}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]))

    def is_zero(self) -> bool:
        return not self._rep

    def is_constant(self) -> bool:
        return all(exp == (0, 0, 0) for exp in self._rep)

    def constant_value(self) -> Fraction:
        return from_qq(self._rep.get((0, 0, 0), QQ.zero))

    def degree_in(self, symbol: str) -> int:
        """Degree in one parameter; -1 for the zero polynomial"""
        index = PARAM_SYMBOLS.index(symbol)
        if not self._rep:
            return -1
        return max(exp[index] for exp in self._rep)

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, (ParamPoly, int, Fraction)):
            return NotImplemented
        other = ParamPoly.coerce(other)
        return ParamPoly(self._rep + other._rep)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(-self._rep)

    def __sub__(self, other):
        if not isinstance(other, (ParamPoly, int, Fraction)):
            return NotImplemented
        other = ParamPoly.coerce(other)
        return ParamPoly(self._rep - other._rep)

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return ParamPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ParamPoly):
            return ParamPoly(self._rep * other._rep)
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return ParamPoly(self._rep * to_qq(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("ParamPoly powers must be non-negative")
        return ParamPoly(self._rep ** exponent)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.constant(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return dict(self._rep) == dict(other._rep)

    def __hash__(self):
        return hash(frozenset(self._rep.items()))

    def __bool__(self):
        return bool(self._rep)

    # substitution

    def substitute(self, lam: Optional[Scalar] = None, nu: Optional[Scalar] = None,
                   omega: Optional[Scalar] = None) -> "ParamPoly":
        """Substitute any subset of the parameters exactly"""
        rep = self._rep
        for gen, value in ((LAMBDA_GEN, lam), (NU_GEN, nu), (OMEGA_GEN, omega)):
            if value is not None:
                rep = rep.subs(gen, to_qq(value))
        return ParamPoly(rep)

    def eval(self, lam: Scalar, nu: Scalar, omega: Scalar) -> Fraction:
        return self.substitute(lam, nu, omega).constant_value()

    def __str__(self):
        return parampoly_serialize(self)

    def __repr__(self):
        return f"ParamPoly({parampoly_serialize(self)!r})"


def parampoly_add(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    return a + b


def parampoly_sub(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    return a - b


def parampoly_neg(a: ParamPoly) -> ParamPoly:
    return -a


def parampoly_mul(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    return a * b


def parampoly_scale(a: ParamPoly, factor: Scalar) -> ParamPoly:
    return a * Fraction(factor)


def parampoly_pow(a: ParamPoly, exponent: int) -> ParamPoly:
    return a ** exponent


def parampoly_eval(p: ParamPoly, lam: Scalar, nu: Scalar, omega: Scalar) -> Fraction:
    """Exact substitution of all three parameters"""
    return p.eval(lam, nu, omega)


def _format_monomial(exponent: Exponent) -> str:
    factors = []
    for symbol, power in zip(PARAM_SYMBOLS, exponent):
        if power == 1:
            factors.append(symbol)
        elif power > 1:
            factors.append(f"{symbol}^{power}")
    return "*".join(factors)


def parampoly_serialize(p: ParamPoly) -> str:
    """Canonical text: graded terms "c*l^i*n^j*w^k" joined by " + " / " - " """
    items = p.sorted_terms()
    if not items:
        return "0"
    parts = []
    for index, (exponent, coeff) in enumerate(items):
        monomial = _format_monomial(exponent)
        magnitude = abs(coeff)
        if monomial and magnitude == 1:
            body = monomial
        elif monomial:
            body = f"{format_rational(magnitude)}*{monomial}"
        else:
            body = format_rational(magnitude)
        if index == 0:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(parts)


LAMBDA = ParamPoly.lam()
NU = ParamPoly.nu()
OMEGA = ParamPoly.omega()
ONE = ParamPoly.constant(1)
ZERO = ParamPoly()
