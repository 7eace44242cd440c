# app/services/algebra/textform.py
"""
Text, JSON and LaTeX forms of parameter polynomials, Poly2 and DiffOp.

Canonical text grammar (whitespace insignificant, one operator term per line):

    operator  := "0" | opterm { ("+" | "-") opterm }
    opterm    := "(" poly2 ")" { dfactor }
    poly2     := "0" | pterm { "+" pterm }
    pterm     := "(" parampoly ")" { sfactor }
    parampoly := ["-"] ppterm { ("+" | "-") ppterm }
    ppterm    := NUMBER ["/" NUMBER] { "*" pfactor } | pfactor { "*" pfactor }
    sfactor   := ("s1" | "u" | "x" | "s2" | "v" | "y") ["^" NUMBER]
    dfactor   := ("d1" | "du" | "dx" | "d2" | "dv" | "dy") ["^" NUMBER]
    pfactor   := ("l" | "n" | "w") ["^" NUMBER]

Canonical output orders operator terms by reverse graded-lex on (a, b):
highest total derivative order first, then the larger ∂1 power, so the
leading symbol is the first line. Coefficient terms go by increasing total
degree, then slot-2 power. The parser accepts terms in any order.
"""
import logging
import re
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

from pydantic import ValidationError

from app.core.errors import ParseError
from app.models.operator import CoefficientTerm, OperatorDocument, OperatorTerm, RationalTerm
from app.services.algebra.diffop2 import DISPLAY_TAGS, DiffOp, Poly2
from app.services.algebra.exactcoeff import ParamPoly, parampoly_serialize

logger = logging.getLogger(__name__)

SLOT_NAMES = {"s1": 1, "u": 1, "x": 1, "s2": 2, "v": 2, "y": 2}
DERIVATIVE_NAMES = {"d1": 1, "du": 1, "dx": 1, "d2": 2, "dv": 2, "dy": 2}
PARAM_NAMES = {"l": 0, "lambda": 0, "n": 1, "nu": 1, "w": 2, "omega": 2}
XY_NAMES = {"x", "y", "dx", "dy"}

LATEX_PARAMS = ("\\lambda", "\\nu", "\\omega")

_TOKEN_RE = re.compile(r"(?P<number>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[()+\-*/^])")


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        char = text[pos]
        if char == "\n":
            line += 1
            line_start = pos + 1
            pos += 1
            continue
        if char.isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(f"Unexpected character {char!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.saw_xy = False

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str, token: Optional[Token] = None):
        token = token or self.peek()
        found = token.value or "end of input"
        raise ParseError(f"{message}, found {found!r}", token.line, token.column)

    def expect(self, value: str) -> Token:
        token = self.peek()
        if token.value != value:
            self.fail(f"Expected {value!r}")
        return self.advance()

    def at(self, *values: str) -> bool:
        return self.peek().value in values

    def finish(self):
        if self.peek().kind != "end":
            self.fail("Unexpected trailing input")

    def integer(self) -> int:
        token = self.peek()
        if token.kind != "number":
            self.fail("Expected an integer")
        self.advance()
        return int(token.value)

    def exponent(self) -> int:
        if self.at("^"):
            self.advance()
            return self.integer()
        return 1

    # parameter polynomials

    def parampoly(self) -> ParamPoly:
        terms: Dict[Tuple[int, int, int], Fraction] = {}
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        while True:
            exponent, coeff = self.ppterm()
            terms[exponent] = terms.get(exponent, Fraction(0)) + sign * coeff
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                break
            self.advance()
        return ParamPoly.from_terms(terms)

    def ppterm(self) -> Tuple[Tuple[int, int, int], Fraction]:
        exponent = [0, 0, 0]
        coeff = Fraction(1)
        token = self.peek()
        if token.kind == "number":
            numerator = self.integer()
            denominator = 1
            if self.at("/"):
                self.advance()
                denominator = self.integer()
                if denominator == 0:
                    self.fail("Zero denominator", token)
            coeff = Fraction(numerator, denominator)
            if not self.at("*"):
                return (0, 0, 0), coeff
            self.advance()
        self.pfactor(exponent)
        while self.at("*"):
            self.advance()
            self.pfactor(exponent)
        return tuple(exponent), coeff

    def pfactor(self, exponent: List[int]):
        token = self.peek()
        if token.kind != "name" or token.value not in PARAM_NAMES:
            self.fail("Expected a parameter l, n or w")
        self.advance()
        exponent[PARAM_NAMES[token.value]] += self.exponent()

    # spatial polynomials

    def poly2(self) -> Poly2:
        if self.peek().kind == "number":
            if self.advance().value != "0":
                self.fail("Expected '(' or 0", self.tokens[self.pos - 1])
            return Poly2()
        result = self.pterm()
        while self.at("+"):
            self.advance()
            result = result + self.pterm()
        return result

    def pterm(self) -> Poly2:
        self.expect("(")
        coeff = self.parampoly()
        self.expect(")")
        p = q = 0
        while self.peek().kind == "name" and self.peek().value in SLOT_NAMES:
            token = self.advance()
            self.saw_xy |= token.value in XY_NAMES
            power = self.exponent()
            if SLOT_NAMES[token.value] == 1:
                p += power
            else:
                q += power
        return Poly2.monomial(p, q, coeff)

    # operators

    def operator(self) -> Dict[Tuple[int, int], Poly2]:
        terms: Dict[Tuple[int, int], Poly2] = {}
        if self.peek().kind == "number" and self.peek().value == "0":
            self.advance()
            return terms
        sign = 1
        while True:
            coeff, index = self.opterm()
            coeff = coeff if sign > 0 else -coeff
            terms[index] = terms[index] + coeff if index in terms else coeff
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                break
            self.advance()
        return terms

    def opterm(self) -> Tuple[Poly2, Tuple[int, int]]:
        self.expect("(")
        coeff = self.poly2()
        self.expect(")")
        a = b = 0
        while self.peek().kind == "name" and self.peek().value in DERIVATIVE_NAMES:
            token = self.advance()
            self.saw_xy |= token.value in XY_NAMES
            power = self.exponent()
            if DERIVATIVE_NAMES[token.value] == 1:
                a += power
            else:
                b += power
        return coeff, (a, b)


def parampoly_parse(text: str) -> ParamPoly:
    parser = _Parser(text)
    result = parser.parampoly()
    parser.finish()
    return result


def poly2_parse(text: str) -> Poly2:
    parser = _Parser(text)
    result = parser.poly2()
    parser.finish()
    return result


def op_parse(text: str, tag: Optional[str] = None) -> DiffOp:
    """Parse the canonical grammar; the display tag follows the variable names used"""
    parser = _Parser(text)
    terms = parser.operator()
    parser.finish()
    if tag is None:
        tag = "xy" if parser.saw_xy else "uv"
    return DiffOp.from_terms(terms, tag)


# text output

def _poly2_key(pq: Tuple[int, int]):
    return (pq[0] + pq[1], pq[1])


def _op_key(ab: Tuple[int, int]):
    # reverse graded-lex: leading symbol first
    return (-(ab[0] + ab[1]), -ab[0])


def _power(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{k}"


def poly2_serialize(f: Poly2, names: Tuple[str, str] = ("s1", "s2")) -> str:
    terms = f.terms
    if not terms:
        return "0"
    parts = []
    for p, q in sorted(terms, key=_poly2_key):
        factors = [_power(names[0], p)] if p else []
        if q:
            factors.append(_power(names[1], q))
        parts.append(" ".join([f"({parampoly_serialize(terms[(p, q)])})"] + factors))
    return " + ".join(parts)


def op_serialize(d: DiffOp, display: bool = False) -> str:
    """Canonical text; display=True prints the operator's own variable names"""
    if d.is_zero():
        return "0"
    if display:
        slot_names = DISPLAY_TAGS[d.tag]
        derivative_names = tuple(f"d{name}" for name in slot_names)
    else:
        slot_names, derivative_names = ("s1", "s2"), ("d1", "d2")
    lines = []
    for a, b in sorted(d.terms, key=_op_key):
        factors = [f"({poly2_serialize(d.coefficient(a, b), slot_names)})"]
        if a:
            factors.append(_power(derivative_names[0], a))
        if b:
            factors.append(_power(derivative_names[1], b))
        lines.append(" ".join(factors))
    return "\n+ ".join(lines)


def op_render(d: DiffOp) -> str:
    return op_serialize(d, display=True)


# JSON

def op_to_document(d: DiffOp) -> OperatorDocument:
    terms = []
    for a, b in sorted(d.terms, key=_op_key):
        coefficient = d.coefficient(a, b).terms
        coeff_terms = []
        for p, q in sorted(coefficient, key=_poly2_key):
            rationals = [
                RationalTerm(el=exp[0], en=exp[1], ew=exp[2], r=f"{value.numerator}/{value.denominator}")
                for exp, value in coefficient[(p, q)].sorted_terms()
            ]
            coeff_terms.append(CoefficientTerm(p=p, q=q, c=rationals))
        terms.append(OperatorTerm(da=a, db=b, coeff=coeff_terms))
    return OperatorDocument(terms=terms)


def op_to_json(d: DiffOp) -> str:
    return op_to_document(d).model_dump_json()


def op_from_json(payload: Union[str, dict], tag: str = "uv") -> DiffOp:
    try:
        if isinstance(payload, str):
            document = OperatorDocument.model_validate_json(payload)
        else:
            document = OperatorDocument.model_validate(payload)
    except ValidationError as e:
        raise ParseError(f"Invalid operator JSON: {e.errors()[0]['msg']}")
    terms = {}
    for term in document.terms:
        coefficient = Poly2()
        for entry in term.coeff:
            rationals = {}
            for c in entry.c:
                try:
                    rationals[(c.el, c.en, c.ew)] = Fraction(c.r)
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"Invalid rational {c.r!r}")
            coefficient = coefficient + Poly2.monomial(entry.p, entry.q, ParamPoly.from_terms(rationals))
        index = (term.da, term.db)
        terms[index] = terms[index] + coefficient if index in terms else coefficient
    return DiffOp.from_terms(terms, tag)


# LaTeX

def _latex_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"\\frac{{{value.numerator}}}{{{value.denominator}}}"


def _latex_power(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{{{k}}}"


def _latex_param_monomial(exponent) -> str:
    return " ".join(_latex_power(sym, k) for sym, k in zip(LATEX_PARAMS, exponent) if k)


def _scaled(magnitude: Fraction, body: str) -> str:
    if not body:
        return _latex_rational(magnitude)
    if magnitude == 1:
        return body
    return f"{_latex_rational(magnitude)} {body}"


def _join_signed(pieces: List[Tuple[bool, str]]) -> str:
    out = []
    for i, (negative, body) in enumerate(pieces):
        if i == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def parampoly_to_latex(p: ParamPoly) -> str:
    items = p.sorted_terms()
    if not items:
        return "0"
    return _join_signed([
        (coeff < 0, _scaled(abs(coeff), _latex_param_monomial(exp))) for exp, coeff in items
    ])


def _poly2_pieces(f: Poly2, names: Tuple[str, str]) -> List[Tuple[bool, str]]:
    terms = f.terms
    pieces = []
    for p, q in sorted(terms, key=_poly2_key):
        coeff = terms[(p, q)]
        spatial = " ".join(_latex_power(name, k) for name, k in zip(names, (p, q)) if k)
        items = coeff.sorted_terms()
        if len(items) == 1:
            exp, value = items[0]
            body = " ".join(part for part in (_latex_param_monomial(exp), spatial) if part)
            pieces.append((value < 0, _scaled(abs(value), body)))
        else:
            body = f"\\left({parampoly_to_latex(coeff)}\\right)"
            pieces.append((False, f"{body} {spatial}" if spatial else body))
    return pieces


def poly2_to_latex(f: Poly2, names: Tuple[str, str] = ("u", "v")) -> str:
    pieces = _poly2_pieces(f, names)
    return _join_signed(pieces) if pieces else "0"


def _latex_derivative(a: int, b: int, names: Tuple[str, str]) -> str:
    order = a + b
    if order == 0:
        return ""
    numerator = "\\partial" if order == 1 else f"\\partial^{{{order}}}"
    denominator = " ".join(
        f"\\partial {_latex_power(name, k)}" for name, k in zip(names, (a, b)) if k
    )
    return f"\\frac{{{numerator}}}{{{denominator}}}"


def op_to_latex(d: DiffOp) -> str:
    """Coefficients on the left, derivatives on the right, highest order first"""
    if d.is_zero():
        return "0"
    names = DISPLAY_TAGS[d.tag]
    pieces = []
    for a, b in sorted(d.terms, key=_op_key):
        coefficient = _poly2_pieces(d.coefficient(a, b), names)
        derivative = _latex_derivative(a, b, names)
        if len(coefficient) == 1:
            negative, body = coefficient[0]
        else:
            negative, body = False, f"\\left({_join_signed(coefficient)}\\right)"
        if derivative:
            body = derivative if body == "1" else f"{body} {derivative}"
        pieces.append((negative, body))
    return _join_signed(pieces)
