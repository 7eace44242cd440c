# app/services/catalog/modelbank.py
"""
Constructors for the operators of the G2 (Wolfes) and A2 rational models in
algebraic form, the hidden-algebra generators, and the closed-form spectrum.

All constructors return operators with λ, ν, ω symbolic; substitute afterwards.
"""
import logging
from fractions import Fraction
from typing import Optional, Tuple

from app.models.generators import GeneratorFamily, GeneratorId
from app.models.params import Branch, ModelParams, ShiftSample
from app.models.reports import PushforwardReport
from app.services.algebra.diffop2 import (
    DiffOp,
    Poly2,
    flag_monomials,
    op_apply,
    op_compose,
    op_linear,
    op_product,
    op_substitute,
)
from app.services.algebra.exactcoeff import LAMBDA, NU, OMEGA, ParamPoly, Scalar
from app.services.catalog import kblocks

logger = logging.getLogger(__name__)

F = Fraction


def _uv():
    return Poly2.slot1(), Poly2.slot2()


# G2 / I6 model in (u, v)

def make_h_g2(symbolic: bool = True, lam: Optional[Scalar] = None, nu: Optional[Scalar] = None,
              omega: Optional[Scalar] = None) -> DiffOp:
    """Algebraic Hamiltonian; with symbolic=False the given values are substituted"""
    u, v = _uv()
    lam_, nu_, omega_ = (Poly2.coerce(p) for p in (LAMBDA, NU, OMEGA))
    h = DiffOp.build([
        (u, (2, 0)),
        (6 * v, (1, 1)),
        (-F(4, 3) * u**2 * v, (0, 2)),
        (1 + 3 * nu_ + 6 * lam_ - 4 * omega_ * u, (1, 0)),
        (-F(2, 3) * u**2 - 4 * lam_ * u**2 - 12 * omega_ * v, (0, 1)),
    ], tag="uv")
    if symbolic:
        return h
    return op_substitute(h, lam, nu, omega)


def make_x_g2() -> DiffOp:
    """Second-order integral; free of ω"""
    u, v = _uv()
    lam_, nu_ = Poly2.coerce(LAMBDA), Poly2.coerce(NU)
    return DiffOp.build([
        (F(4, 3) * v * (4 * u**3 + 27 * v), (0, 2)),
        (F(4, 3) * (2 * (6 * lam_ + 1) * u**3 + 27 * (2 * lam_ + nu_ + 1) * v), (0, 1)),
    ], tag="uv")


def make_k_a2_squared_uv() -> DiffOp:
    return kblocks.block(0)


def make_k_block(p: int) -> DiffOp:
    return kblocks.block(p)


def make_k_g2() -> DiffOp:
    """Sixth-order integral at ω = 0 as a polynomial in λ"""
    logger.info("Building the sixth-order G2 integral")
    k = kblocks.block(0)
    for p in range(1, 6):
        k = k + op_linear([(LAMBDA ** p, kblocks.block(p))])
    logger.info(f"Sixth-order integral ready: {k.size()} coefficient terms")
    return k


# A2 model in (x, y)

def make_h_a2() -> DiffOp:
    x, y = _uv()
    nu_ = Poly2.coerce(NU)
    return DiffOp.build([
        (x, (2, 0)),
        (3 * y, (1, 1)),
        (-F(1, 3) * x**2, (0, 2)),
        (1 + 3 * nu_, (1, 0)),
    ], tag="xy")


def make_x_a2() -> DiffOp:
    x, y = _uv()
    nu_ = Poly2.coerce(NU)
    return DiffOp.build([
        (F(1, 3) * (4 * x**3 + 27 * y**2), (0, 2)),
        (9 * y * (1 + 2 * nu_), (0, 1)),
    ], tag="xy")


def make_k_a2() -> DiffOp:
    x, y = _uv()
    nu_ = Poly2.coerce(NU)
    return DiffOp.build([
        (y, (3, 0)),
        (-F(2, 3) * x**2, (2, 1)),
        (-x * y, (1, 2)),
        (-(y**2 + F(2, 27) * x**3), (0, 3)),
        (-F(2, 3) * x * (2 + 3 * nu_), (1, 1)),
        (-y * (2 + 3 * nu_), (0, 2)),
        (-F(2, 9) * (2 + 3 * nu_) * (1 + 3 * nu_), (0, 1)),
    ], tag="xy")


# hidden-algebra generators; slot1 plays r and slot2 plays the second variable

def euler_cartan(s: int, n: Scalar = 0, tag: str = "uv") -> DiffOp:
    """Graded Euler operator slot1∂1 + s·slot2∂2 - n"""
    u, v = _uv()
    return DiffOp.build([(u, (1, 0)), (s * v, (0, 1)), (Poly2.coerce(-Fraction(n)), (0, 0))], tag=tag)


def _t_generator(s: int, i: int, n: Scalar, tag: str) -> DiffOp:
    j0 = euler_cartan(s, n, tag)
    head = DiffOp.build([(Poly2.slot2(), (s - i, 0))], tag=tag)
    factors = [head] + [j0 + DiffOp.multiplication(j, tag) for j in range(i)]
    return op_product(factors)


def make_generator(gid: GeneratorId, tag: str = "uv") -> DiffOp:
    s, n = gid.s, gid.n
    u, v = _uv()
    family = gid.family
    if family == GeneratorFamily.J0TILDE:
        return euler_cartan(s, n, tag)
    if family == GeneratorFamily.J1:
        return DiffOp.derivative(1, 0, tag)
    if family == GeneratorFamily.J2:
        return DiffOp.build([(u, (1, 0)), (Poly2.coerce(-n / 3), (0, 0))], tag=tag)
    if family == GeneratorFamily.J3:
        return DiffOp.build([(s * v, (0, 1)), (Poly2.coerce(-n / 3), (0, 0))], tag=tag)
    if family == GeneratorFamily.J4:
        return op_compose(DiffOp.multiplication(u, tag), euler_cartan(s, n, tag))
    if family == GeneratorFamily.R:
        return DiffOp.build([(u**gid.index, (0, 1))], tag=tag)
    return _t_generator(s, gid.index, n, tag)


def make_generator_t_descending(s: int, n: Scalar = 0, tag: str = "uv") -> DiffOp:
    """Top T generator written as slot2 · J̃0(n) J̃0(n-1) … J̃0(n-s+1)"""
    n = Fraction(n)
    factors = [DiffOp.multiplication(Poly2.slot2(), tag)]
    factors += [euler_cartan(s, n - j, tag) for j in range(s)]
    return op_product(factors)


# parameters and spectrum

def param_map(mp: ModelParams) -> Tuple[Fraction, Fraction]:
    """(λ, ν) from the physical exponents on the chosen branch"""
    if mp.branch == Branch.BRANCH1:
        return mp.nu_tilde / 3, mp.mu_tilde + mp.nu_tilde / 3
    return mp.mu_tilde / 3, mp.nu_tilde + mp.mu_tilde / 3


def couplings(mp: ModelParams) -> Tuple[Fraction, Fraction]:
    return mp.g_s, mp.g_l


def ground_energy(mp: ModelParams) -> Fraction:
    return F(3, 2) * mp.omega * (1 + 2 * mp.nu_tilde + 2 * mp.mu_tilde)


def eps(n1: int, n2: int, omega: Scalar) -> Fraction:
    if n1 < 0 or n2 < 0:
        raise ValueError("quantum numbers must be non-negative")
    return -4 * Fraction(omega) * (n1 + 3 * n2)


def energy(n1: int, n2: int, mp: ModelParams) -> Fraction:
    """E = -eps/2 + E0"""
    return -eps(n1, n2, mp.omega) / 2 + ground_energy(mp)


# ambiguity families of the integrals

def shifted_x_g2(A: Scalar, h: Optional[DiffOp] = None, x: Optional[DiffOp] = None) -> DiffOp:
    h = h if h is not None else make_h_g2(symbolic=False, omega=0)
    x = x if x is not None else make_x_g2()
    return x + op_linear([(ParamPoly.constant(A), h)])


def shifted_k_g2(sample: ShiftSample, h: Optional[DiffOp] = None, x: Optional[DiffOp] = None,
                 k: Optional[DiffOp] = None) -> DiffOp:
    """k plus the cubic polynomial in (h, x) with the sample's B, C, D coefficients"""
    h = h if h is not None else make_h_g2(symbolic=False, omega=0)
    x = x if x is not None else make_x_g2()
    k = k if k is not None else make_k_g2()
    products = [
        (sample.B1, [h, h, h]),
        (sample.B2, [h, h, x]),
        (sample.B3, [h, x, x]),
        (sample.B4, [x, x, x]),
        (sample.C1, [h, h]),
        (sample.C2, [h, x]),
        (sample.C3, [x, x]),
        (sample.D1, [h]),
        (sample.D2, [x]),
    ]
    terms = [(ParamPoly.constant(c), op_product(factors)) for c, factors in products if c]
    return k + op_linear(terms, tag=k.tag) if terms else k


def shifted_x_a2(A: Scalar, h: Optional[DiffOp] = None, x: Optional[DiffOp] = None) -> DiffOp:
    h = h if h is not None else make_h_a2()
    x = x if x is not None else make_x_a2()
    return x + op_linear([(ParamPoly.constant(A), h)])


def pushforward_square_check(n_max: int = 8) -> PushforwardReport:
    """
    Apply the cubic A2 integral twice to x^p y^(2q) and compare, after
    y^2 -> v, with the squared block applied to u^p v^q, for p + 2q <= n_max
    (every x^p y^(2q) of degree at most n_max).
    """
    k_xy = make_k_a2()
    k_squared = make_k_a2_squared_uv()
    odd, mismatches = [], []
    monomials = flag_monomials(2, n_max)
    for p, q in monomials:
        image = op_apply(k_xy, op_apply(k_xy, Poly2.monomial(p, 2 * q)))
        if not image.is_even_in_slot2():
            odd.append((p, q))
            continue
        if image.squash_slot2() != op_apply(k_squared, Poly2.monomial(p, q)):
            mismatches.append((p, q))
    if odd or mismatches:
        logger.warning(f"Pushforward check: {len(odd)} odd images, {len(mismatches)} mismatches")
    return PushforwardReport(n_max=n_max, checked=len(monomials), odd_images=odd, mismatches=mismatches)
