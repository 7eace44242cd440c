# app/services/catalog/kblocks.py
"""
Coefficient blocks of the sixth-order G2 integral at ω = 0,

    k = (k_A2)^2(u, v) + Σ_{p=1..5} λ^p k^(p)(u, v),

written term by term in normal order. Every term has weight -3 under the
grading u -> 1, v -> 3, derivatives counted negatively.
"""
from fractions import Fraction as F
from typing import Callable, Dict, List, Tuple

from app.services.algebra.diffop2 import DiffOp, Poly2
from app.services.algebra.exactcoeff import ParamPoly

Term = Tuple[Poly2, Tuple[int, int]]

u = Poly2.slot1()
v = Poly2.slot2()
nu = Poly2.coerce(ParamPoly.nu())


def _head_terms() -> List[Term]:
    return [
        # order 6
        (v, (6, 0)),
        (-F(8, 3) * u**2 * v, (5, 1)),
        (F(8, 9) * u * v * (2 * u**3 - 9 * v), (4, 2)),
        (F(16, 27) * v**2 * (16 * u**3 - 27 * v), (3, 3)),
        (F(16, 81) * u**2 * v**2 * (8 * u**3 + 189 * v), (2, 4)),
        (F(64, 27) * u * v**3 * (2 * u**3 + 27 * v), (1, 5)),
        (F(64, 729) * v**3 * (4 * u**6 + 108 * u**3 * v + 729 * v**2), (0, 6)),
        # order 5
        (-F(2, 3) * u**2, (5, 0)),
        (F(8, 9) * u * (u**3 - 3 * (3 * nu + 8) * v), (4, 1)),
        (F(8, 9) * v * (2 * (6 * nu + 17) * u**3 - 9 * (3 * nu + 8) * v), (3, 2)),
        (F(16, 27) * u**2 * v * (8 * u**3 + 9 * (12 * nu + 37) * v), (2, 3)),
        (F(32, 81) * u * v**2 * ((12 * nu + 89) * u**3 + 27 * (15 * nu + 52) * v), (1, 4)),
        (F(32, 243) * v**2 * (20 * u**6 + 18 * (6 * nu + 43) * v * u**3
                              + 243 * (6 * nu + 25) * v**2), (0, 5)),
        # order 4
        (-F(2, 3) * u * (3 * nu + 2), (4, 0)),
        (F(4, 9) * (6 * (3 + 2 * nu) * u**3 - (9 * nu * (2 * nu + 11) + 103) * v), (3, 1)),
        (F(4, 27) * u**2 * (8 * u**3 + (180 * nu**2 + 1116 * nu + 1345) * v), (2, 2)),
        (F(16, 27) * u * v * (8 * (3 * nu + 11) * u**3
                              + 3 * (72 * nu**2 + 450 * nu + 631) * v), (1, 3)),
        (F(16, 243) * v * (60 * u**6 + 2 * (36 * nu**2 + 711 * nu + 2168) * v * u**3
                           + 27 * (117 * nu**2 + 873 * nu + 1529) * v**2), (0, 4)),
        # order 3
        (-F(2, 9) * (3 * nu + 2) * (3 * nu + 1), (3, 0)),
        (F(8, 27) * u**2 * (45 * nu**2 + 117 * nu + 73), (2, 1)),
        (F(8, 27) * u * ((12 * nu + 29) * u**3
                         + (108 * nu**3 + 990 * nu**2 + 2355 * nu + 1594) * v), (1, 2)),
        (F(8, 243) * (20 * u**6 + 27 * (108 * nu**3 + 1080 * nu**2 + 3210 * nu + 2957) * v**2
                      + 6 * (72 * nu**2 + 612 * nu + 1051) * v * u**3), (0, 3)),
        # order 2
        (F(8, 27) * (3 * nu + 2) * (3 * nu + 5) * (6 * nu + 5) * u, (1, 1)),
        # the pushed-forward square of k_A2 fixes this factor to (72ν² + 342ν + 376)
        (F(4, 81) * ((324 * nu**4 + 4050 * nu**3 + 14643 * nu**2 + 20421 * nu + 9592) * v
                     + (72 * nu**2 + 342 * nu + 376) * u**3), (0, 2)),
        # order 1
        (F(4, 81) * (3 * nu + 2)**2 * (3 * nu + 1) * (6 * nu + 11), (0, 1)),
    ]


def _block1_terms() -> List[Term]:
    return [
        (-4 * u**2, (5, 0)),
        (F(16, 3) * u * (u**3 - 3 * v), (4, 1)),
        (16 * v * (2 * u**3 - 3 * v), (3, 2)),
        (F(32, 27) * u**2 * v * (8 * u**3 + 135 * v), (2, 3)),
        (F(64, 27) * u * v**2 * (13 * u**3 + 135 * v), (1, 4)),
        (F(128, 81) * v**2 * (u**3 + 9 * v) * (2 * u**3 + 27 * v), (0, 5)),
        (-12 * (nu + 1) * u, (4, 0)),
        (F(8, 9) * (4 * (9 * nu + 14) * u**3 - 9 * (7 * nu + 8) * v), (3, 1)),
        (F(64, 27) * u**2 * (4 * u**3 + 9 * (11 * nu + 20) * v), (2, 2)),
        (F(64, 27) * u * v * (4 * (3 * nu + 14) * u**3 + 27 * (11 * nu + 26) * v), (1, 3)),
        (F(32, 81) * v * (32 * u**6 + 6 * (41 * nu + 199) * v * u**3
                          + 81 * (32 * nu + 97) * v**2), (0, 4)),
        (-F(4, 3) * (9 * nu**2 + 15 * nu + 5), (3, 0)),
        (F(16, 9) * (45 * nu**2 + 129 * nu + 85) * u**2, (2, 1)),
        (F(16, 27) * u * ((48 * nu + 119) * u**3 + 3 * (270 * nu**2 + 966 * nu + 845) * v), (1, 2)),
        (F(32, 243) * (46 * u**6 + 3 * (72 * nu**2 + 864 * nu + 1717) * v * u**3
                       + 243 * (30 * nu**2 + 147 * nu + 179) * v**2), (0, 3)),
        (F(16, 3) * (18 * nu**3 + 66 * nu**2 + 72 * nu + 25) * u, (1, 1)),
        (F(8, 81) * (2 * (48 * nu + 163) * (3 * nu + 5) * u**3
                     + 9 * (414 * nu**3 + 2268 * nu**2 + 3962 * nu + 2293) * v), (0, 2)),
        (F(8, 27) * (3 * nu + 2) * (54 * nu**3 + 198 * nu**2 + 189 * nu + 52), (0, 1)),
    ]


def _block2_terms() -> List[Term]:
    return [
        (-24 * u, (4, 0)),
        (F(16, 3) * (2 * u**3 - 15 * v), (3, 1)),
        (F(16, 9) * u**2 * (8 * u**3 + 69 * v), (2, 2)),
        # the weight grading fixes this factor to (8u^3 + 45v)
        (F(64, 9) * u * v * (8 * u**3 + 45 * v), (1, 3)),
        (F(128, 27) * (2 * u**6 * v + 37 * u**3 * v**2 + 135 * v**3), (0, 4)),
        (-16 * (3 * nu + 2), (3, 0)),
        (F(32, 3) * (12 * nu + 11) * u**2, (2, 1)),
        (F(32, 3) * ((4 * nu + 11) * u**4 + (63 * nu + 86) * v * u), (1, 2)),
        (F(32, 9) * (4 * u**6 + 2 * (28 * nu + 85) * v * u**3 + 27 * (16 * nu + 31) * v**2), (0, 3)),
        (F(32, 3) * (27 * nu**2 + 51 * nu + 23) * u, (1, 1)),
        (F(16, 27) * (2 * (36 * nu**2 + 231 * nu + 275) * u**3
                      + 3 * (621 * nu**2 + 1809 * nu + 1327) * v), (0, 2)),
        (F(16, 9) * (135 * nu**3 + 351 * nu**2 + 273 * nu + 71), (0, 1)),
    ]


def _block3_terms() -> List[Term]:
    return [
        (Poly2.coerce(-48), (3, 0)),
        (-64 * u**2, (2, 1)),
        (F(64, 3) * u * (u**3 - 15 * v), (1, 2)),
        (F(128, 27) * u**3 * (2 * u**3 + 33 * v), (0, 3)),
        (-192 * u, (1, 1)),
        (F(32, 9) * (10 * (3 * nu + 5) * u**3 + 9 * (16 * nu - 1) * v), (0, 2)),
        (F(32, 3) * (9 * nu + 5) * (3 * nu + 1), (0, 1)),
    ]


def _block4_terms() -> List[Term]:
    return [
        (-384 * u, (1, 1)),
        (F(64, 3) * (2 * u**3 - 33 * v), (0, 2)),
        (-64 * (3 * nu + 7), (0, 1)),
    ]


def _block5_terms() -> List[Term]:
    return [
        (Poly2.coerce(-384), (0, 1)),
    ]


BLOCKS: Dict[int, Callable[[], List[Term]]] = {
    0: _head_terms,
    1: _block1_terms,
    2: _block2_terms,
    3: _block3_terms,
    4: _block4_terms,
    5: _block5_terms,
}


def block(p: int) -> DiffOp:
    """Block p of the λ-expansion; p = 0 is the squared cubic A2 integral"""
    if p not in BLOCKS:
        raise ValueError(f"No λ^{p} block; expected 0..5")
    return DiffOp.build(BLOCKS[p](), tag="uv")
