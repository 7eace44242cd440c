# app/services/representation/repspace.py
"""
Finite-dimensional shadows of the model operators: monomial bases of the
flag spaces, exact matrices, spectra read from the triangular diagonal and
eigenpolynomials by back-substitution.
"""
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional

import pandas as pd
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.core.config import settings
from app.core.errors import DegenerateChainError, NotInvariantError, NotTriangularError
from app.models.params import ModelParams
from app.models.representation import FlagBasis, OpMatrix
from app.services.algebra.diffop2 import DiffOp, Poly2, flag_monomials, op_apply, op_substitute
from app.services.algebra.exactcoeff import Scalar
from app.services.catalog.modelbank import ground_energy

logger = logging.getLogger(__name__)


def basis(s: int, n: int) -> FlagBasis:
    if s < 1 or n < 0:
        raise ValueError("basis needs s >= 1 and n >= 0")
    return FlagBasis(s=s, n=n, monomials=flag_monomials(s, n))


def _column(d: DiffOp, fb: FlagBasis, index_map: dict, j: int) -> List[Fraction]:
    p, q = fb.monomials[j]
    image = op_apply(d, Poly2.monomial(p, q))
    column = [Fraction(0)] * fb.size
    outside = []
    for monomial, coeff in image.terms.items():
        if not coeff.is_constant():
            raise ValueError(f"Coefficient {coeff} still depends on parameters")
        row = index_map.get(monomial)
        if row is None:
            outside.append(monomial)
        else:
            column[row] = coeff.constant_value()
    if outside:
        worst = max(outside, key=lambda m: (m[0] + fb.s * m[1], m[1]))
        raise NotInvariantError(witness=(p, q), image=worst)
    return column


def matrix(d: DiffOp, fb: FlagBasis, lam: Scalar, nu: Scalar, omega: Scalar,
           workers: Optional[int] = None) -> OpMatrix:
    """
    Exact matrix of d on fb after substituting (λ, ν, ω).

    Raises NotInvariantError for the first basis monomial whose image leaves
    the space.
    """
    numeric = op_substitute(d, lam, nu, omega)
    index_map = fb.index_map()
    workers = workers if workers is not None else settings.max_workers
    columns_idx = range(fb.size)
    if workers > 1 and fb.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(lambda j: _column(numeric, fb, index_map, j), columns_idx))
    else:
        columns = [_column(numeric, fb, index_map, j) for j in columns_idx]
    entries = [[columns[j][i] for j in range(fb.size)] for i in range(fb.size)]
    logger.debug(f"Built {fb.size}x{fb.size} matrix for s={fb.s}, n={fb.n}")
    return OpMatrix(basis=fb, entries=entries)


def check_triangular(m: OpMatrix) -> None:
    """Images never climb in basis order: every entry below the diagonal is zero"""
    size = m.basis.size
    for j in range(size):
        for i in range(j + 1, size):
            if m.entries[i][j]:
                raise NotTriangularError(position=(i, j))


def spectrum(m: OpMatrix) -> List[Fraction]:
    """Diagonal of a triangular matrix, in basis order"""
    check_triangular(m)
    return m.diagonal


def eigenpolynomials(m: OpMatrix) -> List[Poly2]:
    """
    One eigenpolynomial per basis monomial, by back-substitution from that
    monomial downward. A repeated diagonal value is passed over when its
    chain sum vanishes; otherwise only a generalized eigenvector exists.
    """
    check_triangular(m)
    size = m.basis.size
    entries = m.entries
    result = []
    for k in range(size):
        value = entries[k][k]
        c = [Fraction(0)] * size
        c[k] = Fraction(1)
        for i in range(k - 1, -1, -1):
            chain = sum((entries[i][j] * c[j] for j in range(i + 1, k + 1)), Fraction(0))
            gap = entries[i][i] - value
            if gap == 0:
                if chain != 0:
                    raise DegenerateChainError(index=k, value=value)
                continue
            c[i] = -chain / gap
        poly = Poly2()
        for coeff, (p, q) in zip(c, m.basis.monomials):
            if coeff:
                poly = poly + Poly2.monomial(p, q, coeff)
        result.append(poly)
    return result


def degeneracy(m: int, n: Optional[int] = None) -> int:
    """Number of (n1, n2) >= 0 with n1 + 3*n2 = m"""
    if m < 0 or (n is not None and m > n):
        raise ValueError("degeneracy needs 0 <= m <= n")
    return m // 3 + 1


def to_domain_matrix(m: OpMatrix) -> DomainMatrix:
    rows = [[(e.numerator, e.denominator) for e in row] for row in m.entries]
    return DomainMatrix.from_list(rows, QQ)


def matrix_commutes(m1: OpMatrix, m2: OpMatrix) -> bool:
    if m1.basis != m2.basis:
        raise ValueError("matrices live on different bases")
    a, b = to_domain_matrix(m1), to_domain_matrix(m2)
    return (a * b - b * a).is_zero_matrix


def energies(m: OpMatrix, mp: ModelParams) -> List[Fraction]:
    """Physical energies -eps/2 + E0 for the spectrum of the algebraic Hamiltonian"""
    e0 = ground_energy(mp)
    return [-value / 2 + e0 for value in spectrum(m)]


def _labels(fb: FlagBasis) -> List[str]:
    return [f"[{p} {q}]" for p, q in fb.monomials]


def matrix_to_frame(m: OpMatrix) -> pd.DataFrame:
    labels = _labels(m.basis)
    cells = [[f"{e.numerator}/{e.denominator}" if e.denominator != 1 else str(e.numerator)
              for e in row] for row in m.entries]
    return pd.DataFrame(cells, index=labels, columns=labels)


def matrix_to_csv(m: OpMatrix) -> str:
    buffer = io.StringIO()
    matrix_to_frame(m).to_csv(buffer, index_label="monomial", lineterminator="\n")
    return buffer.getvalue()


def matrix_to_json(m: OpMatrix) -> str:
    return m.model_dump_json()
