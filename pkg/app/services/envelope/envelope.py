# app/services/envelope/envelope.py
"""
Enveloping-algebra decompositions: write an operator as a linear combination
of ordered products of hidden-algebra generators, by an exact rational solve.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.core.config import settings
from app.core.errors import SizeGuardError
from app.models.envelope import Decomposition, EnvBasis
from app.models.generators import GeneratorId, generator_order
from app.models.reports import DecompositionSummary, DecompositionTerm
from app.services.algebra.diffop2 import DiffOp, Poly2, flag_monomials, op_apply, op_linear, op_product
from app.services.algebra.exactcoeff import PARAM_RING, ParamPoly, parampoly_serialize
from app.services.catalog.modelbank import make_generator

logger = logging.getLogger(__name__)

RowKey = Tuple[int, int, int, int]


def enumerate_env_basis(s: int, n: Fraction = Fraction(0), max_degree: int = 2,
                        exclude_raising: bool = True) -> EnvBasis:
    """Identity first, then products by length, each non-decreasing in generator order"""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    generators = generator_order(s, n, include_raising=not exclude_raising)
    sequences = []
    for degree in range(max_degree + 1):
        sequences.extend(combinations_with_replacement(generators, degree))
    logger.debug(f"Envelope basis s={s}, degree<={max_degree}: {len(sequences)} products")
    return EnvBasis(s=s, n=n, max_degree=max_degree, exclude_raising=exclude_raising,
                    sequences=sequences)


def compose_sequence(sequence: Sequence[GeneratorId], tag: str = "uv",
                     cache: Optional[Dict[GeneratorId, DiffOp]] = None) -> DiffOp:
    if not sequence:
        return DiffOp.identity(tag)
    cache = cache if cache is not None else {}
    factors = []
    for gid in sequence:
        if gid not in cache:
            cache[gid] = make_generator(gid, tag)
        factors.append(cache[gid])
    return op_product(factors)


def _products(basis: EnvBasis, tag: str) -> List[DiffOp]:
    cache: Dict[GeneratorId, DiffOp] = {}
    for gid in generator_order(basis.s, basis.n, include_raising=not basis.exclude_raising):
        cache[gid] = make_generator(gid, tag)
    if settings.max_workers > 1 and basis.size > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
            return list(pool.map(lambda seq: compose_sequence(seq, tag, cache), basis.sequences))
    return [compose_sequence(seq, tag, cache) for seq in basis.sequences]


def _split(op: DiffOp) -> Dict[Tuple[RowKey, Tuple[int, int, int]], object]:
    """(derivative index, spatial exponent) rows against parameter monomials"""
    entries = {}
    for (a, b), rep in op.raw_terms().items():
        for exponent, coeff in rep.items():
            entries[((a, b, exponent[0], exponent[1]), tuple(exponent[2:]))] = coeff
    return entries


def solve_combination(target: DiffOp, candidates: Sequence[DiffOp]) -> Tuple[List[ParamPoly], DiffOp]:
    """
    Coefficients c_i (polynomials in the parameters) with target ≈ Σ c_i · candidates[i].

    Candidates must be parameter-free. Each parameter monomial of the target
    gets its own right-hand side; free columns are set to zero, so later
    candidates are preferred to vanish. The residual is target minus the
    recomposition and is zero iff the system was consistent.
    """
    candidate_entries = []
    rows: Dict[RowKey, int] = {}
    for op in candidates:
        entries = {}
        for (row, param), coeff in _split(op).items():
            if param != (0, 0, 0):
                raise ValueError("candidate operators must not depend on λ, ν, ω")
            entries[row] = coeff
            rows.setdefault(row, len(rows))
        candidate_entries.append(entries)

    target_entries = _split(target)
    params = sorted({param for _, param in target_entries})
    for row, _ in target_entries:
        rows.setdefault(row, len(rows))

    ncols = len(candidates)
    width = ncols + len(params)
    coefficients = [PARAM_RING.zero for _ in candidates]
    if rows and ncols and params:
        grid = [[QQ.zero] * width for _ in range(len(rows))]
        for j, entries in enumerate(candidate_entries):
            for row, coeff in entries.items():
                grid[rows[row]][j] = coeff
        param_index = {param: ncols + t for t, param in enumerate(params)}
        for (row, param), coeff in target_entries.items():
            grid[rows[row]][param_index[param]] = coeff
        reduced, pivots = DomainMatrix(grid, (len(rows), width), QQ).rref()
        reduced_rows = reduced.to_list()
        for r, column in enumerate(pivots):
            if column >= ncols:
                logger.debug(f"Inconsistent system: pivot in right-hand side column {column}")
                break
            for t, param in enumerate(params):
                value = reduced_rows[r][ncols + t]
                if value:
                    coefficients[column] = coefficients[column] + PARAM_RING({param: value})
    result = [ParamPoly(rep) for rep in coefficients]
    recomposed = op_linear(list(zip(result, candidates)), tag=target.tag) if candidates else DiffOp.zero(target.tag)
    return result, target - recomposed


def decompose(D: DiffOp, basis: EnvBasis, target_name: str = "", force: bool = False) -> Decomposition:
    if basis.size > settings.decomposition_size_guard and not force:
        raise SizeGuardError(size=basis.size, guard=settings.decomposition_size_guard)
    logger.info(f"Decomposing {target_name or 'operator'} over {basis.size} products (s={basis.s})")
    products = _products(basis, D.tag)
    coefficients, residual = solve_combination(D, products)
    kept = {seq: c for seq, c in zip(basis.sequences, coefficients) if not c.is_zero()}
    if residual.is_zero():
        logger.info(f"Decomposition found with {len(kept)} nonzero coefficients")
    else:
        logger.info(f"No decomposition; residual has {residual.size()} terms")
    return Decomposition(target_name=target_name, target=D, basis=basis,
                         coefficients=kept, residual=residual)


def recompose(d: Decomposition) -> DiffOp:
    tag = d.target.tag
    terms = [(coeff, compose_sequence(seq, tag)) for seq, coeff in d.coefficients.items()]
    return op_linear(terms, tag=tag) if terms else DiffOp.zero(tag)


def verify_decomposition(d: Decomposition) -> bool:
    """True iff the stored coefficients rebuild the target exactly"""
    return recompose(d) == d.target


def summarize(d: Decomposition) -> DecompositionSummary:
    order = {seq: i for i, seq in enumerate(d.basis.sequences)}
    terms = [
        DecompositionTerm(product=[gid.label for gid in seq] or ["1"], coefficient=parampoly_serialize(c))
        for seq, c in sorted(d.coefficients.items(), key=lambda item: order.get(item[0], len(order)))
    ]
    return DecompositionSummary(
        target=d.target_name,
        s=d.basis.s,
        max_degree=d.basis.max_degree,
        basis_size=d.basis.size,
        success=d.success,
        residual_terms=d.residual.size(),
        terms=terms,
    )


def maps_into_level(d: DiffOp, s: int, n: int) -> bool:
    """Whether every monomial of P^(s)_n is sent back into P^(s)_n"""
    for p, q in flag_monomials(s, n):
        image = op_apply(d, Poly2.monomial(p, q))
        if any(pp + s * qq > n for pp, qq in image.monomials()):
            return False
    return True


def check_generators_preserve_flag(s: int, n_values: Iterable[int]) -> Dict[str, bool]:
    """Each generator with integer mark n keeps P^(s)_n invariant"""
    results = {}
    for n in n_values:
        for gid in generator_order(s, Fraction(n)):
            results[f"{gid.name}@n={n}"] = maps_into_level(make_generator(gid), s, n)
    failing = [name for name, ok in results.items() if not ok]
    if failing:
        logger.warning(f"Generators leaving their space: {failing}")
    return results
