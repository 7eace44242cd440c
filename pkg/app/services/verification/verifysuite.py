# app/services/verification/verifysuite.py
"""
Mechanical checks of the integrals and their polynomial algebras.

Every check builds LHS and RHS as normal-ordered operators and reports the
exact residual LHS - RHS. Polynomial right-hand sides are composed in the
written order, e.g. H^3 I1 = H∘H∘H∘I1. The commutator integral is
I12 = [I2, I1] = I2∘I1 - I1∘I2. G2 checks run at ω = 0 since the
sixth-order integral is only available there.
"""
import asyncio
import logging
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache, wraps
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from app.core.config import settings
from app.core.errors import UsageError
from app.models.params import ShiftSample
from app.models.reports import RelationReport
from app.services.algebra.diffop2 import (
    CompositionStats,
    DiffOp,
    op_commutator,
    op_linear,
    op_product,
    op_substitute,
)
from app.services.algebra.exactcoeff import LAMBDA, NU, ParamPoly, Scalar
from app.services.catalog import kblocks, modelbank
from app.services.envelope.envelope import solve_combination

logger = logging.getLogger(__name__)

F = Fraction

# (coefficient, factor names) lists; factor names index an operator set
RhsTerms = List[Tuple[ParamPoly, Tuple[str, ...]]]

G2_QUARTIC_I1: RhsTerms = [
    (ParamPoly.constant(F(-32, 3)), ("H", "H", "H", "I1")),
    (ParamPoly.constant(-144), ("I1", "I2")),
    (ParamPoly.constant(-72), ("I12",)),
    (-96 * (2 * LAMBDA + NU - 1) * (6 * LAMBDA + 1), ("H", "H", "H")),
    (-1296 * (2 * LAMBDA + NU - 1) * (2 * LAMBDA + NU + 1), ("I2",)),
]

G2_QUARTIC_I2: RhsTerms = [
    (ParamPoly.constant(F(32, 3)), ("H", "H", "H", "I2")),
    (ParamPoly.constant(72), ("I2", "I2")),
]

A2_CUBIC_I1: RhsTerms = [
    (ParamPoly.constant(-36), ("I1", "I2")),
    (ParamPoly.constant(-18), ("I12",)),
    (81 * (1 - 4 * NU ** 2), ("I2",)),
]

A2_CUBIC_I2: RhsTerms = [
    (ParamPoly.constant(F(8, 3)), ("H", "H", "H")),
    (ParamPoly.constant(18), ("I2", "I2")),
]


def _built_once(method):
    """Property computed on first access; concurrent readers wait for the one build"""
    name = method.__name__

    @property
    @wraps(method)
    def getter(self):
        with self._lock:
            if name not in self._built:
                self._built[name] = method(self)
            return self._built[name]
    return getter


class _OperatorSet:
    """H, I1, I2 and their commutator I12 with optional (λ, ν) substituted"""

    def __init__(self, lam: Optional[Scalar] = None, nu: Optional[Scalar] = None):
        self.lam = lam
        self.nu = nu
        self._built: Dict[str, DiffOp] = {}
        # reentrant: I12 reads I1 and I2 while holding it
        self._lock = threading.RLock()

    def _specialize(self, op: DiffOp) -> DiffOp:
        return op_substitute(op, self.lam, self.nu, 0)

    @property
    def label(self) -> str:
        if self.lam is None and self.nu is None:
            return ""
        parts = [f"{name}={value}" for name, value in (("λ", self.lam), ("ν", self.nu)) if value is not None]
        return "@" + ",".join(parts)

    def get(self, name: str) -> DiffOp:
        return {"H": self.H, "I1": self.I1, "I2": self.I2, "I12": self.I12}[name]

    @_built_once
    def I12(self) -> DiffOp:
        return op_commutator(self.I2, self.I1)

    def rhs(self, terms: RhsTerms, stats: Optional[CompositionStats] = None) -> DiffOp:
        tag = self.H.tag
        combination = []
        for coeff, factors in terms:
            coeff = coeff.substitute(self.lam, self.nu)
            if coeff.is_zero():
                continue
            combination.append((coeff, op_product([self.get(f) for f in factors], stats)))
        return op_linear(combination, tag=tag) if combination else DiffOp.zero(tag)


class G2Operators(_OperatorSet):

    @_built_once
    def H(self) -> DiffOp:
        return self._specialize(modelbank.make_h_g2())

    @_built_once
    def I1(self) -> DiffOp:
        return self._specialize(modelbank.make_x_g2())

    @_built_once
    def I2(self) -> DiffOp:
        return self._specialize(modelbank.make_k_g2())


class A2Operators(_OperatorSet):

    @_built_once
    def H(self) -> DiffOp:
        return self._specialize(modelbank.make_h_a2())

    @_built_once
    def I1(self) -> DiffOp:
        return self._specialize(modelbank.make_x_a2())

    @_built_once
    def I2(self) -> DiffOp:
        return self._specialize(modelbank.make_k_a2())


_SETS_LOCK = threading.Lock()


@lru_cache(maxsize=None)
def _cached_operators(kind: str, lam: Optional[Fraction], nu: Optional[Fraction]) -> _OperatorSet:
    return (G2Operators if kind == "g2" else A2Operators)(lam, nu)


def g2_operators(lam: Optional[Fraction] = None, nu: Optional[Fraction] = None) -> G2Operators:
    """Shared operator set; one instance per (λ, ν) so I12 is built once"""
    with _SETS_LOCK:
        return _cached_operators("g2", lam, nu)


def a2_operators(nu: Optional[Fraction] = None) -> A2Operators:
    with _SETS_LOCK:
        return _cached_operators("a2", None, nu)


def _report(name: str, build: Callable[[CompositionStats], Tuple[DiffOp, DiffOp]],
            expected_order: Optional[int] = None, omega_zero: bool = True, note: str = "",
            side_conditions: bool = True) -> RelationReport:
    """Time one LHS/RHS construction and package the residual"""
    stats = CompositionStats()
    start = time.perf_counter()
    lhs, rhs = build(stats)
    residual = lhs - rhs
    elapsed = time.perf_counter() - start
    ok = residual.is_zero()
    if ok:
        logger.info(f"{name}: ok in {elapsed:.2f}s (peak {stats.peak_terms} terms)")
    else:
        logger.warning(f"{name}: residual with {residual.size()} terms after {elapsed:.2f}s")
    return RelationReport(
        name=name,
        lhs_order=lhs.order,
        residual=residual,
        ok=ok,
        elapsed=elapsed,
        term_count_peak=stats.peak_terms,
        expected_order=expected_order,
        omega_zero=omega_zero,
        note=note,
        side_conditions=side_conditions,
    )


def _vanishes(name: str, a: Callable[[], DiffOp], b: Callable[[], DiffOp], **kwargs) -> RelationReport:
    def build(stats):
        lhs = op_commutator(a(), b(), stats)
        return lhs, DiffOp.zero(lhs.tag)
    return _report(name, build, **kwargs)


def _relation(name: str, ops: _OperatorSet, left: str, terms: RhsTerms,
              expected_order: int) -> RelationReport:
    def build(stats):
        return op_commutator(ops.get(left), ops.I12, stats), ops.rhs(terms, stats)
    return _report(name, build, expected_order=expected_order)


def _i12_order(name: str, ops: _OperatorSet, expected_order: int) -> RelationReport:
    def build(stats):
        lhs = op_commutator(ops.I2, ops.I1, stats)
        return lhs, ops.I12
    return _report(name, build, expected_order=expected_order)


# G2

def check_g2_integrability(ops: Optional[G2Operators] = None) -> List[RelationReport]:
    ops = ops or g2_operators()
    suffix = ops.label
    return [
        _vanishes(f"g2[H,I1]{suffix}", lambda: ops.H, lambda: ops.I1),
        _vanishes(f"g2[H,I2]{suffix}", lambda: ops.H, lambda: ops.I2),
        _vanishes(f"g2[H,I12]{suffix}", lambda: ops.H, lambda: ops.I12),
        _i12_order(f"g2 I12=[I2,I1]{suffix}", ops, expected_order=7),
    ]


def check_g2_quartic(lam: Optional[Scalar] = None, include_order12: bool = True) -> List[RelationReport]:
    ops = g2_operators(None if lam is None else Fraction(lam))
    suffix = ops.label
    reports = [_relation(f"g2[I1,I12]{suffix}", ops, "I1", G2_QUARTIC_I1, expected_order=8)]
    if include_order12:
        reports.append(_relation(f"g2[I2,I12]{suffix}", ops, "I2", G2_QUARTIC_I2, expected_order=12))
    return reports


def random_shift_samples(count: Optional[int] = None, seed: Optional[int] = None) -> List[ShiftSample]:
    """Small rational shift tuples from a seeded generator"""
    rng = random.Random(settings.random_seed if seed is None else seed)
    count = settings.shift_samples if count is None else count
    names = list(ShiftSample.model_fields)
    samples = []
    for _ in range(count):
        samples.append(ShiftSample(**{
            name: Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for name in names
        }))
    return samples


def check_shift_invariance(samples: Optional[Sequence[ShiftSample]] = None) -> List[RelationReport]:
    ops = g2_operators()
    samples = random_shift_samples() if samples is None else samples
    reports = []
    for i, sample in enumerate(samples):
        x = modelbank.shifted_x_g2(sample.A, h=ops.H, x=ops.I1)
        k = modelbank.shifted_k_g2(sample, h=ops.H, x=ops.I1, k=ops.I2)
        orders_kept = (x.order, k.order) == (2, 6)
        if not orders_kept:
            logger.warning(f"Shifted integrals have orders {x.order}/{k.order}")

        def build(stats, x=x, k=k):
            return op_commutator(k, x, stats), ops.I12
        reports.append(_report(f"g2 shift[{i}]", build, expected_order=7,
                               note=f"A={sample.A}, orders {x.order}/{k.order}",
                               side_conditions=orders_kept))
    return reports


def check_lambda_zero_reduction() -> List[RelationReport]:
    def head(stats):
        return op_substitute(modelbank.make_k_g2(), lam=0), kblocks.block(0)
    return [_report("g2 k(λ=0)=(k_A2)^2", head, expected_order=6)] + check_g2_quartic(lam=0)


def check_g2_omega_exploratory() -> List[RelationReport]:
    """[h, x] with ω left symbolic; outside the acceptance set"""
    return [_vanishes("g2[h,x] ω symbolic", modelbank.make_h_g2, modelbank.make_x_g2,
                      omega_zero=False, note="exploratory")]


def check_coupling_localization() -> Dict[str, bool]:
    """Whether each quartic right-hand side depends on λ or ν"""
    def depends(terms: RhsTerms) -> bool:
        return any(c.degree_in("l") > 0 or c.degree_in("n") > 0 for c, _ in terms)
    return {
        "g2[I1,I12]": depends(G2_QUARTIC_I1),
        "g2[I2,I12]": depends(G2_QUARTIC_I2),
    }


def check_spot_values(points: Optional[Sequence[Tuple[Fraction, Fraction]]] = None,
                      include_order12: bool = True) -> List[RelationReport]:
    """Recompute the relations with (λ, ν) substituted from the start"""
    points = settings.spot_values_list if points is None else points
    reports = []
    for lam, nu in points:
        g2 = g2_operators(Fraction(lam), Fraction(nu))
        reports += check_g2_integrability(g2)
        reports.append(_relation(f"g2[I1,I12]{g2.label}", g2, "I1", G2_QUARTIC_I1, expected_order=8))
        if include_order12:
            reports.append(_relation(f"g2[I2,I12]{g2.label}", g2, "I2", G2_QUARTIC_I2, expected_order=12))
        a2 = a2_operators(Fraction(nu))
        reports += check_a2_integrability(a2)
        reports += _a2_relations(a2)
    return reports


# A2

def check_a2_integrability(ops: Optional[A2Operators] = None) -> List[RelationReport]:
    ops = ops or a2_operators()
    suffix = ops.label
    return [
        _vanishes(f"a2[H,I1]{suffix}", lambda: ops.H, lambda: ops.I1),
        _vanishes(f"a2[H,I2]{suffix}", lambda: ops.H, lambda: ops.I2),
        _vanishes(f"a2[H,I12]{suffix}", lambda: ops.H, lambda: ops.I12),
    ]


def _a2_relations(ops: A2Operators) -> List[RelationReport]:
    suffix = ops.label
    return [
        _i12_order(f"a2 I12=[I2,I1]{suffix}", ops, expected_order=4),
        _relation(f"a2[I1,I12]{suffix}", ops, "I1", A2_CUBIC_I1, expected_order=5),
        _relation(f"a2[I2,I12]{suffix}", ops, "I2", A2_CUBIC_I2, expected_order=6),
    ]


A2_SPAN_CANDIDATES: Tuple[Tuple[str, ...], ...] = ((), ("H",), ("I1",), ("H", "H"), ("H", "I1"), ("I1", "I1"))


def check_a2_i12_outside_span(nu_values: Sequence[Scalar] = (0, F(1, 3), 2)) -> RelationReport:
    """
    I12 against polynomials in H and I1 up to its order, one ν value at a time.
    Passes iff every solve leaves a nonzero residual.
    """
    stats = CompositionStats()
    start = time.perf_counter()
    residual = None
    lhs_order = -1
    for nu in nu_values:
        ops = a2_operators(Fraction(nu))
        candidates = [
            op_product([ops.get(f) for f in factors], stats) if factors else DiffOp.identity(ops.H.tag)
            for factors in A2_SPAN_CANDIDATES
        ]
        _, current = solve_combination(ops.I12, candidates)
        lhs_order = ops.I12.order
        if residual is None or current.is_zero():
            residual = current
    elapsed = time.perf_counter() - start
    ok = residual is not None and not residual.is_zero()
    logger.info(f"a2 I12 outside span{{H^a I1^b}}: {'ok' if ok else 'FAILED'}")
    return RelationReport(
        name="a2 I12 not in span{H^a I1^b}",
        lhs_order=lhs_order,
        residual=residual if residual is not None else DiffOp.zero("xy"),
        ok=ok,
        expect_zero=False,
        elapsed=elapsed,
        term_count_peak=stats.peak_terms,
        expected_order=4,
        omega_zero=True,
        note=f"ν in {[str(Fraction(n)) for n in nu_values]}",
    )


def check_a2_cubic() -> List[RelationReport]:
    ops = a2_operators()
    return [
        _vanishes("a2[H,I12]", lambda: ops.H, lambda: ops.I12),
        *_a2_relations(ops),
        check_a2_i12_outside_span(),
    ]


def check_a2_shift_invariance(values: Sequence[Scalar] = (1, F(-2, 3), F(5, 2))) -> List[RelationReport]:
    ops = a2_operators()
    reports = []
    for i, A in enumerate(values):
        x = modelbank.shifted_x_a2(A, h=ops.H, x=ops.I1)

        def build(stats, x=x):
            return op_commutator(ops.I2, x, stats), ops.I12
        reports.append(_report(f"a2 shift[{i}]", build, expected_order=4, note=f"A={Fraction(A)}",
                               side_conditions=x.order == 2))
    return reports


# runner

CHECKS: Dict[str, Callable[[], List[RelationReport]]] = {
    "g2-integrability": check_g2_integrability,
    "g2-quartic": check_g2_quartic,
    "g2-shift": check_shift_invariance,
    "g2-lambda-zero": check_lambda_zero_reduction,
    "a2-integrability": check_a2_integrability,
    "a2-cubic": check_a2_cubic,
    "a2-shift": check_a2_shift_invariance,
    "spot-values": check_spot_values,
    "g2-omega": check_g2_omega_exploratory,
}

ACCEPTANCE = (
    "g2-integrability",
    "g2-quartic",
    "g2-shift",
    "g2-lambda-zero",
    "a2-integrability",
    "a2-cubic",
    "a2-shift",
)


def expand_names(names: Sequence[str]) -> List[str]:
    expanded = []
    for name in names:
        group = ACCEPTANCE if name == "all" else (name,)
        for item in group:
            if item not in CHECKS:
                raise UsageError(f"Unknown relation group: {item}; expected one of {sorted(CHECKS)} or 'all'")
            if item not in expanded:
                expanded.append(item)
    return expanded


async def run_checks_async(names: Sequence[str]) -> List[RelationReport]:
    """Run the named groups concurrently; reports come back in request order"""
    groups = expand_names(names)
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=max(1, settings.max_workers)) as pool:
        tasks = [loop.run_in_executor(pool, CHECKS[name]) for name in groups]
        results = await asyncio.gather(*tasks)
    reports = [report for group in results for report in group]
    logger.info(f"Ran {len(reports)} relation checks, {sum(not r.passed for r in reports)} failing")
    return reports


def run_checks(names: Sequence[str]) -> List[RelationReport]:
    return asyncio.run(run_checks_async(names))


def summary_table(reports: Sequence[RelationReport]) -> str:
    frame = pd.DataFrame([
        {
            "relation": r.name,
            "ok": "yes" if r.passed else "NO",
            "order": r.lhs_order,
            "expected": "" if r.expected_order is None else r.expected_order,
            "residual terms": r.residual.size(),
            "peak terms": r.term_count_peak,
        }
        for r in reports
    ], columns=["relation", "ok", "order", "expected", "residual terms", "peak terms"])
    return frame.to_string(index=False)
