import random
from fractions import Fraction

import pytest

from app.services.algebra.diffop2 import (
    CompositionStats,
    DiffOp,
    Poly2,
    check_flag_preservation,
    flag_monomials,
    op_apply,
    op_commutator,
    op_compose,
    op_linear,
    op_power,
    op_product,
    op_scale,
    op_substitute,
)
from app.services.algebra.exactcoeff import LAMBDA, NU, OMEGA, ParamPoly
from app.services.algebra.textform import op_from_json, op_parse, op_serialize, op_to_json

SEED = 1729

u = Poly2.slot1()
v = Poly2.slot2()


def random_param(rng: random.Random) -> ParamPoly:
    choices = [ParamPoly.constant(1), LAMBDA, NU, OMEGA, LAMBDA * NU]
    p = ParamPoly()
    for _ in range(rng.randint(1, 2)):
        p = p + Fraction(rng.randint(-4, 4), rng.randint(1, 3)) * rng.choice(choices)
    return p


def random_poly(rng: random.Random, degree: int = 2) -> Poly2:
    f = Poly2()
    for _ in range(rng.randint(1, 3)):
        p, q = rng.randint(0, degree), rng.randint(0, degree)
        f = f + Poly2.monomial(p, q, random_param(rng))
    return f


def random_op(rng: random.Random, order: int = 2) -> DiffOp:
    pairs = []
    for _ in range(rng.randint(1, 3)):
        a = rng.randint(0, order)
        b = rng.randint(0, order - a)
        pairs.append((random_poly(rng), (a, b)))
    return DiffOp.build(pairs)


def test_heisenberg_relation():
    """[∂u, u] = 1 and [∂v, v] = 1"""
    du, dv = DiffOp.derivative(1, 0), DiffOp.derivative(0, 1)
    assert op_commutator(du, DiffOp.multiplication(u)) == DiffOp.identity()
    assert op_commutator(dv, DiffOp.multiplication(v)) == DiffOp.identity()
    assert op_commutator(du, DiffOp.multiplication(v)).is_zero()


def test_leibniz_normal_order():
    """∂u² ∘ u² = u²∂u² + 4u∂u + 2"""
    result = op_compose(DiffOp.derivative(2, 0), DiffOp.multiplication(u ** 2))
    expected = DiffOp.build([(u ** 2, (2, 0)), (4 * u, (1, 0)), (Poly2.coerce(2), (0, 0))])
    assert result == expected


def test_mixed_derivative_composition():
    result = op_compose(DiffOp.derivative(1, 1), DiffOp.multiplication(u * v))
    expected = DiffOp.build([
        (u * v, (1, 1)), (u, (1, 0)), (v, (0, 1)), (Poly2.coerce(1), (0, 0)),
    ])
    assert result == expected


def test_order_and_size():
    assert DiffOp.zero().order == -1
    assert DiffOp.identity().order == 0
    d = DiffOp.build([(u + v, (2, 1)), (LAMBDA, (0, 1))])
    assert d.order == 3
    assert d.size() == 3
    assert d.indices() == [(2, 1), (0, 1)]
    assert d.degree_in("l") == 1


def test_addition_cancels_terms():
    d = DiffOp.build([(u, (1, 0))])
    assert (d - d).is_zero()
    assert (d + (-d)) == DiffOp.zero()


def test_tag_does_not_affect_equality():
    d = DiffOp.build([(u, (1, 0))], tag="uv")
    assert d == d.with_tag("xy")
    assert d.with_tag("xy").tag == "xy"
    with pytest.raises(ValueError):
        DiffOp.zero(tag="rt")


def test_power_and_product():
    du = DiffOp.derivative(1, 0)
    assert op_power(du, 3) == DiffOp.derivative(3, 0)
    assert op_power(du, 0) == DiffOp.identity()
    assert op_product([du, du]) == DiffOp.derivative(2, 0)
    with pytest.raises(ValueError):
        op_power(du, -1)


def test_linear_combination_and_substitution():
    d = DiffOp.build([(u, (1, 0))])
    e = DiffOp.build([(v, (0, 1))])
    combo = op_linear([(LAMBDA, d), (2, e)])
    assert combo.coefficient(1, 0) == Poly2.monomial(1, 0, LAMBDA)
    assert op_substitute(combo, lam=3) == op_linear([(3, d), (2, e)])


def test_apply_to_monomial():
    euler = DiffOp.build([(u, (1, 0)), (3 * v, (0, 1))])
    image = op_apply(euler, Poly2.monomial(2, 1))
    assert image == Poly2.monomial(2, 1, 5)


def test_poly_slot_transport():
    f = Poly2.monomial(1, 4, NU) + Poly2.monomial(0, 2)
    assert f.is_even_in_slot2()
    assert f.squash_slot2() == Poly2.monomial(1, 2, NU) + Poly2.monomial(0, 1)
    with pytest.raises(ValueError):
        Poly2.slot2().squash_slot2()


def test_flag_monomials_order():
    assert flag_monomials(3, 3) == [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]
    assert len(flag_monomials(3, 8)) == sum(m // 3 + 1 for m in range(9))


def test_grading_shift():
    lowering = DiffOp.build([(u, (2, 0)), (v, (1, 1))])
    assert lowering.grading_shift(3) == -1
    assert DiffOp.zero().grading_shift(3) is None


def test_flag_preservation_witness():
    raising = DiffOp.build([(u ** 3, (0, 1))])
    report = check_flag_preservation(raising, 2, 4)
    assert not report.preserved
    assert report.witness.monomial == (0, 1)
    assert report.witness.image == (3, 0)
    assert check_flag_preservation(raising, 3, 6).preserved


def test_composition_stats_track_peak():
    stats = CompositionStats()
    rng = random.Random(SEED)
    op_compose(random_op(rng), random_op(rng), stats)
    assert stats.compositions == 1
    assert stats.peak_terms > 0


def test_jacobi_identity_randomized():
    rng = random.Random(SEED)
    for _ in range(1000):
        a, b, c = random_op(rng), random_op(rng), random_op(rng)
        total = (
            op_commutator(a, op_commutator(b, c))
            + op_commutator(b, op_commutator(c, a))
            + op_commutator(c, op_commutator(a, b))
        )
        assert total.is_zero()


def test_composition_matches_application_randomized():
    rng = random.Random(SEED + 1)
    for _ in range(1000):
        a, b = random_op(rng), random_op(rng)
        f = random_poly(rng, degree=4)
        assert op_apply(op_compose(a, b), f) == op_apply(a, op_apply(b, f))


def test_text_and_json_round_trip_randomized():
    rng = random.Random(SEED + 2)
    for _ in range(1000):
        d = random_op(rng, order=3)
        assert op_parse(op_serialize(d)) == d
        assert op_from_json(op_to_json(d)) == d


def test_scale_by_polynomial():
    d = DiffOp.build([(u, (1, 0)), (1, (0, 1))])
    assert op_scale(d, LAMBDA) == op_linear([(LAMBDA, d)])
    assert op_scale(d, v) == DiffOp.build([(u * v, (1, 0)), (v, (0, 1))])
    assert op_scale(d, 0).is_zero()


def test_commutator_bilinear_and_antisymmetric_randomized():
    rng = random.Random(SEED + 3)
    for _ in range(1000):
        a, b, c = random_op(rng), random_op(rng), random_op(rng)
        alpha = random_param(rng)
        assert op_commutator(a, b) == -op_commutator(b, a)
        left = op_commutator(op_linear([(alpha, a), (1, b)]), c)
        assert left == op_linear([(alpha, op_commutator(a, c)), (1, op_commutator(b, c))])


def test_commutator_lowers_total_order_randomized():
    rng = random.Random(SEED + 4)
    for _ in range(1000):
        a, b = random_op(rng, order=3), random_op(rng, order=3)
        bracket = op_commutator(a, b)
        if not bracket.is_zero():
            assert bracket.order <= a.order + b.order - 1


def test_grading_bounds_close_on_model_operators(h_g2, x_g2, k_g2):
    ops = {"h": h_g2, "x": x_g2, "k": k_g2}
    shifts = {name: op.grading_shift(3) for name, op in ops.items()}
    assert shifts == {"h": 0, "x": 0, "k": -3}
    for left, right in [("h", "x"), ("h", "k"), ("x", "k")]:
        bound = shifts[left] + shifts[right]
        assert op_compose(ops[left], ops[right]).grading_shift(3) <= bound
        bracket = op_commutator(ops[left], ops[right])
        assert bracket.is_zero() or bracket.grading_shift(3) <= bound
