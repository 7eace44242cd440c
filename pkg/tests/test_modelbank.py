from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.core.errors import UnknownModelError
from app.models.generators import GeneratorFamily, GeneratorId, generator_order
from app.models.params import Branch, ModelParams, ShiftSample
from app.services.algebra.diffop2 import DiffOp, check_flag_preservation, op_commutator, op_substitute
from app.services.algebra.exactcoeff import NU
from app.services.catalog import kblocks, modelbank
from app.services.catalog.registry import ModelRegistry


def test_hamiltonian_terms(h_g2):
    assert h_g2.order == 2
    assert h_g2.indices() == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1)]
    assert h_g2.degree_in("w") == 1
    assert modelbank.make_h_g2(symbolic=False, omega=0).degree_in("w") == 0


def test_integral_orders(x_g2, k_g2):
    assert x_g2.order == 2
    assert k_g2.order == 6
    assert k_g2.degree_in("l") == 5
    assert modelbank.make_k_a2().order == 3


def test_sixth_order_integral_has_uniform_weight(k_g2):
    """Every coefficient monomial u^p v^q in front of ∂u^a ∂v^b has p + 3q = a + 3b - 3"""
    for (a, b), coeff in k_g2.terms.items():
        for p, q in coeff.monomials():
            assert p + 3 * q == a + 3 * b - 3


def test_k_at_lambda_zero_is_head_block(k_g2):
    assert op_substitute(k_g2, lam=0) == kblocks.block(0)
    with pytest.raises(ValueError):
        kblocks.block(6)


def test_pushforward_of_squared_cubic_integral():
    report = modelbank.pushforward_square_check(8)
    # every x^p y^(2q) of degree <= 8, up to y^8
    assert report.checked == sum(m // 2 + 1 for m in range(9)) == 25
    assert report.odd_images == []
    assert report.mismatches == []
    assert report.ok


@pytest.mark.parametrize("s", [3, 4, 5, 6])
def test_model_operators_preserve_flags(s, h_g2, x_g2, k_g2):
    for op in (h_g2, x_g2, k_g2):
        assert check_flag_preservation(op, s, 8).preserved


def test_minimal_common_flag(h_g2, x_g2):
    assert check_flag_preservation(h_g2, 2, 8).preserved
    report = check_flag_preservation(x_g2, 2, 8)
    assert not report.preserved
    assert report.witness.monomial == (0, 1)
    assert report.witness.image == (3, 0)


def test_a2_flags():
    h, x, k = modelbank.make_h_a2(), modelbank.make_x_a2(), modelbank.make_k_a2()
    assert check_flag_preservation(h, 1, 6).preserved
    assert check_flag_preservation(k, 1, 6).preserved
    # x^3 dy^2 raises the s=1 grading
    report = check_flag_preservation(x, 1, 6)
    assert not report.preserved
    assert report.witness.image == (3, 0)
    for op in (h, x, k):
        assert check_flag_preservation(op, 2, 6).preserved


@pytest.mark.parametrize("s", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [0, 2, Fraction(5, 2)])
def test_top_t_generator_two_ways(s, n):
    gid = GeneratorId(family=GeneratorFamily.T, s=s, index=s, n=n)
    assert modelbank.make_generator(gid) == modelbank.make_generator_t_descending(s, n)


def test_generator_list():
    assert len(generator_order(3)) == 13
    names = [gid.label for gid in generator_order(3, include_raising=False)]
    assert names == ["J0tilde", "J1", "J2", "J3", "R0", "R1", "R2", "R3", "T0", "T1", "T2", "T3"]
    gl3 = [gid.label for gid in generator_order(1, include_raising=False)]
    assert gl3 == ["J0tilde", "J1", "J2", "J3", "R0", "R1", "T0"]
    with pytest.raises(ValidationError):
        GeneratorId(family=GeneratorFamily.R, s=2, index=3)


def test_euler_cartan_on_monomial():
    from app.services.algebra.diffop2 import Poly2, op_apply

    j0 = modelbank.euler_cartan(3, 4)
    assert op_apply(j0, Poly2.monomial(1, 1)) == Poly2.monomial(1, 1, 0)
    assert op_apply(j0, Poly2.monomial(0, 0)) == Poly2.monomial(0, 0, -4)


def test_parameter_maps():
    mp = ModelParams(nu_tilde=2, mu_tilde=1)
    assert modelbank.param_map(mp) == (Fraction(2, 3), Fraction(5, 3))
    dual = ModelParams(nu_tilde=2, mu_tilde=1, branch=Branch.BRANCH2)
    assert modelbank.param_map(dual) == (Fraction(1, 3), Fraction(7, 3))
    assert modelbank.couplings(mp) == (Fraction(2), Fraction(0))


def test_coupling_bound_rejected():
    with pytest.raises(ValidationError):
        ModelParams(nu_tilde="1/2", mu_tilde=1)
    with pytest.raises(ValidationError):
        ModelParams(nu_tilde="0.5", mu_tilde=1)


def test_energy_levels():
    mp = ModelParams(nu_tilde=1, mu_tilde=1, omega=1)
    assert modelbank.ground_energy(mp) == Fraction(15, 2)
    assert modelbank.eps(1, 1, 1) == -16
    assert modelbank.energy(1, 1, mp) == 8 + Fraction(15, 2)
    assert modelbank.energy(0, 0, mp) == modelbank.ground_energy(mp)
    with pytest.raises(ValueError):
        modelbank.eps(-1, 0, 1)


def test_trivial_shifts_are_identity(h_g2_w0, x_g2, k_g2):
    assert modelbank.shifted_x_g2(0, h=h_g2_w0, x=x_g2) == x_g2
    assert modelbank.shifted_k_g2(ShiftSample(), h=h_g2_w0, x=x_g2, k=k_g2) == k_g2
    shifted = modelbank.shifted_k_g2(ShiftSample(B4=1), h=h_g2_w0, x=x_g2, k=k_g2)
    assert shifted.order == 6


def test_registry_lookup():
    registry = ModelRegistry()
    assert registry.resolve("x.g2") is registry.resolve("x.g2")
    assert registry.resolve("k.g2.p5") == DiffOp.build([(-384, (0, 1))])
    assert registry.resolve("gen.J1.3") == DiffOp.derivative(1, 0)
    assert registry.resolve("h.a2").tag == "xy"
    assert "k2.g2" in registry.names()
    for bad in ("h.g7", "gen.R.3.5", "gen.Q.3", "k.g2.p6"):
        with pytest.raises(UnknownModelError):
            registry.validate(bad)


def test_lambda_blocks_rebuild_the_integral(k_g2):
    assert modelbank.make_k_a2_squared_uv() == op_substitute(k_g2, lam=0)
    for p in range(1, 6):
        block = modelbank.make_k_block(p)
        assert block.degree_in("l") == 0
        assert block.order < 6
    assert modelbank.make_k_block(5) == DiffOp.build([(-384, (0, 1))])


def test_a2_shift_keeps_order():
    x = modelbank.make_x_a2()
    assert modelbank.shifted_x_a2(0) == x
    assert modelbank.shifted_x_a2(Fraction(3, 2)).order == 2
    assert modelbank.shifted_x_a2(1) - x == modelbank.make_h_a2()


def test_head_block_second_order_coefficient():
    coeff = kblocks.block(0).coefficient(0, 2)
    assert coeff.coefficient(3, 0) == Fraction(4, 81) * (72 * NU ** 2 + 342 * NU + 376)
    assert modelbank.pushforward_square_check(8).ok


def test_hamiltonian_commutes_with_head_block():
    h0 = modelbank.make_h_g2(symbolic=False, lam=0, omega=0)
    assert op_commutator(h0, kblocks.block(0)).is_zero()
