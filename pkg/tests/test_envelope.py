from fractions import Fraction

import pytest

from app.core.errors import SizeGuardError
from app.models.generators import GeneratorFamily
from app.services.algebra.diffop2 import DiffOp, Poly2
from app.services.algebra.exactcoeff import ParamPoly
from app.services.catalog import modelbank
from app.services.envelope.envelope import (
    check_generators_preserve_flag,
    compose_sequence,
    decompose,
    enumerate_env_basis,
    recompose,
    solve_combination,
    summarize,
    verify_decomposition,
)


def test_basis_counts():
    assert enumerate_env_basis(3, max_degree=0).sequences == [()]
    assert enumerate_env_basis(3, max_degree=1).size == 13
    assert enumerate_env_basis(3, max_degree=2).size == 1 + 12 + 78
    with_raising = enumerate_env_basis(3, max_degree=1, exclude_raising=False)
    assert with_raising.size == 14


def test_basis_excludes_raising_generator():
    basis = enumerate_env_basis(3, max_degree=2)
    assert all(gid.family != GeneratorFamily.J4 for seq in basis.sequences for gid in seq)
    gl3 = enumerate_env_basis(1, max_degree=2)
    assert all(not gid.is_raising for seq in gl3.sequences for gid in seq)


def test_identity_product():
    assert compose_sequence(()) == DiffOp.identity()


def test_solve_combination_exact():
    u = Poly2.slot1()
    du = DiffOp.derivative(1, 0)
    euler = DiffOp.build([(u, (1, 0))])
    target = DiffOp.build([(Poly2.monomial(1, 0, ParamPoly.lam()), (1, 0)), (Fraction(1, 2), (1, 0))])
    coefficients, residual = solve_combination(target, [du, euler])
    assert residual.is_zero()
    assert coefficients == [ParamPoly.constant(Fraction(1, 2)), ParamPoly.lam()]


def test_solve_combination_infeasible():
    target = DiffOp.derivative(0, 1)
    coefficients, residual = solve_combination(target, [DiffOp.derivative(1, 0)])
    assert coefficients == [ParamPoly()]
    assert residual == target
    with pytest.raises(ValueError):
        solve_combination(target, [DiffOp.multiplication(ParamPoly.nu())])


def test_hamiltonian_in_g3(h_g2_w0):
    result = decompose(h_g2_w0, enumerate_env_basis(3, max_degree=2), target_name="h.g2.w0")
    assert result.success
    assert verify_decomposition(result)
    assert recompose(result) == h_g2_w0


def test_hamiltonian_in_g2(h_g2_w0):
    result = decompose(h_g2_w0, enumerate_env_basis(2, max_degree=2))
    assert result.success


def test_second_order_integral_in_g3(x_g2):
    result = decompose(x_g2, enumerate_env_basis(3, max_degree=2), target_name="x.g2")
    assert result.success
    assert verify_decomposition(result)
    summary = summarize(result)
    assert summary.success
    assert summary.residual_terms == 0
    assert summary.terms


def test_a2_operators_in_gl3():
    h = modelbank.make_h_a2()
    result = decompose(h, enumerate_env_basis(1, max_degree=2), target_name="h.a2")
    assert result.success
    k = modelbank.make_k_a2()
    assert decompose(k, enumerate_env_basis(1, max_degree=3), target_name="k.a2").success


def test_a2_second_integral_needs_raising_generator():
    x = modelbank.make_x_a2()
    result = decompose(x, enumerate_env_basis(1, max_degree=2))
    assert not result.success
    assert not verify_decomposition(result)
    assert recompose(result) + result.residual == x


def test_tampered_decomposition_fails(x_g2):
    result = decompose(x_g2, enumerate_env_basis(3, max_degree=2))
    seq, coeff = next(iter(result.coefficients.items()))
    tampered = result.model_copy(update={"coefficients": {**result.coefficients, seq: coeff + 1}})
    assert not verify_decomposition(tampered)


def test_empty_basis_leaves_target():
    basis = enumerate_env_basis(3, max_degree=1).model_copy(update={"sequences": []})
    target = DiffOp.derivative(1, 0)
    result = decompose(target, basis)
    assert result.residual == target
    assert not verify_decomposition(result)


def test_size_guard(monkeypatch):
    from app.core.config import settings

    monkeypatch.setattr(settings, "decomposition_size_guard", 10)
    basis = enumerate_env_basis(3, max_degree=2)
    with pytest.raises(SizeGuardError):
        decompose(DiffOp.derivative(1, 0), basis)
    assert decompose(DiffOp.derivative(1, 0), basis, force=True).success


def test_generators_keep_their_space():
    results = check_generators_preserve_flag(3, range(5))
    assert results
    assert all(results.values())
    assert "gen.J4.3.0@n=2" in results



@pytest.mark.slow
def test_sixth_order_integral_in_g3(k_g2):
    basis = enumerate_env_basis(3, max_degree=6)
    with pytest.raises(SizeGuardError):
        decompose(k_g2, basis, target_name="k.g2")
    result = decompose(k_g2, basis, target_name="k.g2", force=True)
    assert result.basis.size == basis.size
    assert recompose(result) + result.residual == k_g2
    assert verify_decomposition(result) == result.success
