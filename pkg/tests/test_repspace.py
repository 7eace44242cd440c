import json
from collections import Counter
from fractions import Fraction

import pytest

from app.core.errors import DegenerateChainError, NotInvariantError, NotTriangularError
from app.models.params import Branch, ModelParams
from app.models.representation import OpMatrix
from app.services.algebra.diffop2 import op_apply, op_substitute
from app.services.catalog import modelbank
from app.services.representation import repspace

SPOT_PAIRS = [(Fraction(0), Fraction(0)), (Fraction(1, 3), Fraction(1)), (Fraction(2), Fraction(5, 2))]


def test_basis_size():
    fb = repspace.basis(3, 8)
    assert fb.size == sum(repspace.degeneracy(m) for m in range(9))
    assert fb.monomials[:5] == [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]
    with pytest.raises(ValueError):
        repspace.basis(0, 2)


@pytest.mark.parametrize("lam,nu", SPOT_PAIRS)
def test_hamiltonian_spectrum(h_g2, lam, nu):
    m = repspace.matrix(h_g2, repspace.basis(3, 8), lam, nu, 1)
    repspace.check_triangular(m)
    values = repspace.spectrum(m)
    assert values == [-4 * (p + 3 * q) for p, q in m.basis.monomials]
    expected = Counter({-4 * k: k // 3 + 1 for k in range(9)})
    assert Counter(values) == expected


def test_matrix_independent_of_worker_count(h_g2):
    fb = repspace.basis(3, 6)
    serial = repspace.matrix(h_g2, fb, Fraction(1, 3), 1, 1, workers=1)
    parallel = repspace.matrix(h_g2, fb, Fraction(1, 3), 1, 1, workers=4)
    assert serial.entries == parallel.entries


@pytest.mark.parametrize("branch", [Branch.BRANCH1, Branch.BRANCH2])
def test_energies_start_at_ground_energy(h_g2, branch):
    mp = ModelParams(nu_tilde=2, mu_tilde=Fraction(3, 2), omega=1, branch=branch)
    lam, nu = modelbank.param_map(mp)
    m = repspace.matrix(h_g2, repspace.basis(3, 4), lam, nu, mp.omega)
    e0 = modelbank.ground_energy(mp)
    assert e0 == Fraction(3, 2) * (1 + 4 + 3)
    assert repspace.energies(m, mp) == [2 * (p + 3 * q) + e0 for p, q in m.basis.monomials]


def test_eigenpolynomials(h_g2):
    lam, nu = Fraction(1, 3), Fraction(1)
    m = repspace.matrix(h_g2, repspace.basis(3, 6), lam, nu, 1)
    numeric = op_substitute(h_g2, lam, nu, 1)
    for value, poly in zip(repspace.spectrum(m), repspace.eigenpolynomials(m)):
        assert not poly.is_zero()
        assert op_apply(numeric, poly) == poly * value


def test_degenerate_chain_without_oscillator(h_g2):
    m = repspace.matrix(h_g2, repspace.basis(3, 1), 0, 0, 0)
    assert m.diagonal == [0, 0]
    with pytest.raises(DegenerateChainError) as info:
        repspace.eigenpolynomials(m)
    assert info.value.index == 1


def test_not_invariant(x_g2):
    with pytest.raises(NotInvariantError) as info:
        repspace.matrix(x_g2, repspace.basis(2, 2), 0, 0, 0)
    assert info.value.witness == (0, 1)
    assert info.value.image == (3, 0)


def test_not_triangular():
    fb = repspace.basis(3, 1)
    m = OpMatrix(basis=fb, entries=[[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]])
    with pytest.raises(NotTriangularError) as info:
        repspace.spectrum(m)
    assert info.value.position == (1, 0)


def test_integrals_commute_as_matrices(h_g2, x_g2):
    fb = repspace.basis(3, 6)
    mh = repspace.matrix(h_g2, fb, Fraction(2), Fraction(5, 2), 1)
    mx = repspace.matrix(x_g2, fb, Fraction(2), Fraction(5, 2), 1)
    assert repspace.matrix_commutes(mh, mx)
    with pytest.raises(ValueError):
        repspace.matrix_commutes(mh, repspace.matrix(h_g2, repspace.basis(3, 3), 0, 0, 1))


def test_degeneracy():
    assert [repspace.degeneracy(m) for m in range(7)] == [1, 1, 1, 2, 2, 2, 3]
    with pytest.raises(ValueError):
        repspace.degeneracy(5, 4)


def test_csv_and_json_export(h_g2):
    m = repspace.matrix(h_g2, repspace.basis(3, 1), 0, 0, 1)
    assert repspace.matrix_to_csv(m) == "monomial,[0 0],[1 0]\n[0 0],0,1\n[1 0],0,-4\n"
    payload = json.loads(repspace.matrix_to_json(m))
    assert payload["entries"] == [["0/1", "1/1"], ["0/1", "-4/1"]]
    assert payload["basis"]["monomials"] == [[0, 0], [1, 0]]
