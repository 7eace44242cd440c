import threading
import time
from fractions import Fraction

import pytest

from app.core.errors import UsageError
from app.models.params import ShiftSample
from app.services.algebra.diffop2 import op_commutator, op_substitute
from app.services.algebra.exactcoeff import ParamPoly
from app.services.catalog import kblocks, modelbank
from app.services.verification import verifysuite


def _by_name(reports):
    return {r.name: r for r in reports}


def test_g2_integrability():
    reports = _by_name(verifysuite.check_g2_integrability())
    for name in ("g2[H,I1]", "g2[H,I2]", "g2[H,I12]"):
        assert reports[name].ok
        assert reports[name].residual.is_zero()
        assert reports[name].omega_zero
    assert reports["g2 I12=[I2,I1]"].lhs_order == 7
    assert reports["g2 I12=[I2,I1]"].passed


def test_commutator_integral_order(g2_ops):
    assert g2_ops.I12.order == 7
    assert g2_ops.I12.degree_in("w") == 0


def test_g2_quartic_first_relation():
    (report,) = verifysuite.check_g2_quartic(include_order12=False)
    assert report.ok
    assert report.residual.is_zero()
    assert report.lhs_order == 8
    assert report.passed
    assert report.term_count_peak > 0


@pytest.mark.slow
def test_g2_quartic_order_twelve():
    reports = _by_name(verifysuite.check_g2_quartic())
    report = reports["g2[I2,I12]"]
    assert report.ok
    assert report.residual.is_zero()
    assert report.lhs_order == 12


def test_wrong_structure_constant_fails(g2_ops):
    tampered = [(c * 2 if factors == ("I12",) else c, factors) for c, factors in verifysuite.G2_QUARTIC_I1]
    report = verifysuite._relation("tampered", g2_ops, "I1", tampered, expected_order=8)
    assert not report.ok
    assert not report.passed
    assert report.residual.order >= 0


def test_lambda_zero_head_block(k_g2):
    assert op_substitute(k_g2, lam=0) == kblocks.block(0)
    (report,) = verifysuite.check_g2_quartic(lam=0, include_order12=False)
    assert report.name == "g2[I1,I12]@λ=0"
    assert report.ok
    assert report.residual.is_zero()


@pytest.mark.slow
def test_lambda_zero_reduction():
    assert all(r.passed for r in verifysuite.check_lambda_zero_reduction())


def test_a2_integrability():
    assert all(r.passed for r in verifysuite.check_a2_integrability())


def test_a2_cubic_algebra():
    reports = _by_name(verifysuite.check_a2_cubic())
    assert reports["a2[H,I12]"].ok
    assert reports["a2 I12=[I2,I1]"].lhs_order == 4
    assert reports["a2[I1,I12]"].ok
    assert reports["a2[I1,I12]"].lhs_order == 5
    assert reports["a2[I2,I12]"].ok
    assert reports["a2[I2,I12]"].lhs_order == 6
    for name in ("a2[H,I12]", "a2[I1,I12]", "a2[I2,I12]"):
        assert reports[name].residual.is_zero()
    span = reports["a2 I12 not in span{H^a I1^b}"]
    assert span.ok and not span.expect_zero
    assert not span.residual.is_zero()


@pytest.mark.parametrize("sample", [
    ShiftSample(),
    ShiftSample(A=1),
    ShiftSample(A=1, B2=1, C3=1, D1=2),
])
def test_shift_invariance_examples(sample):
    (report,) = verifysuite.check_shift_invariance([sample])
    assert report.ok
    assert report.lhs_order == 7


def test_shift_invariance_random_samples():
    samples = verifysuite.random_shift_samples(5, seed=7)
    assert len(samples) == 5
    assert all(r.passed for r in verifysuite.check_shift_invariance(samples))


def test_shifted_orders(g2_ops):
    sample = verifysuite.random_shift_samples(1, seed=11)[0]
    assert modelbank.shifted_x_g2(sample.A, h=g2_ops.H, x=g2_ops.I1).order == 2
    assert modelbank.shifted_k_g2(sample, h=g2_ops.H, x=g2_ops.I1, k=g2_ops.I2).order == 6


def test_a2_shift_invariance():
    assert all(r.passed for r in verifysuite.check_a2_shift_invariance())


def test_spot_values():
    reports = verifysuite.check_spot_values([(Fraction(1, 3), Fraction(1))])
    assert reports
    assert all(r.passed for r in reports)
    assert all("@λ=1/3,ν=1" in r.name or "@ν=1" in r.name for r in reports)
    assert "g2[I2,I12]@λ=1/3,ν=1" in _by_name(reports)
    assert all(r.residual.is_zero() for r in reports)


def test_omega_exploratory():
    (report,) = verifysuite.check_g2_omega_exploratory()
    assert report.ok
    assert not report.omega_zero


def test_coupling_localization():
    assert verifysuite.check_coupling_localization() == {"g2[I1,I12]": True, "g2[I2,I12]": False}


def test_runner_keeps_request_order():
    reports = verifysuite.run_checks(["a2-integrability", "g2-integrability"])
    names = [r.name for r in reports]
    assert names[:3] == ["a2[H,I1]", "a2[H,I2]", "a2[H,I12]"]
    assert names[3] == "g2[H,I1]"
    table = verifysuite.summary_table(reports)
    assert "a2[H,I12]" in table and "residual terms" in table


def test_group_names():
    assert verifysuite.expand_names(["all"]) == list(verifysuite.ACCEPTANCE)
    assert verifysuite.expand_names(["a2-cubic", "a2-cubic"]) == ["a2-cubic"]
    with pytest.raises(UsageError):
        verifysuite.expand_names(["g3-quartic"])


def test_report_summary_is_reproducible():
    (report,) = verifysuite.check_a2_integrability()[:1]
    summary = report.summary()
    assert "elapsed" not in summary
    assert summary["residual_terms"] == 0


def test_commutator_integral_sign(g2_ops, a2_ops):
    assert g2_ops.I12 == op_commutator(g2_ops.I2, g2_ops.I1)
    assert a2_ops.I12 == -op_commutator(a2_ops.I1, a2_ops.I2)


def test_a2_first_relation_coefficients():
    assert (ParamPoly.constant(-36), ("I1", "I2")) in verifysuite.A2_CUBIC_I1
    ops = verifysuite.a2_operators(Fraction(1, 3))
    report = verifysuite._relation("a2[I1,I12]", ops, "I1", verifysuite.A2_CUBIC_I1, expected_order=5)
    assert report.residual.is_zero()


def test_shift_reports_require_preserved_orders(monkeypatch, g2_ops):
    (report,) = verifysuite.check_shift_invariance([ShiftSample(A=1)])
    assert report.side_conditions and report.passed
    assert "orders 2/6" in report.note

    monkeypatch.setattr(modelbank, "shifted_k_g2", lambda sample, h, x, k: h)
    (broken,) = verifysuite.check_shift_invariance([ShiftSample(A=1)])
    assert not broken.side_conditions
    assert not broken.passed
    assert "NO" in verifysuite.summary_table([broken])


def test_shared_set_builds_each_operator_once(monkeypatch):
    calls = []

    def slow_cubic():
        calls.append(threading.get_ident())
        time.sleep(0.05)
        return modelbank.make_x_a2()

    monkeypatch.setattr(modelbank, "make_k_a2", slow_cubic)
    ops = verifysuite.A2Operators(nu=Fraction(7, 13))
    seen = []
    threads = [threading.Thread(target=lambda: seen.append(ops.I12)) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1
    assert len(seen) == 6
    assert all(op is seen[0] for op in seen)


def test_operator_sets_are_shared_per_parameters():
    assert verifysuite.a2_operators(Fraction(1, 2)) is verifysuite.a2_operators(Fraction(1, 2))
    assert verifysuite.g2_operators(Fraction(1, 3), Fraction(1)) is verifysuite.g2_operators(Fraction(1, 3), Fraction(1))
