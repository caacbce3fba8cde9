import json

import mpmath
import pytest

from helpers import close
from lstieltjes import (
    IDENTITIES,
    DomainError,
    HypothesisError,
    PeriodicFunction,
    PrecisionContext,
    check_nonvanishing,
    d_kl,
    make_fj,
    verify_identity,
)
from lstieltjes.verify import odd_primitive_character_checks

CTX = PrecisionContext(digits=40)


@pytest.mark.parametrize("identity_id", [i for i in IDENTITIES if i != "identity_lemma_k"])
def test_each_identity_passes_q5(identity_id):
    report = verify_identity(identity_id, 5, 3, CTX, seed=1)
    assert report.passed, report.as_dict()
    assert report.instances >= 1
    assert report.max_residual >= 0


@pytest.mark.parametrize("k", [0, 1, 2])
def test_identity_lemma_orders(k):
    report = verify_identity(f"identity_lemma_{k}", 4, 3, CTX, seed=2)
    assert report.k == k and report.identity_id == "identity_lemma_k" and report.passed


def test_odd_derivative_identity_records_deviation():
    report = verify_identity("lemma3", 5, 10, CTX, seed=0)
    assert report.passed
    assert float(report.notes["unnormalized_form_max_deviation"]) > 1e-3


def test_d_kl_composite_uses_exact_data():
    report = verify_identity("d_kl_expansion", 8, 2, CTX, seed=0)
    assert report.passed and report.notes["exact_c_cancellations"] == 2


def test_report_is_reproducible():
    a = verify_identity("lemma2", 7, 3, CTX, seed=11).to_json()
    b = verify_identity("lemma2", 7, 3, CTX, seed=11).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["seed"] == 11 and doc["verdict"] == "PASS"


def test_errors():
    with pytest.raises(DomainError):
        verify_identity("lemma9", 5, 1, CTX)
    with pytest.raises(HypothesisError):
        verify_identity("lemma3", 2, 1, CTX)
    with pytest.raises(DomainError):
        verify_identity("lemma2", 5, 0, CTX)


def test_identity_lemma_k0_mod3_value():
    f = PeriodicFunction.from_values([1, -1, 0])
    from lstieltjes import l_deriv_via_stieltjes, l_value

    with CTX.activated():
        expected = mpmath.pi / (3 * mpmath.sqrt(3))
        assert close(l_value(f, 1, 0, CTX), expected, 1e-38)
        assert close(l_deriv_via_stieltjes(f, 0, CTX), expected, 1e-38)


def test_d_kl_antisymmetry():
    f = make_fj(1, 5)
    res = d_kl(f, f, CTX)
    assert abs(res.value) < 1e-38 and abs(res.expansion_value) < 1e-38
    assert all(abs(c) < 1e-38 for c in res.coefficients)
    assert res.c_cancels


@pytest.mark.parametrize("p,pairs", [(5, [(1, 2)]), (7, [(1, 2), (1, 3), (2, 3)])])
def test_d_kl_generators(p, pairs):
    for j, k in pairs:
        res = d_kl(make_fj(j, p), make_fj(k, p), CTX)
        assert res.c_coefficient_exact is not None and res.c_cancels
        assert abs(res.value) > 1e-3
        assert res.residual < mpmath.mpf(10) ** (-CTX.digits + 2)


def test_nonvanishing():
    value, margin = check_nonvanishing(PeriodicFunction.from_values([1, -1, 0]), CTX)
    assert margin > 0
    for j in (1, 2):
        assert check_nonvanishing(make_fj(j, 5), CTX)[1] > 0
    zero = make_fj(1, 5) - make_fj(1, 5)
    assert check_nonvanishing(zero, CTX)[1] < 0


def test_odd_primitive_characters_q5():
    rows = odd_primitive_character_checks(5, CTX)
    assert len(rows) == 2
    for row in rows:
        assert row["residual"] < mpmath.mpf(10) ** -35
        assert row["margin"] > 0
        assert row["hat_is_dirichlet_type"]
