from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

import oracle_values as ov
from helpers import close, mp
from lstieltjes import (
    HypothesisError,
    PeriodicFunction,
    PoleError,
    PrecisionContext,
    functional_equation_rhs,
    l1_odd_closed,
    l_deriv_via_stieltjes,
    l_eval,
    l_prime_0,
    l_prime_1_odd,
    l_value,
    log_gamma,
    make_fj,
    stieltjes,
)
from lstieltjes.lseries import l_prime_1_odd_unnormalized
from lstieltjes.precision import as_mpf

CTX = PrecisionContext(digits=40)
TOL = mpmath.mpf(10) ** -38
CHI3 = PeriodicFunction.from_values([1, -1, 0])
EVEN5 = PeriodicFunction.from_values([1, -1, -1, 1, 0])


def test_riemann_zeta_special_case():
    one = PeriodicFunction.from_values([1])
    with CTX.activated():
        assert close(l_value(one, 2, ctx=CTX), mpmath.pi**2 / 6, TOL)


def test_l1_mod3():
    with CTX.activated():
        expected = mpmath.pi / (3 * mpmath.sqrt(3))
        assert close(expected, mp(ov.L1_MOD3), TOL)
        assert close(l_value(CHI3, 1, ctx=CTX), expected, TOL)
        assert close(l1_odd_closed(CHI3, CTX), expected, TOL)


def test_catalan():
    chi4 = PeriodicFunction.from_values([1, 0, -1, 0])
    assert close(l_value(chi4, 2, ctx=CTX), mp(ov.CATALAN), TOL)


def test_l_prime_1_mod3_three_routes():
    with CTX.activated():
        series = l_value(CHI3, 1, 1, CTX)
        assert close(series, mp(ov.LPRIME1_MOD3), TOL)
        assert close(l_prime_1_odd(CHI3, CTX), series, TOL)
        via = -(stieltjes(1, 1, 3, CTX) - stieltjes(1, 2, 3, CTX))
        assert close(via, series, TOL)


def test_printed_constant_form_is_off():
    # the form with C = (1 + 1/q) log q - log 2pi - gamma and no factor -q on
    # the log Gamma pairing does not reproduce L'(1, f)
    with CTX.activated():
        wrong = l_prime_1_odd_unnormalized(CHI3, CTX)
        assert abs(wrong - l_value(CHI3, 1, 1, CTX)) > 0.1


def test_l_prime_1_mod5_f2():
    f2 = make_fj(2, 5)
    with CTX.activated():
        expected = -(stieltjes(1, 2, 5, CTX) - stieltjes(1, 3, 5, CTX))
        assert close(l_prime_1_odd(f2, CTX), expected, TOL)
        assert close(l_value(f2, 1, 1, CTX), expected, TOL)


def test_l1_mod5_difference_of_generators():
    with CTX.activated():
        f = make_fj(1, 5, CTX) - make_fj(2, 5, CTX)
        assert close(l1_odd_closed(f, CTX), l_value(f, 1, 0, CTX), TOL)


def test_lemma2_example():
    with CTX.activated():
        expected = -mpmath.log(3) / 3 + log_gamma(Fraction(1, 3), CTX) - log_gamma(Fraction(2, 3), CTX)
        assert close(l_prime_0(CHI3, CTX), expected, TOL)
        assert close(l_value(CHI3, 0, 1, CTX), expected, TOL)


def test_zero_function_closed_forms():
    zero = PeriodicFunction.zero(5, CTX)
    assert l1_odd_closed(zero, CTX) == 0
    assert l_prime_0(zero, CTX) == 0
    assert l_prime_1_odd(zero, CTX) == 0


def test_functional_equation_examples():
    with CTX.activated():
        rhs = functional_equation_rhs(EVEN5, 2, "even", CTX)
        assert close(rhs, l_value(EVEN5, -1, ctx=CTX), TOL)
        odd_rhs = functional_equation_rhs(CHI3, 2, "odd", CTX)
        assert abs(odd_rhs) < TOL
        assert abs(l_value(CHI3, -1, ctx=CTX)) < TOL
        half = mpmath.mpf(3) / 2
        assert close(functional_equation_rhs(CHI3, half, "odd", CTX), l_value(CHI3, 1 - half, ctx=CTX), TOL)


def test_functional_equation_errors():
    with pytest.raises(HypothesisError):
        functional_equation_rhs(CHI3, 2, "even", CTX)
    with pytest.raises(PoleError):
        functional_equation_rhs(CHI3, 0, "odd", CTX)
    with pytest.raises(PoleError):
        functional_equation_rhs(EVEN5, -2, "even", CTX)


def test_hypothesis_checks():
    with pytest.raises(HypothesisError):
        l1_odd_closed(EVEN5, CTX)
    with pytest.raises(HypothesisError):
        l_prime_0(PeriodicFunction.from_values([1, 1, 1]), CTX)
    with pytest.raises(HypothesisError):
        l_prime_1_odd(EVEN5, CTX)


def test_pole():
    f = PeriodicFunction.from_values([2, 1, 0, 1])
    with pytest.raises(PoleError) as info:
        l_eval(f, 1, 0, CTX)
    assert close(info.value.residue, 1, TOL)
    ev = l_eval(f, 1, 0, CTX, allow_pole=True)
    assert ev.pole_flag and ev.value is None and close(ev.residue, 1, TOL)


def test_pole_contract():
    f = PeriodicFunction.from_values([3, -1, 2, 5, 1])
    with CTX.activated():
        residue = f.total() / 5
        previous = None
        for j in (4, 8, 16, 32):
            s = 1 + mpmath.mpf(10) ** -j
            err = abs((s - 1) * l_value(f, s, ctx=CTX) - residue)
            assert err < mpmath.mpf(10) ** (-j + 1)
            if previous is not None:
                assert err < previous
            previous = err


@pytest.mark.parametrize("k", [0, 1, 2])
def test_identity_lemma(k):
    f = PeriodicFunction.from_values([Fraction(1, 2), -3, Fraction(5, 7), 1, Fraction(11, 14)])
    with CTX.activated():
        assert close(l_value(f, 1, k, CTX), l_deriv_via_stieltjes(f, k, CTX), TOL)


def _odd(q, half):
    table = [Fraction(0)] * q
    for i, v in enumerate(half, start=1):
        table[i - 1], table[q - i - 1] = v, -v
    return PeriodicFunction.from_values(table)


rationals = st.fractions(min_value=-10, max_value=10, max_denominator=100)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([3, 5, 7]).flatmap(lambda q: st.lists(rationals, min_size=(q - 1) // 2, max_size=(q - 1) // 2).map(lambda h: (q, h))))
def test_route_equality_odd(data):
    q, half = data
    f = _odd(q, half)
    with CTX.activated():
        tol = mpmath.mpf(10) ** (-CTX.digits + 2) * max(1, max(abs(v) for v in f.values))
        assert close(l1_odd_closed(f, CTX), l_value(f, 1, 0, CTX), tol)
        assert close(l_prime_1_odd(f, CTX), l_value(f, 1, 1, CTX), tol)
        assert close(l_prime_0(f, CTX), l_value(f, 0, 1, CTX), tol)


@settings(max_examples=10, deadline=None)
@given(
    st.integers(2, 7).flatmap(
        lambda q: st.tuples(
            st.lists(rationals, min_size=q, max_size=q),
            st.lists(rationals, min_size=q, max_size=q),
            rationals,
            rationals,
            st.integers(0, 2),
        )
    )
)
def test_linearity(data):
    u, v, alpha, beta, k = data
    s = mpmath.mpf("2.25")
    with CTX.activated():
        fu, fv = PeriodicFunction.from_values(u, CTX), PeriodicFunction.from_values(v, CTX)
        combo = fu.scale(alpha) + fv.scale(beta)
        lhs = l_value(combo, s, k, CTX)
        a, b = as_mpf(alpha), as_mpf(beta)
        rhs = a * l_value(fu, s, k, CTX) + b * l_value(fv, s, k, CTX)
        assert close(lhs, rhs, TOL * 1000)


def test_complex_values_and_point():
    f = PeriodicFunction.from_values([(1, 1), (-1, 0), (0, -1), (0, 0)])
    with CTX.activated():
        s = mpmath.mpc("1.5", "2")
        # mpmath's Hurwitz zeta serves as the outside oracle here
        oracle = mpmath.power(4, -s) * mpmath.fsum(f(a) * mpmath.zeta(s, mpmath.mpf(a) / 4) for a in range(1, 5))
        assert close(l_value(f, s, ctx=CTX), oracle, TOL)
