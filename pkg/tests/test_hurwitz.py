import random
from fractions import Fraction

import mpmath
import pytest

import oracle_values as ov
from helpers import close, mp
from lstieltjes import (
    DomainError,
    PoleError,
    PrecisionContext,
    bernoulli,
    digamma,
    euler_gamma,
    hurwitz_zeta,
    hurwitz_zeta_deriv,
    log_gamma,
    riemann_zeta,
    stieltjes,
)
from lstieltjes.hurwitz import hurwitz_zeta_derivs

CTX = PrecisionContext(digits=50)
TOL = mpmath.mpf(10) ** -50


def q_(text):
    return Fraction(text)


@pytest.mark.parametrize("s,x", list(ov.HURWITZ))
def test_hurwitz_against_oracle(s, x):
    with CTX.activated():
        assert close(hurwitz_zeta(mpmath.mpf(s), q_(x), CTX), mp(ov.HURWITZ[(s, x)]), TOL)


def test_hurwitz_complex_against_oracle():
    (sr, si), x, (vr, vi) = ov.HURWITZ_COMPLEX
    with CTX.activated():
        got = hurwitz_zeta(mpmath.mpc(sr, si), q_(x), CTX)
        assert close(got, mpmath.mpc(mp(vr), mp(vi)), TOL)


@pytest.mark.parametrize("key", list(ov.HURWITZ_DERIV))
def test_derivative_against_oracle(key):
    s, x, k = key
    with CTX.activated():
        got = hurwitz_zeta_deriv(mpmath.mpf(s), q_(x), k, CTX)
        assert close(got, mp(ov.HURWITZ_DERIV[key]), TOL * 10)


def test_zeta_2():
    with CTX.activated():
        assert close(hurwitz_zeta(2, 1, CTX), mpmath.pi**2 / 6, TOL)
        assert close(riemann_zeta(-1, CTX), mpmath.mpf(-1) / 12, TOL)


def test_zeta_prime_2():
    # zeta'(2) = (pi^2/6)(gamma + log 2pi - 12 log A), A the Glaisher constant
    with CTX.activated():
        expected = mpmath.pi**2 / 6 * (mpmath.euler + mpmath.log(2 * mpmath.pi) - 12 * mpmath.log(mpmath.glaisher))
        assert close(hurwitz_zeta_deriv(2, 1, 1, CTX), expected, TOL)


def test_k0_matches_value():
    with CTX.activated():
        assert hurwitz_zeta_deriv(2, Fraction(1, 3), 0, CTX) == hurwitz_zeta(2, Fraction(1, 3), CTX)


def test_zeta_at_zero_is_linear():
    with CTX.activated():
        z0 = riemann_zeta(0, CTX)
        assert close(z0, -0.5, TOL)
        for n in range(1, 10):
            x = Fraction(n, 10)
            value = hurwitz_zeta(0, x, CTX)
            assert close(value, 1 + z0 - mpmath.mpf(n) / 10, TOL)
            assert close(value, mpmath.mpf(1) / 2 - mpmath.mpf(n) / 10, TOL)


def test_zeta_prime_zero_half():
    with CTX.activated():
        assert close(hurwitz_zeta_deriv(0, Fraction(1, 2), 1, CTX), -mpmath.log(2) / 2, TOL)


def test_zeta_prime_zero_minus_log_gamma_is_constant():
    rng = random.Random(7)
    with CTX.activated():
        diffs = []
        for _ in range(10):
            den = rng.randint(2, 40)
            x = Fraction(rng.randint(1, den), den)
            diffs.append(hurwitz_zeta_deriv(0, x, 1, CTX) - log_gamma(x, CTX))
        for d in diffs[1:]:
            assert close(d, diffs[0], TOL)


@pytest.mark.parametrize("q", [2, 3, 5, 6])
def test_multiplication_formula(q):
    rng = random.Random(q)
    with CTX.activated():
        for _ in range(3):
            s = mpmath.mpc(rng.uniform(-2, 4), rng.uniform(-3, 3))
            total = mpmath.fsum(hurwitz_zeta(s, Fraction(a, q), CTX) for a in range(1, q + 1))
            assert close(total, mpmath.power(q, s) * riemann_zeta(s, CTX), TOL * 100)


def test_derivative_vs_central_difference():
    with CTX.activated():
        h = mpmath.mpf(10) ** (-CTX.digits // 3)
        for s, x in [(mpmath.mpf("2.5"), Fraction(2, 7)), (mpmath.mpc("0.3", "1.5"), Fraction(1, 2))]:
            exact = hurwitz_zeta_deriv(s, x, 1, CTX)
            diff = (hurwitz_zeta(s + h, x, CTX) - hurwitz_zeta(s - h, x, CTX)) / (2 * h)
            assert abs(exact - diff) <= abs(exact) * 10 * h


def test_precision_self_consistency():
    high = CTX.with_digits(CTX.digits + 20)
    for s, x, k in [(2, Fraction(1, 3), 0), (mpmath.mpf("0.5"), Fraction(7, 10), 2), (-1, Fraction(1, 4), 1)]:
        lo = hurwitz_zeta_deriv(s, x, k, CTX)
        hi = hurwitz_zeta_deriv(s, x, k, high)
        assert close(lo, hi, TOL)


def test_regularized_at_one_is_minus_digamma():
    with CTX.activated():
        value = hurwitz_zeta_derivs(1, Fraction(1, 3), 0, CTX, regularized=True)[0]
        assert close(value, -mp(ov.DIGAMMA_ONE_THIRD), TOL)
        assert close(digamma(Fraction(1, 3), CTX), mp(ov.DIGAMMA_ONE_THIRD), TOL)


def test_euler_gamma_routes():
    with CTX.activated():
        g = euler_gamma(CTX)
        assert close(g, mp(ov.EULER_GAMMA), TOL)
        assert close(g, stieltjes(0, 1, 1, CTX), TOL)
        # psi(1) = Gamma'(1)/Gamma(1) = -gamma
        assert close(digamma(1, CTX), -g, TOL)


def test_log_gamma_values():
    with CTX.activated():
        assert log_gamma(1, CTX) == 0
        assert close(log_gamma(Fraction(1, 2), CTX), mpmath.log(mpmath.pi) / 2, TOL)
        for x, v in ov.LOG_GAMMA.items():
            assert close(log_gamma(Fraction(x), CTX), mp(v), TOL)
        reflect = log_gamma(Fraction(1, 4), CTX) + log_gamma(Fraction(3, 4), CTX)
        assert close(reflect, mpmath.log(mpmath.pi) + mpmath.log(2) / 2, TOL)


def test_errors():
    with pytest.raises(PoleError):
        hurwitz_zeta(1, Fraction(1, 2), CTX)
    with pytest.raises(DomainError):
        hurwitz_zeta(2, Fraction(3, 2), CTX)
    with pytest.raises(DomainError):
        hurwitz_zeta(2, 0, CTX)
    with pytest.raises(DomainError):
        hurwitz_zeta_deriv(2, Fraction(1, 2), 9, CTX)
    with pytest.raises(DomainError):
        log_gamma(0, CTX)
    with pytest.raises(DomainError):
        log_gamma(Fraction(-1, 2), CTX)


def test_bernoulli_recurrence():
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert all(bernoulli(n) == 0 for n in range(3, 40, 2))
    from math import comb

    for m in range(1, 30):
        assert sum(comb(m + 1, j) * bernoulli(j) for j in range(m + 1)) == 0
