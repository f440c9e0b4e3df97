from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from utils.errors import MixedRadicands, NonIntegerOffset, PoleError
from utils.exact import (
    ONE, ONE_PF, PRIMES, ZERO, PrimeFactored, SqrtRational, canonicalize_sqrt, factorial, factorial_product,
    gamma_ratio, pochhammer, sqrt_add_same_radicand, sqrt_mul,
)


def test_prime_table():
    assert PRIMES.primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert PRIMES.factor_int(360) == {2: 3, 3: 2, 5: 1}
    # beyond the smallest-prime-factor table
    assert PRIMES.factor_int(3 * 2 ** 23) == {2: 23, 3: 1}


def test_factorial_legendre():
    assert factorial(0).is_one()
    assert factorial(5).to_fraction() == 120
    assert factorial(30).factors[2] == 26
    assert factorial_product((4,), (2,)).to_fraction() == 12


def test_factorial_concurrent_growth():
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(factorial, [2000 + k for k in range(16)]))
    assert results[-1] == factorial(2015)
    assert results[1] / results[0] == PrimeFactored.from_int(2001)


def test_prime_factored_arithmetic():
    x = PrimeFactored.from_rational(Fraction(12, 35))
    assert dict(x.factors) == {2: 2, 3: 1, 5: -1, 7: -1}
    assert (x * x.inverse()).is_one()
    assert (x ** 2).to_fraction() == Fraction(144, 1225)
    root, surd = x.squarefree_split()
    assert root.to_fraction() == 2
    assert surd.to_fraction() == Fraction(3, 35)


def test_prime_factored_rejects_composite_keys():
    with pytest.raises(ValueError):
        PrimeFactored({4: 1})
    with pytest.raises(ValueError):
        PrimeFactored.from_rational(0)


def test_pochhammer_and_gamma_ratio():
    assert pochhammer(3, 4) == 360
    assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)
    assert pochhammer(-2, 3) == 0
    assert pochhammer(7, 0) == 1
    assert gamma_ratio(5, 2) == 24
    assert gamma_ratio(2, 5) == Fraction(1, 24)
    assert gamma_ratio(Fraction(7, 2), Fraction(1, 2)) == Fraction(15, 8)


def test_gamma_ratio_errors():
    with pytest.raises(NonIntegerOffset):
        gamma_ratio(1, Fraction(1, 2))
    with pytest.raises(PoleError):
        gamma_ratio(0, 3)


@pytest.mark.parametrize("x, sign, text", [
    (8, 1, "2*sqrt(2)"),
    (Fraction(1, 3), -1, "-sqrt(1/3)"),
    (Fraction(9, 4), 1, "3/2"),
    (Fraction(4, 45), -1, "-2/3*sqrt(1/5)"),
    (0, 1, "0"),
])
def test_render_exact(x, sign, text):
    assert str(SqrtRational.sqrt_of(x, sign)) == text


def test_worked_value_renders(worked_value):
    v = SqrtRational(Fraction(13, 124062), PrimeFactored.from_rational(Fraction(1615, 7683753)))
    assert str(v) == worked_value
    assert v.radicand == Fraction(169, 124062 ** 2) * Fraction(1615, 7683753)


def test_canonical_form_depends_on_value_only():
    # (1/5) sqrt(5) and sqrt(1/5) are the same number
    assert SqrtRational.sqrt_of(5) * Fraction(1, 5) == SqrtRational.sqrt_of(Fraction(1, 5))
    assert SqrtRational.sqrt_of(Fraction(1, 3)) * 3 == SqrtRational.sqrt_of(3)
    assert sqrt_mul(SqrtRational.sqrt_of(2), SqrtRational.sqrt_of(6)) == SqrtRational.sqrt_of(12)
    assert sqrt_mul(SqrtRational.sqrt_of(2), SqrtRational.sqrt_of(2)) == SqrtRational.from_rational(2)
    assert -ONE == SqrtRational.from_rational(-1)
    assert ONE * 0 == ZERO


def test_add_same_radicand():
    two = PrimeFactored.from_int(2)
    eight = PrimeFactored.from_int(8)
    assert str(sqrt_add_same_radicand([(1, two), (Fraction(1, 2), eight)])) == "2*sqrt(2)"
    assert sqrt_add_same_radicand([(0, PrimeFactored.from_int(3)), (1, two)]) == SqrtRational.sqrt_of(2)
    assert sqrt_add_same_radicand([(1, two), (-1, two)]) == ZERO
    assert sqrt_add_same_radicand([]) == ZERO


def test_add_same_radicand_across_reciprocal_surds():
    # sqrt(5) - 5 sqrt(1/5) == 0
    five = PrimeFactored.from_int(5)
    assert sqrt_add_same_radicand([(1, five), (-5, five.inverse())]) == ZERO
    assert sqrt_add_same_radicand([(1, five), (1, five.inverse())]) == SqrtRational.sqrt_of(Fraction(36, 5))


def test_add_mixed_radicands_raises():
    with pytest.raises(MixedRadicands):
        sqrt_add_same_radicand([(1, PrimeFactored.from_int(2)), (1, PrimeFactored.from_int(3))])


@pytest.mark.parametrize("value, digits, text", [
    (SqrtRational.sqrt_of(4), 5, "2.0000"),
    (SqrtRational.sqrt_of(2), 6, "1.41421"),
    (SqrtRational.sqrt_of(Fraction(1, 3), -1), 3, "-0.577"),
    (SqrtRational.from_rational(Fraction(5, 2)), 1, "2"),
    (SqrtRational.from_rational(Fraction(7, 2)), 1, "4"),
    (SqrtRational.from_rational(Fraction(996, 100)), 2, "10"),
    (SqrtRational.from_rational(12345), 2, "12000"),
    (ZERO, 4, "0"),
])
def test_to_decimal(value, digits, text):
    assert value.to_decimal(digits) == text


def test_to_decimal_rejects_zero_digits():
    with pytest.raises(ValueError):
        ONE.to_decimal(0)


# ---------------------------------------------------------------- properties


def _random_fraction(rng, low=-20, high=20, max_den=4):
    return Fraction(int(rng.integers(low, high)), int(rng.integers(1, max_den + 1)))


def _random_sqrt(rng):
    x = Fraction(int(rng.integers(0, 200)), int(rng.integers(1, 200)))
    return SqrtRational.sqrt_of(x, int(rng.choice([-1, 1])))


def test_factorial_matches_iterated_product():
    product = 1
    for n in range(201):
        product *= max(n, 1)
        assert factorial(n).to_fraction() == product, n


def test_pochhammer_splits(rng):
    for _ in range(100):
        a = _random_fraction(rng)
        k, m = (int(v) for v in rng.integers(0, 8, size=2))
        assert pochhammer(a, k) * pochhammer(a + k, m) == pochhammer(a, k + m), (a, k, m)


def test_gamma_ratio_chain_rule(rng):
    for _ in range(100):
        shift = Fraction(int(rng.integers(1, 4)), 4)
        a, b, c = (shift + int(v) for v in rng.integers(-6, 12, size=3))
        assert gamma_ratio(a, b) * gamma_ratio(b, c) == gamma_ratio(a, c), (a, b, c)
    for _ in range(50):
        a, b, c = (int(v) for v in rng.integers(1, 15, size=3))
        assert gamma_ratio(a, b) * gamma_ratio(b, c) == gamma_ratio(a, c), (a, b, c)


def test_sqrt_mul_commutes_and_associates(rng):
    for _ in range(100):
        x, y, z = _random_sqrt(rng), _random_sqrt(rng), _random_sqrt(rng)
        assert sqrt_mul(x, y) == sqrt_mul(y, x)
        assert sqrt_mul(sqrt_mul(x, y), z) == sqrt_mul(x, sqrt_mul(y, z))
        assert sqrt_mul(x, y).squared() == x.squared() * y.squared()


def test_canonicalize_sqrt_output(rng):
    for _ in range(200):
        coefficient = _random_fraction(rng, max_den=50)
        radicand = PrimeFactored.from_rational(Fraction(int(rng.integers(1, 5000)), int(rng.integers(1, 5000))))
        c, surd = canonicalize_sqrt(coefficient, radicand)
        if coefficient == 0:
            assert (c, surd) == (0, ONE_PF)
            continue
        assert all(e in (1, -1) for e in surd.factors.values())
        assert c * c * surd.to_fraction() == coefficient * coefficient * radicand.to_fraction()
        assert (c > 0) == (coefficient > 0)
        # the same value reached another way canonicalizes identically
        assert canonicalize_sqrt(c, surd) == (c, surd)
