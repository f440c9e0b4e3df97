import itertools
from fractions import Fraction

import pytest
import sympy
from sympy.physics.wigner import wigner_3j, wigner_6j, wigner_9j

from models.oracle import (
    SixJ, ThreeJ, nine_j_sum, nine_j_zero_reduction, six_j, six_j_as_4f3, six_j_twice, three_j, three_j_as_3f2,
)
from utils.angular import NineJ, PERMUTATIONS_3, phase, triangle_ok
from utils.errors import InapplicableMethod, InvalidTriad
from utils.exact import ZERO, SqrtRational
from utils.hypergeom import eval_direct, is_balanced


def to_sympy(value):
    c = value.coefficient
    r = value.surd.to_fraction()
    return sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(sympy.Rational(r.numerator, r.denominator))


def assert_same_number(ours, theirs):
    assert abs(sympy.N(to_sympy(ours) - sympy.sympify(theirs), 50)) < sympy.Float('1e-40'), (ours, theirs)


def _valid_three_js(max_twice):
    span = range(max_twice + 1)
    for j1, j2, j3 in itertools.product(span, repeat=3):
        if not triangle_ok(j1, j2, j3):
            continue
        for m1 in range(-j1, j1 + 1, 2):
            for m2 in range(-j2, j2 + 1, 2):
                m3 = -m1 - m2
                if abs(m3) <= j3:
                    yield ThreeJ.of(*(Fraction(t, 2) for t in (j1, j2, j3, m1, m2, m3)))


def _valid_six_js(max_twice):
    for t in itertools.product(range(max_twice + 1), repeat=6):
        j1, j2, j3, j4, j5, j6 = t
        if all(triangle_ok(*triad) for triad in ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))):
            yield t


# ---------------------------------------------------------------- 3j


def test_three_j_by_hand():
    assert str(three_j(ThreeJ.of(1, 1, 0, 0, 0, 0))) == "-sqrt(1/3)"
    assert str(three_j(ThreeJ.of(1, 1, 2, 1, 1, -2))) == "sqrt(1/5)"
    half = Fraction(1, 2)
    assert three_j(ThreeJ.of(half, half, 0, half, -half, 0)) == SqrtRational.sqrt_of(Fraction(1, 2))


@pytest.mark.parametrize("args", [
    (1, 1, 1, 0, 0, 1),   # projections do not add up
    (1, 1, 3, 0, 0, 0),   # triangle violated
    (1, 1, 1, 2, -2, 0),  # |m| > j
    (1, 1, 1, 0, 0, 0),   # odd j1+j2+j3 with all m = 0
])
def test_three_j_zeros(args):
    assert three_j(ThreeJ.of(*args)) == ZERO


def test_three_j_orthogonality():
    # sum over m1, m2 of (j1 j2 j3; m1 m2 m3)^2 is 1/(2j3+1) for every allowed m3
    j1, j2 = 1, Fraction(3, 2)
    for j3 in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
        for m3 in (j3 - k for k in range(int(2 * j3) + 1)):
            total = Fraction(0)
            for m1 in (-1, 0, 1):
                m2 = -m1 - m3
                if abs(m2) <= j2:
                    total += three_j(ThreeJ.of(j1, j2, j3, m1, m2, m3)).squared()
            assert total == Fraction(1, int(2 * j3) + 1)


def test_three_j_orthogonality_random(rng):
    for _ in range(4):
        j1_2, j2_2 = (int(v) for v in rng.integers(0, 13, size=2))
        j1, j2 = Fraction(j1_2, 2), Fraction(j2_2, 2)
        m1s = [j1 - k for k in range(j1_2 + 1)]
        j3s = [Fraction(t, 2) for t in range(abs(j1_2 - j2_2), j1_2 + j2_2 + 1, 2)]
        # sum over m1, m2 at fixed (j3, m3)
        for j3 in j3s:
            for m3 in (j3 - k for k in range(int(2 * j3) + 1)):
                total = sum((three_j(ThreeJ.of(j1, j2, j3, m1, -m1 - m3, m3)).squared()
                             for m1 in m1s if abs(m1 + m3) <= j2), Fraction(0))
                assert total == Fraction(1, int(2 * j3) + 1), (j1, j2, j3, m3)
        # sum over j3, m3 at fixed (m1, m2)
        for m1 in m1s:
            for m2 in (j2 - k for k in range(j2_2 + 1)):
                total = sum(((2 * j3 + 1) * three_j(ThreeJ.of(j1, j2, j3, m1, m2, -m1 - m2)).squared()
                             for j3 in j3s if abs(m1 + m2) <= j3), Fraction(0))
                assert total == 1, (j1, j2, m1, m2)


def test_three_j_as_3f2_matches_racah_sum():
    for s in _valid_three_js(4):
        prefactor, series = three_j_as_3f2(s)
        assert series.p == 3 and series.q == 2
        assert prefactor * eval_direct(series).value == three_j(s), s


def test_three_j_as_3f2_on_zero_symbol():
    prefactor, series = three_j_as_3f2(ThreeJ.of(1, 1, 3, 0, 0, 0))
    assert prefactor == ZERO
    assert eval_direct(series).value == 1


def test_three_j_against_sympy():
    for s in _valid_three_js(4):
        if all(v.is_integer() for v in (s.j1, s.j2, s.j3)):
            assert_same_number(three_j(s), wigner_3j(*(int(v.value) for v in (s.j1, s.j2, s.j3, s.m1, s.m2, s.m3))))


# ---------------------------------------------------------------- 6j


def test_six_j_by_hand():
    assert six_j(SixJ.of(1, 1, 1, 1, 1, 1)) == SqrtRational.from_rational(Fraction(1, 6))
    assert six_j(SixJ.of(1, 1, 1, 0, 1, 1)) == SqrtRational.from_rational(Fraction(-1, 3))
    assert six_j(SixJ.of(1, 1, 3, 1, 1, 1)) == ZERO


def test_six_j_zero_entry():
    # {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
    for a, b, c in itertools.product(range(5), repeat=3):
        if triangle_ok(a, b, c):
            expected = SqrtRational.sqrt_of(Fraction(1, (b + 1) * (c + 1)), phase(a + b + c))
            assert six_j_twice((a, b, c, 0, c, b)) == expected


def test_six_j_symmetries():
    for t in _valid_six_js(3):
        value = six_j_twice(t)
        upper, lower = t[:3], t[3:]
        for perm in PERMUTATIONS_3:
            permuted = tuple(upper[k] for k in perm) + tuple(lower[k] for k in perm)
            assert six_j_twice(permuted) == value
        # exchange upper and lower entries in two columns
        assert six_j_twice((lower[0], lower[1], upper[2], upper[0], upper[1], lower[2])) == value


def test_six_j_as_balanced_4f3():
    for t in _valid_six_js(3):
        s = SixJ.of(*(Fraction(v, 2) for v in t))
        prefactor, series = six_j_as_4f3(s)
        assert series.p == 4 and series.q == 3
        assert is_balanced(series), s
        assert prefactor * eval_direct(series).value == six_j(s), s


def test_six_j_as_4f3_rejects_invalid():
    with pytest.raises(InvalidTriad):
        six_j_as_4f3(SixJ.of(1, 1, 3, 1, 1, 1))


def test_six_j_against_sympy():
    for t in _valid_six_js(4):
        if all(v % 2 == 0 for v in t):
            assert_same_number(six_j_twice(t), wigner_6j(*(v // 2 for v in t)))


# ---------------------------------------------------------------- 9j


def test_nine_j_worked_example(worked_symbol, worked_value):
    assert str(nine_j_sum(worked_symbol)) == worked_value


def test_nine_j_invalid_is_zero():
    assert nine_j_sum(NineJ.of(1, 1, 3, 1, 1, 1, 1, 1, 1)) == ZERO
    assert nine_j_sum(NineJ.of(0, 0, 0, 0, 0, 0, 0, 0, 0)) == SqrtRational.from_rational(1)


def _vanishing_symbol(twice_j):
    j = Fraction(twice_j, 2)
    return NineJ.of(j, j, 2 * j - 1, j, j, 2 * j - 1, 2 * j - 1, 2 * j - 3, 4 * j - 4)


def test_vanishing_family_first_members():
    assert _vanishing_symbol(3) == NineJ.of(Fraction(3, 2), Fraction(3, 2), 2, Fraction(3, 2), Fraction(3, 2), 2,
                                            2, 0, 2)
    for twice_j in (3, 5):
        s = _vanishing_symbol(twice_j)
        assert s.is_valid()
        assert nine_j_sum(s) == ZERO, s


@pytest.mark.slow
def test_vanishing_family_up_to_ten():
    # identical first two rows and an odd entry sum force the zero for integer j as well
    for twice_j in range(3, 21):
        assert nine_j_sum(_vanishing_symbol(twice_j)) == ZERO, twice_j


def test_nine_j_against_sympy():
    symbols = [
        NineJ.of(1, 1, 1, 1, 1, 1, 1, 1, 1),
        NineJ.of(1, 1, 2, 1, 1, 0, 2, 2, 2),
        NineJ.of(2, 1, 1, 1, 2, 1, 1, 1, 2),
        NineJ.of(1, 2, 3, 2, 1, 1, 1, 1, 2),
    ]
    for s in symbols:
        assert s.is_valid()
        assert_same_number(nine_j_sum(s), wigner_9j(*(int(v.value) for row in s.rows for v in row), prec=None))


def test_nine_j_transpose_and_permutations(ninej_sampler):
    for s in ninej_sampler(12, max_twice=4):
        value = nine_j_sum(s)
        sign = phase(s.total_twice())
        assert nine_j_sum(s.transpose()) == value
        assert nine_j_sum(s.permuted((1, 2, 0), (2, 0, 1))) == value
        assert nine_j_sum(s.permuted((1, 0, 2), (0, 1, 2))) == value * sign
        assert nine_j_sum(s.permuted((0, 1, 2), (0, 2, 1))) == value * sign


def _zero_corner_symbols(max_twice):
    """Valid {a b c; d e c; g g 0} with doubled entries up to max_twice."""
    span = range(max_twice + 1)
    for a, b, c, d, e, g in itertools.product(span, repeat=6):
        s = NineJ.from_twice(((a, b, c), (d, e, c), (g, g, 0)))
        if s.is_valid():
            yield s


def test_zero_reduction_matches_sum():
    symbols = list(_zero_corner_symbols(2))
    assert symbols
    for s in symbols:
        assert nine_j_zero_reduction(s) == nine_j_sum(s), s


def test_zero_reduction_on_scrambled_symbols():
    symbols = list(_zero_corner_symbols(3))[::7]
    for s in symbols:
        for transposed, rows, cols in itertools.product((False, True), PERMUTATIONS_3, PERMUTATIONS_3):
            image = (s.transpose() if transposed else s).permuted(rows, cols)
            assert nine_j_zero_reduction(image) == nine_j_sum(image), image


def test_zero_reduction_needs_a_zero():
    with pytest.raises(InapplicableMethod):
        nine_j_zero_reduction(NineJ.of(1, 1, 1, 1, 1, 1, 1, 1, 1))
    # a zero entry with unequal partners is an invalid symbol
    assert nine_j_zero_reduction(NineJ.of(1, 1, 1, 1, 1, 2, 1, 2, 0)) == ZERO
