"""
Reference evaluations of 3j, 6j and general 9j symbols by the classical single-sum
formulas. Every fast path in models.stretched is checked against these.

All internal bookkeeping uses doubled momenta (ints); half() and phase() assert that
every factorial argument and every sign exponent is an integer.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from utils.angular import (
    HalfInt, delta_squared, half, ninej_validate, permutation_parity, phase, triangle_ok,
)
from utils.errors import InapplicableMethod, InvalidTriad
from utils.exact import ONE_PF, ZERO, SqrtRational, factorial_product, sqrt_add_same_radicand, sqrt_mul
from utils.hypergeom import PFQSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThreeJ:
    """(j1 j2 j3; m1 m2 m3)"""
    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    m1: HalfInt
    m2: HalfInt
    m3: HalfInt

    @classmethod
    def of(cls, j1, j2, j3, m1, m2, m3):
        return cls(*(HalfInt.of(v) for v in (j1, j2, j3, m1, m2, m3)))

    @property
    def twice(self):
        return tuple(v.twice for v in (self.j1, self.j2, self.j3, self.m1, self.m2, self.m3))

    def __str__(self):
        return f"({self.j1} {self.j2} {self.j3}; {self.m1} {self.m2} {self.m3})"


@dataclass(frozen=True)
class SixJ:
    """{j1 j2 j3; j4 j5 j6}"""
    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    j4: HalfInt
    j5: HalfInt
    j6: HalfInt

    @classmethod
    def of(cls, j1, j2, j3, j4, j5, j6):
        return cls(*(HalfInt.of(v) for v in (j1, j2, j3, j4, j5, j6)))

    @property
    def twice(self):
        return tuple(v.twice for v in (self.j1, self.j2, self.j3, self.j4, self.j5, self.j6))

    def __str__(self):
        return f"{{{self.j1} {self.j2} {self.j3}; {self.j4} {self.j5} {self.j6}}}"


def _fact(n):
    return math.factorial(half(n))


# ---------------------------------------------------------------- 3j


def _three_j_nonzero(t):
    j1, j2, j3, m1, m2, m3 = t
    if not triangle_ok(j1, j2, j3):
        return False
    if m1 + m2 + m3:
        return False
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or (j - m) % 2:
            return False
    return True


def _three_j_bounds(t):
    j1, j2, j3, m1, m2, m3 = t
    kmin = max(0, j2 - j3 - m1, j1 - j3 + m2)
    kmax = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    return kmin, kmax


def _three_j_radicand(t):
    j1, j2, j3, m1, m2, m3 = t
    projections = (j1 + m1, j1 - m1, j2 + m2, j2 - m2, j3 + m3, j3 - m3)
    return delta_squared(j1, j2, j3) * factorial_product([half(v) for v in projections])


def three_j(s):
    t = s.twice
    if not _three_j_nonzero(t):
        return ZERO
    j1, j2, j3, m1, m2, m3 = t
    kmin, kmax = _three_j_bounds(t)
    total = Fraction(0)
    for k in range(kmin, kmax + 1, 2):
        den = (_fact(k) * _fact(j3 - j2 + k + m1) * _fact(j3 - j1 + k - m2)
               * _fact(j1 + j2 - j3 - k) * _fact(j1 - k - m1) * _fact(j2 - k + m2))
        total += Fraction(phase(k), den)
    sign = phase(j1 - j2 - m3)
    return SqrtRational.from_radicand(_three_j_radicand(t), sign) * total


def three_j_as_3f2(s):
    """
    (prefactor, series) with prefactor * eval_direct(series) == three_j(s).
    The summation index starts at its lower bound; one of the three lower
    factorial arguments then vanishes and supplies the k! of the series.
    """
    t = s.twice
    if not _three_j_nonzero(t):
        return ZERO, PFQSpec((0,), ())
    j1, j2, j3, m1, m2, m3 = t
    kmin, _ = _three_j_bounds(t)
    lower = [half(kmin), half(j3 - j2 + m1 + kmin), half(j3 - j1 - m2 + kmin)]
    upper = [half(j1 + j2 - j3 - kmin), half(j1 - m1 - kmin), half(j2 + m2 - kmin)]
    lower_fact = math.prod(math.factorial(p) for p in lower)
    upper_fact = math.prod(math.factorial(q) for q in upper)
    lower.remove(0)
    series = PFQSpec(tuple(-q for q in upper), tuple(p + 1 for p in lower))
    leading = Fraction(phase(kmin), lower_fact * upper_fact)
    prefactor = SqrtRational.from_radicand(_three_j_radicand(t), phase(j1 - j2 - m3)) * leading
    return prefactor, series


# ---------------------------------------------------------------- 6j


def _six_j_triads(t):
    j1, j2, j3, j4, j5, j6 = t
    return (j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)


def _six_j_sums(t):
    j1, j2, j3, j4, j5, j6 = t
    alphas = [sum(triad) for triad in _six_j_triads(t)]
    betas = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4]
    return alphas, betas


def _delta_product(t):
    radicand = ONE_PF
    for triad in _six_j_triads(t):
        radicand = radicand * delta_squared(*triad)
    return radicand


def six_j_twice(t):
    """6j from six doubled momenta; zero when any triad is invalid."""
    if not all(triangle_ok(*triad) for triad in _six_j_triads(t)):
        return ZERO
    alphas, betas = _six_j_sums(t)
    total = 0
    for x in range(max(alphas), min(betas) + 1, 2):
        num = _fact(x + 2)
        den = math.prod(_fact(x - a) for a in alphas) * math.prod(_fact(b - x) for b in betas)
        total += Fraction(phase(x) * num, den)
    return SqrtRational.from_radicand(_delta_product(t)) * Fraction(total)


def six_j(s):
    return six_j_twice(s.twice)


def six_j_as_4f3(s):
    """
    (prefactor, series): the Racah sum shifted to start at its lower bound,
    written as a balanced 4F3(1).
    """
    t = s.twice
    for triad in _six_j_triads(t):
        if not triangle_ok(*triad):
            raise InvalidTriad(f"{s}: triad {tuple(Fraction(v, 2) for v in triad)} is invalid")
    alphas, betas = _six_j_sums(t)
    top = max(alphas)
    others = list(alphas)
    others.remove(top)
    A = half(top)
    gaps = [A - half(a) for a in others]
    spans = [half(b) - A for b in betas]
    series = PFQSpec((A + 2, *(-d for d in spans)), tuple(u + 1 for u in gaps))
    leading = Fraction(
        (-1) ** A * math.factorial(A + 1),
        math.prod(math.factorial(u) for u in gaps) * math.prod(math.factorial(d) for d in spans),
    )
    return SqrtRational.from_radicand(_delta_product(t)) * leading, series


# ---------------------------------------------------------------- 9j


def nine_j_sum(s):
    """
    Sum over the auxiliary momentum x of (-1)^(2x) (2x+1) times
        {a b c; f i x} {d e f; b x h} {g h i; x a d}.
    Every term carries the same square-free radicand.
    """
    if ninej_validate(s):
        return ZERO
    (a, b, c), (d, e, f), (g, h, i) = s.twice
    lo = max(abs(a - i), abs(b - f), abs(d - h))
    hi = min(a + i, b + f, d + h)
    if (lo - a - i) % 2:
        lo += 1
    terms = []
    for x in range(lo, hi + 1, 2):
        product = sqrt_mul(sqrt_mul(six_j_twice((a, b, c, f, i, x)), six_j_twice((d, e, f, b, x, h))),
                           six_j_twice((g, h, i, x, a, d)))
        weight = (-1) ** x * (x + 1)
        terms.append((product.coefficient * weight, product.surd))
    logger.debug("9j %s: %d terms over 2x in [%d, %d]", s, len(terms), lo, hi)
    return sqrt_add_same_radicand(terms)


def _zero_to_corner(s):
    """Symmetry image of s with a zero entry at row 3, column 3, and whether the image is odd."""
    for r, row in enumerate(s.twice):
        for c, v in enumerate(row):
            if v == 0:
                row_perm = tuple(k for k in range(3) if k != r) + (r,)
                col_perm = tuple(k for k in range(3) if k != c) + (c,)
                odd = (permutation_parity(row_perm) + permutation_parity(col_perm)) % 2
                return s.permuted(row_perm, col_perm), odd
    raise InapplicableMethod(f"{s} has no zero entry")


def nine_j_zero_reduction(s):
    """
    9j with a zero entry, reduced to a single 6j:
        {a b c; d e c; g g 0} = (-1)^(b+c+d+g) / sqrt((2c+1)(2g+1)) {a b c; e d g}
    """
    image, odd = _zero_to_corner(s)
    if ninej_validate(image):
        return ZERO
    (a, b, c), (d, e, _), (g, _, _) = image.twice
    sign = phase(b + c + d + g)
    if odd:
        sign *= phase(s.total_twice())
    norm = SqrtRational.sqrt_of(Fraction(1, (c + 1) * (g + 1)), sign)
    return norm * six_j_twice((a, b, c, e, d, g))
