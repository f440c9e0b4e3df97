"""
Angular momenta as doubled integers, triads, the triangle coefficients
Delta and eta, and the 3x3 container for 9j symbols.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from utils.errors import InvalidTriad, ParityViolation, ParseError
from utils.exact import SqrtRational, factorial_product


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer j stored as twice = 2j."""
    twice: int

    @classmethod
    def of(cls, value):
        if isinstance(value, HalfInt):
            return value
        x = Fraction(value)
        if (2 * x).denominator != 1:
            raise ParseError(str(value), 'not a multiple of 1/2')
        return cls(int(2 * x))

    @property
    def value(self):
        return Fraction(self.twice, 2)

    def is_integer(self):
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def parse_halfint(text):
    """Parse "7", "7/2" or "3.5" into a HalfInt."""
    token = text.strip()
    try:
        x = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(text) from None
    if (2 * x).denominator != 1:
        raise ParseError(text, 'not a half-integer')
    return HalfInt(int(2 * x))


def half(twice_sum):
    """Exact integer value of a doubled quantity; odd input means broken triad bookkeeping."""
    if twice_sum % 2:
        raise ParityViolation(f"expected an integer, got {twice_sum}/2")
    return twice_sum // 2


def phase(twice_exponent):
    """(-1)**(twice_exponent / 2), asserting the exponent is an integer."""
    return -1 if half(twice_exponent) % 2 else 1


def triangle_ok(a2, b2, c2):
    # doubled arguments
    return (a2 >= 0 and b2 >= 0 and c2 >= 0
            and (a2 + b2 + c2) % 2 == 0
            and abs(a2 - b2) <= c2 <= a2 + b2)


@dataclass(frozen=True)
class Triad:
    j1: HalfInt
    j2: HalfInt
    j3: HalfInt

    @classmethod
    def of(cls, j1, j2, j3):
        return cls(HalfInt.of(j1), HalfInt.of(j2), HalfInt.of(j3))

    @property
    def twice(self):
        return self.j1.twice, self.j2.twice, self.j3.twice

    def __str__(self):
        return f"({self.j1}, {self.j2}, {self.j3})"


def is_triangle(t):
    return triangle_ok(*t.twice)


def _check(t):
    if not is_triangle(t):
        raise InvalidTriad(f"{t} violates the triangle conditions")
    return t.twice


def delta_squared(a2, b2, c2):
    """Delta(a,b,c)**2 as a PrimeFactored, doubled arguments, triad assumed valid."""
    return factorial_product(
        (half(a2 + b2 - c2), half(a2 - b2 + c2), half(-a2 + b2 + c2)),
        (half(a2 + b2 + c2) + 1,),
    )


def eta_squared(a2, b2, c2):
    """eta(a,b,c)**2 as a PrimeFactored, doubled arguments, triad assumed valid."""
    return factorial_product(
        (half(a2 - b2 + c2), half(a2 + b2 - c2), half(a2 + b2 + c2) + 1),
        (half(-a2 + b2 + c2),),
    )


def delta_coeff(t):
    return SqrtRational.from_radicand(delta_squared(*_check(t)))


def eta_coeff(t):
    return SqrtRational.from_radicand(eta_squared(*_check(t)))


ROW_LABELS = ('row 1', 'row 2', 'row 3')
COLUMN_LABELS = ('column 1', 'column 2', 'column 3')


@dataclass(frozen=True)
class NineJ:
    """
    3x3 arrangement {a b c; d e f; g h i}. Invalid triads are allowed in the
    container; ninej_validate reports them and the evaluators return zero.
    """
    entries: tuple

    @classmethod
    def of(cls, *values):
        """Nine values in row-major order, or three rows of three."""
        if len(values) == 3 and all(isinstance(v, (tuple, list)) for v in values):
            values = tuple(v for row in values for v in row)
        if len(values) != 9:
            raise ValueError(f"a 9j symbol needs nine entries, got {len(values)}")
        flat = tuple(HalfInt.of(v) for v in values)
        return cls((flat[0:3], flat[3:6], flat[6:9]))

    @classmethod
    def from_tokens(cls, tokens):
        if len(tokens) != 9:
            raise ValueError(f"a 9j symbol needs nine tokens, got {len(tokens)}")
        return cls.of(*(parse_halfint(token) for token in tokens))

    @classmethod
    def from_twice(cls, rows):
        return cls(tuple(tuple(HalfInt(t) for t in row) for row in rows))

    @property
    def rows(self):
        return self.entries

    @property
    def columns(self):
        return tuple(zip(*self.entries))

    @property
    def twice(self):
        """Doubled entries as a tuple of three row tuples of ints."""
        return tuple(tuple(j.twice for j in row) for row in self.entries)

    def triads(self):
        """The six (label, Triad) pairs: rows first, then columns."""
        labelled = list(zip(ROW_LABELS, self.rows)) + list(zip(COLUMN_LABELS, self.columns))
        return [(label, Triad(*entries)) for label, entries in labelled]

    def transpose(self):
        return NineJ(tuple(self.columns))

    def permuted(self, row_perm, col_perm):
        return NineJ(tuple(tuple(self.entries[r][c] for c in col_perm) for r in row_perm))

    def total_twice(self):
        """2S, with S the sum of all nine entries."""
        return sum(j.twice for row in self.entries for j in row)

    def is_valid(self):
        return all(triangle_ok(*row) for row in self.twice) and \
            all(triangle_ok(*col) for col in zip(*self.twice))

    def tokens(self):
        return [str(j) for row in self.entries for j in row]

    def __str__(self):
        return "{" + "; ".join(" ".join(str(j) for j in row) for row in self.entries) + "}"


def ninej_validate(s):
    """List of (label, Triad) for every row or column that is not a valid triad."""
    return [(label, t) for label, t in s.triads() if not is_triangle(t)]


def permutation_parity(perm):
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inversions % 2


PERMUTATIONS_3 = tuple(permutations(range(3)))
