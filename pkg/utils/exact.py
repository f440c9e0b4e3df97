"""
Exact arithmetic for recoupling coefficients.

Every Wigner symbol is a real number of the form p/q * sqrt(r/s). Factorial
products are held as prime-exponent maps (PrimeFactored) so that pulling
squares out of a radicand is a parity check on exponents instead of an integer
factorization. Values are carried as SqrtRational: a rational coefficient
times the square root of a square-free rational.
"""
import bisect
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

import numpy as np

from utils.errors import MixedRadicands, NonIntegerOffset, PoleError

# Largest integer factored through the smallest-prime-factor table; beyond it
# factor_int falls back to trial division by tabulated primes.
SPF_TABLE_LIMIT = 1 << 22


class PrimeTable:
    """
    Process-wide smallest-prime-factor table, grown on demand.
    Readers never take the lock; growth swaps in a new array under the lock,
    so a concurrent reader sees either the old or the new table, both valid.
    """
    def __init__(self, initial_limit=1024):
        self._lock = threading.Lock()
        self._spf = self._sieve(initial_limit)
        self._primes = self._extract_primes(self._spf)

    @staticmethod
    def _sieve(limit):
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p::p]
                block[block == 0] = p
        unmarked = spf == 0
        spf[unmarked] = np.arange(limit + 1)[unmarked]
        return spf

    @staticmethod
    def _extract_primes(spf):
        idx = np.arange(len(spf))
        return idx[2:][spf[2:] == idx[2:]].tolist()

    @property
    def limit(self):
        return len(self._spf) - 1

    def ensure(self, n):
        if n <= self.limit:
            return
        with self._lock:
            if n <= self.limit:
                return
            spf = self._sieve(max(n, 2 * self.limit))
            primes = self._extract_primes(spf)
            self._primes = primes
            self._spf = spf

    def primes_up_to(self, n):
        self.ensure(n)
        primes = self._primes
        return primes[:bisect.bisect_right(primes, n)]

    def factor_int(self, n):
        """Prime-exponent dict of a positive integer."""
        if n < 1:
            raise ValueError(f"factor_int expects a positive integer, got {n}")
        factors = {}
        if n <= SPF_TABLE_LIMIT:
            self.ensure(n)
            spf = self._spf
            while n > 1:
                p = int(spf[n])
                n //= p
                factors[p] = factors.get(p, 0) + 1
            return factors
        for p in self.primes_up_to(math.isqrt(n)):
            if p * p > n:
                break
            while n % p == 0:
                n //= p
                factors[p] = factors.get(p, 0) + 1
        if n > 1:
            factors[n] = factors.get(n, 0) + 1
        return factors


PRIMES = PrimeTable()


class PrimeFactored:
    """
    A positive rational stored as {prime: nonzero exponent}.
    Instances are immutable; arithmetic returns new objects.
    """
    __slots__ = ('_factors', '_hash')

    def __init__(self, factors=None):
        cleaned = {}
        for p, e in (factors or {}).items():
            p, e = int(p), int(e)
            if p < 2 or PRIMES.factor_int(p) != {p: 1}:
                raise ValueError(f"{p} is not prime")
            if e:
                cleaned[p] = e
        self._factors = cleaned
        self._hash = None

    @classmethod
    def _wrap(cls, factors):
        # trusted constructor: keys prime, no zero exponents
        obj = cls.__new__(cls)
        obj._factors = factors
        obj._hash = None
        return obj

    @classmethod
    def from_int(cls, n):
        return cls._wrap(PRIMES.factor_int(int(n)))

    @classmethod
    def from_rational(cls, x):
        x = Fraction(x)
        if x <= 0:
            raise ValueError(f"PrimeFactored holds positive rationals only, got {x}")
        return cls.from_int(x.numerator) / cls.from_int(x.denominator)

    @property
    def factors(self):
        return MappingProxyType(self._factors)

    def is_one(self):
        return not self._factors

    def __mul__(self, other):
        if not isinstance(other, PrimeFactored):
            return NotImplemented
        merged = dict(self._factors)
        for p, e in other._factors.items():
            total = merged.get(p, 0) + e
            if total:
                merged[p] = total
            else:
                del merged[p]
        return PrimeFactored._wrap(merged)

    def __truediv__(self, other):
        if not isinstance(other, PrimeFactored):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k):
        k = int(k)
        if k == 0:
            return ONE_PF
        return PrimeFactored._wrap({p: e * k for p, e in self._factors.items()})

    def inverse(self):
        return PrimeFactored._wrap({p: -e for p, e in self._factors.items()})

    def to_fraction(self):
        num = math.prod(p ** e for p, e in self._factors.items() if e > 0)
        den = math.prod(p ** -e for p, e in self._factors.items() if e < 0)
        return Fraction(num, den)

    def squarefree_split(self):
        """
        Split into (root, surd) with self = root**2 * surd.
        Exponents are truncated toward zero, so surd exponents are +1 or -1 and
        the surd reads as r/s with r, s square-free and coprime.
        """
        root, surd = {}, {}
        for p, e in self._factors.items():
            q = int(e / 2)
            if q:
                root[p] = q
            if e - 2 * q:
                surd[p] = e - 2 * q
        return PrimeFactored._wrap(root), PrimeFactored._wrap(surd)

    def __eq__(self, other):
        if not isinstance(other, PrimeFactored):
            return NotImplemented
        return self._factors == other._factors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._factors.items()))
        return self._hash

    def __repr__(self):
        return f"PrimeFactored({dict(sorted(self._factors.items()))})"


ONE_PF = PrimeFactored._wrap({})


@lru_cache(maxsize=None)
def factorial(n):
    """n! as a PrimeFactored, via Legendre's formula. Memoized."""
    n = int(n)
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    factors = {}
    for p in PRIMES.primes_up_to(n):
        e, q = 0, n
        while q:
            q //= p
            e += q
        factors[p] = e
    return PrimeFactored._wrap(factors)


def factorial_product(numerator_args, denominator_args=()):
    """prod(k! for k in numerator_args) / prod(k! for k in denominator_args)."""
    merged = {}
    for args, sign in ((numerator_args, 1), (denominator_args, -1)):
        for k in args:
            for p, e in factorial(k)._factors.items():
                merged[p] = merged.get(p, 0) + sign * e
    return PrimeFactored._wrap({p: e for p, e in merged.items() if e})


def pochhammer(a, k):
    """Rising factorial a (a+1) ... (a+k-1); 1 for k = 0."""
    if k < 0:
        raise ValueError(f"pochhammer needs k >= 0, got {k}")
    a = Fraction(a)
    if a.denominator == 1:
        a = int(a)
        return Fraction(math.prod(range(a, a + k)))
    num = math.prod(range(a.numerator, a.numerator + k * a.denominator, a.denominator))
    return Fraction(num, a.denominator ** k)


def _is_pole(x):
    return x.denominator == 1 and x <= 0


def gamma_ratio(a, b):
    """Gamma(a)/Gamma(b) for a - b an integer, as a Pochhammer product."""
    a, b = Fraction(a), Fraction(b)
    offset = a - b
    if offset.denominator != 1:
        raise NonIntegerOffset(f"Gamma({a})/Gamma({b}): offset {offset} is not an integer")
    if _is_pole(a) or _is_pole(b):
        raise PoleError(f"Gamma({a})/Gamma({b}) hits a pole")
    offset = int(offset)
    if offset >= 0:
        return pochhammer(b, offset)
    return 1 / pochhammer(a, -offset)


def canonicalize_sqrt(coefficient, radicand):
    """
    Rewrite coefficient * sqrt(radicand) as c * sqrt(r) with r square-free.
    Returns (c, r) with r a PrimeFactored whose exponents are all +1 or -1.

    The form is a function of the value alone: for every prime of r, the
    exponent of that prime in the squared value is odd, and r carries +1 when
    it is positive and -1 when it is negative. Only the primes of r are
    checked against the coefficient, so the coefficient is never factored.
    """
    coefficient = Fraction(coefficient)
    if coefficient == 0:
        return coefficient, ONE_PF
    root, surd = radicand.squarefree_split()
    coefficient *= root.to_fraction()
    flipped = None
    for p, e in surd.factors.items():
        if e > 0 and coefficient.denominator % p == 0:
            # p^(2v+1) with v <= -1 is negative: move one p from the coefficient under the root
            coefficient *= p
            flipped = flipped or dict(surd.factors)
            flipped[p] = -1
        elif e < 0 and coefficient.numerator % p == 0:
            coefficient /= p
            flipped = flipped or dict(surd.factors)
            flipped[p] = 1
    if flipped is not None:
        surd = PrimeFactored._wrap(flipped)
    return coefficient, surd


@dataclass(frozen=True)
class SqrtRational:
    """
    coefficient * sqrt(surd), with surd square-free (exponents +1/-1).
    The pair is canonical, so dataclass equality is value equality.
    Zero is coefficient 0 with the empty surd.
    """
    coefficient: Fraction
    surd: PrimeFactored = ONE_PF

    @classmethod
    def from_rational(cls, x):
        return cls(Fraction(x), ONE_PF)

    @classmethod
    def from_radicand(cls, radicand, sign=1):
        """sign * sqrt(radicand) for a PrimeFactored radicand."""
        if sign == 0:
            return ZERO
        coefficient, surd = canonicalize_sqrt(Fraction(sign), radicand)
        return cls(coefficient, surd)

    @classmethod
    def sqrt_of(cls, x, sign=1):
        """sign * sqrt(x) for a nonnegative rational x (factors numerator and denominator)."""
        x = Fraction(x)
        if x == 0 or sign == 0:
            return ZERO
        return cls.from_radicand(PrimeFactored.from_rational(x), sign)

    @property
    def sign(self):
        return (self.coefficient > 0) - (self.coefficient < 0)

    @property
    def radicand(self):
        """The value squared, i.e. the rational under a single root."""
        return self.coefficient ** 2 * self.surd.to_fraction()

    def squared(self):
        return self.radicand

    def is_zero(self):
        return self.coefficient == 0

    def __bool__(self):
        return self.coefficient != 0

    def __neg__(self):
        return SqrtRational(-self.coefficient, self.surd)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return sqrt_mul(self, other)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            coefficient, surd = canonicalize_sqrt(self.coefficient * other, self.surd)
            return SqrtRational(coefficient, surd)
        return NotImplemented

    __rmul__ = __mul__

    def to_decimal(self, digits):
        return to_decimal(self, digits)

    def __str__(self):
        return render_exact(self)


ZERO = SqrtRational(Fraction(0), ONE_PF)
ONE = SqrtRational(Fraction(1), ONE_PF)


def sqrt_mul(x, y):
    if x.is_zero() or y.is_zero():
        return ZERO
    coefficient, surd = canonicalize_sqrt(x.coefficient * y.coefficient, x.surd * y.surd)
    return SqrtRational(coefficient, surd)


def sqrt_add_same_radicand(terms):
    """
    Sum (coefficient, radicand) pairs that share one square-free radical.
    Each term is brought to c * sqrt(n) with n a square-free integer before adding;
    zero-coefficient terms are ignored and two distinct radicals raise MixedRadicands.
    """
    total = Fraction(0)
    shared = None
    for coefficient, radicand in terms:
        coefficient, surd = canonicalize_sqrt(coefficient, radicand)
        if coefficient == 0:
            continue
        # c * sqrt(r/s) = (c/s) * sqrt(r*s)
        below = math.prod(p for p, e in surd.factors.items() if e < 0)
        primes = frozenset(surd.factors)
        if shared is None:
            shared = primes
        elif primes != shared:
            raise MixedRadicands(f"cannot add sqrt({surd.to_fraction()}) to sqrt({math.prod(shared)})")
        total += coefficient / below
    if total == 0:
        return ZERO
    coefficient, surd = canonicalize_sqrt(total, PrimeFactored._wrap({p: 1 for p in shared}))
    return SqrtRational(coefficient, surd)


def _fraction_text(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_exact(v):
    """Canonical text: "p/q*sqrt(r/s)", "0" for zero, leading "-" when negative."""
    if v.is_zero():
        return "0"
    sign = "-" if v.coefficient < 0 else ""
    magnitude = abs(v.coefficient)
    if v.surd.is_one():
        return sign + _fraction_text(magnitude)
    root = f"sqrt({_fraction_text(v.surd.to_fraction())})"
    if magnitude == 1:
        return sign + root
    return f"{sign}{_fraction_text(magnitude)}*{root}"


def to_decimal(v, digits):
    """
    Round |v| to `digits` significant digits (half-even) in fixed-point notation.
    Works on v**2 = P/Q with integer square roots only.
    """
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    if v.is_zero():
        return "0"
    square = v.radicand
    p, q = square.numerator, square.denominator

    # exponent e with 10**e <= |v| < 10**(e+1)
    e = (len(str(p)) - len(str(q))) // 2
    while Fraction(10) ** (2 * e) > square:
        e -= 1
    while Fraction(10) ** (2 * (e + 1)) <= square:
        e += 1

    shift = digits - 1 - e  # |v| * 10**shift has `digits` integer digits
    if shift >= 0:
        num, den = p * 10 ** (2 * shift), q
    else:
        num, den = p, q * 10 ** (-2 * shift)
    mantissa = math.isqrt(num // den)
    # compare the dropped part with one half: (2m+1)^2 vs 4 * num/den
    lhs, rhs = 4 * num, (2 * mantissa + 1) ** 2 * den
    if lhs > rhs or (lhs == rhs and mantissa % 2 == 1):
        mantissa += 1
    if mantissa == 10 ** digits:
        mantissa //= 10
        shift -= 1

    sign = "-" if v.coefficient < 0 else ""
    if shift <= 0:
        return sign + str(mantissa) + "0" * (-shift)
    text = str(mantissa).rjust(shift + 1, "0")
    return f"{sign}{text[:-shift]}.{text[-shift:]}"
