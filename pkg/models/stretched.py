"""
Stretched 9j symbols: template detection over the 72 symmetry images and the
closed-form fast paths, with the general single sum as fallback and referee.

Templates (canonical orientation, rows separated by ';'):
    DoublyStretchedVarshalovich  {a b a+b; d e f; e d a+b+f}
    ZeroArgument                 {a a 0; d e f; g h f}
    ColumnStretched              {a b c; d e f; a+d a+d+g g}
    ThreeJProportional           {a b c; d e f; a+d b+e g}   (no closed form here)
"""
import enum
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from models.oracle import nine_j_sum
from utils.angular import (
    HalfInt, NineJ, PERMUTATIONS_3, delta_squared, eta_squared, half, ninej_validate, permutation_parity,
    phase,
)
from utils.errors import (
    DenominatorPole, FormulaMismatch, InapplicableMethod, InvalidTriad, PoleError, VerificationMismatch,
)
from utils.exact import ZERO, PrimeFactored, SqrtRational, canonicalize_sqrt, factorial_product, gamma_ratio
from utils.hypergeom import PFQSpec, eval_direct, eval_wp5f4, wp5f4_spec

logger = logging.getLogger(__name__)


class PatternKind(enum.Enum):
    DoublyStretchedVarshalovich = 'DoublyStretchedVarshalovich'
    ZeroArgument = 'ZeroArgument'
    ColumnStretched = 'ColumnStretched'
    ThreeJProportional = 'ThreeJProportional'
    NoPattern = 'None'

    def __str__(self):
        return self.value


class Method(enum.Enum):
    FiveF4 = 'FiveF4'
    VarshalovichClosed = 'VarshalovichClosed'
    ZeroArg4F3 = 'ZeroArg4F3'
    ColumnClosed = 'ColumnClosed'
    OracleSum = 'OracleSum'

    def __str__(self):
        return self.value


class Mode(enum.Enum):
    Fast = 'Fast'
    Verified = 'Verified'


class ColumnVariant(enum.Enum):
    """Last factorial under the square root of the column-stretched closed form."""
    CORRECTED = '(2a+2d+2g+1)!'
    PRINTED = '(2a+2b+2g+1)!'


DEFAULT_PRIORITY = (
    Method.FiveF4,
    Method.VarshalovichClosed,
    Method.ZeroArg4F3,
    Method.ColumnClosed,
    Method.OracleSum,
)

COLUMN_CALIBRATION_TWICE = 4

# ---------------------------------------------------------------- detection


def _matches_varshalovich(m):
    return (m[0][2] == m[0][0] + m[0][1] and m[2][0] == m[1][1]
            and m[2][1] == m[1][0] and m[2][2] == m[0][2] + m[1][2])


def _matches_zero_argument(m):
    return m[0][2] == 0 and m[0][0] == m[0][1] and m[2][2] == m[1][2]


def _matches_column_stretched(m):
    return m[2][0] == m[0][0] + m[1][0] and m[2][1] == m[2][0] + m[2][2]


def _matches_three_j_proportional(m):
    return m[2][0] == m[0][0] + m[1][0] and m[2][1] == m[0][1] + m[1][1]


TEMPLATES = {
    PatternKind.DoublyStretchedVarshalovich: _matches_varshalovich,
    PatternKind.ZeroArgument: _matches_zero_argument,
    PatternKind.ColumnStretched: _matches_column_stretched,
    PatternKind.ThreeJProportional: _matches_three_j_proportional,
}

SEARCH_ORDER = tuple(TEMPLATES)


@dataclass(frozen=True)
class Orientation:
    """Optional transposition followed by a row and a column permutation."""
    transposed: bool = False
    row_perm: tuple = (0, 1, 2)
    col_perm: tuple = (0, 1, 2)

    def apply(self, s):
        image = s.transpose() if self.transposed else s
        return image.permuted(self.row_perm, self.col_perm)

    def apply_twice(self, m):
        """Same image on a doubled-entry matrix, without building a NineJ."""
        if self.transposed:
            m = tuple(zip(*m))
        return tuple(tuple(m[r][c] for c in self.col_perm) for r in self.row_perm)

    @property
    def is_odd(self):
        return (permutation_parity(self.row_perm) + permutation_parity(self.col_perm)) % 2 == 1

    def is_identity(self):
        return not self.transposed and self.row_perm == (0, 1, 2) and self.col_perm == (0, 1, 2)

    def __str__(self):
        if self.is_identity():
            return 'identity'
        parts = []
        if self.transposed:
            parts.append('transposed')
        if self.row_perm != (0, 1, 2):
            parts.append('rows ' + ''.join(str(k + 1) for k in self.row_perm))
        if self.col_perm != (0, 1, 2):
            parts.append('columns ' + ''.join(str(k + 1) for k in self.col_perm))
        return ', '.join(parts)


ORIENTATIONS = tuple(
    Orientation(transposed, rows, cols)
    for transposed in (False, True)
    for rows in PERMUTATIONS_3
    for cols in PERMUTATIONS_3
)


@dataclass(frozen=True)
class StretchedPattern:
    """
    kind matched by orientation.apply(symbol); the symbol equals phase times
    the canonical image.
    """
    kind: PatternKind
    orientation: Orientation = None
    phase: int = 1
    canonical: NineJ = None

    def __str__(self):
        if self.kind is PatternKind.NoPattern:
            return str(self.kind)
        return f"{self.kind} / {self.orientation}"


NO_PATTERN = StretchedPattern(PatternKind.NoPattern)


def _orientation_phase(s, orientation):
    if not orientation.is_odd:
        return 1
    return phase(s.total_twice())


def iter_matches(s, kinds=SEARCH_ORDER):
    """
    Lazily yield every (kind, orientation) match, kinds in the order given and
    orientations in search order (identity first). Only matching images are
    built as NineJ.
    """
    m = s.twice
    for kind in kinds:
        template = TEMPLATES[kind]
        for orientation in ORIENTATIONS:
            image = orientation.apply_twice(m)
            if template(image):
                yield StretchedPattern(kind, orientation, _orientation_phase(s, orientation), NineJ.from_twice(image))


def detect_all(s, kinds=SEARCH_ORDER):
    """Every (kind, orientation) match as a list."""
    return list(iter_matches(s, kinds))


def detect(s):
    invalid = ninej_validate(s)
    if invalid:
        label, triad = invalid[0]
        raise InvalidTriad(f"{s}: {label} {triad} violates the triangle conditions")
    return next(iter_matches(s), NO_PATTERN)


# ---------------------------------------------------------------- closed forms


def _twice(*values):
    return tuple(HalfInt.of(v).twice for v in values)


def _varshalovich_symbol(A, B, D, E, F):
    return NineJ.from_twice(((A, B, A + B), (D, E, F), (E, D, A + B + F)))


def _delta_factorials(a2, b2, c2):
    """Numerator arguments and denominator argument of the factorials in Delta(a,b,c)**2."""
    return (half(a2 + b2 - c2), half(a2 - b2 + c2), half(-a2 + b2 + c2)), half(a2 + b2 + c2) + 1


def _varshalovich_prefactor(A, B, D, E, F):
    """
    Everything in front of the trailing factorial ratio / 5F4, doubled arguments,
    as (coefficient, radicand): sign and linear factor in the coefficient, the
    Delta ratio and the square-root factorial block in one factorial product.
    """
    top, top_den = _delta_factorials(A + B + F, E, D)
    numerator, denominator = [*top, A, B, F], [top_den, A + B + F + 1]
    for triad in ((A, D, E), (B, E, D), (D, E, F)):
        bottom, bottom_den = _delta_factorials(*triad)
        numerator.append(bottom_den)
        denominator.extend(bottom)
    radicand = factorial_product(numerator, denominator) / PrimeFactored.from_int(A + B + 1)
    linear = Fraction(phase(A + D - E) * (half(A + B + E + D + F) + 1),
                      (half(A + E + D) + 1) * (half(B + E + D) + 1) * (half(D + E + F) + 1))
    return linear, radicand


def varshalovich_twice(A, B, D, E, F):
    """Closed factorial form on doubled arguments; the symbol must already be known valid."""
    linear, radicand = _varshalovich_prefactor(A, B, D, E, F)
    tail = factorial_product(
        (half(A + B + E + D + F), half(E - A + D), half(E - B + D), half(D + E - F)),
        (half(E + D - A - B - F), half(A + E + D), half(B + E + D), half(D + E + F)),
    )
    return SqrtRational(*canonicalize_sqrt(linear * tail.to_fraction(), radicand))


def nine_j_varshalovich(a, b, d, e, f):
    """{a b a+b; d e f; e d a+b+f} by the closed factorial form."""
    A, B, D, E, F = _twice(a, b, d, e, f)
    if ninej_validate(_varshalovich_symbol(A, B, D, E, F)):
        return ZERO
    return varshalovich_twice(A, B, D, E, F)


def _wp5f4_arguments(A, B, D, E, F):
    # n, x, y, z; half() raises ParityViolation on a half-integer
    return half(E + D - A - B - F), half(B + F), half(A + F), half(A + B)


def stretched_5f4_spec(a, b, d, e, f):
    """The well-poised 5F4 parameter list used by nine_j_5f4."""
    return wp5f4_spec(*_wp5f4_arguments(*_twice(a, b, d, e, f)))


def five_f4_twice(A, B, D, E, F):
    """Trailing ratio evaluated as the well-poised 5F4; doubled arguments, symbol known valid."""
    linear, radicand = _varshalovich_prefactor(A, B, D, E, F)
    return SqrtRational(*canonicalize_sqrt(linear * eval_wp5f4(*_wp5f4_arguments(A, B, D, E, F)), radicand))


def nine_j_5f4(a, b, d, e, f):
    """{a b a+b; d e f; e d a+b+f} with the trailing ratio evaluated as the well-poised 5F4."""
    A, B, D, E, F = _twice(a, b, d, e, f)
    if ninej_validate(_varshalovich_symbol(A, B, D, E, F)):
        return ZERO
    return five_f4_twice(A, B, D, E, F)


def _column_symbol(A, B, C, D, E, F, G):
    return NineJ.from_twice(((A, B, C), (D, E, F), (A + D, A + D + G, G)))


def nine_j_column_stretched(a, b, c, d, e, f, g, variant=ColumnVariant.CORRECTED, verify=False):
    """{a b c; d e f; a+d a+d+g g} by the eta closed form."""
    A, B, C, D, E, F, G = _twice(a, b, c, d, e, f, g)
    symbol = _column_symbol(A, B, C, D, E, F, G)
    if ninej_validate(symbol):
        return ZERO
    last = A + D + G + 1 if variant is ColumnVariant.CORRECTED else A + B + G + 1
    radicand = (eta_squared(A + D + G, B, E)
                / (eta_squared(A, B, C) * eta_squared(D, E, F) * eta_squared(G, C, F))
                * factorial_product((A, D, G), (last,))
                / PrimeFactored.from_int(A + D + 1))
    value = SqrtRational.from_radicand(radicand, phase(D - E + F))
    if verify:
        reference = nine_j_sum(symbol)
        if value != reference:
            raise FormulaMismatch(f"column-stretched form {variant.value} gave {value} for {symbol}, sum gave {reference}")
    return value


def _column_calibration_corpus(max_twice):
    span = range(max_twice + 1)
    for A, B, C, D, E, F, G in itertools.product(span, repeat=7):
        symbol = _column_symbol(A, B, C, D, E, F, G)
        if not ninej_validate(symbol):
            yield (A, B, C, D, E, F, G), symbol


@lru_cache(maxsize=None)
def adjudicate_column_formula(max_twice=COLUMN_CALIBRATION_TWICE):
    """
    Compare both column-stretched variants with the single sum on every valid
    symbol with doubled entries up to max_twice; return the first that never disagrees.
    """
    corpus = [(args, nine_j_sum(symbol)) for args, symbol in _column_calibration_corpus(max_twice)]
    for variant in (ColumnVariant.PRINTED, ColumnVariant.CORRECTED):
        failures = [args for args, reference in corpus
                    if nine_j_column_stretched(*(Fraction(t, 2) for t in args), variant=variant) != reference]
        if not failures:
            logger.info("Column-stretched form %s agrees with the sum on %d symbols", variant.value, len(corpus))
            return variant
        first = tuple(str(Fraction(t, 2)) for t in failures[0])
        logger.warning("Column-stretched form %s fails on %d of %d symbols, first (a,b,c,d,e,f,g)=%s",
                       variant.value, len(failures), len(corpus), first)
    raise FormulaMismatch(f"no column-stretched variant agrees with the sum up to 2j = {max_twice}")


def _zero_arg_symbol(A, D, E, F, G, H):
    return NineJ.from_twice(((A, A, 0), (D, E, F), (G, H, F)))


def zero_arg_4f3_spec(A, D, E, F, G, H):
    """4F3[a1..a4; b1, b2, b3] for the zero-argument form, doubled arguments."""
    alphas = (half(H - A - E), half(H - F - G), half(D - A - G), half(D - E - F))
    betas = (-half(A + E + F + G) - 1, half(D + H - E - G) + 1, half(D + H - A - F) + 1)
    return PFQSpec(alphas, betas)


def nine_j_zero_arg(a, d, e, f, g, h, printed=False):
    """
    {a a 0; d e f; g h f} as a 4F3. The Gamma block enters as a plain ratio;
    printed=True takes its square root instead, which is wrong already at a = 0.
    """
    A, D, E, F, G, H = _twice(a, d, e, f, g, h)
    if ninej_validate(_zero_arg_symbol(A, D, E, F, G, H)):
        return ZERO
    series = zero_arg_4f3_spec(A, D, E, F, G, H)
    alphas, (b1, b2, b3) = series.numerator, series.denominator
    if b2 <= 0 or b3 <= 0:
        raise PoleError(f"Gamma({b2}) or Gamma({b3}) is a pole for {_zero_arg_symbol(A, D, E, F, G, H)}")
    sign = phase(A + E + F + G) * (-1 if int(b1 + 1) % 2 else 1)
    radicand = (delta_squared(A, E, H) * delta_squared(F, G, H) * delta_squared(A, G, D) * delta_squared(F, E, D)
                / PrimeFactored.from_int((A + 1) * (F + 1)))
    lower_args = (*(1 - alpha for alpha in alphas), b2, b3)
    upper = gamma_ratio(1 - b1, 1)
    total = eval_direct(series).value
    if printed:
        # integer arguments: Gamma(k) = (k-1)!
        gamma_lower = factorial_product([int(arg) - 1 for arg in lower_args])
        return SqrtRational.from_radicand(radicand / gamma_lower, sign) * upper * total
    lower = Fraction(1)
    for arg in lower_args:
        lower *= gamma_ratio(arg, 1)
    return SqrtRational.from_radicand(radicand, sign) * (upper / lower * total)


# ---------------------------------------------------------------- dispatch


@dataclass(frozen=True)
class MethodReport:
    method: Method
    value: SqrtRational
    pattern: StretchedPattern


def _column_args(m):
    (a, b, c), (d, e, f), (_, _, g) = m
    return tuple(Fraction(t, 2) for t in (a, b, c, d, e, f, g))


def _zero_arg_args(m):
    (a, _, _), (d, e, f), (g, h, _) = m
    return tuple(Fraction(t, 2) for t in (a, d, e, f, g, h))


METHOD_KINDS = {
    Method.FiveF4: PatternKind.DoublyStretchedVarshalovich,
    Method.VarshalovichClosed: PatternKind.DoublyStretchedVarshalovich,
    Method.ZeroArg4F3: PatternKind.ZeroArgument,
    Method.ColumnClosed: PatternKind.ColumnStretched,
}


class NineJDispatcher:
    """
    Picks the first applicable method in `priority`. The column-stretched closed
    form takes part only with enable_column=True, which runs the calibration sweep.
    """

    def __init__(self, priority=DEFAULT_PRIORITY, enable_column=False, calibration_twice=COLUMN_CALIBRATION_TWICE):
        self.priority = tuple(Method(m) for m in priority)
        if Method.OracleSum not in self.priority:
            self.priority += (Method.OracleSum,)
        self.column_variant = adjudicate_column_formula(calibration_twice) if enable_column else None

    def evaluate_pattern(self, method, pattern):
        """Closed form of method on an already detected pattern, phase applied."""
        m = pattern.canonical.twice
        if method is Method.FiveF4:
            (A, B, _), (D, E, F), _ = m
            value = five_f4_twice(A, B, D, E, F)
        elif method is Method.VarshalovichClosed:
            (A, B, _), (D, E, F), _ = m
            value = varshalovich_twice(A, B, D, E, F)
        elif method is Method.ZeroArg4F3:
            value = nine_j_zero_arg(*_zero_arg_args(m))
        elif method is Method.ColumnClosed:
            value = nine_j_column_stretched(*_column_args(m), variant=self.column_variant)
        else:
            raise ValueError(f"Unknown method: {method}")
        return value * pattern.phase

    def try_method(self, s, method):
        """
        (value, pattern) for method on s, or None when it does not apply.
        Orientations are tried lazily; the first one without a Gamma pole wins.
        """
        method = Method(method)
        if method is Method.OracleSum:
            return nine_j_sum(s), NO_PATTERN
        if method is Method.ColumnClosed and self.column_variant is None:
            return None
        if ninej_validate(s):
            return None
        for pattern in iter_matches(s, (METHOD_KINDS[method],)):
            try:
                return self.evaluate_pattern(method, pattern), pattern
            except (PoleError, DenominatorPole) as err:
                logger.debug("%s on %s, orientation %s: %s", method, s, pattern.orientation, err)
        return None

    def evaluate_with_pattern(self, s, method):
        """(value, pattern) of s by the given method; InapplicableMethod if s does not fit it."""
        if ninej_validate(s) and Method(method) is not Method.OracleSum:
            raise InapplicableMethod(f"{method} needs a symbol with valid triads, got {s}")
        result = self.try_method(s, method)
        if result is None:
            raise InapplicableMethod(f"{method} does not apply to {s}")
        return result

    def evaluate(self, s, method):
        """Value of s by the given method; InapplicableMethod if s does not fit it."""
        return self.evaluate_with_pattern(s, method)[0]

    def select(self, s):
        """First applicable method in priority order, with its value and pattern."""
        if ninej_validate(s):
            return MethodReport(Method.OracleSum, ZERO, NO_PATTERN)
        for method in self.priority:
            result = self.try_method(s, method)
            if result is not None:
                value, pattern = result
                if method is Method.OracleSum:
                    pattern = detect(s)
                return MethodReport(method, value, pattern)
        raise AssertionError("OracleSum always applies")

    def dispatch(self, s, mode=Mode.Fast):
        report = self.select(s)
        if Mode(mode) is Mode.Verified:
            reference = nine_j_sum(s)
            if report.value != reference:
                raise VerificationMismatch(s, report.method, report.value, reference)
            logger.info("Verified %s by %s against the sum", s, report.method)
        return report


_default_dispatcher = None


def default_dispatcher():
    global _default_dispatcher
    if _default_dispatcher is None:
        _default_dispatcher = NineJDispatcher()
    return _default_dispatcher


def nine_j_auto(s, mode=Mode.Fast):
    return default_dispatcher().dispatch(s, mode)
