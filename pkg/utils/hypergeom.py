"""
Terminating generalized hypergeometric series pFq(1).

Both evaluators walk the exact term ratio
    t_{k+1} / t_k = A_k / B_k,  A_k = prod_j (alpha_j + k),  B_k = (k+1) prod_l (beta_l + k)
either forwards (eval_direct) or as the nested form
    1 + A_0/B_0 (1 + A_1/B_1 (1 + ... ))
evaluated innermost first (eval_horner). The well-poised 5F4 of the Dougall
summation and the Dixon 3F2 have dedicated evaluators and closed forms.
"""
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from utils.errors import ArityMismatch, DenominatorPole, NonTerminating, PoleError
from utils.exact import gamma_ratio


class Method(enum.Enum):
    Direct = 'Direct'
    Horner = 'Horner'


def _as_fractions(values):
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class PFQSpec:
    """pFq[numerator; denominator; 1]. Parameters are stored as Fractions."""
    numerator: tuple
    denominator: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'numerator', _as_fractions(self.numerator))
        object.__setattr__(self, 'denominator', _as_fractions(self.denominator))

    @property
    def p(self):
        return len(self.numerator)

    @property
    def q(self):
        return len(self.denominator)

    def __str__(self):
        fmt = lambda params: ", ".join(str(x) for x in params)
        return f"{self.p}F{self.q}[{fmt(self.numerator)}; {fmt(self.denominator)}; 1]"


@dataclass(frozen=True)
class SeriesReport:
    value: Fraction
    terms_evaluated: int
    method: Method


def _is_nonpositive_integer(x):
    return x.denominator == 1 and x <= 0


def termination_index(spec):
    """Smallest |alpha| over the nonpositive-integer numerator parameters."""
    candidates = [-int(a) for a in spec.numerator if _is_nonpositive_integer(a)]
    if not candidates:
        raise NonTerminating(f"{spec} has no nonpositive-integer numerator parameter")
    return min(candidates)


def _check_poles(spec, depth):
    # (beta)_k vanishes for some k <= depth iff beta in {0, -1, ..., -(depth-1)}
    for b in spec.denominator:
        if _is_nonpositive_integer(b) and -b < depth:
            raise DenominatorPole(f"{spec}: denominator parameter {b} vanishes before term {depth}")


def _ratio(spec, k):
    num = math.prod((a + k for a in spec.numerator), start=Fraction(1))
    den = math.prod((b + k for b in spec.denominator), start=Fraction(k + 1))
    return num / den


def eval_direct(spec):
    depth = termination_index(spec)
    _check_poles(spec, depth)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(depth):
        term *= _ratio(spec, k)
        total += term
    return SeriesReport(total, depth + 1, Method.Direct)


def eval_horner(spec):
    depth = termination_index(spec)
    _check_poles(spec, depth)
    nested = Fraction(1)
    for k in reversed(range(depth)):
        nested = 1 + _ratio(spec, k) * nested
    return SeriesReport(nested, depth + 1, Method.Horner)


def is_balanced(spec):
    """Saalschutzian: sum(beta) == 1 + sum(alpha)."""
    return sum(spec.denominator) == 1 + sum(spec.numerator)


def is_well_poised(spec):
    """1 + alpha_1 == beta_i + alpha_{i+1} for every i, parameters in the order given."""
    if spec.p != spec.q + 1:
        raise ArityMismatch(f"well-poisedness needs p = q + 1, got {spec.p}F{spec.q}")
    target = 1 + spec.numerator[0]
    return all(b + a == target for b, a in zip(spec.denominator, spec.numerator[1:]))


def is_well_poised_any(spec):
    """True if some ordering of the parameters is well-poised."""
    if spec.p != spec.q + 1:
        raise ArityMismatch(f"well-poisedness needs p = q + 1, got {spec.p}F{spec.q}")
    for first in set(spec.numerator):
        rest = list(spec.numerator)
        rest.remove(first)
        target = 1 + first
        # each remaining alpha must pair with a distinct beta = target - alpha
        betas = list(spec.denominator)
        for a in rest:
            if target - a not in betas:
                break
            betas.remove(target - a)
        else:
            return True
    return False


def _as_nonnegative_int(name, x):
    if not isinstance(x, int):
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"{name} must be a nonnegative integer, got {x}")
        x = int(x)
    if x < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {x}")
    return x


def wp5f4_spec(n, x, y, z):
    """
    Parameter list of the well-poised 5F4 in the order that makes
    is_well_poised hold as given: [n, n/2+1, -x, -y, -z; n/2, x+n+1, y+n+1, z+n+1].
    """
    n, x, y, z = (Fraction(v) for v in (n, x, y, z))
    return PFQSpec((n, n / 2 + 1, -x, -y, -z), (n / 2, x + n + 1, y + n + 1, z + n + 1))


def eval_wp5f4(n, x, y, z):
    """
    5F4[n/2+1, n, -x, -y, -z; n/2, x+n+1, y+n+1, z+n+1; 1] with the pair
    (n/2+1)_k (n)_k / (n/2)_k cancelled to (n+2k)(n+1)_{k-1} before substitution,
    so n = 0 gives the limit value rather than the truncated series.
    Evaluated as the nested form with integer numerator and denominator.
    """
    n = _as_nonnegative_int('n', n)
    x, y, z = (_as_nonnegative_int(name, v) for name, v in (('x', x), ('y', y), ('z', z)))
    depth = min(x, y, z)
    p, q = 1, 1
    for k in range(depth - 1, 0, -1):
        num = (n + 2 * k + 2) * (n + k) * (k - x) * (k - y) * (k - z)
        den = (n + 2 * k) * (x + n + 1 + k) * (y + n + 1 + k) * (z + n + 1 + k) * (k + 1)
        p, q = den * q + num * p, den * q
    if depth:
        num = -(n + 2) * x * y * z
        den = (x + n + 1) * (y + n + 1) * (z + n + 1)
        p, q = den * q + num * p, den * q
    return Fraction(p, q)


def _check_gamma_args(*args):
    for arg in args:
        if _is_nonpositive_integer(Fraction(arg)):
            raise PoleError(f"Gamma({arg}) is a pole")


def dougall_rhs(n, x, y, z, printed=False):
    """
    Closed form of the well-poised 5F4:
        G(x+n+1) G(y+n+1) G(z+n+1) G(x+y+z+n+1)
        / [G(n+1) G(x+y+n+1) G(x+z+n+1) G(y+z+n+1)]
    printed=True swaps G(x+y+n+1) and G(x+y+z+n+1) between numerator and
    denominator, which does not satisfy the summation (see the regression tests).
    """
    n, x, y, z = (Fraction(v) for v in (n, x, y, z))
    _check_gamma_args(x + n + 1, y + n + 1, z + n + 1, n + 1,
                      x + y + n + 1, x + z + n + 1, y + z + n + 1, x + y + z + n + 1)
    if printed:
        return (gamma_ratio(x + n + 1, n + 1)
                * gamma_ratio(y + n + 1, x + y + z + n + 1)
                * gamma_ratio(z + n + 1, y + z + n + 1)
                * gamma_ratio(x + y + n + 1, x + z + n + 1))
    return (gamma_ratio(x + n + 1, n + 1)
            * gamma_ratio(y + n + 1, x + y + n + 1)
            * gamma_ratio(z + n + 1, x + z + n + 1)
            * gamma_ratio(x + y + z + n + 1, y + z + n + 1))


def dixon_spec(n, x, y):
    """Well-poised 3F2[n, -x, -y; x+n+1, y+n+1; 1]: the 5F4 at z = -n/2 with the cancelling pair removed."""
    n, x, y = (Fraction(v) for v in (n, x, y))
    return PFQSpec((n, -x, -y), (x + n + 1, y + n + 1))


def dixon_series(n, x, y):
    return eval_direct(dixon_spec(n, x, y)).value


def dixon_rhs(n, x, y):
    """
    G(1+n/2) G(1+n+x) G(1+n+y) G(1+n/2+x+y)
    / [G(1+n) G(1+n/2+x) G(1+n/2+y) G(1+n+x+y)]
    """
    n, x, y = (Fraction(v) for v in (n, x, y))
    h = n / 2
    _check_gamma_args(1 + h, 1 + n + x, 1 + n + y, 1 + h + x + y, 1 + n, 1 + h + x, 1 + h + y, 1 + n + x + y)
    return (gamma_ratio(1 + h, 1 + h + x)
            * gamma_ratio(1 + h + x + y, 1 + h + y)
            * gamma_ratio(1 + n + x, 1 + n)
            * gamma_ratio(1 + n + y, 1 + n + x + y))
