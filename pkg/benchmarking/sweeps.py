"""
Grid sweeps behind the `verify` and `table` commands: the Dougall and Dixon
summations, agreement of the stretched 9j routes with the single sum, and
row-per-symbol tabulation.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import pandas as pd
from tqdm import tqdm

from models.oracle import nine_j_sum
from models.stretched import Mode, detect, nine_j_5f4, nine_j_auto, nine_j_varshalovich, stretched_5f4_spec
from utils.angular import NineJ, ninej_validate, parse_halfint
from utils.errors import ParseError
from utils.hypergeom import dixon_rhs, dixon_series, dougall_rhs, eval_wp5f4, is_balanced, is_well_poised

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 15
TOKEN_COLUMNS = [f"j{r}{c}" for r in range(1, 4) for c in range(1, 4)]
TABLE_COLUMNS = TOKEN_COLUMNS + ['pattern', 'method', 'exact_value', 'decimal_value']


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.checked - len(self.failures)

    @property
    def ok(self):
        return not self.failures

    def __str__(self):
        status = "all pass" if self.ok else f"first failure at {self.failures[0]}"
        return f"[{self.name}] {self.passed}/{self.checked} passed ({status})"


def dougall_sweep(max_n, max_xyz, printed=False):
    result = SweepResult('Dougall (printed)' if printed else 'Dougall')
    grid = list(itertools.product(range(max_n + 1), *[range(max_xyz + 1)] * 3))
    for n, x, y, z in tqdm(grid, desc=result.name, leave=False):
        result.checked += 1
        if eval_wp5f4(n, x, y, z) != dougall_rhs(n, x, y, z, printed=printed):
            result.failures.append((n, x, y, z))
    return result


def dixon_sweep(max_n, max_xyz):
    """The z = -n/2 specialization, even n only."""
    result = SweepResult('Dixon')
    grid = list(itertools.product(range(0, max_n + 1, 2), *[range(max_xyz + 1)] * 2))
    for n, x, y in tqdm(grid, desc=result.name, leave=False):
        result.checked += 1
        if dixon_series(n, x, y) != dixon_rhs(n, x, y):
            result.failures.append((n, x, y))
    return result


def stretched_corpus(max_twice):
    """Every (a, b, d, e, f), doubled entries up to max_twice, whose stretched symbol is valid."""
    span = range(max_twice + 1)
    for A, B, D, E, F in itertools.product(span, repeat=5):
        symbol = NineJ.from_twice(((A, B, A + B), (D, E, F), (E, D, A + B + F)))
        if not ninej_validate(symbol):
            yield tuple(Fraction(t, 2) for t in (A, B, D, E, F)), symbol


def stretched_sweep(max_twice):
    """5F4 route = closed factorial route = single sum, and the 5F4 is well-poised and not balanced."""
    routes = SweepResult('Stretched routes')
    series = SweepResult('Well-poised 5F4')
    for args, symbol in tqdm(list(stretched_corpus(max_twice)), desc=routes.name, leave=False):
        routes.checked += 1
        reference = nine_j_sum(symbol)
        if not nine_j_5f4(*args) == nine_j_varshalovich(*args) == reference:
            routes.failures.append(tuple(str(v) for v in args))
        spec = stretched_5f4_spec(*args)
        series.checked += 1
        if not is_well_poised(spec) or is_balanced(spec):
            series.failures.append(tuple(str(v) for v in args))
    return [routes, series]


def verify_identities(max_n, max_xyz, max_twice, printed_dougall=False):
    return [
        dougall_sweep(max_n, max_xyz, printed=printed_dougall),
        dixon_sweep(max_n, max_xyz),
        *stretched_sweep(max_twice),
    ]


# ---------------------------------------------------------------- tables


def parse_range(token):
    """'v', 'lo:hi' or 'lo:hi:step' (inclusive, step defaults to 1) into a list of doubled values."""
    parts = token.split(':')
    if len(parts) == 1:
        return [parse_halfint(parts[0]).twice]
    if len(parts) not in (2, 3):
        raise ParseError(token, 'expected v, lo:hi or lo:hi:step')
    lo, hi = parse_halfint(parts[0]).twice, parse_halfint(parts[1]).twice
    step = parse_halfint(parts[2]).twice if len(parts) == 3 else 2
    if step <= 0:
        raise ParseError(token, 'step must be positive')
    if lo < 0:
        raise ParseError(token, 'momenta must be nonnegative')
    return list(range(lo, hi + 1, step))


def table_symbols(range_tokens):
    """Valid symbols of the grid in row-major product order."""
    if len(range_tokens) != 9:
        raise ParseError(' '.join(range_tokens), f'a 9j table needs nine ranges, got {len(range_tokens)}')
    axes = [parse_range(token) for token in range_tokens]
    for flat in itertools.product(*axes):
        symbol = NineJ.from_twice((flat[0:3], flat[3:6], flat[6:9]))
        if not ninej_validate(symbol):
            yield symbol


def table_row(symbol, verify=False, digits=DEFAULT_DIGITS):
    report = nine_j_auto(symbol, Mode.Verified if verify else Mode.Fast)
    row = dict(zip(TOKEN_COLUMNS, symbol.tokens()))
    row.update({
        'pattern': str(detect(symbol)),
        'method': str(report.method),
        'exact_value': str(report.value),
        'decimal_value': report.value.to_decimal(digits),
    })
    return row


def _table_row_task(task):
    twice, verify, digits = task
    return table_row(NineJ.from_twice(twice), verify, digits)


def build_table(range_tokens, verify=False, digits=DEFAULT_DIGITS, workers=1):
    """DataFrame with one row per valid symbol; row order does not depend on `workers`."""
    symbols = list(table_symbols(range_tokens))
    logger.info("Tabulating %d symbols with %d worker(s)", len(symbols), workers)
    tasks = [(symbol.twice, verify, digits) for symbol in symbols]
    if workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(tqdm(pool.map(_table_row_task, tasks, chunksize=16), total=len(tasks), desc='Table'))
    else:
        rows = [_table_row_task(task) for task in tqdm(tasks, desc='Table')]
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def write_table(df, path):
    """CSV for *.csv, JSON lines otherwise."""
    if str(path).endswith('.csv'):
        df.to_csv(path, index=False)
    else:
        df.to_json(path, orient='records', lines=True)
