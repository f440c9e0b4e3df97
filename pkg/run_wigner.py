import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass, field

from benchmarking.bench import (
    DEFAULT_EXPERIMENT, DEFAULT_REPETITIONS, METHODS, WARMUP_ITERATIONS, BenchRunner, log_records, tracking_run,
)
from benchmarking.sweeps import DEFAULT_DIGITS, build_table, verify_identities, write_table
from models.oracle import SixJ, ThreeJ, nine_j_sum, six_j, three_j
from models.stretched import Mode, NineJDispatcher, detect, nine_j_auto
from utils.angular import NineJ, parse_halfint
from utils.errors import (
    FormulaMismatch, InapplicableMethod, InvalidTriad, ParseError, VerificationMismatch, WignerError,
)

# --- Centralized Configuration ---
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_IDENTITY_FAILURE = 4
EXIT_IO = 1

COMMANDS = ('3j', '6j', '9j', 'classify', 'verify', 'bench', 'table')
DEFAULT_BENCH_METHODS = ('OracleSum', 'VarshalovichClosed', 'FiveF4')

# negative projections such as -1/2 must stay positional
_NEGATIVE_TOKEN = re.compile(r'^-\d+(/\d+)?$|^-\d*\.\d+$')


@dataclass
class CliConfig:
    command: str
    tokens: list = field(default_factory=list)
    methods: list = field(default_factory=list)
    output_format: str = 'exact'
    digits: int = DEFAULT_DIGITS
    verify: bool = False
    repetitions: int = DEFAULT_REPETITIONS
    warmup: int = WARMUP_ITERATIONS
    out: str = None
    workers: int = 1
    max_n: int = 6
    max_xyz: int = 5
    max_twice: int = 4
    printed_dougall: bool = False
    enable_mlflow: bool = False
    experiment: str = DEFAULT_EXPERIMENT

    def __post_init__(self):
        if self.digits < 1:
            raise ParseError(str(self.digits), 'decimal digits must be >= 1')
        if self.repetitions < 1:
            raise ParseError(str(self.repetitions), 'repetitions must be >= 1')
        if min(self.max_n, self.max_xyz, self.max_twice) < 0:
            raise ParseError(f"{self.max_n}/{self.max_xyz}/{self.max_twice}", 'sweep bounds must be >= 0')
        for name in self.methods:
            if name not in METHODS:
                raise ParseError(name, f"unknown method, expected one of {list(METHODS)}")


def parse_format(text):
    """'exact', 'json', 'decimal' or 'decimal=N' into (format, digits)."""
    if text in ('exact', 'json'):
        return text, DEFAULT_DIGITS
    if text == 'decimal':
        return 'decimal', DEFAULT_DIGITS
    if text.startswith('decimal='):
        digits = text.split('=', 1)[1]
        if not digits.isdigit():
            raise ParseError(text, 'expected decimal=N with N a positive integer')
        return 'decimal', int(digits)
    raise ParseError(text, 'expected exact, decimal=N or json')


def parse_args(argv=None):
    """
    Parse command-line arguments for the Wigner symbol tool.
    Returns:
        argparse.Namespace: Parsed arguments
    """
    parser = argparse.ArgumentParser(description='Exact Wigner 3j/6j/9j symbols and stretched 9j fast paths')

    parser.add_argument('command', choices=COMMANDS, help='3j, 6j and 9j print a symbol value; classify reports the stretched pattern and the method that would be used; verify sweeps the summation identities; bench times 9j methods; table tabulates a grid of 9j symbols.')
    parser.add_argument('tokens', nargs='*', help='Symbol entries as integers or half-integers ("7/2" or "3.5"). 3j: j1 j2 j3 m1 m2 m3. 6j: six entries row by row. 9j/classify/bench: nine entries row by row. table: nine ranges, each v, lo:hi or lo:hi:step.')

    # Evaluation
    parser.add_argument('--method', action='append', default=None, help=f'9j evaluation method; repeat for bench. One of {list(METHODS)}. Default: automatic dispatch (9j) or {list(DEFAULT_BENCH_METHODS)} (bench).')
    parser.add_argument('--format', type=str, default='exact', help='Output format: "exact" (p/q*sqrt(r/s)), "decimal=N" (N significant digits) or "json".')
    parser.add_argument('--verify', action='store_true', help='Check every 9j fast-path value against the single-sum evaluation; a disagreement exits with code 3.')

    # Benchmark
    parser.add_argument('--reps', type=int, default=DEFAULT_REPETITIONS, help='Timed repetitions per method (the median is reported).')
    parser.add_argument('--warmup', type=int, default=WARMUP_ITERATIONS, help='Untimed warmup evaluations per method before timing.')
    parser.add_argument('--enable_mlflow', action='store_true', help='Log benchmark timings to an MLflow run.')
    parser.add_argument('--experiment', type=str, default=DEFAULT_EXPERIMENT, help='MLflow experiment name used with --enable_mlflow.')

    # Sweeps and tables
    parser.add_argument('--max_n', type=int, default=6, help='verify: largest n of the Dougall and Dixon grids.')
    parser.add_argument('--max_xyz', type=int, default=5, help='verify: largest x, y, z of the Dougall and Dixon grids.')
    parser.add_argument('--max_twice', type=int, default=4, help='verify: largest doubled momentum 2j in the stretched-route corpus.')
    parser.add_argument('--printed_dougall', action='store_true', help=argparse.SUPPRESS)
    parser.add_argument('--out', type=str, default=None, help='Output path. table: required, .csv for CSV, anything else for JSON lines. bench: JSON lines file.')
    parser.add_argument('--workers', type=int, default=1, help='table: number of worker processes (row order is unaffected).')

    parser.add_argument('--log_level', type=str, default='WARNING', help='Logging level for library messages on stderr (DEBUG, INFO, WARNING, ...).')

    argv = list(sys.argv[1:] if argv is None else argv)
    argv = [' ' + arg if _NEGATIVE_TOKEN.match(arg) else arg for arg in argv]
    return parser.parse_args(argv)


def build_config(args):
    output_format, digits = parse_format(args.format)
    return CliConfig(
        command=args.command,
        tokens=[token.strip() for token in args.tokens],
        methods=list(args.method or []),
        output_format=output_format,
        digits=digits,
        verify=args.verify,
        repetitions=args.reps,
        warmup=args.warmup,
        out=args.out,
        workers=max(1, args.workers),
        max_n=args.max_n,
        max_xyz=args.max_xyz,
        max_twice=args.max_twice,
        printed_dougall=args.printed_dougall,
        enable_mlflow=args.enable_mlflow,
        experiment=args.experiment,
    )


def _expect_tokens(config, count):
    if len(config.tokens) != count:
        raise ParseError(' '.join(config.tokens), f"{config.command} needs {count} entries, got {len(config.tokens)}")
    return [parse_halfint(token) for token in config.tokens]


def render(value, config, **extra):
    if config.output_format == 'decimal':
        return value.to_decimal(config.digits)
    if config.output_format == 'json':
        return json.dumps({'value': str(value), 'decimal': value.to_decimal(config.digits), **extra})
    return str(value)


def cmd_compute(config):
    if config.command == '3j':
        s = ThreeJ(*_expect_tokens(config, 6))
        print(render(three_j(s), config, symbol=str(s)))
        return EXIT_OK
    if config.command == '6j':
        s = SixJ(*_expect_tokens(config, 6))
        print(render(six_j(s), config, symbol=str(s)))
        return EXIT_OK

    s = NineJ.of(*_expect_tokens(config, 9))
    if len(config.methods) > 1:
        raise ParseError(' '.join(config.methods), '9j takes a single --method')
    if config.methods:
        method = METHODS[config.methods[0]]['method']
        dispatcher = NineJDispatcher(**METHODS[config.methods[0]]['params'])
        value = dispatcher.evaluate(s, method)
        if config.verify:
            reference = nine_j_sum(s)
            if value != reference:
                raise VerificationMismatch(s, method, value, reference)
    else:
        report = nine_j_auto(s, Mode.Verified if config.verify else Mode.Fast)
        method, value = report.method, report.value
    print(render(value, config, symbol=str(s), method=str(method)))
    return EXIT_OK


def cmd_classify(config):
    s = NineJ.of(*_expect_tokens(config, 9))
    pattern = detect(s)
    report = nine_j_auto(s, Mode.Verified if config.verify else Mode.Fast)
    if config.output_format == 'json':
        print(json.dumps({
            'symbol': str(s),
            'pattern': str(pattern.kind),
            'orientation': str(pattern.orientation) if pattern.orientation else None,
            'phase': pattern.phase,
            'method': str(report.method),
        }))
    else:
        print(f"{pattern} / {report.method}")
        print(f"phase: {pattern.phase:+d}")
    return EXIT_OK


def cmd_verify_identities(config):
    results = verify_identities(config.max_n, config.max_xyz, config.max_twice, config.printed_dougall)
    for result in results:
        print(result)
    failed = [result for result in results if not result.ok]
    if failed:
        print(f"/!\\ {failed[0].name} failed at {failed[0].failures[0]}", file=sys.stderr)
        return EXIT_IDENTITY_FAILURE
    return EXIT_OK


def cmd_bench(config):
    s = NineJ.of(*_expect_tokens(config, 9))
    methods = config.methods or list(DEFAULT_BENCH_METHODS)
    runner = BenchRunner(s, repetitions=config.repetitions, warmup=config.warmup)

    with tracking_run(config.enable_mlflow, config.experiment, run_name=str(s)):
        runner.run_methods(methods)
        if config.enable_mlflow:
            log_records(runner)

    if config.out:
        with open(config.out, 'w') as f:
            f.write(runner.to_json_lines() + "\n")
        runner.create_summary_table()
    else:
        print(runner.to_json_lines())
        runner.create_summary_table(file=sys.stderr)
    return EXIT_OK


def cmd_table(config):
    if not config.out:
        raise ParseError('--out', 'table needs an output path')
    df = build_table(config.tokens, verify=config.verify, digits=config.digits, workers=config.workers)
    write_table(df, config.out)
    print(f"[Table] {len(df)} symbols written to {config.out}")
    return EXIT_OK


COMMAND_HANDLERS = {
    '3j': cmd_compute,
    '6j': cmd_compute,
    '9j': cmd_compute,
    'classify': cmd_classify,
    'verify': cmd_verify_identities,
    'bench': cmd_bench,
    'table': cmd_table,
}


def main(argv=None):
    """
    Parse arguments, run the command and map library errors to exit codes.
    """
    args = parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING),
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        config = build_config(args)
        return COMMAND_HANDLERS[config.command](config)
    except (VerificationMismatch, FormulaMismatch) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ParseError, InvalidTriad, InapplicableMethod) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"Error: cannot write {e.filename}: {e.strerror}", file=sys.stderr)
        return EXIT_IO
    except WignerError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
