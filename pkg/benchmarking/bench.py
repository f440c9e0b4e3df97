import json
import socket
import time
from contextlib import nullcontext
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np
import pandas as pd

from models.oracle import nine_j_sum
from models.stretched import Method, NineJDispatcher
from utils.errors import VerificationMismatch

# --- Centralized Configuration ---
WARMUP_ITERATIONS = 16
DEFAULT_REPETITIONS = 101
DEFAULT_EXPERIMENT = "wigner-9j-bench"

# Method configurations
METHODS = {
    'OracleSum': {
        'method': Method.OracleSum,
        'params': {},
    },
    'VarshalovichClosed': {
        'method': Method.VarshalovichClosed,
        'params': {},
    },
    'FiveF4': {
        'method': Method.FiveF4,
        'params': {},
    },
    'ZeroArg4F3': {
        'method': Method.ZeroArg4F3,
        'params': {},
    },
    'ColumnClosed': {
        'method': Method.ColumnClosed,
        'params': {'enable_column': True},
    },
}


@dataclass(frozen=True)
class BenchmarkRecord:
    symbol: str
    method: str
    repetitions: int
    median_ns: int
    min_ns: int
    value_rendered: str

    def to_json(self):
        return json.dumps(asdict(self))


class BenchRunner:
    """Times 9j evaluation methods on one symbol, after checking they agree on its value."""

    def __init__(self, symbol, repetitions=DEFAULT_REPETITIONS, warmup=WARMUP_ITERATIONS):
        if repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {repetitions}")
        if warmup < 0:
            raise ValueError(f"warmup must be >= 0, got {warmup}")
        self.symbol = symbol
        self.repetitions = repetitions
        self.warmup = warmup
        self.dispatchers = {}
        self.records = {}

    def _dispatcher(self, method_name):
        params = METHODS[method_name]['params']
        key = tuple(sorted(params.items()))
        if key not in self.dispatchers:
            self.dispatchers[key] = NineJDispatcher(**params)
        return self.dispatchers[key]

    def run_method(self, method_name):
        """
        Time a single method; InapplicableMethod propagates if the symbol does not fit it.
        The stretched pattern is resolved once before warmup, so only the closed-form
        call (or the single sum for OracleSum) is timed.
        """
        if method_name not in METHODS:
            raise ValueError(f"Method {method_name} not found. Available: {list(METHODS.keys())}")
        method = METHODS[method_name]['method']
        dispatcher = self._dispatcher(method_name)

        value, pattern = dispatcher.evaluate_with_pattern(self.symbol, method)
        if method is Method.OracleSum:
            call = partial(nine_j_sum, self.symbol)
        else:
            call = partial(dispatcher.evaluate_pattern, method, pattern)
        for _ in range(self.warmup):
            call()

        samples = np.empty(self.repetitions, dtype=np.int64)
        for k in range(self.repetitions):
            start = time.perf_counter_ns()
            call()
            samples[k] = time.perf_counter_ns() - start

        record = BenchmarkRecord(
            symbol=str(self.symbol),
            method=method_name,
            repetitions=self.repetitions,
            median_ns=int(np.median(samples)),
            min_ns=int(samples.min()),
            value_rendered=str(value),
        )
        self.records[method_name] = record
        return record

    def run_methods(self, method_names):
        """
        Time every method. Nothing is timed or reported unless all methods
        give the same value on the symbol.
        """
        values = {name: self._dispatcher(name).evaluate(self.symbol, METHODS[name]['method'])
                  for name in method_names}
        names = list(values)
        for name in names[1:]:
            if values[name] != values[names[0]]:
                raise VerificationMismatch(self.symbol, name, values[name], values[names[0]])
        return [self.run_method(name) for name in method_names]

    def create_summary_table(self, file=None):
        """Summary of all timed methods, fastest first."""
        if not self.records:
            print("No results to summarize", file=file)
            return pd.DataFrame()

        df = pd.DataFrame([asdict(record) for record in self.records.values()])
        slowest = df['median_ns'].max()
        df['speedup'] = slowest / df['median_ns'].clip(lower=1)
        df = df.sort_values('median_ns').reset_index(drop=True)

        print(f"[Bench] {self.symbol} | repetitions {self.repetitions} | warmup {self.warmup}", file=file)
        print(df.drop(columns=["symbol", "value_rendered"]).to_string(index=False, float_format="%.1f"), file=file)
        return df

    def to_json_lines(self):
        return "\n".join(record.to_json() for record in self.records.values())


def tracking_run(enable_mlflow, experiment=DEFAULT_EXPERIMENT, run_name=None):
    """An MLflow run context when tracking is enabled, otherwise a no-op context."""
    if not enable_mlflow:
        return nullcontext()
    import mlflow

    mlflow.set_experiment(experiment)
    run_context = mlflow.start_run(run_name=run_name)
    mlflow.set_tag("hostname", socket.gethostname())
    return run_context


def log_records(runner):
    """Log the runner's records to the active MLflow run."""
    import mlflow

    mlflow.log_params({'symbol': str(runner.symbol), 'repetitions': runner.repetitions, 'warmup': runner.warmup})
    for name, record in runner.records.items():
        mlflow.log_metric(f"{name}_median_ns", record.median_ns)
        mlflow.log_metric(f"{name}_min_ns", record.min_ns)
