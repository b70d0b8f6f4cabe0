# Copyright 2026 Geoffrey R. Scheller
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command line
============

.. admonition:: ``proxkit`` subcommands

    - ``solve --config PATH``: run a configured solver, write the CSV trace
    - ``rates --csv PATH --column NAME [--window A:B]``: fit a rate to a column
    - ``bench --suite NAME``: run an acceptance suite

    Exit codes: ``0`` success, ``1`` configuration or usage error,
    ``2`` iteration budget exhausted before the tolerance was met.

"""

import argparse
from collections.abc import Mapping, Sequence
import csv
import logging
from pathlib import Path
import sys
import time
from pydantic import ValidationError
from pythonic_fp.proxkit.config import RunConfig, load_config
from pythonic_fp.proxkit.diagnostics import ErgodicMonitor, RateFit, fit_rate, value_gap_monitor
from pythonic_fp.proxkit.errors import AdmissibilityError, ProxkitError
from pythonic_fp.proxkit.nlpdps import NonlinearSaddleProblem, run_nlpdps
from pythonic_fp.proxkit.problems import ProblemInstance, make_instance
from pythonic_fp.proxkit.splitting import GapMonitor, Reference, run
from pythonic_fp.proxkit.trace import COLUMNS, Trace

__all__ = [
    'EXIT_OK',
    'EXIT_CONFIG',
    'EXIT_MAX_ITER',
    'main',
    'cmd_solve',
    'cmd_rates',
    'cmd_bench',
    'solve_instance',
    'write_csv',
    'read_column',
    'rates_fit',
    'parse_window',
]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_MAX_ITER = 2


def _error(msg: str) -> int:
    print(f'proxkit: {msg}', file=sys.stderr)
    return EXIT_CONFIG


def _field_message(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = '.'.join(str(part) for part in err['loc']) or 'config'
    return f'{loc}: {err["msg"]}'


def _cell(val: float | int | None) -> str:
    if val is None:
        return ''
    if isinstance(val, int):
        return str(val)
    return repr(float(val))


def write_csv(trace: Trace, path: str | Path) -> None:
    """Header ``k,residual,...,lambda``, empty fields for untracked values, shortest round trip floats."""
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(COLUMNS)
        for rec in trace:
            writer.writerow(_cell(rec.get(col)) for col in COLUMNS)


def solve_instance(inst: ProblemInstance, cfg: RunConfig) -> Trace:
    """
    .. admonition:: Run a configuration on a built instance

        The gap column holds the uniform ergodic Lagrangian gap for the
        primal-dual methods and ``J(x) - J*`` for problems without ``K``;
        distances are joint for the primal-dual methods, primal otherwise.

    """
    solver = cfg.solver_config()
    prob = inst.composite
    if isinstance(prob, NonlinearSaddleProblem):
        params = cfg.nl if cfg.nl is not None else inst.nl_params
        if params is None:
            msg = f'{inst.name}: no step parameters for nlpdps'
            raise ValueError(msg)
        return run_nlpdps(
            prob,
            params,
            max_iter=solver.max_iter,
            tol=solver.tol,
            reference=inst.reference,
        )
    reference: Reference | None = None
    monitor: GapMonitor | None = None
    if inst.reference is not None:
        if cfg.algo in ('pdps', 'pdes'):
            reference = inst.reference
            monitor = ErgodicMonitor(prob, inst.reference)
        else:
            reference = inst.reference[0]
    if monitor is None and prob.K is None and inst.reference_value is not None:
        monitor = value_gap_monitor(prob, inst.reference_value)
    return run(prob, cfg.algo, solver, reference=reference, gap_monitor=monitor)


def cmd_solve(config_path: str | Path, env: Mapping[str, str] | None = None) -> int:
    """
    Run ``solve``, write the CSV and print a one line summary.

    :returns: ``0`` when the tolerance was met, ``2`` on an exhausted
              budget, ``1`` on configuration errors.

    """
    try:
        cfg = load_config(config_path, env)
    except ValidationError as exc:
        return _error(f'invalid config: {_field_message(exc)}')
    except (OSError, ValueError) as exc:
        return _error(f'invalid config: {exc}')
    try:
        inst = make_instance(cfg.problem.name, **cfg.problem.params)
    except (TypeError, ValueError) as exc:
        return _error(f'invalid config: problem.params: {exc}')

    t_start = time.perf_counter()
    try:
        trace = solve_instance(inst, cfg)
    except AdmissibilityError as exc:
        return _error(f'invalid config: solver: {exc}')
    except (ValueError, TypeError) as exc:
        return _error(f'invalid config: algo: {exc}')
    except ProxkitError as exc:
        return _error(f'run failed: {exc}')
    wall = time.perf_counter() - t_start

    if cfg.outputs.csv_path is not None:
        write_csv(trace, cfg.outputs.csv_path)
        log.info('wrote %d rows to %s', len(trace), cfg.outputs.csv_path)
    status = 'converged' if trace.converged else 'max_iter'
    print(
        f'{cfg.algo} on {inst.name}: {status}, residual {trace.last_residual:.3e}, '
        f'iterations {len(trace)}, wall time {wall:.3f}s'
    )
    return EXIT_OK if trace.converged else EXIT_MAX_ITER


def parse_window(text: str) -> tuple[int, int]:
    """``'a:b'`` to ``(a, b)``."""
    lo, sep, hi = text.partition(':')
    if not sep:
        msg = f'window must read a:b, got {text!r}'
        raise ValueError(msg)
    return int(lo), int(hi)


def read_column(csv_path: str | Path, column: str) -> tuple[list[int], list[float]]:
    """
    Iteration numbers and values of a trace CSV column, skipping empty fields.

    :raises KeyError: When the column is missing.

    """
    with open(csv_path, newline='', encoding='utf-8') as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            msg = f'column {column!r} not in {csv_path}'
            raise KeyError(msg)
        ks: list[int] = []
        vals: list[float] = []
        for row in reader:
            cell = row[column]
            if cell:
                ks.append(int(row['k']))
                vals.append(float(cell))
    return ks, vals


def rates_fit(
    csv_path: str | Path, column: str, window: tuple[int, int] | None = None
) -> RateFit:
    ks, vals = read_column(csv_path, column)
    return fit_rate(vals, window, ks=ks)


def cmd_rates(csv_path: str | Path, column: str, window: str | None = None) -> int:
    """Print the fitted rate of one CSV column."""
    try:
        win = None if window is None else parse_window(window)
        fit = rates_fit(csv_path, column, win)
    except KeyError as exc:
        return _error(str(exc.args[0]))
    except (OSError, ValueError) as exc:
        return _error(str(exc))
    print(fit.describe())
    return EXIT_OK


def cmd_bench(suite: str) -> int:
    """Run an acceptance suite, nonzero exit when any criterion fails."""
    from pythonic_fp.proxkit.bench import SUITES, run_suite

    if suite not in SUITES:
        return _error(f'unknown suite {suite!r}, expected one of {sorted(SUITES)}')
    results = run_suite(suite)
    for res in results:
        print(res.line())
    failed = sum(1 for res in results if not res.passed)
    print(f'{len(results) - failed}/{len(results)} criteria passed')
    return EXIT_OK if failed == 0 else EXIT_CONFIG


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='proxkit', description='proximal splitting solvers and rate diagnostics')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v INFO, -vv DEBUG')
    sub = parser.add_subparsers(dest='command', required=True)

    solve = sub.add_parser('solve', help='run a configured solver')
    solve.add_argument('--config', required=True, help='JSON run configuration')

    rates = sub.add_parser('rates', help='fit a convergence rate to a CSV column')
    rates.add_argument('--csv', required=True, help='trace CSV written by solve')
    rates.add_argument('--column', required=True, help='column to fit')
    rates.add_argument('--window', default=None, help='inclusive iteration range a:b')

    bench = sub.add_parser('bench', help='run an acceptance suite')
    bench.add_argument('--suite', default='default', help='suite name')
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    level = logging.WARNING if args.verbose == 0 else (logging.INFO if args.verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    match args.command:
        case 'solve':
            return cmd_solve(args.config)
        case 'rates':
            return cmd_rates(args.csv, args.column, args.window)
        case _:
            return cmd_bench(args.suite)


if __name__ == '__main__':
    raise SystemExit(main())
