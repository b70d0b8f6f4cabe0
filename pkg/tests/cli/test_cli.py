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


import csv
import json
from pathlib import Path
from typing import Any
import pytest
from pythonic_fp.proxkit.cli import (
    EXIT_CONFIG,
    EXIT_MAX_ITER,
    EXIT_OK,
    cmd_bench,
    cmd_rates,
    cmd_solve,
    main,
    parse_window,
    rates_fit,
    read_column,
)
from pythonic_fp.proxkit.trace import COLUMNS


def config_file(tmp_path: Path, data: dict[str, Any]) -> Path:
    path = tmp_path / 'run.json'
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def lasso_run(tmp_path: Path, **solver: Any) -> dict[str, Any]:
    return {
        'problem': {'name': 'lasso', 'params': {'n': 6, 'm': 12, 'alpha': 0.1, 'seed': 2}},
        'algo': 'fb',
        'solver': {'max_iter': 20_000, 'tol': 1e-8, **solver},
        'outputs': {'csv_path': str(tmp_path / 'trace.csv')},
    }


def synthetic_csv(tmp_path: Path, values: list[float]) -> Path:
    path = tmp_path / 'synthetic.csv'
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['k', 'residual', 'gap'])
        for k, val in enumerate(values, start=1):
            writer.writerow([k, repr(val), '' if k % 2 else repr(val)])
    return path


class TestSolve:
    """The solve command"""

    def test_writes_trace(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = cmd_solve(config_file(tmp_path, lasso_run(tmp_path)), env={})
        assert code == EXIT_OK
        with open(tmp_path / 'trace.csv', newline='', encoding='utf-8') as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == tuple(COLUMNS)
        assert len(rows) >= 3
        first = dict(zip(rows[0], rows[1]))
        assert first['k'] == '1'
        assert first['sigma'] == ''
        assert float(first['gap']) >= -1e-12
        out = capsys.readouterr().out
        assert out.startswith('fb on lasso: converged')
        assert 'wall time' in out

    def test_budget_exhausted(self, tmp_path: Path) -> None:
        code = cmd_solve(config_file(tmp_path, lasso_run(tmp_path, max_iter=3, tol=0.0)), env={})
        assert code == EXIT_MAX_ITER
        ks, _ = read_column(tmp_path / 'trace.csv', 'residual')
        assert ks == [1, 2, 3]

    def test_inadmissible_steps(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        data = {
            'problem': {'name': 'tv1d', 'params': {'n': 10, 'alpha': 0.1}},
            'algo': 'pdps',
            'solver': {'tau0': 1.0, 'sigma0': 1.0},
        }
        assert cmd_solve(config_file(tmp_path, data), env={}) == EXIT_CONFIG
        assert 'step-size admissibility' in capsys.readouterr().err

    def test_config_errors(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        both = lasso_run(tmp_path)
        both['wrappers'] = [{'name': 'inertia'}, {'name': 'overrelax'}]
        assert cmd_solve(config_file(tmp_path, both), env={}) == EXIT_CONFIG
        assert 'invalid config' in capsys.readouterr().err

        bogus = lasso_run(tmp_path)
        bogus['problem']['params']['bogus'] = 1
        assert cmd_solve(config_file(tmp_path, bogus), env={}) == EXIT_CONFIG
        assert 'problem.params' in capsys.readouterr().err

        wrong_algo = lasso_run(tmp_path)
        wrong_algo['algo'] = 'drs'
        assert cmd_solve(config_file(tmp_path, wrong_algo), env={}) == EXIT_CONFIG

        assert cmd_solve(tmp_path / 'missing.json', env={}) == EXIT_CONFIG
        assert cmd_solve(config_file(tmp_path, lasso_run(tmp_path)), env={'PROXKIT_SEED': 'x'}) == EXIT_CONFIG
        assert not (tmp_path / 'trace.csv').exists()


class TestRates:
    """The rates command"""

    def test_power_law(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = synthetic_csv(tmp_path, [3.0 / k**2 for k in range(1, 201)])
        assert cmd_rates(path, 'residual') == EXIT_OK
        assert capsys.readouterr().out.startswith('power slope=-2.00±')

    def test_linear(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = synthetic_csv(tmp_path, [0.9**k for k in range(1, 201)])
        assert cmd_rates(path, 'residual', '20:150') == EXIT_OK
        assert capsys.readouterr().out.startswith('linear μ=0.900±')

    def test_sparse_column_uses_iteration_numbers(self, tmp_path: Path) -> None:
        path = synthetic_csv(tmp_path, [1.0 / k for k in range(1, 101)])
        ks, vals = read_column(path, 'gap')
        assert ks[:3] == [2, 4, 6]
        assert len(vals) == 50
        fit = rates_fit(path, 'gap', (10, 100))
        assert fit.model == 'power'
        assert abs(fit.slope + 1.0) <= 1e-8
        assert fit.window == (10, 100)

    def test_errors(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = synthetic_csv(tmp_path, [1.0 / k for k in range(1, 11)])
        assert cmd_rates(path, 'dist_to_ref') == EXIT_CONFIG
        assert 'dist_to_ref' in capsys.readouterr().err
        assert cmd_rates(path, 'residual', '5') == EXIT_CONFIG
        assert cmd_rates(tmp_path / 'none.csv', 'residual') == EXIT_CONFIG

    def test_parse_window(self) -> None:
        assert parse_window('50:5000') == (50, 5000)
        for bad in ('50', 'a:b'):
            try:
                parse_window(bad)
            except ValueError:
                assert True
            else:
                assert False


class TestMain:
    """Argument parsing and dispatch"""

    def test_dispatch(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = synthetic_csv(tmp_path, [2.0 / k for k in range(1, 101)])
        assert main(['rates', '--csv', str(path), '--column', 'residual']) == EXIT_OK
        assert capsys.readouterr().out.startswith('power slope=-1.00±')
        assert main(['-v', 'solve', '--config', str(config_file(tmp_path, lasso_run(tmp_path)))]) == EXIT_OK

    def test_usage_errors(self) -> None:
        assert main([]) == EXIT_CONFIG
        assert main(['rates', '--csv', 'x.csv']) == EXIT_CONFIG
        assert main(['bench', '--suite', 'nope']) == EXIT_CONFIG
        assert cmd_bench('nope') == EXIT_CONFIG
