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


import json
from pathlib import Path
from typing import Any
from pydantic import ValidationError
from pythonic_fp.proxkit.config import SEED_ENV, RunConfig, WrapperSpec, load_config


def lasso_config(**extra: Any) -> dict[str, Any]:
    return {'problem': {'name': 'lasso', 'params': {'n': 5, 'm': 8, 'alpha': 0.1, 'seed': 1}},
            'algo': 'fb', **extra}


def write(tmp_path: Path, data: dict[str, Any]) -> Path:
    path = tmp_path / 'run.json'
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def rejected(data: dict[str, Any]) -> bool:
    try:
        RunConfig.model_validate(data)
    except ValidationError:
        return True
    return False


class TestRunConfig:
    """Schema of the JSON run configuration"""

    def test_defaults(self) -> None:
        cfg = RunConfig.model_validate(lasso_config())
        assert cfg.algo == 'fb'
        assert cfg.wrappers == []
        assert cfg.outputs.csv_path is None
        assert cfg.nl is None
        solver = cfg.solver_config()
        assert solver.max_iter == 1000
        assert solver.log_every == 100

    def test_wrappers_fold_into_solver(self) -> None:
        cfg = RunConfig.model_validate(lasso_config(
            wrappers=[{'name': 'overrelax', 'lambda': 1.2}],
            solver={'max_iter': 50, 'tol': 1e-6},
            outputs={'csv_path': 'out.csv', 'log_every': 7},
        ))
        solver = cfg.solver_config()
        assert solver.overrelax
        assert solver.overrelax_lambda == 1.2
        assert solver.max_iter == 50
        assert solver.log_every == 7
        assert not cfg.solver.overrelax

        cfg = RunConfig.model_validate(lasso_config(
            wrappers=[{'name': 'linesearch', 'theta': 0.7, 'tau_init': 2.0}, {'name': 'inertia'}]
        ))
        solver = cfg.solver_config()
        assert solver.linesearch and solver.inertia
        assert solver.ls_theta == 0.7
        assert solver.ls_tau_init == 2.0

    def test_wrapper_spec(self) -> None:
        assert WrapperSpec(name='overrelax', lambda_=0.75).lambda_ == 0.75
        for bad in ({'name': 'inertia', 'lambda': 1.0}, {'name': 'overrelax', 'theta': 0.5},
                    {'name': 'overrelax', 'lambda': 0.3}, {'name': 'restart'}):
            try:
                WrapperSpec.model_validate(bad)
            except ValidationError:
                assert True
            else:
                assert False

    def test_rejections(self) -> None:
        assert rejected(lasso_config(wrappers=[{'name': 'inertia'}, {'name': 'overrelax'}]))
        assert rejected(lasso_config(wrappers=[{'name': 'inertia'}, {'name': 'inertia'}]))
        assert rejected(lasso_config(solver={'inertia': True, 'overrelax': True}))
        assert rejected(lasso_config(solver={'tau0': 0.0}))
        assert rejected(lasso_config(algo='nlpdps'))
        assert rejected({'problem': {'name': 'nl'}, 'algo': 'pdps'})
        assert rejected(lasso_config(algo='newton'))
        assert rejected(lasso_config(colour='blue'))
        assert rejected({'problem': {'name': 'sparse'}, 'algo': 'fb'})
        assert not rejected({'problem': {'name': 'nl'}, 'algo': 'nlpdps', 'nl': {'tau': 0.4, 'sigma': 0.4}})


class TestLoadConfig:
    """Reading configurations and the seed override"""

    def test_round_trip(self, tmp_path: Path) -> None:
        cfg = load_config(write(tmp_path, lasso_config()), env={})
        assert cfg == RunConfig.model_validate(lasso_config())
        assert cfg.problem.params['seed'] == 1

    def test_seed_override(self, tmp_path: Path) -> None:
        cfg = load_config(write(tmp_path, lasso_config()), env={SEED_ENV: '42'})
        assert cfg.problem.params['seed'] == 42
        assert cfg.solver.seed == 42
        tv = {'problem': {'name': 'tv1d', 'params': {'n': 10, 'alpha': 0.1}}, 'algo': 'pdps'}
        cfg = load_config(write(tmp_path, tv), env={SEED_ENV: '3'})
        assert cfg.problem.params['noise_seed'] == 3
        nl = {'problem': {'name': 'nl'}, 'algo': 'nlpdps'}
        cfg = load_config(write(tmp_path, nl), env={SEED_ENV: '3'})
        assert cfg.problem.params == {}
        assert cfg.solver.seed == 3

    def test_blank_and_bad_seed(self, tmp_path: Path) -> None:
        path = write(tmp_path, lasso_config())
        assert load_config(path, env={SEED_ENV: '  '}).problem.params['seed'] == 1
        try:
            load_config(path, env={SEED_ENV: 'seven'})
        except ValueError as ve:
            assert SEED_ENV in str(ve)
        else:
            assert False

    def test_invalid_files(self, tmp_path: Path) -> None:
        bad = tmp_path / 'bad.json'
        bad.write_text('{"problem": ', encoding='utf-8')
        try:
            load_config(bad, env={})
        except ValidationError:
            assert True
        else:
            assert False
        try:
            load_config(tmp_path / 'missing.json', env={})
        except OSError:
            assert True
        else:
            assert False
