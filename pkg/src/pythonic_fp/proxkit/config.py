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
Run configuration
=================

.. admonition:: JSON run configuration of ``proxkit solve``

    .. code:: json

        {
          "problem": {"name": "lasso", "params": {"n": 200, "m": 100, "alpha": 0.1, "seed": 1}},
          "algo": "fb",
          "wrappers": [{"name": "inertia"}],
          "solver": {"max_iter": 5000, "tol": 1e-10},
          "outputs": {"csv_path": "lasso.csv", "log_every": 100}
        }

    Unknown keys are errors at every level. The environment variable
    ``PROXKIT_SEED`` overrides the problem seed and the solver seed.

"""

from collections.abc import Mapping
import os
from pathlib import Path
from typing import Any, Literal, Self
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, model_validator
from pythonic_fp.proxkit.nlpdps import NLStepParams
from pythonic_fp.proxkit.splitting import SolverConfig

__all__ = [
    'SEED_ENV',
    'ProblemSpec',
    'WrapperSpec',
    'OutputSpec',
    'RunConfig',
    'load_config',
]

SEED_ENV = 'PROXKIT_SEED'

_SEED_KEYS = {'lasso': 'seed', 'boxqp': 'seed', 'tv1d': 'noise_seed'}


class ProblemSpec(BaseModel):
    """Zoo instance name and constructor parameters."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    name: Literal['lasso', 'tv1d', 'boxqp', 'nl']
    params: dict[str, Any] = Field(default_factory=dict)


class WrapperSpec(BaseModel):
    """
    .. admonition:: Meta-algorithm wrapper

        - ``overrelax`` with optional constant ``lambda``
        - ``inertia``
        - ``linesearch`` with optional ``theta`` and ``tau_init``

    """
    model_config = ConfigDict(frozen=True, extra='forbid', populate_by_name=True)

    name: Literal['overrelax', 'inertia', 'linesearch']
    lambda_: float | None = Field(default=None, alias='lambda', ge=0.5)
    theta: float | None = Field(default=None, gt=0.0, lt=1.0)
    tau_init: PositiveFloat | None = None

    @model_validator(mode='after')
    def _params_fit_name(self) -> Self:
        if self.lambda_ is not None and self.name != 'overrelax':
            msg = f'lambda only applies to overrelax, not {self.name}'
            raise ValueError(msg)
        if (self.theta is not None or self.tau_init is not None) and self.name != 'linesearch':
            msg = f'theta and tau_init only apply to linesearch, not {self.name}'
            raise ValueError(msg)
        return self


class OutputSpec(BaseModel):
    """CSV destination, none for a summary only run, and the DEBUG logging period."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    csv_path: str | None = None
    log_every: PositiveInt = 100


class RunConfig(BaseModel):
    """
    .. admonition:: Complete run description

        ``wrappers`` are folded into the solver configuration, so the
        exclusivity of ``inertia`` and ``overrelax`` is checked on the
        combination. ``nl`` overrides the step parameters of the
        nonlinear instance for ``algo = "nlpdps"``.

    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    problem: ProblemSpec
    algo: Literal['pp', 'fb', 'drs', 'pdps', 'pdes', 'admm', 'padmm', 'nlpdps']
    wrappers: list[WrapperSpec] = Field(default_factory=list)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    nl: NLStepParams | None = None
    outputs: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode='after')
    def _check_combination(self) -> Self:
        names = [w.name for w in self.wrappers]
        if len(set(names)) != len(names):
            msg = 'each wrapper may appear once'
            raise ValueError(msg)
        if self.algo == 'nlpdps' and self.problem.name != 'nl':
            msg = 'nlpdps runs only on the nl problem'
            raise ValueError(msg)
        if self.problem.name == 'nl' and self.algo != 'nlpdps':
            msg = 'the nl problem needs algo nlpdps'
            raise ValueError(msg)
        try:
            self.solver_config()
        except ValidationError as exc:
            msg = f'solver with wrappers: {exc.errors()[0]["msg"]}'
            raise ValueError(msg) from None
        return self

    def solver_config(self) -> SolverConfig:
        """``solver`` with the wrappers and the output period merged in."""
        update: dict[str, Any] = {'log_every': self.outputs.log_every}
        for w in self.wrappers:
            match w.name:
                case 'overrelax':
                    update['overrelax'] = True
                    if w.lambda_ is not None:
                        update['overrelax_lambda'] = w.lambda_
                case 'inertia':
                    update['inertia'] = True
                case 'linesearch':
                    update['linesearch'] = True
                    if w.theta is not None:
                        update['ls_theta'] = w.theta
                    if w.tau_init is not None:
                        update['ls_tau_init'] = w.tau_init
        return SolverConfig.model_validate(self.solver.model_dump() | update)

    def with_seed(self, seed: int) -> 'RunConfig':
        """Copy with the problem and solver seeds replaced."""
        params = dict(self.problem.params)
        key = _SEED_KEYS.get(self.problem.name)
        if key is not None:
            params[key] = seed
        return self.model_copy(
            update={
                'problem': self.problem.model_copy(update={'params': params}),
                'solver': self.solver.model_copy(update={'seed': seed}),
            }
        )


def load_config(path: str | Path, env: Mapping[str, str] | None = None) -> RunConfig:
    """
    Read and validate a UTF-8 JSON run configuration.

    :raises pydantic.ValidationError: On schema violations.
    :raises ValueError: When ``PROXKIT_SEED`` is not an integer.
    :raises OSError: When the file cannot be read.

    """
    cfg = RunConfig.model_validate_json(Path(path).read_text(encoding='utf-8'))
    env = os.environ if env is None else env
    raw = env.get(SEED_ENV)
    if raw is not None and raw.strip():
        try:
            seed = int(raw)
        except ValueError:
            msg = f'{SEED_ENV} must be an integer, got {raw!r}'
            raise ValueError(msg) from None
        cfg = cfg.with_seed(seed)
    return cfg
