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


import math
import numpy as np
from pydantic import ValidationError
from pythonic_fp.proxkit.core import LinOp
from pythonic_fp.proxkit.diagnostics import fejer_check, pdps_metric
from pythonic_fp.proxkit.errors import AdmissibilityError, DimensionError
from pythonic_fp.proxkit.problems import make_boxqp, make_lasso, make_tv1d, with_hidden_lipschitz
from pythonic_fp.proxkit.prox import half_sq_norm, l1_norm, sq_distance, zero
from pythonic_fp.proxkit.splitting import AdmmProblem, CompositeProblem, SolverConfig, run


class TestSolverConfig:
    """Validation of solver configurations"""

    def test_defaults(self) -> None:
        cfg = SolverConfig()
        assert cfg.max_iter == 1000
        assert cfg.tol == 1e-8
        assert cfg.accel == 'none'
        assert cfg.tau0 is None

    def test_rejections(self) -> None:
        for bad in ({'inertia': True, 'overrelax': True}, {'tau0': -1.0}, {'ls_theta': 1.0},
                    {'overrelax_lambda': 0.4}, {'accel': 'fast'}, {'unknown_key': 1}):
            try:
                SolverConfig.model_validate(bad)
            except ValidationError:
                assert True
            else:
                assert False


class TestRun:
    """The solver driver"""

    def test_trivial_problem_stops_at_once(self) -> None:
        prob = CompositeProblem(3, zero(), name='nothing')
        trace = run(prob, 'pp', SolverConfig())
        assert trace.converged
        assert len(trace) == 1
        assert trace[0].k == 1
        assert trace.last_residual == 0.0

    def test_fb_on_lasso(self) -> None:
        inst = make_lasso(10, 20, 0.1, seed=1)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem)
        trace = run(prob, 'fb', SolverConfig(max_iter=100_000, tol=1e-8))
        assert trace.converged
        assert trace.final is not None
        assert inst.reference is not None
        assert np.allclose(trace.final.x, inst.reference[0], atol=1e-6)
        assert trace.column('sigma') == [None] * len(trace)

    def test_pdps_on_tv1d_is_fejer_monotone(self) -> None:
        inst = make_tv1d(30, 0.2)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        tau = sigma = math.sqrt(0.99) / 2.0
        trace = run(prob, 'pdps', SolverConfig(tau0=tau, sigma0=sigma, max_iter=300, tol=0.0),
                    keep_iterates=True, reference=inst.reference)
        ok, where = fejer_check(trace, inst.reference, metric=pdps_metric(prob.op(), tau, sigma))
        assert ok, where
        dists = trace.values('dist_to_ref')
        assert dists[-1] < dists[0]
        assert trace[0].sigma == sigma
        assert trace[0].omega == 1.0

    def test_pdps_strong_primal_acceleration(self) -> None:
        inst = make_tv1d(30, 0.2)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        cfg = SolverConfig(accel='strong_primal', max_iter=200, tol=0.0)
        trace = run(prob, 'pdps', cfg, reference=inst.reference[0])
        taus = trace.column('tau')
        sigmas = trace.column('sigma')
        first, last = taus[0], taus[-1]
        assert isinstance(first, float) and isinstance(last, float)
        assert last < first
        products = [t * s for t, s in zip(taus, sigmas) if t is not None and s is not None]
        assert max(products) - min(products) <= 1e-12 * max(products)

    def test_drs_reaches_the_shrinkage(self) -> None:
        c = np.array([2.0, -0.2, 0.7, -3.0])
        prob = CompositeProblem(4, l1_norm(0.5), F0=sq_distance(c))
        trace = run(prob, 'drs', SolverConfig(max_iter=10_000, tol=1e-12))
        assert trace.converged and trace.final is not None
        assert np.allclose(trace.final.x, np.array([1.5, 0.0, 0.2, -2.5]), atol=1e-10)

    def test_admm_and_padmm(self) -> None:
        prob = AdmmProblem(half_sq_norm(), half_sq_norm(), LinOp.identity(1), LinOp.identity(1), np.array([2.0]))
        for algo in ('admm', 'padmm'):
            trace = run(prob, algo, SolverConfig(max_iter=5000, tol=1e-12))
            assert trace.converged, algo
            assert trace.final is not None
            assert abs(trace.final.x[0] - 1.0) <= 1e-9

    def test_composite_as_admm(self) -> None:
        inst = make_tv1d(20, 0.3)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        trace = run(prob, 'padmm', SolverConfig(max_iter=20_000, tol=1e-10))
        assert trace.final is not None
        assert np.allclose(trace.final.x, inst.reference[0], atol=1e-6)

    def test_wrapped_fb(self) -> None:
        inst = make_boxqp(10, 2)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        x_ref = inst.reference[0]
        for cfg in (SolverConfig(inertia=True, max_iter=3000, tol=1e-11),
                    SolverConfig(overrelax=True, max_iter=3000, tol=1e-11)):
            trace = run(prob, 'fb', cfg)
            assert trace.final is not None
            assert np.allclose(trace.final.x, x_ref, atol=1e-8)
            assert all(lam is not None for lam in trace.column('lambda'))

    def test_linesearch_with_hidden_constant(self) -> None:
        inst = with_hidden_lipschitz(make_lasso(8, 16, 0.1, seed=2))
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        trace = run(prob, 'fb', SolverConfig(linesearch=True, inertia=True, max_iter=20_000, tol=1e-10))
        assert trace.final is not None
        assert np.allclose(trace.final.x, inst.reference[0], atol=1e-6)

    def test_shape_errors(self) -> None:
        prob = CompositeProblem(2, l1_norm(), E=None)
        try:
            run(prob, 'pp', SolverConfig(), x0=np.zeros(3))
        except DimensionError:
            assert True
        else:
            assert False
        try:
            run(prob, 'drs', SolverConfig())
        except ValueError as ve:
            assert 'Douglas-Rachford' in str(ve)
        else:
            assert False
        try:
            run(prob, 'pdps', SolverConfig(linesearch=True))
        except ValueError as ve:
            assert 'line search' in str(ve)
        else:
            assert False
        try:
            run(prob, 'newton', SolverConfig())
        except ValueError:
            assert True
        else:
            assert False

    def test_inadmissible_steps(self) -> None:
        prob = CompositeProblem(2, l1_norm(), F0=half_sq_norm(), K=LinOp.identity(2, 2.0))
        try:
            run(prob, 'pdps', SolverConfig(tau0=1.0, sigma0=1.0))
        except AdmissibilityError as ae:
            assert 'step-size admissibility' in str(ae)
        else:
            assert False
        try:
            run(prob, 'pdps', SolverConfig(inertia=True))
        except ValueError as ve:
            assert 'inertia' in str(ve)
        else:
            assert False
