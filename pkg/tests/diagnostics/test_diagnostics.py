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
from pythonic_fp.proxkit.core import LinOp
from pythonic_fp.proxkit.diagnostics import (
    ErgodicMonitor,
    duality_gap,
    ergodic_average,
    face_distance,
    fb_strong_bound,
    fb_value_bound,
    fejer_check,
    fista_value_bound,
    fit_rate,
    lagrangian_gap,
    make_face_distance,
    pdps_gap_bound,
    testing_weights,
    value_gap_monitor,
)
from pythonic_fp.proxkit.problems import make_lasso, make_tv1d
from pythonic_fp.proxkit.splitting import CompositeProblem, SolverConfig, run
from pythonic_fp.proxkit.trace import Trace


def p(*xs: float) -> np.ndarray:
    return np.array(xs, dtype=np.float64)


class TestFitRate:
    """Empirical rate fits"""

    def test_sublinear(self) -> None:
        fit = fit_rate([5.0 / k for k in range(1, 1001)])
        assert fit.model == 'power'
        assert abs(fit.slope + 1.0) <= 0.05
        assert fit.r2 >= 0.999
        assert fit.window == (101, 1000)
        assert fit.describe().startswith('power slope=-1.00±')

    def test_linear(self) -> None:
        fit = fit_rate([0.9**k for k in range(1, 201)])
        assert fit.model == 'linear'
        assert abs(fit.factor - 0.9) <= 0.005
        assert fit.describe().startswith('linear μ=0.900±')

    def test_constant(self) -> None:
        fit = fit_rate([2.0] * 50)
        assert fit.model == 'power'
        assert fit.slope == 0.0
        assert fit.factor == 1.0

    def test_superlinear(self) -> None:
        fit = fit_rate([10.0 ** -(2**k) for k in range(1, 7)])
        assert fit.model == 'superlinear'
        assert fit.factor <= 1e-30
        assert fit.describe().startswith('superlinear')

    def test_window_and_iteration_numbers(self) -> None:
        vals = [1.0 / k**2 for k in range(1, 501)]
        fit = fit_rate(vals, (10, 100))
        assert fit.window == (10, 100)
        assert abs(fit.slope + 2.0) <= 1e-8
        ks = [2**j for j in range(1, 12)]
        fit = fit_rate([1.0 / k**2 for k in ks], ks=ks, burn_in=0.0)
        assert fit.model == 'power'
        assert abs(fit.slope + 2.0) <= 1e-8

    def test_infinite_values_dropped(self) -> None:
        vals = [1.0 / k for k in range(1, 101)]
        vals[50] = math.inf
        fit = fit_rate(vals)
        assert fit.model == 'power'
        assert abs(fit.slope + 1.0) <= 1e-8

    def test_errors(self) -> None:
        bad_calls = (
            lambda: fit_rate([1.0, 0.5, -0.1, 0.01], burn_in=0.0),
            lambda: fit_rate([1.0, 0.5]),
            lambda: fit_rate([1.0] * 10, (0, 5)),
            lambda: fit_rate([1.0] * 10, (5, 4)),
            lambda: fit_rate([1.0, 0.5, 0.25], ks=[1, 3, 2]),
            lambda: fit_rate([1.0, 0.5, 0.25], ks=[0, 1, 2]),
        )
        for call in bad_calls:
            try:
                call()
            except ValueError:
                assert True
            else:
                assert False


class TestErgodic:
    """Averages and their weights"""

    def test_uniform_and_weighted(self) -> None:
        pts = [p(0.0, 0.0), p(2.0, 4.0)]
        assert np.allclose(ergodic_average(pts), p(1.0, 2.0))
        assert np.allclose(ergodic_average(pts, [1.0, 3.0]), p(1.5, 3.0))
        assert np.allclose(ergodic_average([p(7.0)], [0.2]), p(7.0))

    def test_errors(self) -> None:
        for pts, weights in (([], None), ([p(1.0)], [1.0, 2.0]), ([p(1.0), p(2.0)], [1.0, 0.0])):
            try:
                ergodic_average(pts, weights)
            except ValueError:
                assert True
            else:
                assert False

    def test_testing_weights(self) -> None:
        assert testing_weights(0.5, 0.0, 4) == [0.5, 0.5, 0.5, 0.5]
        w = testing_weights(0.5, 1.0, 3)
        assert w[0] == 0.5
        assert math.isclose(w[1], 0.5 * math.sqrt(2.0), rel_tol=1e-14)
        assert w[2] > w[1]
        w_gap = testing_weights(0.5, 1.0, 2, gap_mode=True)
        assert math.isclose(w_gap[1], 0.5 * math.sqrt(1.5), rel_tol=1e-14)


class TestGaps:
    """Lagrangian and duality gaps"""

    def test_gaps_at_the_saddle_point(self) -> None:
        inst = make_tv1d(20, 0.2)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        ref = inst.reference
        assert abs(lagrangian_gap(prob, ref, ref)) <= 1e-12
        assert abs(duality_gap(prob, ref)) <= 1e-8
        origin = (np.zeros(20), np.zeros(19))
        assert duality_gap(prob, origin) > 0.0
        assert lagrangian_gap(prob, origin, ref) >= -1e-12

    def test_infeasible_dual_point(self) -> None:
        inst = make_tv1d(10, 0.2)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem)
        assert duality_gap(prob, (np.zeros(10), np.ones(9))) == math.inf

    def test_ergodic_monitor(self) -> None:
        inst = make_tv1d(20, 0.2)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference is not None
        ref = inst.reference
        monitor = ErgodicMonitor(prob, ref)
        try:
            monitor.point()
        except ValueError:
            assert True
        else:
            assert False
        tau = sigma = 0.99 / 2.0
        cfg = SolverConfig(tau0=tau, sigma0=sigma, max_iter=400, tol=0.0)
        trace = run(prob, 'pdps', cfg, gap_monitor=monitor)
        gaps = trace.values('gap')
        assert len(gaps) == 400
        assert min(gaps) >= -1e-9
        u0 = (np.zeros(20), np.zeros(19))
        assert gaps[-1] <= pdps_gap_bound(prob.op(), tau, sigma, u0, ref, 400) + 1e-9
        x_avg, y_avg = monitor.point()
        assert x_avg.shape == (20,) and y_avg.shape == (19,)

    def test_value_gap_monitor(self) -> None:
        inst = make_lasso(10, 20, 0.1, seed=4)
        prob = inst.composite
        assert isinstance(prob, CompositeProblem) and inst.reference_value is not None
        trace = run(prob, 'fb', SolverConfig(max_iter=300, tol=0.0),
                    gap_monitor=value_gap_monitor(prob, inst.reference_value))
        gaps = trace.values('gap')
        assert min(gaps) >= -1e-12
        assert gaps[-1] <= gaps[0]


class TestFejer:
    """Fejer monotonicity checks"""

    def test_planted_violation(self) -> None:
        seq = [p(3.0), p(2.0), p(2.5), p(1.0)]
        assert fejer_check(seq, p(0.0)) == (False, 2)
        assert fejer_check([p(3.0), p(2.0), p(1.0)], p(0.0)) == (True, None)

    def test_pairs_and_slack(self) -> None:
        seq = [(p(1.0), p(1.0)), (p(1.0), p(1.0 + 1e-12)), (p(0.0), p(0.0))]
        assert fejer_check(seq, (p(0.0), p(0.0))) == (True, None)
        assert fejer_check(seq, (p(0.0), p(0.0)), slack=0.0) == (False, 1)

    def test_slack_is_absolute(self) -> None:
        far = [p(1000.0), p(1000.0 + 1e-9)]
        assert fejer_check(far, p(0.0)) == (False, 1)
        assert fejer_check(far, p(0.0), slack=1e-8) == (True, None)

    def test_metric(self) -> None:
        seq = [p(1.0), p(0.5), p(2.0)]
        assert fejer_check(seq, p(0.0), metric=lambda dx, dy: 1.0) == (True, None)

    def test_trace_needs_iterates(self) -> None:
        try:
            fejer_check(Trace('fb'), p(0.0))
        except ValueError:
            assert True
        else:
            assert False


class TestBounds:
    """Convergence bounds and the LASSO face distance"""

    def test_bounds(self) -> None:
        assert fb_value_bound(2.0, 0.5, 4) == 1.0
        assert fista_value_bound(1.0, 1.0, 1) == 0.5
        assert fb_strong_bound(1.0, 0.5, 1.0, 2) == 0.25
        I1 = LinOp.identity(1)
        assert math.isclose(pdps_gap_bound(I1, 1.0, 1.0, (p(1.0), p(0.0)), (p(0.0), p(0.0)), 2), 0.25)

    def test_face_distance(self) -> None:
        A = np.eye(2)
        b = p(3.0, 0.5)
        x_ref = p(2.0, 0.0)
        dist = make_face_distance(A, b, 1.0, x_ref)
        assert dist(x_ref) == 0.0
        assert math.isclose(dist(p(2.5, 1.0)), math.sqrt(1.25), rel_tol=1e-12)
        assert math.isclose(face_distance(p(2.5, 1.0), A, b, 1.0, x_ref), math.sqrt(1.25), rel_tol=1e-12)

    def test_face_distance_empty_face(self) -> None:
        dist = make_face_distance(np.eye(2), p(0.5, -0.5), 1.0, p(0.0, 0.0))
        assert math.isclose(dist(p(3.0, 4.0)), 5.0, rel_tol=1e-12)
