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
from pythonic_fp.proxkit.core import SmoothFn, unknown
from pythonic_fp.proxkit.errors import AdmissibilityError, ConvergenceError
from pythonic_fp.proxkit.prox import half_sq_norm, l1_norm, zero
from pythonic_fp.proxkit.splitting import (
    SolverState,
    backtrack_linesearch,
    fb_step,
    fista_lambda,
    inertia_wrap,
    inertial_lambdas,
    linesearch_fb_step,
    overrelax_lower_bound,
    overrelax_wrap,
    pp_step,
)


class TestOverRelaxation:
    """Over-relaxation of a base step"""

    def test_unit_lambda_is_the_plain_step(self) -> None:
        rng = np.random.default_rng(0)
        A = rng.standard_normal((4, 4))
        F = SmoothFn.least_squares(A, rng.standard_normal(4))
        lip = F.lipschitz
        assert isinstance(lip, float)
        G = l1_norm(0.3)
        plain = lambda s: fb_step(s, G, F, 1.0 / lip)
        wrapped = overrelax_wrap(plain, 1.0)
        s1 = s2 = SolverState(x=rng.standard_normal(4))
        for _ in range(50):
            s1, s2 = plain(s1), wrapped(s2)
            assert np.allclose(s1.x, s2.x, rtol=0.0, atol=1e-14)
            assert s2.z is not None and np.array_equal(s2.z, s2.x)

    def test_hand_step(self) -> None:
        step = overrelax_wrap(lambda s: pp_step(s, half_sq_norm(), 1.0), 0.5)
        out = step(SolverState(x=np.array([1.0])))
        assert out.x[0] == 0.5
        assert out.z is not None and out.z[0] == 0.0
        assert out.lambda_k == 0.5

    def test_fixed_point_stays(self) -> None:
        step = overrelax_wrap(lambda s: pp_step(s, l1_norm(), 1.0), 0.7)
        state = SolverState(x=np.zeros(3))
        for _ in range(5):
            state = step(state)
        assert not np.any(state.x)
        assert state.z is not None and not np.any(state.z)

    def test_lower_bounds(self) -> None:
        assert overrelax_lower_bound('pp') == 0.5
        assert overrelax_lower_bound('fb', tau=1.0, lipschitz=1.0) == 1.0
        assert overrelax_lower_bound('fb', tau=1.0, lipschitz=0.0) == 0.5
        lb = overrelax_lower_bound('pdps', tau=1.0, sigma=0.5, knorm=1.0, lipschitz=1.0)
        assert math.isclose(lb, 0.25 * (1.0 + math.sqrt(17.0)))
        try:
            overrelax_lower_bound('pdps', tau=1.0, sigma=1.0, knorm=1.0)
        except AdmissibilityError:
            assert True
        else:
            assert False
        try:
            overrelax_lower_bound('drs')
        except ValueError:
            assert True
        else:
            assert False

    def test_schedule_rules(self) -> None:
        base = lambda s: pp_step(s, half_sq_norm(), 1.0)
        below = overrelax_wrap(base, 0.4)
        try:
            below(SolverState(x=np.ones(1)))
        except AdmissibilityError as ae:
            assert 'below' in str(ae)
        else:
            assert False
        growing = overrelax_wrap(base, lambda k: 0.5 + 0.1 * k)
        state = growing(SolverState(x=np.ones(1)))
        try:
            growing(state)
        except AdmissibilityError as ae:
            assert 'must not increase' in str(ae)
        else:
            assert False


class TestInertia:
    """The inertial parameter sequence and wrapper"""

    def test_first_lambda(self) -> None:
        assert math.isclose(fista_lambda(1.0), 2.0 / (1.0 + math.sqrt(5.0)))
        assert abs(fista_lambda(1.0) - 0.618034) < 1e-6

    def test_lambda_bounds(self) -> None:
        lams = inertial_lambdas(10_000)
        assert len(lams) == 10_001
        assert lams[0] == 1.0
        for k in range(1, len(lams)):
            inv, prev = 1.0 / lams[k], 1.0 / lams[k - 1]
            assert inv >= 0.5 * (k + 2) * (1.0 - 1e-12)
            assert math.isclose(inv * inv - inv, prev * prev, rel_tol=1e-10)
            assert lams[k] < lams[k - 1]

    def test_first_step_is_plain(self) -> None:
        G, F = l1_norm(0.2), SmoothFn.quadratic(np.diag([1.0, 2.0]), np.ones(2))
        plain = lambda s: fb_step(s, G, F, 0.5)
        state = SolverState(x=np.array([3.0, -1.0]))
        out = inertia_wrap(plain)(state)
        assert np.array_equal(out.x, plain(state).x)
        assert out.x_prev is not None and np.array_equal(out.x_prev, state.x)
        assert out.lambda_prev == 1.0
        assert math.isclose(out.lambda_k, fista_lambda(1.0))

    def test_second_step_is_plain(self) -> None:
        step = inertia_wrap(lambda s: pp_step(s, half_sq_norm(), 1.0))
        s1 = step(SolverState(x=np.array([1.0])))
        assert s1.x[0] == 0.5
        s2 = step(s1)
        assert s2.x[0] == 0.25

    def test_momentum_sequence(self) -> None:
        step = inertia_wrap(lambda s: pp_step(s, half_sq_norm(), 1.0))
        lams = inertial_lambdas(4)
        xs = [1.0, 0.5]
        for k in range(1, 4):
            alpha = lams[k] * (1.0 / lams[k - 1] - 1.0)
            xs.append(0.5 * (xs[k] + alpha * (xs[k] - xs[k - 1])))
        state = SolverState(x=np.array([1.0]))
        for k in range(1, 5):
            state = step(state)
            assert math.isclose(state.x[0], xs[k], rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(state.lambda_k, lams[4])


class TestLineSearch:
    """Backtracking line search"""

    def test_quadratic_accepts_inverse_lipschitz(self) -> None:
        F = SmoothFn.quadratic(3.0 * np.eye(2)).with_lipschitz(unknown)
        x = np.array([1.0, -2.0])
        x_next, tau = backtrack_linesearch(F, zero(), x, 1.0 / 3.0, 0.5)
        assert tau == 1.0 / 3.0
        assert np.allclose(x_next, np.zeros(2), atol=1e-15)

    def test_zero_smooth_part_accepts_any_step(self) -> None:
        x = np.array([2.0, -0.1])
        x_next, tau = backtrack_linesearch(SmoothFn.zero(), l1_norm(), x, 5.0, 0.5)
        assert tau == 5.0
        assert np.array_equal(x_next, l1_norm().prox(5.0, x))

    def test_backtracking_bound(self) -> None:
        F = SmoothFn.quadratic(np.diag([4.0, 1.0]), np.array([1.0, 1.0])).with_lipschitz(unknown)
        rng = np.random.default_rng(3)
        for _ in range(20):
            _, tau = backtrack_linesearch(F, l1_norm(0.1), rng.standard_normal(2), 1.0, 0.5)
            assert tau in (1.0, 0.5, 0.25)
            assert tau >= 0.125

    def test_inertial_acceptance(self) -> None:
        F = SmoothFn.quadratic(np.diag([4.0, 1.0]), np.array([1.0, -1.0])).with_lipschitz(unknown)
        G = l1_norm(0.1)
        rng = np.random.default_rng(5)
        for _ in range(20):
            x_k, x_prev = rng.standard_normal(2), rng.standard_normal(2)
            x_bar = x_k + 0.5 * (x_k - x_prev)
            x_next, tau = backtrack_linesearch(F, G, x_bar, 2.0, 0.5)
            d = x_next - x_bar
            lhs = float(np.dot(F.grad(x_bar), x_next - x_k))
            rhs = F.value(x_next) - F.value(x_k) - float(np.dot(d, d)) / (2.0 * tau)
            assert lhs >= rhs - 1e-10

    def test_failure(self) -> None:
        F = SmoothFn.quadratic(1e6 * np.eye(1))
        try:
            backtrack_linesearch(F, zero(), np.array([1.0]), 1.0, 0.5, max_halvings=3)
        except ConvergenceError as ce:
            assert ce.last_value == 0.125
        else:
            assert False
        for theta in (0.0, 1.0):
            try:
                backtrack_linesearch(F, zero(), np.array([1.0]), 1.0, theta)
            except ValueError:
                assert True
            else:
                assert False

    def test_linesearch_step_records_tau(self) -> None:
        F = SmoothFn.quadratic(np.diag([4.0, 1.0])).with_lipschitz(unknown)
        out = linesearch_fb_step(SolverState(x=np.array([1.0, 1.0])), zero(), F, 1.0, 0.5)
        assert out.tau_k in (0.5, 0.25)
        assert out.k == 1
