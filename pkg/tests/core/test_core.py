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
from pythonic_fp.proxkit.core import (
    LinOp,
    NonlinearOp,
    SmoothFn,
    as_point,
    check_adjoint,
    check_lipschitz,
    check_strong_convexity,
    estimate_op_norm,
    grad_check,
    inner,
    is_known,
    jacobian_check,
    unknown,
)
from pythonic_fp.proxkit.errors import ConvergenceError, DimensionError


class TestPoints:
    """Points and the Euclidean structure"""

    def test_inner(self) -> None:
        assert inner(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0
        assert inner(np.array([0.0, 0.0]), np.array([5.0, -7.0])) == 0.0
        x = np.random.default_rng(3).standard_normal(7)
        assert inner(x, x) >= 0.0
        try:
            inner(np.zeros(2), np.zeros(3))
        except DimensionError:
            assert True
        else:
            assert False

    def test_as_point(self) -> None:
        xs = [1, 2, 3]
        x = as_point(xs)
        assert x.dtype == np.float64
        assert x.shape == (3,)
        assert as_point(2.5).shape == (1,)
        y = np.array([1.0, 2.0])
        z = as_point(y)
        z[0] = 5.0
        assert y[0] == 1.0
        for bad in ([], [[1.0, 2.0], [3.0, 4.0]]):
            try:
                as_point(bad)
            except DimensionError:
                assert True
            else:
                assert False
        try:
            as_point([1.0, math.nan])
        except ValueError:
            assert True
        else:
            assert False


class TestLinOp:
    """Operators, adjoints and norm estimates"""

    def test_norm_estimates(self) -> None:
        tol = 1e-6
        assert abs(estimate_op_norm(LinOp.identity(3), tol) - 1.0) <= 2 * tol
        diag = LinOp.diag([1.0, 2.0, 3.0])
        assert abs(estimate_op_norm(diag, tol) - 3.0) <= 3.0 * 10 * tol
        assert estimate_op_norm(LinOp.zero(2, 3), tol) == 0.0
        assert diag.norm() == 3.0

    def test_norm_estimate_of_a_matrix(self) -> None:
        mat = np.array([[3.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        K = LinOp.from_matrix(mat)
        est = K.norm()
        exact = float(np.linalg.norm(mat, 2))
        assert abs(est - exact) <= 1e-5 * exact

    def test_power_iteration_budget(self) -> None:
        mat = np.diag([1.0, 0.999999])
        try:
            estimate_op_norm(LinOp.from_matrix(mat), 1e-15, max_iter=3, seed=1)
        except ConvergenceError as exc:
            assert 0.0 < exc.last_value <= 1.0 + 1e-12
        else:
            assert False

    def test_adjoints(self) -> None:
        rng = np.random.default_rng(1)
        K = LinOp.from_matrix(rng.standard_normal((5, 3)))
        assert check_adjoint(K) < 1e-12
        Kt = K.adjoint_op()
        assert Kt.in_dim == 5 and Kt.out_dim == 3
        assert np.allclose(Kt.to_matrix(), K.to_matrix().T)
        assert check_adjoint(LinOp.identity(4, -2.0)) == 0.0

    def test_dimension_checks(self) -> None:
        K = LinOp.identity(3)
        try:
            K.apply(np.zeros(4))
        except DimensionError:
            assert True
        else:
            assert False
        try:
            LinOp.from_matrix(np.zeros(3))
        except DimensionError:
            assert True
        else:
            assert False

    def test_scaled_identity(self) -> None:
        K = LinOp.identity(2, 3.0)
        assert K.scale == 3.0
        assert K.norm() == 3.0
        assert np.array_equal(K(np.array([1.0, -1.0])), np.array([3.0, -3.0]))
        assert LinOp.diag([1.0, 2.0]).scale is None


class TestSmoothFn:
    """Smooth functions and their constants"""

    def test_grad_check_examples(self) -> None:
        half = SmoothFn.quadratic(np.eye(4))
        assert grad_check(half, np.array([1.0, -2.0, 0.5, 3.0])) < 1e-8
        rng = np.random.default_rng(5)
        A, b = rng.standard_normal((5, 5)), rng.standard_normal(5)
        ls = SmoothFn.least_squares(A, b)
        x = rng.standard_normal(5)
        assert grad_check(ls, x) < 1e-6
        assert np.allclose(ls.grad(x), A.T @ (A @ x - b))
        wrong = SmoothFn(lambda x: 0.5 * inner(x, x), lambda x: 1.1 * x, lipschitz=1.0)
        assert grad_check(wrong, np.array([1.0, 2.0, 3.0])) > 0.05

    def test_grad_check_rejects_nan(self) -> None:
        f = SmoothFn(lambda x: math.nan, lambda x: np.zeros_like(x))
        try:
            grad_check(f, np.zeros(2))
        except ValueError:
            assert True
        else:
            assert False

    def test_quadratic_constants(self) -> None:
        Q = np.diag([1.0, 4.0])
        f = SmoothFn.quadratic(Q, np.array([1.0, 1.0]), 2.0)
        assert f.lipschitz == 4.0
        assert f.strong_convexity == 1.0
        assert f.value(np.zeros(2)) == 2.0
        assert np.array_equal(f.grad(np.zeros(2)), np.array([-1.0, -1.0]))
        assert np.array_equal(f.hessian_matrix(np.zeros(2)), Q)
        assert check_lipschitz(f, 2) <= 4.0 + 1e-12
        assert check_strong_convexity(f, 2) >= 1.0 - 1e-12

    def test_hidden_lipschitz(self) -> None:
        f = SmoothFn.least_squares(np.eye(3), np.ones(3))
        assert is_known(f.lipschitz)
        g = f.with_lipschitz(unknown)
        assert not is_known(g.lipschitz)
        assert g.strong_convexity == f.strong_convexity
        assert g.has_hessian

    def test_wide_least_squares_not_strongly_convex(self) -> None:
        A = np.random.default_rng(2).standard_normal((2, 4))
        assert SmoothFn.least_squares(A, np.zeros(2)).strong_convexity == 0.0

    def test_zero(self) -> None:
        f = SmoothFn.zero()
        assert f.value(np.ones(3)) == 0.0
        assert f.lipschitz == 0.0
        assert grad_check(f, np.ones(3)) == 0.0


class TestNonlinearOp:
    """Nonlinear operators"""

    def test_jacobian(self) -> None:
        K = NonlinearOp(
            lambda x: np.array([x[0] * x[0], x[1]]),
            lambda x, h: np.array([2.0 * x[0] * h[0], h[1]]),
            lambda x, y: np.array([2.0 * x[0] * y[0], y[1]]),
            2,
            2,
            lipschitz_jacobian=2.0,
        )
        x = np.array([0.7, -0.2])
        assert jacobian_check(K, x) < 1e-6
        J = K.linearize(x)
        assert check_adjoint(J) < 1e-12
        assert np.allclose(J.to_matrix(), np.diag([1.4, 1.0]))

    def test_from_linop(self) -> None:
        A = LinOp.from_matrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
        K = NonlinearOp.from_linop(A)
        assert K.lipschitz_jacobian == 0.0
        x = np.array([1.0, 1.0])
        assert np.array_equal(K(x), np.array([3.0, 1.0]))
        assert np.array_equal(K.jacobian_apply(np.zeros(2), x), A(x))
