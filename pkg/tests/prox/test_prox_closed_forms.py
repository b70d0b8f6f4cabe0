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


import numpy as np
from pythonic_fp.proxkit.core import SmoothFn
from pythonic_fp.proxkit.prox import (
    abs_value,
    box_indicator,
    half_sq_norm,
    moreau_decompose,
    moreau_envelope,
    prox_abs,
    prox_affine_precompose,
    prox_conjugate,
    prox_l1,
    prox_l2norm,
    prox_of_smooth,
    prox_quadratic,
    prox_separable_sum,
    proj_box,
    proj_interval,
    proj_linf_ball,
    zero,
)


class TestScalarClosedForms:
    """Closed forms on the real line"""

    def test_prox_quadratic(self) -> None:
        assert prox_quadratic(3.0, 2.0) == 1.0
        assert prox_quadratic(0.0, 1.0) == 0.0
        assert prox_quadratic(-4.0, 1.0) == -2.0

    def test_prox_abs(self) -> None:
        assert prox_abs(2.0, 0.5) == 1.5
        assert prox_abs(0.3, 0.5) == 0.0
        assert prox_abs(0.0, 7.0) == 0.0
        assert prox_abs(-0.5, 0.5) == 0.0
        assert prox_abs(-2.0, 0.5) == -1.5

    def test_proj_interval(self) -> None:
        assert proj_interval(2.0, -1.0, 1.0) == 1.0
        assert proj_interval(0.5, -1.0, 1.0) == 0.5
        assert proj_interval(-3.0, -1.0, 1.0) == -1.0
        try:
            proj_interval(0.0, 1.0, -1.0)
        except ValueError:
            assert True
        else:
            assert False

    def test_step_must_be_positive(self) -> None:
        for gamma in (0.0, -1.0):
            try:
                prox_abs(1.0, gamma)
            except ValueError as ve:
                assert 'positive' in str(ve)
            else:
                assert False


class TestVectorClosedForms:
    """Componentwise and blockwise closed forms"""

    def test_prox_l1(self) -> None:
        got = prox_l1(np.array([2.0, -0.3, -1.5]), 0.5)
        assert np.array_equal(got, np.array([1.5, 0.0, -1.0]))
        assert np.array_equal(prox_l1(np.zeros(3), 1.0), np.zeros(3))
        x = np.random.default_rng(0).standard_normal(20)
        assert np.max(np.abs(prox_l1(x, 1e-9) - x)) <= 1e-9

    def test_proj_linf_ball(self) -> None:
        assert np.array_equal(proj_linf_ball(np.array([3.0, -0.5])), np.array([1.0, -0.5]))
        assert np.array_equal(proj_linf_ball(np.array([-10.0, 10.0])), np.array([-1.0, 1.0]))
        x = np.array([0.2, -1.0, 0.9])
        assert np.array_equal(proj_linf_ball(x), x)

    def test_prox_l2norm(self) -> None:
        assert np.allclose(prox_l2norm(np.array([3.0, 4.0]), 1.0), np.array([2.4, 3.2]), rtol=0, atol=1e-15)
        assert np.array_equal(prox_l2norm(np.array([0.3, 0.4]), 1.0), np.zeros(2))
        assert np.array_equal(prox_l2norm(np.zeros(2), 0.5), np.zeros(2))

    def test_proj_box(self) -> None:
        got = proj_box(np.array([-2.0, 0.0, 3.0]), -1.0, np.array([1.0, 1.0, 2.0]))
        assert np.array_equal(got, np.array([-1.0, 0.0, 2.0]))


class TestConjugatesAndEnvelopes:
    """Moreau decomposition, calculus helpers and envelopes"""

    def test_prox_conjugate(self) -> None:
        assert np.array_equal(prox_conjugate(abs_value(), 1.0, np.array([2.0])), np.array([1.0]))
        assert np.array_equal(prox_conjugate(half_sq_norm(), 1.0, np.array([3.0])), np.array([1.5]))
        assert np.array_equal(prox_conjugate(zero(), 1.0, np.zeros(2)), np.zeros(2))

    def test_moreau_decompose(self) -> None:
        p, q = moreau_decompose(abs_value(), np.array([2.0]))
        assert p[0] == 1.0 and q[0] == 1.0
        p, q = moreau_decompose(abs_value(), np.array([0.5]))
        assert p[0] == 0.0 and q[0] == 0.5
        p, q = moreau_decompose(half_sq_norm(), np.zeros(3))
        assert not np.any(p) and not np.any(q)

    def test_prox_separable_sum(self) -> None:
        got = prox_separable_sum([abs_value(), half_sq_norm()], [1, 1], 1.0, np.array([2.0, 3.0]))
        assert np.array_equal(got, np.array([1.0, 1.5]))
        x = np.random.default_rng(1).standard_normal(4)
        assert np.array_equal(prox_separable_sum([zero(), zero()], [2, 2], 0.7, x), x)
        rng = np.random.default_rng(2)
        f = box_indicator(-0.5, 0.5)
        for _ in range(100):
            y = rng.standard_normal(3)
            assert np.array_equal(prox_separable_sum([f], [3], 1.0, y), f.prox(1.0, y))

    def test_prox_affine_precompose(self) -> None:
        rng = np.random.default_rng(3)
        f = abs_value()
        for _ in range(20):
            x = rng.standard_normal(1)
            assert np.allclose(prox_affine_precompose(f, 1.0, 0.0, 0.8, x), f.prox(0.8, x))
        got = prox_affine_precompose(half_sq_norm(), 2.0, 0.0, 1.0, np.array([1.0]))
        assert abs(got[0] - 0.2) <= 1e-15
        got = prox_affine_precompose(box_indicator(-1.0, 1.0), 1.0, 3.0, 1.0, np.array([0.0]))
        assert got[0] == -2.0
        try:
            prox_affine_precompose(f, 0.0, 0.0, 1.0, np.array([1.0]))
        except ValueError:
            assert True
        else:
            assert False

    def test_huber_envelope(self) -> None:
        env = moreau_envelope(abs_value(), 1.0, np.array([2.0]))
        assert env.env_value == 1.5
        assert env.prox_point[0] == 1.0
        assert env.yosida_grad[0] == 1.0
        env = moreau_envelope(abs_value(), 1.0, np.array([0.5]))
        assert env.env_value == 0.125
        assert env.yosida_grad[0] == 0.5
        env = moreau_envelope(half_sq_norm(), 2.0, np.zeros(3))
        assert env.env_value == 0.0
        assert not np.any(env.yosida_grad)

    def test_prox_of_smooth(self) -> None:
        x = np.array([1.0, -2.0])
        assert not np.any(prox_of_smooth(SmoothFn.quadratic(np.eye(2)), x))
        assert np.array_equal(prox_of_smooth(SmoothFn.zero().with_lipschitz(1.0), x), x)
        rng = np.random.default_rng(4)
        A, b = rng.standard_normal((4, 4)), rng.standard_normal(4)
        f = SmoothFn.least_squares(A, b)
        lip = f.lipschitz
        assert isinstance(lip, float)
        assert np.allclose(prox_of_smooth(f, x), x - A.T @ (A @ x - b) / lip)
        try:
            prox_of_smooth(SmoothFn.zero(), x)
        except ValueError:
            assert True
        else:
            assert False
