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
Semismooth Newton
=================

.. admonition:: Newton derivatives and the generalized Newton iteration

    - diagonal Newton derivatives of soft shrinkage and box projections
    - ``NewtonDifferentiable``: residual map with a Newton derivative
    - forward-backward fixed point residual as a Newton differentiable map
    - ``ssn_solve``: local semismooth Newton with superlinear instrumentation

Boundary points ``|x_i| = gamma`` and ``x_i in {a, b}`` take the
weight ``1``. Newton systems are solved by dense LU with partial
pivoting, no globalization is attempted.

"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
import logging
import math
from typing import TYPE_CHECKING
import numpy as np
import numpy.typing as npt
from scipy.linalg import lu_factor, lu_solve
from pythonic_fp.proxkit.core import Point, norm
from pythonic_fp.proxkit.errors import ConvergenceError, SingularSystemError

if TYPE_CHECKING:
    from pythonic_fp.proxkit.splitting import CompositeProblem

__all__ = [
    'COND_LIMIT',
    'dn_softshrink',
    'dn_proj_box',
    'NewtonDifferentiable',
    'SSNReport',
    'build_fb_residual',
    'ssn_solve',
    'approximation_ratios',
    'fb_warm_start',
    'newton_root',
]

log = logging.getLogger(__name__)

COND_LIMIT = 1e14

type Matrix = npt.NDArray[np.float64]


def dn_softshrink(x: Point, gamma: float) -> Point:
    """Weights ``1`` where ``|x_i| >= gamma``, ``0`` elsewhere."""
    if not gamma > 0.0:
        msg = f'soft shrinkage threshold must be positive, got {gamma}'
        raise ValueError(msg)
    return (np.abs(x) >= gamma).astype(np.float64)


def dn_proj_box(x: Point, a: float | Point, b: float | Point) -> Point:
    """Weights ``1`` where ``a_i <= x_i <= b_i``, ``0`` elsewhere."""
    if np.any(np.asarray(a) > np.asarray(b)):
        msg = 'dn_proj_box needs a <= b componentwise'
        raise ValueError(msg)
    return ((x >= a) & (x <= b)).astype(np.float64)


def _factor(mat: Matrix, iteration: int) -> tuple[Matrix, npt.NDArray[np.int32]]:
    cond = float(np.linalg.cond(mat))
    if not math.isfinite(cond) or cond > COND_LIMIT:
        msg = f'singular Newton system at iteration {iteration}, condition {cond:.3e}'
        raise SingularSystemError(msg, iteration, cond)
    return lu_factor(mat)


class NewtonDifferentiable:
    """
    .. admonition:: Newton differentiable residual map

        A map ``F: R^n -> R^n`` together with directional products
        ``(x, h) -> D_N F(x) h``. The Newton system is solved on the
        dense derivative assembled column by column.

    """
    __slots__ = '_residual', '_deriv', '_dim'

    def __init__(
        self,
        residual: Callable[[Point], Point],
        newton_deriv_apply: Callable[[Point, Point], Point],
        dim: int,
    ) -> None:
        self._residual = residual
        self._deriv = newton_deriv_apply
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    def residual(self, x: Point) -> Point:
        return np.asarray(self._residual(x), dtype=np.float64)

    def newton_deriv_apply(self, x: Point, h: Point) -> Point:
        return np.asarray(self._deriv(x, h), dtype=np.float64)

    def newton_matrix(self, x: Point) -> Matrix:
        mat = np.empty((self._dim, self._dim))
        e = np.zeros(self._dim)
        for jj in range(self._dim):
            e[jj] = 1.0
            mat[:, jj] = self.newton_deriv_apply(x, e)
            e[jj] = 0.0
        return mat

    def newton_system_solve(self, x: Point, r: Point, iteration: int = 0) -> Point:
        """
        Solve ``D_N F(x) s = -r``.

        :raises SingularSystemError: When the condition estimate exceeds ``COND_LIMIT``.

        """
        lu_piv = _factor(self.newton_matrix(x), iteration)
        return np.asarray(lu_solve(lu_piv, -r), dtype=np.float64)


@dataclass(frozen=True, slots=True)
class SSNReport:
    """Iterates, residual norms and error ratios of one semismooth Newton run."""
    iterates: tuple[Point, ...]
    residual_norms: tuple[float, ...]
    ratios: tuple[float, ...]
    converged: bool

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1

    @property
    def solution(self) -> Point:
        return self.iterates[-1]


def build_fb_residual(prob: 'CompositeProblem', tau: float) -> NewtonDifferentiable:
    """
    .. admonition:: Forward-backward fixed point residual

        ``R(x) = x - prox_{tau G}(x - tau grad E(x))`` with the chain rule
        derivative ``D_N R(x) = Id - W (Id - tau D^2 E(x))`` where ``W`` is
        the diagonal Newton derivative of the prox at ``x - tau grad E(x)``.

    :raises ValueError: When the problem composes with ``K``, the prox
                        has no registered Newton derivative or the smooth
                        part lacks Hessian products.

    """
    if tau <= 0.0:
        msg = f'forward-backward step must be positive, got {tau}'
        raise ValueError(msg)
    if prob.K is not None:
        msg = 'build_fb_residual needs a problem without K'
        raise ValueError(msg)
    G = prob.prox_part()
    E = prob.E
    if not G.has_newton_derivative:
        msg = f'{G.name}: prox has no registered Newton derivative'
        raise ValueError(msg)
    if E is not None and not E.has_hessian:
        msg = 'smooth part needs Hessian-vector products for Newton'
        raise ValueError(msg)

    def forward(x: Point) -> Point:
        return x if E is None else x - tau * E.grad(x)

    def residual(x: Point) -> Point:
        return x - G.prox(tau, forward(x))

    def deriv(x: Point, h: Point) -> Point:
        w = G.newton_weights(tau, forward(x))
        inner_h = h if E is None else h - tau * E.hess_apply(x, h)
        return h - w * inner_h

    return NewtonDifferentiable(residual, deriv, prob.n)


def ssn_solve(
    nd: NewtonDifferentiable,
    x0: Point,
    tol: float = 1e-12,
    max_iter: int = 30,
    *,
    reference: Point | None = None,
) -> SSNReport:
    """
    .. admonition:: Semismooth Newton iteration

        ``x^{k+1} = x^k - D_N F(x^k)^{-1} F(x^k)`` until
        ``|F(x^k)| <= tol`` or ``max_iter`` steps.

    :param nd: Residual map with Newton derivative.
    :param x0: Finite starting point.
    :param tol: Residual tolerance.
    :param max_iter: Step budget.
    :param reference: Known root, enables the error ratios
                      ``|x^{k+1} - ref| / |x^k - ref|``.
    :raises SingularSystemError: When a Newton system is numerically singular.

    """
    if not np.all(np.isfinite(x0)):
        msg = 'ssn_solve needs a finite starting point'
        raise ValueError(msg)
    x = np.array(x0, dtype=np.float64)
    iterates = [x]
    r = nd.residual(x)
    rnorms = [norm(r)]
    converged = rnorms[-1] <= tol
    kk = 0
    while not converged and kk < max_iter:
        x = x + nd.newton_system_solve(x, r, kk)
        kk += 1
        r = nd.residual(x)
        iterates.append(x)
        rnorms.append(norm(r))
        log.debug('ssn iteration %d residual %.3e', kk, rnorms[-1])
        converged = rnorms[-1] <= tol

    ratios: list[float] = []
    if reference is not None:
        errs = [norm(xi - reference) for xi in iterates]
        for e0, e1 in zip(errs, errs[1:]):
            if e0 == 0.0:
                break
            ratios.append(e1 / e0)

    if converged:
        log.info('ssn converged in %d iterations, residual %.3e', kk, rnorms[-1])
    else:
        log.info('ssn stopped after %d iterations, residual %.3e', kk, rnorms[-1])
    return SSNReport(tuple(iterates), tuple(rnorms), tuple(ratios), converged)


def approximation_ratios(
    nd: NewtonDifferentiable,
    x: Point,
    hs: Sequence[float] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
    *,
    seed: int = 0,
) -> list[float]:
    """
    .. admonition:: Newton derivative approximation test

        ``|F(x + h) - F(x) - D_N F(x + h) h| / |h|`` along one random
        direction for each length in ``hs``, the derivative taken at
        the perturbed point.

    """
    rng = np.random.default_rng(seed)
    d = rng.standard_normal(nd.dim)
    d /= norm(d)
    fx = nd.residual(x)
    out = []
    for hh in hs:
        h = hh * d
        err = nd.residual(x + h) - fx - nd.newton_deriv_apply(x + h, h)
        out.append(norm(err) / hh)
    return out


def fb_warm_start(
    prob: 'CompositeProblem', x0: Point, tau: float, iters: int = 20
) -> Point:
    """A few forward-backward steps to enter the Newton convergence region."""
    G = prob.prox_part()
    E = prob.E
    x = np.array(x0, dtype=np.float64)
    for _ in range(iters):
        v = x if E is None else x - tau * E.grad(x)
        x = G.prox(tau, v)
    return x


def newton_root(
    grad: Callable[[Point], Point],
    hess: Callable[[Point], Matrix],
    x0: Point,
    tol: float = 1e-13,
    max_iter: int = 50,
) -> Point:
    """
    .. admonition:: Newton on a smooth gradient

        Classical Newton for ``grad(x) = 0`` with dense LU solves.

    :raises ConvergenceError: When ``|grad|`` stays above ``tol``.

    """
    x = np.array(x0, dtype=np.float64)
    for it in range(max_iter):
        g = grad(x)
        if norm(g) <= tol:
            return x
        x = x + lu_solve(_factor(hess(x), it), -g)
    g = grad(x)
    if norm(g) <= tol:
        return x
    msg = f'Newton did not reach {tol} in {max_iter} iterations'
    raise ConvergenceError(msg, norm(g))
