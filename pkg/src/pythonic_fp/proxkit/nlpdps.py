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
Nonlinear primal-dual splitting
===============================

.. admonition:: Primal-dual proximal splitting for ``min F0(x) + G(K(x))``

    - ``K`` nonlinear, linearized at the previous primal iterate
    - fixed steps, no acceleration
    - the dual neighbourhood of radius ``rho_y`` is monitored, never enforced

"""

from dataclasses import dataclass, replace
import logging
import math
from typing import cast
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat
from pythonic_fp.gadgets.sentinels.novalue import NoValue
from pythonic_fp.proxkit.core import LinOp, NonlinearOp, Point, inner, norm
from pythonic_fp.proxkit.errors import ConvergenceError
from pythonic_fp.proxkit.prox import ProxFn
from pythonic_fp.proxkit.splitting import CompositeProblem, SolverState
from pythonic_fp.proxkit.trace import Trace, TraceRecord

__all__ = [
    'NonlinearSaddleProblem',
    'NLStepParams',
    'NLAdmissibility',
    'nlpdps_step',
    'nl_step_admissibility',
    'run_nlpdps',
    'find_safe_start',
    'as_composite',
]

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class NonlinearSaddleProblem:
    """
    .. admonition:: Nonlinear composite problem

        ``min F0(x) + G(K(x))`` with user supplied three-point constants
        of ``K``: ``gamma_K`` (may be negative), ``theta_bound`` and
        ``lambda_bound``.

    """
    F0: ProxFn
    G: ProxFn
    K: NonlinearOp
    gamma_K: float = 0.0
    theta_bound: float = 0.0
    lambda_bound: float = 0.0
    G_conj: ProxFn | None = None
    name: str = 'nonlinear'

    @property
    def n(self) -> int:
        return self.K.in_dim

    @property
    def m(self) -> int:
        return self.K.out_dim

    def dual(self) -> ProxFn:
        return self.G.conjugate() if self.G_conj is None else self.G_conj

    @property
    def lipschitz(self) -> float:
        lip = self.K.lipschitz_jacobian
        if isinstance(lip, NoValue):
            msg = f'{self.name}: Lipschitz factor of the Jacobian unknown'
            raise ValueError(msg)
        return lip

    def primal_value(self, x: Point) -> float:
        return self.F0.value(x) + self.G.value(self.K.apply(x))

    def critical_residual(self, x: Point, y: Point) -> float:
        """Fixed point residual of the primal-dual optimality system at unit steps."""
        rx = x - self.F0.prox(1.0, x - self.K.jacobian_adjoint_apply(x, y))
        ry = y - self.dual().prox(1.0, y + self.K.apply(x))
        return math.hypot(norm(rx), norm(ry))


class NLStepParams(BaseModel):
    """Fixed steps, dual neighbourhood radius and the factor ``kappa`` in ``[0, 1)``."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    tau: PositiveFloat
    sigma: PositiveFloat
    rho_y: NonNegativeFloat = 0.0
    kappa: float = Field(default=0.0, ge=0.0, lt=1.0)


@dataclass(frozen=True, slots=True)
class NLAdmissibility:
    """
    .. admonition:: Step condition report

        - ``step_bound``: ``1/(lambda + 3 L rho_y) - tau``
        - ``kappa_upper``: ``(1 - kappa) - tau sigma R_K^2``, the checked form
        - ``kappa_printed``: ``tau sigma R_K^2 - (1 - kappa)``, the reverse direction
        - ``primal_strong``: ``gamma_F + gamma_K``
        - ``dual_strong``: strong convexity of ``G*``

        ``admissible`` needs ``step_bound > 0`` and ``kappa_upper >= 0``;
        ``linear_rate`` additionally needs both strong convexity factors positive.

    """
    admissible: bool
    linear_rate: bool
    step_bound: float
    kappa_upper: float
    kappa_printed: float
    primal_strong: float
    dual_strong: float


def nl_step_admissibility(
    prob: NonlinearSaddleProblem, params: NLStepParams, grad_bound: float
) -> NLAdmissibility:
    """Evaluate the step conditions for a bound ``grad_bound`` on ``|DK|``."""
    if grad_bound < 0.0:
        msg = f'Jacobian bound must be nonnegative, got {grad_bound}'
        raise ValueError(msg)
    denom = prob.lambda_bound + 3.0 * prob.lipschitz * params.rho_y
    step_bound = (math.inf if denom == 0.0 else 1.0 / denom) - params.tau
    prod = params.tau * params.sigma * grad_bound * grad_bound
    kappa_upper = (1.0 - params.kappa) - prod
    primal = prob.F0.strong_convexity + prob.gamma_K
    dual = prob.dual().strong_convexity
    admissible = step_bound > 0.0 and kappa_upper >= -1e-15
    return NLAdmissibility(
        admissible,
        admissible and primal > 0.0 and dual > 0.0,
        step_bound,
        kappa_upper,
        -kappa_upper,
        primal,
        dual,
    )


def nlpdps_step(
    state: SolverState, prob: NonlinearSaddleProblem, params: NLStepParams
) -> SolverState:
    """
    .. admonition:: Nonlinear primal-dual step

        - ``x+ = prox_{tau F0}(x - tau DK(x)* y)``
        - ``x_bar = 2 x+ - x``
        - ``y+ = prox_{sigma G*}(y + sigma K(x_bar))``

    """
    if state.y is None:
        msg = 'nlpdps_step needs a dual iterate'
        raise ValueError(msg)
    tau, sigma = params.tau, params.sigma
    x, y = state.x, state.y
    x_next = prob.F0.prox(tau, x - tau * prob.K.jacobian_adjoint_apply(x, y))
    x_bar = x_next + (x_next - x)
    y_next = prob.dual().prox(sigma, y + sigma * prob.K.apply(x_bar))
    return replace(
        state, x=x_next, y=y_next, tau_k=tau, sigma_k=sigma, omega_k=1.0, k=state.k + 1
    )


def run_nlpdps(
    prob: NonlinearSaddleProblem,
    params: NLStepParams,
    *,
    x0: Point | None = None,
    y0: Point | None = None,
    max_iter: int = 1000,
    tol: float = 1e-12,
    reference: tuple[Point, Point] | None = None,
    keep_iterates: bool = False,
) -> Trace:
    """
    .. admonition:: Nonlinear primal-dual driver

        Iterate until ``max(|dx|/tau, |dy|/sigma) <= tol``. With a
        reference pair the joint distance is recorded and each iterate
        with ``|y - y_ref| > rho_y`` counts as an excursion in
        ``trace.excursions``.

    """
    x = np.zeros(prob.n) if x0 is None else np.array(x0, dtype=np.float64)
    y = np.zeros(prob.m) if y0 is None else np.array(y0, dtype=np.float64)
    state = SolverState(x=x, y=y, tau_k=params.tau, sigma_k=params.sigma)
    trace = Trace('nlpdps', initial=(x, y) if keep_iterates else None)
    for _ in range(max_iter):
        nxt = nlpdps_step(state, prob, params)
        y_prev, y_next = y, cast(Point, nxt.y)
        res = max(norm(nxt.x - state.x) / params.tau, norm(y_next - y_prev) / params.sigma)
        y = y_next
        dist = None
        if reference is not None:
            dx, dy = nxt.x - reference[0], y_next - reference[1]
            dist = math.sqrt(inner(dx, dx) + inner(dy, dy))
            if params.rho_y > 0.0 and norm(dy) > params.rho_y:
                if trace.excursions == 0:
                    log.warning('dual iterate left the neighbourhood of radius %.3g at k=%d', params.rho_y, nxt.k)
                trace.excursions += 1
        trace.append(
            TraceRecord(nxt.k, res, prob.primal_value(nxt.x), None, None, dist, params.tau, params.sigma, 1.0, None),
            nxt.x if keep_iterates else None,
            y_next,
        )
        state = nxt
        if res <= tol:
            trace.converged = True
            break
    trace.final = state
    log.info('nlpdps finished after %d iterations, residual %.3e, %d excursions', state.k, trace.last_residual, trace.excursions)
    return trace


def find_safe_start(
    prob: NonlinearSaddleProblem,
    params: NLStepParams,
    reference: tuple[Point, Point],
    *,
    radius: float = 1.0,
    bisections: int = 20,
    probe_iters: int = 200,
    seed: int = 0,
) -> tuple[Point, Point, float]:
    """
    .. admonition:: Safe start by bisection

        Starts ``u_ref + r d`` along a random unit direction ``d``. A
        radius is safe when ``probe_iters`` iterations stay finite,
        make no excursion and at least halve the distance to the
        reference. Returns the start for the largest safe radius found.

    :raises ConvergenceError: When no tested radius is safe, carrying the
                              smallest radius tried.

    """
    rng = np.random.default_rng(seed)
    d = rng.standard_normal(prob.n + prob.m)
    d /= norm(d)
    dx, dy = d[: prob.n], d[prob.n :]
    xr, yr = reference

    def safe(r: float) -> bool:
        trace = run_nlpdps(
            prob, params, x0=xr + r * dx, y0=yr + r * dy, max_iter=probe_iters, tol=0.0, reference=reference
        )
        dists = trace.values('dist_to_ref')
        return (
            len(dists) == len(trace)
            and trace.excursions == 0
            and bool(np.all(np.isfinite(dists)))
            and float(dists[-1]) <= 0.5 * r
        )

    if safe(radius):
        lo = radius
    else:
        lo, hi = 0.0, radius
        for _ in range(bisections):
            mid = 0.5 * (lo + hi)
            if safe(mid):
                lo = mid
            else:
                hi = mid
        if lo == 0.0:
            msg = f'no safe start found down to radius {hi:.3g} after {bisections} bisections'
            raise ConvergenceError(msg, hi)
    log.info('safe start radius %.6g', lo)
    return xr + lo * dx, yr + lo * dy, lo


def as_composite(prob: NonlinearSaddleProblem) -> CompositeProblem:
    """
    .. admonition:: Affine restriction

        For affine ``K(x) = Ax + K(0)``, the linear composite problem with
        ``b_shift = -K(0)``.

    :raises ValueError: When the Jacobian of ``K`` is not constant.

    """
    if prob.K.lipschitz_jacobian != 0.0:
        msg = f'{prob.name}: only affine K restricts to a linear problem'
        raise ValueError(msg)
    origin = np.zeros(prob.n)
    offset = prob.K.apply(origin)
    A = prob.K.linearize(origin)
    lin = LinOp(A.apply, A.adjoint, prob.n, prob.m)
    shift = None if not np.any(offset) else -offset
    return CompositeProblem(
        prob.n, prob.G, F0=prob.F0, K=lin, G_conj=prob.G_conj, b_shift=shift, name=prob.name
    )
