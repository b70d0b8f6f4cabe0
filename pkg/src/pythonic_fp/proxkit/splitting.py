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
Operator splitting
==================

.. admonition:: First order splitting methods

    - single steps: proximal point, forward-backward, Douglas-Rachford,
      primal-dual proximal splitting (plain, accelerated, with a forward
      step), primal-dual explicit splitting, ADMM, preconditioned ADMM
    - meta-algorithms as step wrappers: over-relaxation, inertia, and a
      backtracking line search for forward-backward
    - ``run``: drives a step to tolerance, recording a ``Trace``

Steps are pure functions ``SolverState -> SolverState``. Wrappers
are higher order functions over such steps.

"""

from collections.abc import Callable
from dataclasses import dataclass, replace
from enum import StrEnum
import logging
import math
import time
from typing import Literal, Self
import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    model_validator,
)
from pythonic_fp.gadgets.sentinels.novalue import NoValue
from pythonic_fp.proxkit.core import LinOp, Point, SmoothFn, as_point, inner, norm
from pythonic_fp.proxkit.errors import AdmissibilityError, ConvergenceError, DimensionError
from pythonic_fp.proxkit.prox import ProxFn
from pythonic_fp.proxkit.trace import Trace, TraceRecord

__all__ = [
    'Algo',
    'SolverConfig',
    'SolverState',
    'Step',
    'CompositeProblem',
    'AdmmProblem',
    'pp_step',
    'fb_step',
    'drs_step',
    'pdps_step',
    'accel_update',
    'pdes_step',
    'admm_step',
    'precond_admm_step',
    'overrelax_wrap',
    'inertia_wrap',
    'fista_lambda',
    'inertial_lambdas',
    'overrelax_lower_bound',
    'backtrack_linesearch',
    'linesearch_fb_step',
    'pdps_default_steps',
    'check_pdps_steps',
    'check_padmm_steps',
    'm_norm',
    'GapMonitor',
    'Reference',
    'run',
]

log = logging.getLogger(__name__)

ADMISSIBILITY = 'step-size admissibility'


class Algo(StrEnum):
    PP = 'pp'
    FB = 'fb'
    DRS = 'drs'
    PDPS = 'pdps'
    PDES = 'pdes'
    ADMM = 'admm'
    PADMM = 'padmm'


class SolverConfig(BaseModel):
    """
    .. admonition:: Solver configuration

        Shared between in-process use and the JSON run configuration.
        Unset step lengths fall back to the algorithm defaults of ``run``.

        - ``accel``: ``none``, ``strong_primal`` (factor ``gamma``) or
          ``strong_both`` (factors ``gamma`` and ``rho``); a zero factor is
          taken from the problem's strong convexity metadata
        - ``overrelax`` with constant ``overrelax_lambda``, defaulting to
          ``max(lower bound, 1)``
        - ``inertia`` and ``overrelax`` are mutually exclusive
        - ``linesearch`` with shrink factor ``ls_theta`` and start ``ls_tau_init``
        - ``gap_mode`` tightens the primal-dual step condition

    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    tau0: PositiveFloat | None = None
    sigma0: PositiveFloat | None = None
    padmm_theta: PositiveFloat | None = None
    accel: Literal['none', 'strong_primal', 'strong_both'] = 'none'
    gamma: NonNegativeFloat = 0.0
    rho: NonNegativeFloat = 0.0
    overrelax: bool = False
    overrelax_lambda: float | None = Field(default=None, ge=0.5)
    inertia: bool = False
    linesearch: bool = False
    ls_theta: float = Field(default=0.5, gt=0.0, lt=1.0)
    ls_tau_init: PositiveFloat = 1.0
    max_iter: PositiveInt = 1000
    tol: NonNegativeFloat = 1e-8
    seed: int = 0
    gap_mode: bool = False
    log_every: PositiveInt = 100

    @model_validator(mode='after')
    def _exclusive_wrappers(self) -> Self:
        if self.inertia and self.overrelax:
            msg = 'inertia and overrelax are mutually exclusive'
            raise ValueError(msg)
        return self


@dataclass(frozen=True, slots=True, eq=False)
class SolverState:
    """
    .. admonition:: Iteration state

        - ``x``, ``y``: primal and dual iterates; ADMM keeps its multiplier in ``y``
        - ``z``: Douglas-Rachford shadow, ADMM second block, or the
          over-relaxation base point, ``v`` its dual counterpart
        - ``x_prev``: inertia memory, ``lambda_prev`` the inertia parameter
          of the step that produced ``x``
        - ``lambda_k``: relaxation or inertia parameter

    """
    x: Point
    y: Point | None = None
    z: Point | None = None
    v: Point | None = None
    x_prev: Point | None = None
    lambda_prev: float | None = None
    lambda_k: float = 1.0
    tau_k: float = 1.0
    sigma_k: float = 1.0
    omega_k: float = 1.0
    k: int = 0


type Step = Callable[[SolverState], SolverState]


@dataclass(frozen=True, slots=True)
class CompositeProblem:
    """
    .. admonition:: Composite problem

        ``min F0(x) + E(x) + G(Kx)`` over ``R^n``. Absent ``K`` means ``G``
        acts on the primal space. ``G_conj`` supplies ``G*`` directly,
        otherwise the dual prox comes from the Moreau decomposition.

    """
    n: int
    G: ProxFn
    F0: ProxFn | None = None
    E: SmoothFn | None = None
    K: LinOp | None = None
    G_conj: ProxFn | None = None
    b_shift: Point | None = None
    name: str = 'composite'

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f'problem dimension must be positive, got {self.n}'
            raise DimensionError(msg)
        if self.K is not None and self.K.in_dim != self.n:
            msg = f'K maps R^{self.K.in_dim}, problem lives in R^{self.n}'
            raise DimensionError(msg)
        if self.b_shift is not None and self.b_shift.size != self.m:
            msg = f'b_shift has dimension {self.b_shift.size}, expected {self.m}'
            raise DimensionError(msg)

    @property
    def m(self) -> int:
        """Dimension of the dual space."""
        return self.n if self.K is None else self.K.out_dim

    def op(self) -> LinOp:
        """``K``, the identity when absent."""
        return LinOp.identity(self.n) if self.K is None else self.K

    def dual(self) -> ProxFn:
        """``G*`` as a ``ProxFn``."""
        return self.G.conjugate() if self.G_conj is None else self.G_conj

    def prox_part(self) -> ProxFn:
        """The single prox term of a problem without ``K``."""
        if self.K is not None:
            msg = f'{self.name}: problem composes G with K'
            raise ValueError(msg)
        if self.F0 is None:
            return self.G
        if self.G.name == 'zero':
            return self.F0
        msg = f'{self.name}: two prox terms F0 and G, use drs'
        raise ValueError(msg)

    def smooth_lipschitz(self) -> float:
        """Lipschitz factor of ``grad E``, ``0`` without ``E``."""
        if self.E is None:
            return 0.0
        lip = self.E.lipschitz
        if isinstance(lip, NoValue):
            msg = f'{self.name}: Lipschitz factor of E unknown'
            raise ValueError(msg)
        return lip

    def primal_strong_convexity(self) -> float:
        gf = 0.0 if self.F0 is None else self.F0.strong_convexity
        ge = 0.0 if self.E is None else self.E.strong_convexity
        return gf + ge

    def affine(self, x: Point) -> Point:
        """The argument ``Kx - b_shift`` of ``G``."""
        kx = x if self.K is None else self.K.apply(x)
        return kx if self.b_shift is None else kx - self.b_shift

    def _kty(self, y: Point) -> Point:
        return y if self.K is None else self.K.adjoint(y)

    def primal_value(self, x: Point) -> float:
        """``F0(x) + E(x) + G(Kx - b_shift)`` in the extended reals."""
        val = self.G.value(self.affine(x))
        if self.F0 is not None:
            val += self.F0.value(x)
        if self.E is not None:
            val += self.E.value(x)
        return val

    @property
    def has_dual_value(self) -> bool:
        g_ok = self.G_conj is not None or self.G.has_conjugate_value
        f_ok = self.F0 is None or self.F0.has_conjugate_value
        return self.E is None and g_ok and f_ok

    def dual_value(self, y: Point) -> float:
        """
        ``-F0*(-K*y) - G*(y) - <b_shift, y>``, needs ``E`` absent and closed form conjugates.

        """
        if not self.has_dual_value:
            msg = f'{self.name}: conjugate evaluators missing for the dual value'
            raise ValueError(msg)
        kty = self._kty(y)
        if self.F0 is None:
            f_conj = 0.0 if norm(kty) <= 1e-12 * max(1.0, norm(y)) else math.inf
        else:
            f_conj = self.F0.conj_value(-kty)
        shift = 0.0 if self.b_shift is None else inner(self.b_shift, y)
        return -f_conj - self.dual().value(y) - shift

    def lagrangian(self, x: Point, y: Point) -> float:
        """``F0(x) + E(x) + <Kx - b_shift, y> - G*(y)``."""
        val = inner(self.affine(x), y) - self.dual().value(y)
        if self.F0 is not None:
            val += self.F0.value(x)
        if self.E is not None:
            val += self.E.value(x)
        return val

    def as_admm(self) -> 'AdmmProblem':
        """``min F0(x) + G(z)`` subject to ``Kx - z = b_shift``."""
        if self.E is not None:
            msg = f'{self.name}: ADMM form needs E absent'
            raise ValueError(msg)
        F = self.F0
        if F is None:
            msg = f'{self.name}: ADMM form needs F0'
            raise ValueError(msg)
        c = np.zeros(self.m) if self.b_shift is None else self.b_shift
        return AdmmProblem(F, self.G, self.op(), LinOp.identity(self.m, -1.0), c)


@dataclass(frozen=True, slots=True)
class AdmmProblem:
    """``min F(x) + G(z)`` subject to ``Ax + Bz = c``."""
    F: ProxFn
    G: ProxFn
    A: LinOp
    B: LinOp
    c: Point

    def __post_init__(self) -> None:
        if self.A.out_dim != self.B.out_dim or self.c.size != self.A.out_dim:
            msg = 'ADMM operators and offset must share the constraint space'
            raise DimensionError(msg)

    def value(self, x: Point, z: Point) -> float:
        return self.F.value(x) + self.G.value(z)

    def constraint_residual(self, x: Point, z: Point) -> Point:
        return self.A.apply(x) + self.B.apply(z) - self.c


# Single steps


def pp_step(state: SolverState, G: ProxFn, tau: float) -> SolverState:
    """Proximal point step ``x+ = prox_{tau G}(x)``."""
    return replace(state, x=G.prox(tau, state.x), tau_k=tau, k=state.k + 1)


def _warn_fb(tau: float, F: SmoothFn) -> None:
    lip = F.lipschitz
    if not isinstance(lip, NoValue) and tau * lip >= 2.0:
        log.warning('forward-backward step tau*L = %.4g >= 2, convergence not guaranteed', tau * lip)


def fb_step(state: SolverState, G: ProxFn, F: SmoothFn, tau: float) -> SolverState:
    """
    .. admonition:: Forward-backward step

        ``x+ = prox_{tau G}(x - tau grad F(x))``. Warns on the first step
        when ``tau L >= 2``.

    """
    if state.k == 0:
        _warn_fb(tau, F)
    x = state.x
    return replace(state, x=G.prox(tau, x - tau * F.grad(x)), tau_k=tau, k=state.k + 1)


def drs_step(state: SolverState, F: ProxFn, G: ProxFn, tau: float) -> SolverState:
    """
    .. admonition:: Douglas-Rachford step

        ``x+ = prox_{tau F}(z)``, ``y+ = prox_{tau G}(2x+ - z)``,
        ``z+ = z + y+ - x+``, where ``z`` defaults to ``x`` on a fresh state.

    """
    z = state.x if state.z is None else state.z
    x_next = F.prox(tau, z)
    y_next = G.prox(tau, 2.0 * x_next - z)
    return replace(
        state, x=x_next, y=y_next, z=z + y_next - x_next, tau_k=tau, k=state.k + 1
    )


def accel_update(
    tau: float, sigma: float, gamma: float, rho: float = 0.0, *, gap_mode: bool = False
) -> tuple[float, float, float]:
    """
    .. admonition:: Acceleration rule

        - ``gamma = 0``: ``omega = 1``, steps unchanged
        - ``rho = 0``: ``omega = 1/sqrt(1 + 2 gamma tau)``,
          ``tau+ = tau omega``, ``sigma+ = sigma/omega``
        - both positive: ``theta = min(rho sigma, gamma tau)``,
          ``omega = 1/sqrt(1 + 2 theta)``, steps unchanged

        ``gap_mode`` uses ``1 + gamma tau`` and ``1 + theta`` under the
        radical. The product ``tau sigma`` is preserved.

    :returns: ``(omega, tau_next, sigma_next)``
    :raises ValueError: On negative factors.

    """
    if gamma < 0.0 or rho < 0.0:
        msg = f'acceleration factors must be nonnegative, got gamma={gamma}, rho={rho}'
        raise ValueError(msg)
    mult = 1.0 if gap_mode else 2.0
    if gamma == 0.0:
        return 1.0, tau, sigma
    if rho == 0.0:
        omega = 1.0 / math.sqrt(1.0 + mult * gamma * tau)
        return omega, tau * omega, sigma / omega
    theta = min(rho * sigma, gamma * tau)
    return 1.0 / math.sqrt(1.0 + mult * theta), tau, sigma


def _accel_factors(prob: CompositeProblem, cfg: SolverConfig) -> tuple[float, float]:
    if cfg.accel == 'none':
        return 0.0, 0.0
    gamma = cfg.gamma if cfg.gamma > 0.0 else prob.primal_strong_convexity()
    if cfg.accel == 'strong_primal':
        return gamma, 0.0
    rho = cfg.rho if cfg.rho > 0.0 else prob.dual().strong_convexity
    return gamma, rho


def pdps_default_steps(prob: CompositeProblem, *, gap_mode: bool = False) -> tuple[float, float]:
    """
    .. admonition:: Default primal-dual steps

        ``tau = sigma = 0.99/|K|`` without ``E``. With ``E`` the equal
        steps solve ``L tau/2 + tau^2 |K|^2 = 0.99``, ``L tau`` in gap mode.

    """
    knorm = prob.op().norm()
    lip = prob.smooth_lipschitz()
    b = lip if gap_mode else 0.5 * lip
    a = knorm * knorm
    if a == 0.0:
        tau = 1.0 if b == 0.0 else 0.99 / b
    elif b == 0.0:
        tau = 0.99 / knorm
    else:
        tau = (-b + math.sqrt(b * b + 4.0 * a * 0.99)) / (2.0 * a)
    return tau, tau


def check_pdps_steps(
    prob: CompositeProblem, tau: float, sigma: float, *, gap_mode: bool = False
) -> float:
    """
    .. admonition:: Primal-dual step condition

        ``tau sigma |K|^2 < 1`` without ``E``, ``L tau/2 + tau sigma |K|^2 < 1``
        with it, ``L tau + tau sigma |K|^2 < 1`` in gap mode.

    :returns: The slack, positive when admissible.
    :raises AdmissibilityError: When the condition fails.

    """
    if tau <= 0.0 or sigma <= 0.0:
        msg = f'{ADMISSIBILITY}: steps must be positive, got tau={tau}, sigma={sigma}'
        raise AdmissibilityError(msg)
    knorm = prob.op().norm()
    lip = prob.smooth_lipschitz()
    lhs = (lip if gap_mode else 0.5 * lip) * tau + tau * sigma * knorm * knorm
    if lhs >= 1.0:
        msg = f'{ADMISSIBILITY}: primal-dual condition value {lhs:.6g} >= 1'
        raise AdmissibilityError(msg)
    return 1.0 - lhs


def pdps_step(state: SolverState, prob: CompositeProblem, cfg: SolverConfig) -> SolverState:
    """
    .. admonition:: Primal-dual proximal splitting step

        - ``x+ = prox_{tau F0}(x - tau K*y - tau grad E(x))``
        - ``x_bar = x+ + omega (x+ - x)``
        - ``y+ = prox_{sigma+ G*}(y + sigma+ K x_bar)``

        with ``(omega, tau+, sigma+)`` from ``accel_update``, or
        ``(1, tau, sigma)`` without acceleration.

    :raises AdmissibilityError: When the current steps are inadmissible.

    """
    if state.y is None:
        msg = 'pdps_step needs a dual iterate'
        raise ValueError(msg)
    tau, sigma = state.tau_k, state.sigma_k
    check_pdps_steps(prob, tau, sigma, gap_mode=cfg.gap_mode)
    gamma, rho = _accel_factors(prob, cfg)
    omega, tau_next, sigma_next = accel_update(tau, sigma, gamma, rho, gap_mode=cfg.gap_mode)
    K = prob.op()
    x, y = state.x, state.y
    v = x - tau * K.adjoint(y)
    if prob.E is not None:
        v = v - tau * prob.E.grad(x)
    x_next = v if prob.F0 is None else prob.F0.prox(tau, v)
    x_bar = x_next + omega * (x_next - x)
    y_next = prob.dual().prox(sigma_next, y + sigma_next * prob.affine(x_bar))
    return replace(
        state,
        x=x_next,
        y=y_next,
        tau_k=tau_next,
        sigma_k=sigma_next,
        omega_k=omega,
        k=state.k + 1,
    )


def pdes_step(state: SolverState, prob: CompositeProblem, cfg: SolverConfig) -> SolverState:
    """
    .. admonition:: Primal-dual explicit splitting step

        Unit steps: ``y+ = prox_{G*}((Id - KK*)y + K(x - grad E(x)))`` and
        ``x+ = x - grad E(x) - K*y+``. Needs ``|K| <= 1``, ``L < 2``
        and no ``F0``.

    """
    if state.y is None:
        msg = 'pdes_step needs a dual iterate'
        raise ValueError(msg)
    if prob.F0 is not None:
        msg = f'{prob.name}: primal-dual explicit splitting has no prox for F0'
        raise ValueError(msg)
    K = prob.op()
    if K.norm() > 1.0 + 1e-12:
        msg = f'{ADMISSIBILITY}: explicit splitting needs |K| <= 1, got {K.norm():.6g}'
        raise AdmissibilityError(msg)
    if prob.smooth_lipschitz() >= 2.0:
        msg = f'{ADMISSIBILITY}: explicit splitting needs L < 2'
        raise AdmissibilityError(msg)
    x, y = state.x, state.y
    w = x if prob.E is None else x - prob.E.grad(x)
    y_next = prob.dual().prox(1.0, y - K.apply(K.adjoint(y)) + prob.affine(w))
    return replace(
        state, x=w - K.adjoint(y_next), y=y_next, tau_k=1.0, sigma_k=1.0, k=state.k + 1
    )


def _scaled_identity(op: LinOp, what: str) -> float:
    s = op.scale
    if s is None or s == 0.0:
        msg = f'plain ADMM needs {what} to be a nonzero scaled identity, use padmm'
        raise ValueError(msg)
    return s


def admm_step(state: SolverState, prob: AdmmProblem, tau: float) -> SolverState:
    """
    .. admonition:: ADMM step

        For scaled identities ``A = a Id`` and ``B = b Id`` both subproblems
        are prox calls:

        - ``x+ = prox_{F/(tau a^2)}((c - Bz - lam/tau)/a)``
        - ``z+ = prox_{G/(tau b^2)}((c - Ax+ - lam/tau)/b)``
        - ``lam+ = lam + tau (Ax+ + Bz+ - c)``

        The multiplier ``lam`` is kept in ``state.y``, the second block in ``state.z``.

    """
    if tau <= 0.0:
        msg = f'{ADMISSIBILITY}: ADMM penalty must be positive, got {tau}'
        raise AdmissibilityError(msg)
    a = _scaled_identity(prob.A, 'A')
    b = _scaled_identity(prob.B, 'B')
    lam = np.zeros(prob.c.size) if state.y is None else state.y
    z = np.zeros(prob.B.in_dim) if state.z is None else state.z
    x_next = prob.F.prox(1.0 / (tau * a * a), (prob.c - b * z - lam / tau) / a)
    z_next = prob.G.prox(1.0 / (tau * b * b), (prob.c - a * x_next - lam / tau) / b)
    lam_next = lam + tau * (a * x_next + b * z_next - prob.c)
    return replace(state, x=x_next, z=z_next, y=lam_next, tau_k=tau, k=state.k + 1)


def check_padmm_steps(prob: AdmmProblem, sigma: float, theta: float, tau: float) -> None:
    """
    .. admonition:: Preconditioned ADMM step condition

        ``sigma tau |A|^2 < 1`` and ``theta tau |B|^2 <= 1``, the squared
        norms keeping the preconditioners positive semidefinite. Equality
        in the second condition recovers the exact ``z`` subproblem.

    :raises AdmissibilityError: When either condition fails.

    """
    if min(sigma, theta, tau) <= 0.0:
        msg = f'{ADMISSIBILITY}: preconditioned ADMM steps must be positive'
        raise AdmissibilityError(msg)
    na, nb = prob.A.norm(), prob.B.norm()
    if sigma * tau * na * na >= 1.0:
        msg = f'{ADMISSIBILITY}: sigma*tau*|A|^2 = {sigma * tau * na * na:.6g} >= 1'
        raise AdmissibilityError(msg)
    if theta * tau * nb * nb > 1.0 + 1e-12:
        msg = f'{ADMISSIBILITY}: theta*tau*|B|^2 = {theta * tau * nb * nb:.6g} > 1'
        raise AdmissibilityError(msg)


def precond_admm_step(
    state: SolverState, prob: AdmmProblem, sigma: float, theta: float, tau: float
) -> SolverState:
    """
    .. admonition:: Preconditioned ADMM step

        - ``x+ = prox_{sigma F}(x - sigma tau A*Ax + sigma A*(tau(c - Bz) - lam))``
        - ``z+ = prox_{theta G}(z - theta tau B*Bz + theta B*(tau(c - Ax+) - lam))``
        - ``lam+ = lam + tau (Ax+ + Bz+ - c)``

    """
    check_padmm_steps(prob, sigma, theta, tau)
    A, B, c = prob.A, prob.B, prob.c
    x = state.x
    lam = np.zeros(c.size) if state.y is None else state.y
    z = np.zeros(B.in_dim) if state.z is None else state.z
    vx = x - sigma * tau * A.adjoint(A.apply(x)) + sigma * A.adjoint(tau * (c - B.apply(z)) - lam)
    x_next = prob.F.prox(sigma, vx)
    vz = z - theta * tau * B.adjoint(B.apply(z)) + theta * B.adjoint(tau * (c - A.apply(x_next)) - lam)
    z_next = prob.G.prox(theta, vz)
    lam_next = lam + tau * (A.apply(x_next) + B.apply(z_next) - c)
    return replace(
        state, x=x_next, z=z_next, y=lam_next, tau_k=tau, sigma_k=sigma, k=state.k + 1
    )


# Meta-algorithms


def overrelax_lower_bound(
    algo: Algo | str,
    *,
    tau: float = 1.0,
    lipschitz: float = 0.0,
    sigma: float = 0.0,
    knorm: float = 0.0,
) -> float:
    """
    .. admonition:: Smallest admissible relaxation parameter

        - proximal point: ``1/2``
        - forward-backward: ``(1 + sqrt(1 + 8 L tau))/4``
        - primal-dual: ``(1 + sqrt(1 + 8 L tau/(1 - tau sigma |K|^2)))/4``

    """
    match Algo(algo):
        case Algo.PP:
            return 0.5
        case Algo.FB:
            return 0.25 * (1.0 + math.sqrt(1.0 + 8.0 * lipschitz * tau))
        case Algo.PDPS:
            slack = 1.0 - tau * sigma * knorm * knorm
            if slack <= 0.0:
                msg = f'{ADMISSIBILITY}: tau*sigma*|K|^2 must be below 1'
                raise AdmissibilityError(msg)
            return 0.25 * (1.0 + math.sqrt(1.0 + 8.0 * lipschitz * tau / slack))
        case _:
            msg = f'over-relaxation is not supported for {algo}'
            raise ValueError(msg)


def overrelax_wrap(
    inner_step: Step,
    lambda_schedule: float | Callable[[int], float],
    *,
    lower_bound: float = 0.5,
) -> Step:
    """
    .. admonition:: Over-relaxation

        Evaluate ``inner_step`` at the base point ``(z, v)`` and update it
        by ``z+ = x+/lam + (1 - 1/lam) z``, likewise for ``v``. The
        schedule must be nonincreasing and stay above ``lower_bound``.

    :raises AdmissibilityError: On a schedule value below the bound or an increase.

    """
    if callable(lambda_schedule):
        schedule = lambda_schedule
    else:
        const = float(lambda_schedule)
        schedule = lambda k: const

    def step(state: SolverState) -> SolverState:
        lam = schedule(state.k)
        if lam < lower_bound:
            msg = f'over-relaxation admissibility: lambda {lam:.6g} below {lower_bound:.6g}'
            raise AdmissibilityError(msg)
        if state.k > 0 and lam > state.lambda_k:
            msg = f'over-relaxation admissibility: lambda must not increase, {state.lambda_k:.6g} -> {lam:.6g}'
            raise AdmissibilityError(msg)
        z = state.x if state.z is None else state.z
        v = state.y if state.v is None else state.v
        out = inner_step(replace(state, x=z, y=v))
        z_next = out.x / lam + (1.0 - 1.0 / lam) * z
        v_next = None
        if v is not None and out.y is not None:
            v_next = out.y / lam + (1.0 - 1.0 / lam) * v
        return replace(out, z=z_next, v=v_next, lambda_k=lam)

    return step


def fista_lambda(lam: float) -> float:
    """``lam+ = 2/(1 + sqrt(1 + 4/lam^2))``."""
    return 2.0 / (1.0 + math.sqrt(1.0 + 4.0 / (lam * lam)))


def inertial_lambdas(count: int) -> list[float]:
    """``lam_0 = 1, lam_1, ..., lam_count`` of the inertia rule."""
    lams = [1.0]
    for _ in range(count):
        lams.append(fista_lambda(lams[-1]))
    return lams


def inertia_wrap(inner_step: Step) -> Step:
    """
    .. admonition:: Inertia

        Apply ``inner_step`` at ``x_bar = x^k + alpha_k (x^k - x^{k-1})``
        with ``alpha_k = lam_k (1/lam_{k-1} - 1)`` and
        ``lam_{k+1} = fista_lambda(lam_k)``, starting from ``lam_0 = 1``.
        Then ``alpha_1 = 0`` and the first two steps are plain.

    """

    def step(state: SolverState) -> SolverState:
        lam, lam_prev = state.lambda_k, state.lambda_prev
        x = state.x
        if state.x_prev is None or lam_prev is None:
            x_bar = x
        else:
            x_bar = x + lam * (1.0 / lam_prev - 1.0) * (x - state.x_prev)
        out = inner_step(replace(state, x=x_bar))
        return replace(out, x_prev=x, lambda_prev=lam, lambda_k=fista_lambda(lam))

    return step


def backtrack_linesearch(
    F: SmoothFn,
    G: ProxFn,
    x: Point,
    tau_init: float = 1.0,
    theta: float = 0.5,
    *,
    max_halvings: int = 60,
) -> tuple[Point, float]:
    """
    .. admonition:: Backtracking line search

        First ``tau`` in ``tau_init, tau_init theta, ...`` whose
        forward-backward point ``x+`` satisfies the descent test
        ``F(x+) <= F(x) + <grad F(x), x+ - x> + |x+ - x|^2/(2 tau)``
        up to a roundoff slack of ``1e-12 max(1, |F(x)|)``.

        Under ``inertia_wrap`` the point ``x`` is the extrapolated
        ``x_bar``. For convex ``F`` the test then implies the inertial
        acceptance condition
        ``<grad F(x_bar), x+ - x^k> >= F(x+) - F(x^k) - |x+ - x_bar|^2/(2 tau)``
        relative to the previous iterate ``x^k``.

    :returns: ``(x_next, tau_used)``
    :raises ConvergenceError: After ``max_halvings`` reductions, carrying the last ``tau``.

    """
    if not 0.0 < theta < 1.0:
        msg = f'line search shrink factor must lie in (0, 1), got {theta}'
        raise ValueError(msg)
    if tau_init <= 0.0:
        msg = f'line search start must be positive, got {tau_init}'
        raise ValueError(msg)
    fx = F.value(x)
    gx = F.grad(x)
    slack = 1e-12 * max(1.0, abs(fx))
    tau = tau_init
    for _ in range(max_halvings + 1):
        x_next = G.prox(tau, x - tau * gx)
        d = x_next - x
        if F.value(x_next) <= fx + inner(gx, d) + inner(d, d) / (2.0 * tau) + slack:
            return x_next, tau
        tau *= theta
    msg = f'line search failed after {max_halvings} reductions'
    raise ConvergenceError(msg, tau / theta)


def linesearch_fb_step(
    state: SolverState, G: ProxFn, F: SmoothFn, tau_init: float, theta: float
) -> SolverState:
    """Forward-backward step with its step length chosen by ``backtrack_linesearch``."""
    x_next, tau = backtrack_linesearch(F, G, state.x, tau_init, theta)
    return replace(state, x=x_next, tau_k=tau, k=state.k + 1)


def m_norm(K: LinOp, tau: float, sigma: float, x: Point, y: Point) -> float:
    """Primal-dual metric ``sqrt(|x|^2/tau - 2<Kx, y> + |y|^2/sigma)``."""
    sq = inner(x, x) / tau - 2.0 * inner(K.apply(x), y) + inner(y, y) / sigma
    return math.sqrt(max(sq, 0.0))


# Driver


type GapMonitor = Callable[[SolverState, SolverState], float | None]
type Reference = Point | tuple[Point, Point | None]


def _dist(ref: Reference | None, x: Point, y: Point | None) -> float | None:
    if ref is None:
        return None
    if isinstance(ref, tuple):
        xr, yr = ref
        d2 = inner(x - xr, x - xr)
        if yr is not None and y is not None:
            d2 += inner(y - yr, y - yr)
        return math.sqrt(d2)
    return norm(x - ref)


def _build_step(
    prob: CompositeProblem | AdmmProblem, algo: Algo, cfg: SolverConfig
) -> tuple[Step, SolverState, Callable[[SolverState, SolverState], float]]:
    """Step function, initial parameters and residual definition for ``algo``."""

    def primal_res(s0: SolverState, s1: SolverState) -> float:
        return norm(s1.x - s0.x) / s1.tau_k

    if algo in (Algo.ADMM, Algo.PADMM):
        aprob = prob.as_admm() if isinstance(prob, CompositeProblem) else prob
        tau = 1.0 if cfg.tau0 is None else cfg.tau0

        def admm_res(s0: SolverState, s1: SolverState) -> float:
            dl = 0.0 if s0.y is None or s1.y is None else norm(s1.y - s0.y) / tau
            dz = 0.0 if s0.z is None or s1.z is None else norm(s1.z - s0.z)
            return max(norm(s1.x - s0.x), dz, dl)

        init = SolverState(
            x=np.zeros(aprob.A.in_dim), y=np.zeros(aprob.c.size), z=np.zeros(aprob.B.in_dim), tau_k=tau
        )
        if algo is Algo.ADMM:
            return (lambda s: admm_step(s, aprob, tau)), init, admm_res
        na, nb = aprob.A.norm(), aprob.B.norm()
        sigma = cfg.sigma0 if cfg.sigma0 is not None else 0.99 / (tau * na * na)
        theta = cfg.padmm_theta if cfg.padmm_theta is not None else 1.0 / (tau * nb * nb)
        check_padmm_steps(aprob, sigma, theta, tau)
        return (lambda s: precond_admm_step(s, aprob, sigma, theta, tau)), replace(init, sigma_k=sigma), admm_res

    if not isinstance(prob, CompositeProblem):
        msg = f'{algo} needs a CompositeProblem'
        raise TypeError(msg)

    n = prob.n
    match algo:
        case Algo.PP:
            if prob.E is not None:
                msg = f'{prob.name}: proximal point needs E absent'
                raise ValueError(msg)
            G = prob.prox_part()
            tau = 1.0 if cfg.tau0 is None else cfg.tau0
            step: Step = lambda s: pp_step(s, G, tau)
            return step, SolverState(x=np.zeros(n), tau_k=tau), primal_res
        case Algo.FB:
            G = prob.prox_part()
            F = prob.E if prob.E is not None else SmoothFn.zero()
            if cfg.linesearch:
                theta, tau_init = cfg.ls_theta, cfg.ls_tau_init
                step = lambda s: linesearch_fb_step(s, G, F, tau_init, theta)
                return step, SolverState(x=np.zeros(n), tau_k=tau_init), primal_res
            if cfg.tau0 is not None:
                tau = cfg.tau0
            else:
                lip = prob.smooth_lipschitz()
                tau = 1.0 if lip == 0.0 else 1.0 / lip
            step = lambda s: fb_step(s, G, F, tau)
            return step, SolverState(x=np.zeros(n), tau_k=tau), primal_res
        case Algo.DRS:
            if prob.K is not None or prob.E is not None or prob.F0 is None:
                msg = f'{prob.name}: Douglas-Rachford needs F0 and G, no K and no E'
                raise ValueError(msg)
            F0 = prob.F0
            tau = 1.0 if cfg.tau0 is None else cfg.tau0

            def drs_res(s0: SolverState, s1: SolverState) -> float:
                if s0.z is None or s1.z is None:
                    return norm(s1.x - s0.x) / tau
                return norm(s1.z - s0.z) / tau

            step = lambda s: drs_step(s, F0, prob.G, tau)
            return step, SolverState(x=np.zeros(n), tau_k=tau), drs_res
        case Algo.PDPS | Algo.PDES:
            def pd_res(s0: SolverState, s1: SolverState) -> float:
                ry = 0.0
                if s0.y is not None and s1.y is not None:
                    ry = norm(s1.y - s0.y) / s1.sigma_k
                return max(norm(s1.x - s0.x) / s1.tau_k, ry)

            init = SolverState(x=np.zeros(n), y=np.zeros(prob.m))
            if algo is Algo.PDES:
                step = lambda s: pdes_step(s, prob, cfg)
                return step, init, pd_res
            tau_d, sigma_d = pdps_default_steps(prob, gap_mode=cfg.gap_mode)
            tau = tau_d if cfg.tau0 is None else cfg.tau0
            sigma = sigma_d if cfg.sigma0 is None else cfg.sigma0
            check_pdps_steps(prob, tau, sigma, gap_mode=cfg.gap_mode)
            step = lambda s: pdps_step(s, prob, cfg)
            return step, replace(init, tau_k=tau, sigma_k=sigma), pd_res
        case _:
            msg = f'unsupported algorithm {algo}'
            raise ValueError(msg)


def _wrap(step: Step, prob: CompositeProblem | AdmmProblem, algo: Algo, cfg: SolverConfig, init: SolverState) -> Step:
    if cfg.overrelax:
        if algo not in (Algo.PP, Algo.FB, Algo.PDPS) or not isinstance(prob, CompositeProblem):
            msg = f'over-relaxation is not supported for {algo}'
            raise ValueError(msg)
        lip = 0.0 if algo is Algo.PP else prob.smooth_lipschitz()
        knorm = prob.op().norm() if algo is Algo.PDPS else 0.0
        lb = overrelax_lower_bound(
            algo, tau=init.tau_k, lipschitz=lip, sigma=init.sigma_k, knorm=knorm
        )
        lam = max(lb, 1.0) if cfg.overrelax_lambda is None else cfg.overrelax_lambda
        return overrelax_wrap(step, lam, lower_bound=lb)
    if cfg.inertia:
        if algo not in (Algo.PP, Algo.FB):
            msg = f'inertia is not supported for {algo}'
            raise ValueError(msg)
        return inertia_wrap(step)
    return step


def run(
    prob: CompositeProblem | AdmmProblem,
    algo: Algo | str,
    cfg: SolverConfig,
    *,
    x0: Point | None = None,
    y0: Point | None = None,
    reference: Reference | None = None,
    gap_monitor: GapMonitor | None = None,
    keep_iterates: bool = False,
) -> Trace:
    """
    .. admonition:: Solver driver

        Iterate ``algo`` until its fixed point residual drops to
        ``cfg.tol`` or ``cfg.max_iter`` steps are taken.

        - residual: ``|x+ - x|/tau``; primal-dual methods take the maximum
          with ``|y+ - y|/sigma``; Douglas-Rachford uses ``|z+ - z|/tau``;
          ADMM uses ``max(|x+ - x|, |z+ - z|, |lam+ - lam|/tau)``
        - ``reference``: a point, giving the primal distance, or a pair,
          giving the joint distance
        - ``gap_monitor(prev, next)`` fills the gap column

    :raises AdmissibilityError: On inadmissible steps.
    :raises ValueError: When ``algo`` does not fit the problem shape.

    """
    algo = Algo(algo)
    if cfg.linesearch and algo is not Algo.FB:
        msg = f'line search is only available for fb, not {algo}'
        raise ValueError(msg)
    step, init, residual = _build_step(prob, algo, cfg)
    if x0 is not None:
        if x0.shape != init.x.shape:
            msg = f'x0 has shape {x0.shape}, expected {init.x.shape}'
            raise DimensionError(msg)
        init = replace(init, x=as_point(x0))
    if y0 is not None:
        if init.y is None or y0.shape != init.y.shape:
            msg = f'y0 does not fit the dual space of {algo}'
            raise DimensionError(msg)
        init = replace(init, y=as_point(y0))
    step = _wrap(step, prob, algo, cfg, init)

    if gap_monitor is not None and algo is Algo.FB and isinstance(prob, CompositeProblem) and prob.E is not None:
        lip = prob.E.lipschitz
        if not isinstance(lip, NoValue) and not cfg.linesearch and init.tau_k * lip > 1.0:
            log.warning('tau*L = %.4g > 1, gap monitoring disabled', init.tau_k * lip)
            gap_monitor = None

    composite = prob if isinstance(prob, CompositeProblem) else None
    with_dual = algo in (Algo.PDPS, Algo.PDES) and composite is not None and composite.has_dual_value
    trace = Trace(str(algo), initial=(init.x, init.y) if keep_iterates else None)
    t_start = time.perf_counter()
    state = init
    for _ in range(cfg.max_iter):
        nxt = step(state)
        res = residual(state, nxt)
        pval: float | None = None
        if composite is not None:
            pval = composite.primal_value(nxt.x)
        elif isinstance(prob, AdmmProblem) and nxt.z is not None:
            pval = prob.value(nxt.x, nxt.z)
        dval = composite.dual_value(nxt.y) if with_dual and composite is not None and nxt.y is not None else None
        gap = gap_monitor(state, nxt) if gap_monitor is not None else None
        lam_col = nxt.lambda_k if (cfg.overrelax or cfg.inertia) else None
        sigma_col = nxt.sigma_k if algo in (Algo.PDPS, Algo.PDES, Algo.PADMM) else None
        omega_col = nxt.omega_k if algo is Algo.PDPS else None
        trace.append(
            TraceRecord(
                nxt.k,
                res,
                pval,
                dval,
                gap,
                _dist(reference, nxt.x, nxt.y),
                nxt.tau_k,
                sigma_col,
                omega_col,
                lam_col,
            ),
            nxt.x if keep_iterates else None,
            nxt.y,
        )
        if nxt.k % cfg.log_every == 0:
            log.debug('%s k=%d residual=%.3e value=%s', algo, nxt.k, res, pval)
        state = nxt
        if res <= cfg.tol:
            trace.converged = True
            break
    trace.final = state
    log.info(
        '%s %s after %d iterations, residual %.3e, %.3fs',
        algo,
        'converged' if trace.converged else 'stopped',
        state.k,
        trace.last_residual,
        time.perf_counter() - t_start,
    )
    return trace
