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
Problem zoo
===========

.. admonition:: Benchmark instances with closed form ingredients

    - ``lasso``: ``|Ax - b|^2/2 + alpha |x|_1``, optionally rank deficient
    - ``tv1d``: ``|x - z|^2/2 + alpha |Dx|_1`` with the forward difference ``D``
    - ``boxqp``: strongly convex quadratic over ``[-1, 1]^n``
    - ``nl``: a two dimensional nonlinear saddle problem

    Every instance carries a high precision reference solution, primal
    and dual, computed by ``reference_solve`` or in closed form.
    Synthetic noise is Gaussian with standard deviation
    ``noise_level |signal|_inf``, seeded.

"""

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
import json
import logging
import math
from typing import Any
import numpy as np
import numpy.typing as npt
from pythonic_fp.gadgets.sentinels.novalue import NoValue
from pythonic_fp.proxkit.core import (
    LinOp,
    NonlinearOp,
    Point,
    SmoothFn,
    as_point,
    check_adjoint,
    check_strong_convexity,
    estimate_op_norm,
    jacobian_check,
    norm,
    unknown,
)
from pythonic_fp.proxkit.errors import ConvergenceError, SingularSystemError
from pythonic_fp.proxkit.newton import build_fb_residual, newton_root, ssn_solve
from pythonic_fp.proxkit.nlpdps import NLStepParams, NonlinearSaddleProblem
from pythonic_fp.proxkit.prox import (
    ProxFn,
    box_indicator,
    half_sq_norm,
    l1_norm,
    sq_distance,
)
from pythonic_fp.proxkit.splitting import CompositeProblem, SolverConfig, run

__all__ = [
    'ProblemInstance',
    'difference_op',
    'make_lasso',
    'make_tv1d',
    'make_boxqp',
    'make_nl_instance',
    'reference_solve',
    'fb_fixed_point_residual',
    'pd_fixed_point_residual',
    'with_hidden_lipschitz',
    'verify_constants',
    'make_instance',
    'INSTANCES',
]

log = logging.getLogger(__name__)

REFERENCE_TOL = 1e-13
ACCEPT_TOL = 1e-10
_CHUNK = 1000

type Matrix = npt.NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class ProblemInstance:
    """
    .. admonition:: Problem with reference data

        - ``composite``: the problem handed to the solvers
        - ``params``: constructor parameters, enough to rebuild the instance
        - ``reference``: primal and dual reference solution
        - ``data``: the generated arrays (``A``, ``b``, ``z``, ``Q``, ...)
        - ``lipschitz``, ``strong_convexity``: stated constants of the smooth part
        - ``nl_params``, ``grad_bound``: step parameters and Jacobian bound
          of the nonlinear instance

    """
    name: str
    composite: CompositeProblem | NonlinearSaddleProblem
    params: Mapping[str, Any]
    reference: tuple[Point, Point] | None = None
    reference_value: float | None = None
    lipschitz: float | None = None
    strong_convexity: float = 0.0
    data: Mapping[str, npt.NDArray[np.float64]] = field(default_factory=dict)
    nl_params: NLStepParams | None = None
    grad_bound: float | None = None

    @property
    def n(self) -> int:
        return self.composite.n

    @property
    def seed(self) -> int | None:
        seed = self.params.get('seed')
        return None if seed is None else int(seed)

    def conjugates(self) -> tuple[ProxFn | None, ProxFn]:
        """``F0*`` when there is an ``F0``, and ``G*``."""
        F0 = self.composite.F0
        return (None if F0 is None else F0.conjugate()), self.composite.dual()

    def to_json(self) -> str:
        """The ``{"name", "params"}`` problem section of a run configuration."""
        params = {
            key: (val.tolist() if isinstance(val, np.ndarray) else val)
            for key, val in self.params.items()
        }
        return json.dumps({'name': self.name, 'params': params})


def fb_fixed_point_residual(prob: CompositeProblem, tau: float, x: Point) -> float:
    """``|x - prox_{tau G}(x - tau grad E(x))|`` for a problem without ``K``."""
    G = prob.prox_part()
    v = x if prob.E is None else x - tau * prob.E.grad(x)
    return norm(x - G.prox(tau, v))


def pd_fixed_point_residual(prob: CompositeProblem, x: Point, y: Point) -> float:
    """Unit step residual of the primal-dual optimality system ``-K*y in dF0(x)``, ``Kx - b in dG*(y)``."""
    kty = prob.op().adjoint(y)
    rx = norm(kty) if prob.F0 is None else norm(x - prob.F0.prox(1.0, x - kty))
    ry = norm(y - prob.dual().prox(1.0, y + prob.affine(x)))
    return max(rx, ry)


def _fb_reference(prob: CompositeProblem, budget: int, x0: Point | None) -> Point:
    lip = prob.smooth_lipschitz()
    tau = 1.0 if lip == 0.0 else 1.0 / lip
    G = prob.prox_part()
    newton_ok = G.has_newton_derivative and (prob.E is None or prob.E.has_hessian)
    nd = build_fb_residual(prob, tau) if newton_ok else None
    x = np.zeros(prob.n) if x0 is None else x0.copy()
    done = 0
    while True:
        if fb_fixed_point_residual(prob, tau, x) <= REFERENCE_TOL:
            return x
        if nd is not None:
            try:
                report = ssn_solve(nd, x, tol=REFERENCE_TOL)
            except SingularSystemError:
                log.debug('Newton polish singular after %d forward-backward steps', done)
            else:
                if report.converged:
                    return report.solution
        if done >= budget:
            return x
        chunk = min(_CHUNK, budget - done)
        trace = run(prob, 'fb', SolverConfig(tau0=tau, max_iter=chunk, tol=0.0), x0=x)
        if trace.final is None:
            return x
        x = trace.final.x
        done += chunk


def _pdps_reference(prob: CompositeProblem, budget: int) -> tuple[Point, Point]:
    x, y = np.zeros(prob.n), np.zeros(prob.m)
    done = 0
    while done < budget:
        chunk = min(10 * _CHUNK, budget - done)
        trace = run(prob, 'pdps', SolverConfig(max_iter=chunk, tol=REFERENCE_TOL), x0=x, y0=y)
        final = trace.final
        if final is None or final.y is None:
            break
        x, y = final.x, final.y
        done += chunk
        if trace.converged:
            break
    return x, y


def reference_solve(
    prob: CompositeProblem, budget: int = 10**6, *, x0: Point | None = None
) -> tuple[Point, Point, float]:
    """
    .. admonition:: High precision reference solution

        Problems without ``K`` run forward-backward at ``tau = 1/L`` in
        chunks, polished by semismooth Newton whenever the prox has a
        Newton derivative, until the fixed point residual is ``1e-13``
        or the budget is spent. The dual point is ``-grad E(x)``, the
        element of the subdifferential of ``G`` picked by the optimality
        condition. Problems with ``K`` run primal-dual splitting.

    :returns: ``(x_ref, y_ref, value)``
    :raises ConvergenceError: When the residual stays above ``1e-10``.

    """
    if prob.K is None:
        x = _fb_reference(prob, budget, x0)
        lip = prob.smooth_lipschitz()
        tau = 1.0 if lip == 0.0 else 1.0 / lip
        res = fb_fixed_point_residual(prob, tau, x)
        y = np.zeros(prob.n) if prob.E is None else -prob.E.grad(x)
    else:
        x, y = _pdps_reference(prob, budget)
        res = pd_fixed_point_residual(prob, x, y)
    if res > ACCEPT_TOL:
        msg = f'{prob.name}: reference residual {res:.3e} above {ACCEPT_TOL}'
        raise ConvergenceError(msg, res)
    value = prob.primal_value(x)
    log.info('%s reference solved, residual %.3e, value %.12g', prob.name, res, value)
    return x, y, value


def _noise(rng: np.random.Generator, signal: Point, level: float) -> Point:
    scale = level * float(np.max(np.abs(signal))) if signal.size else 0.0
    return scale * rng.standard_normal(signal.size)


def make_lasso(
    n: int,
    m: int,
    alpha: float,
    seed: int = 0,
    *,
    rank: int | None = None,
    noise_level: float = 0.01,
    A: npt.ArrayLike | None = None,
    b: npt.ArrayLike | None = None,
    budget: int = 10**6,
) -> ProblemInstance:
    """
    .. admonition:: LASSO

        Gaussian ``A`` scaled by ``1/sqrt(m)``, or of the given ``rank``,
        a planted sparse ``x*`` with ``max(1, n//10)`` nonzeros and
        ``b = A x* + noise``. Explicit ``A`` and ``b`` bypass the generator.

    """
    if n < 1 or m < 1:
        msg = f'lasso needs n, m >= 1, got n={n}, m={m}'
        raise ValueError(msg)
    if alpha <= 0.0:
        msg = f'lasso weight must be positive, got {alpha}'
        raise ValueError(msg)
    rng = np.random.default_rng(seed)
    if A is None:
        if rank is None:
            amat = rng.standard_normal((m, n)) / math.sqrt(m)
        else:
            if not 1 <= rank <= min(m, n):
                msg = f'lasso rank must lie in [1, {min(m, n)}], got {rank}'
                raise ValueError(msg)
            amat = rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n)) / math.sqrt(m * rank)
    else:
        amat = np.array(A, dtype=np.float64).reshape(m, n)
    if b is None:
        x_star = np.zeros(n)
        support = rng.choice(n, size=max(1, n // 10), replace=False)
        x_star[support] = rng.standard_normal(support.size)
        clean = amat @ x_star
        bvec = clean + _noise(rng, clean, noise_level)
    else:
        bvec = as_point(b)
        x_star = np.zeros(n)
    E = SmoothFn.least_squares(amat, bvec)
    prob = CompositeProblem(n, l1_norm(alpha), E=E, name='lasso')
    x_ref, y_ref, value = reference_solve(prob, budget)
    params: dict[str, Any] = {'n': n, 'm': m, 'alpha': alpha, 'seed': seed}
    if rank is not None:
        params['rank'] = rank
    if noise_level != 0.01:
        params['noise_level'] = noise_level
    if A is not None:
        params['A'] = amat
    if b is not None:
        params['b'] = bvec
    return ProblemInstance(
        'lasso',
        prob,
        params,
        (x_ref, y_ref),
        value,
        lipschitz=prob.smooth_lipschitz(),
        strong_convexity=E.strong_convexity,
        data={'A': amat, 'b': bvec, 'x_planted': x_star},
    )


def difference_op(n: int) -> LinOp:
    """Forward differences ``(Dx)_i = x_{i+1} - x_i``, stated norm bound ``2``."""
    if n < 2:
        msg = f'difference operator needs n >= 2, got {n}'
        raise ValueError(msg)
    zero = np.zeros(1)
    return LinOp(
        np.diff,
        lambda y: np.concatenate((zero, y)) - np.concatenate((y, zero)),
        n,
        n - 1,
        norm_bound=2.0,
    )


def _signal(kind: str | npt.ArrayLike, n: int) -> Point:
    if not isinstance(kind, str):
        sig = as_point(kind)
        if sig.size != n:
            msg = f'signal has {sig.size} samples, expected {n}'
            raise ValueError(msg)
        return sig
    t = np.arange(n, dtype=np.float64)
    match kind:
        case 'step':
            return np.where(t < n // 2, 0.0, 1.0)
        case 'constant':
            return np.ones(n)
        case 'staircase':
            return np.floor(4.0 * t / n)
        case 'sine':
            return np.sin(2.0 * math.pi * t / n)
        case _:
            msg = f'unknown tv1d signal {kind!r}'
            raise ValueError(msg)


def make_tv1d(
    n: int,
    alpha: float,
    signal: str | npt.ArrayLike = 'step',
    noise_seed: int = 0,
    *,
    noise_level: float = 0.01,
    penalty: str = 'l1',
    budget: int = 10**6,
) -> ProblemInstance:
    """
    .. admonition:: One dimensional denoising

        ``F0 = |x - z|^2/2``, ``G = alpha |.|_1`` on ``Dx``. The reference
        solves the dual box constrained quadratic program
        ``min |D*y|^2/2 - <Dz, y>`` over ``|y|_inf <= alpha``, then
        ``x_ref = z - D*y_ref``. With ``penalty='quadratic'`` the
        penalty is ``alpha |Dx|^2/2``, strongly convex on both sides, and
        the reference is a linear solve.

    """
    if alpha <= 0.0:
        msg = f'tv1d weight must be positive, got {alpha}'
        raise ValueError(msg)
    D = difference_op(n)
    clean = _signal(signal, n)
    rng = np.random.default_rng(noise_seed)
    z = clean + _noise(rng, clean, noise_level)
    F0 = sq_distance(z)
    dmat = D.to_matrix()
    match penalty:
        case 'l1':
            G = l1_norm(alpha)
            dual_qp = CompositeProblem(
                n - 1,
                box_indicator(-alpha, alpha),
                E=SmoothFn.quadratic(dmat @ dmat.T, dmat @ z),
                name='tv1d-dual',
            )
            y_ref, _, _ = reference_solve(dual_qp, budget)
            y_ref = np.clip(y_ref, -alpha, alpha)
            x_ref = z - D.adjoint(y_ref)
        case 'quadratic':
            G = half_sq_norm(alpha)
            x_ref = np.linalg.solve(np.eye(n) + alpha * dmat.T @ dmat, z)
            y_ref = alpha * D.apply(x_ref)
        case _:
            msg = f'unknown tv1d penalty {penalty!r}'
            raise ValueError(msg)
    prob = CompositeProblem(n, G, F0=F0, K=D, name='tv1d')
    params: dict[str, Any] = {'n': n, 'alpha': alpha, 'noise_seed': noise_seed}
    if not isinstance(signal, str):
        params['signal'] = clean
    elif signal != 'step':
        params['signal'] = signal
    if noise_level != 0.01:
        params['noise_level'] = noise_level
    if penalty != 'l1':
        params['penalty'] = penalty
    return ProblemInstance(
        'tv1d',
        prob,
        params,
        (x_ref, y_ref),
        prob.primal_value(x_ref),
        strong_convexity=1.0,
        data={'z': z, 'clean': clean},
    )


def make_boxqp(
    n: int,
    seed: int = 0,
    *,
    Q: npt.ArrayLike | None = None,
    b: npt.ArrayLike | None = None,
    budget: int = 10**6,
) -> ProblemInstance:
    """
    .. admonition:: Box constrained quadratic program

        ``<Qx, x>/2 - <b, x>`` over ``[-1, 1]^n`` with ``Q = M^T M + Id``
        for a seeded Gaussian ``M`` scaled by ``1/sqrt(n)`` and
        ``b ~ 2 N(0, Id)``, so some bounds are active.

    """
    if n < 1:
        msg = f'boxqp needs n >= 1, got {n}'
        raise ValueError(msg)
    rng = np.random.default_rng(seed)
    if Q is None:
        M = rng.standard_normal((n, n)) / math.sqrt(n)
        qmat = M.T @ M + np.eye(n)
    else:
        qmat = np.array(Q, dtype=np.float64).reshape(n, n)
    bvec = 2.0 * rng.standard_normal(n) if b is None else as_point(b)
    E = SmoothFn.quadratic(qmat, bvec)
    prob = CompositeProblem(n, box_indicator(-1.0, 1.0), E=E, name='boxqp')
    x_ref, y_ref, value = reference_solve(prob, budget)
    params: dict[str, Any] = {'n': n, 'seed': seed}
    if Q is not None:
        params['Q'] = qmat
    if b is not None:
        params['b'] = bvec
    return ProblemInstance(
        'boxqp',
        prob,
        params,
        (x_ref, y_ref),
        value,
        lipschitz=prob.smooth_lipschitz(),
        strong_convexity=E.strong_convexity,
        data={'Q': qmat, 'b': bvec},
    )


_NL_A = np.array([1.0, 0.0])
_NL_D = np.array([0.5, 1.0])
_NL_BOX = 0.05


def make_nl_instance(*, linear: bool = False) -> ProblemInstance:
    """
    .. admonition:: Nonlinear saddle problem on ``R^2``

        ``min |x - a|^2/2 + |K(x) - d|^2/2`` with ``K(x) = (x_1^2, x_2)``,
        ``a = (1, 0)``, ``d = (1/2, 1)``. The critical point
        ``x_ref = (2^{-1/3}, 1/2)`` comes from Newton on the gradient and
        ``y_ref = K(x_ref) - d``.

        ``K_y(x) = <K(x), y_ref>`` has Hessian ``diag(2 y_1, 0)``, so
        ``gamma_K = 0``, ``lambda = 2|y_1|``, ``L = 2``, ``theta = 1``;
        ``|DK(x)| = max(2|x_1|, 1)`` is bounded on the box of radius
        ``0.05`` around ``x_ref``. Steps ``tau = sigma = 1/2``,
        ``kappa = 1/4``, ``rho_y = 1/10``.

        ``linear=True`` swaps in ``K(x) = x``.

    """
    F0 = sq_distance(_NL_A)
    G = sq_distance(_NL_D)
    if linear:
        K = NonlinearOp.from_linop(LinOp.identity(2))
        x_ref = 0.5 * (_NL_A + _NL_D)
        y_ref = x_ref - _NL_D
        prob = NonlinearSaddleProblem(F0, G, K, name='nl-linear')
        grad_bound = 1.0
    else:
        K = NonlinearOp(
            lambda x: np.array([x[0] * x[0], x[1]]),
            lambda x, h: np.array([2.0 * x[0] * h[0], h[1]]),
            lambda x, y: np.array([2.0 * x[0] * y[0], y[1]]),
            2,
            2,
            lipschitz_jacobian=2.0,
        )

        def grad(x: Point) -> Point:
            return np.array([2.0 * x[0] ** 3 - 1.0, 2.0 * x[1] - 1.0])

        def hess(x: Point) -> Matrix:
            return np.array([[6.0 * x[0] ** 2, 0.0], [0.0, 2.0]])

        x_ref = newton_root(grad, hess, np.array([1.0, 0.0]))
        y_ref = K.apply(x_ref) - _NL_D
        grad_bound = max(2.0 * (abs(float(x_ref[0])) + _NL_BOX), 1.0)
        prob = NonlinearSaddleProblem(
            F0,
            G,
            K,
            gamma_K=0.0,
            theta_bound=1.0,
            lambda_bound=2.0 * abs(float(y_ref[0])),
            name='nl',
        )
    params = NLStepParams(tau=0.5, sigma=0.5, kappa=0.25, rho_y=0.1)
    return ProblemInstance(
        'nl',
        prob,
        {'linear': linear} if linear else {},
        (x_ref, y_ref),
        prob.primal_value(x_ref),
        lipschitz=0.0 if linear else 2.0,
        strong_convexity=1.0,
        nl_params=params,
        grad_bound=grad_bound,
    )


def verify_constants(inst: ProblemInstance, *, trials: int = 100, seed: int = 0) -> dict[str, bool]:
    """
    .. admonition:: Check the stated constants of an instance

        - ``lipschitz``: power iteration on the Hessian at the reference
        - ``strong_convexity``: random pair strong monotonicity sampling
        - ``adjoint``, ``knorm``: adjoint identity and norm bound of ``K``
        - ``jacobian``, ``hessian_bounds``: for the nonlinear instance,
          Jacobian finite differences and sampled curvature of ``K_y``
          within ``[gamma_K, lambda]`` on the stated box

    """
    out: dict[str, bool] = {}
    prob = inst.composite
    if isinstance(prob, CompositeProblem):
        E = prob.E
        if E is not None and inst.lipschitz is not None and E.has_hessian:
            base = np.zeros(prob.n) if inst.reference is None else inst.reference[0]
            hop = LinOp(lambda h: E.hess_apply(base, h), lambda h: E.hess_apply(base, h), prob.n, prob.n)
            measured = estimate_op_norm(hop, seed=seed)
            out['lipschitz'] = measured <= inst.lipschitz * (1.0 + 1e-5) + 1e-12
        if E is not None and inst.strong_convexity > 0.0:
            measured = check_strong_convexity(E, prob.n, trials, seed=seed)
            out['strong_convexity'] = measured >= inst.strong_convexity * (1.0 - 1e-8) - 1e-12
        elif prob.F0 is not None and inst.strong_convexity > 0.0:
            out['strong_convexity'] = prob.F0.strong_convexity >= inst.strong_convexity
        if prob.K is not None:
            out['adjoint'] = check_adjoint(prob.K, trials, seed=seed) <= 1e-10
            bound = prob.K.norm_bound
            if isinstance(bound, NoValue):
                out['knorm'] = True
            else:
                out['knorm'] = estimate_op_norm(prob.K, seed=seed) <= bound * (1.0 + 1e-5)
    else:
        rng = np.random.default_rng(seed)
        xr, yr = inst.reference if inst.reference is not None else (np.zeros(prob.n), np.zeros(prob.m))
        out['jacobian'] = jacobian_check(prob.K, xr, seed=seed) <= 1e-6
        ok = True
        for _ in range(trials):
            zeta = xr + _NL_BOX * rng.uniform(-1.0, 1.0, prob.n)
            h = rng.standard_normal(prob.n)
            eps = 1e-4
            curv = _curvature(prob.K, yr, zeta, h, eps)
            hh = float(h @ h)
            slack = 1e-5 * max(1.0, hh)
            ok &= prob.gamma_K * hh - slack <= curv <= prob.lambda_bound * hh + slack
            if inst.grad_bound is not None:
                jn = norm(prob.K.jacobian_apply(zeta, h)) / math.sqrt(hh)
                ok &= jn <= inst.grad_bound * (1.0 + 1e-12)
        out['hessian_bounds'] = bool(ok)
    for key, good in out.items():
        if not good:
            log.warning('%s: stated constant %s failed verification', inst.name, key)
    return out


def _curvature(K: NonlinearOp, y: Point, x: Point, h: Point, eps: float) -> float:
    """``<D^2 K_y(x) h, h>`` of ``K_y = <K(.), y>`` by central second differences."""
    fp = float(K.apply(x + eps * h) @ y)
    f0 = float(K.apply(x) @ y)
    fm = float(K.apply(x - eps * h) @ y)
    return (fp - 2.0 * f0 + fm) / (eps * eps)


INSTANCES: dict[str, Callable[..., ProblemInstance]] = {
    'lasso': make_lasso,
    'tv1d': make_tv1d,
    'boxqp': make_boxqp,
    'nl': make_nl_instance,
}


def make_instance(name: str, **params: Any) -> ProblemInstance:
    """
    Build a zoo instance by name.

    :raises ValueError: On an unknown name.
    :raises TypeError: On parameters the constructor does not take.

    """
    try:
        maker = INSTANCES[name]
    except KeyError:
        msg = f'unknown problem {name!r}, expected one of {sorted(INSTANCES)}'
        raise ValueError(msg) from None
    return maker(**params)


def with_hidden_lipschitz(inst: ProblemInstance) -> ProblemInstance:
    """Copy with the Lipschitz factor of ``E`` marked unknown, for line search runs."""
    prob = inst.composite
    if not isinstance(prob, CompositeProblem) or prob.E is None:
        msg = f'{inst.name}: no smooth part to hide the constant of'
        raise ValueError(msg)
    return replace(inst, composite=replace(prob, E=prob.E.with_lipschitz(unknown)))
