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
Acceptance suites
=================

.. admonition:: Executable convergence criteria

    Eighteen numbered criteria turning closed forms, identities,
    equivalences and rate statements into pass/fail checks at desk
    scale. ``default`` runs all of them at full size, ``quick`` runs
    the exact and a priori bounded ones on small instances.

    Rate criteria fit ``fit_rate`` on the window up to the first value
    lost to roundoff. For one sided bounds on a power law slope a
    linear or superlinear fit counts as faster than any power.

"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import lru_cache
import json
import logging
import math
from pathlib import Path
import tempfile
import numpy as np
from pythonic_fp.proxkit.cli import EXIT_MAX_ITER, EXIT_OK, cmd_solve, rates_fit
from pythonic_fp.proxkit.core import LinOp, Point, SmoothFn, grad_check, inner, norm
from pythonic_fp.proxkit.diagnostics import (
    ErgodicMonitor,
    RateFit,
    fb_strong_bound,
    fejer_check,
    fit_rate,
    make_face_distance,
    pdps_metric,
    value_gap_monitor,
)
from pythonic_fp.proxkit.newton import (
    approximation_ratios,
    build_fb_residual,
    fb_warm_start,
    ssn_solve,
)
from pythonic_fp.proxkit.nlpdps import NonlinearSaddleProblem, as_composite, find_safe_start, run_nlpdps
from pythonic_fp.proxkit.problems import (
    ProblemInstance,
    difference_op,
    make_boxqp,
    make_lasso,
    make_nl_instance,
    make_tv1d,
    with_hidden_lipschitz,
)
from pythonic_fp.proxkit.prox import (
    ProxFn,
    abs_value,
    box_indicator,
    half_sq_norm,
    l1_norm,
    l2_norm,
    linf_ball,
    moreau_decompose,
    moreau_envelope,
    nonneg_indicator,
    nonpos_indicator,
    point_indicator,
    prox_abs,
    prox_l1,
    prox_l2norm,
    prox_quadratic,
    proj_interval,
    proj_linf_ball,
    sq_distance,
    tilt,
    zero,
)
from pythonic_fp.proxkit.splitting import (
    AdmmProblem,
    CompositeProblem,
    SolverConfig,
    SolverState,
    inertial_lambdas,
    pdps_step,
    precond_admm_step,
    run,
)
from pythonic_fp.proxkit.trace import COLUMNS, Trace

__all__ = ['Scale', 'CriterionResult', 'CRITERIA', 'SUITES', 'run_suite', 'run_criterion']

log = logging.getLogger(__name__)

type Check = tuple[bool, str]


@dataclass(frozen=True, slots=True)
class Scale:
    """Instance sizes and iteration counts of a suite."""
    samples: int = 10_000
    pairs: int = 200
    lasso_n: int = 200
    lasso_m: int = 100
    lasso_alpha: float = 0.1
    rate_iters: int = 5000
    window: tuple[int, int] = (50, 5000)
    tv_n: int = 100
    tv_alpha: float = 0.1
    boxqp_n: int = 50
    strong_iters: int = 200
    lambda_count: int = 10_000
    equiv_iters: int = 200
    nl_iters: int = 200
    seed: int = 0


@dataclass(frozen=True, slots=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f'{"PASS" if self.passed else "FAIL"} {self.number:2d} {self.title}: {self.detail}'


# Shared instances and runs


@lru_cache(maxsize=8)
def _lasso(n: int, m: int, alpha: float, seed: int) -> ProblemInstance:
    return make_lasso(n, m, alpha, seed)


@lru_cache(maxsize=4)
def _boxqp(n: int, seed: int) -> ProblemInstance:
    return make_boxqp(n, seed)


@lru_cache(maxsize=4)
def _tv1d(n: int, alpha: float, penalty: str) -> ProblemInstance:
    return make_tv1d(n, alpha, penalty=penalty)


def _lasso_of(scale: Scale) -> ProblemInstance:
    return _lasso(scale.lasso_n, scale.lasso_m, scale.lasso_alpha, scale.seed)


def _composite(inst: ProblemInstance) -> CompositeProblem:
    prob = inst.composite
    if not isinstance(prob, CompositeProblem):
        msg = f'{inst.name} is not a composite problem'
        raise TypeError(msg)
    return prob


def _ref(inst: ProblemInstance) -> tuple[Point, Point]:
    if inst.reference is None:
        msg = f'{inst.name} has no reference solution'
        raise ValueError(msg)
    return inst.reference


@lru_cache(maxsize=4)
def _fb_lasso_trace(scale: Scale, inertia: bool, linesearch: bool) -> Trace:
    inst = _lasso_of(scale)
    if linesearch:
        inst = with_hidden_lipschitz(inst)
    prob = _composite(inst)
    value_ref = inst.reference_value if inst.reference_value is not None else math.nan
    cfg = SolverConfig(max_iter=scale.rate_iters, tol=0.0, inertia=inertia, linesearch=linesearch)
    return run(prob, 'fb', cfg, reference=_ref(inst)[0], gap_monitor=value_gap_monitor(prob, value_ref))


def _positive_run(trace: Trace, column: str, floor: float = 0.0) -> tuple[list[int], list[float]]:
    """Entries of ``column`` up to the first one at or below ``floor``."""
    ks: list[int] = []
    vals: list[float] = []
    for rec in trace:
        val = rec.get(column)
        if val is None:
            continue
        if not val > floor:
            break
        ks.append(rec.k)
        vals.append(float(val))
    return ks, vals


def _window_fit(ks: Sequence[int], vals: Sequence[float], window: tuple[int, int]) -> tuple[RateFit, tuple[int, int]]:
    hi = min(window[1], ks[-1]) if ks else window[0]
    win = (window[0], hi)
    return fit_rate(vals, win, ks=ks), win


def _faster_than(fit: RateFit, slope: float) -> bool:
    return fit.model != 'power' or fit.slope <= slope


@lru_cache(maxsize=2)
def _fb_lasso_fit(scale: Scale) -> tuple[RateFit, tuple[int, int]]:
    ks, vals = _positive_run(_fb_lasso_trace(scale, False, False), 'gap')
    return _window_fit(ks, vals, scale.window)


def _zoo(n: int, rng: np.random.Generator) -> list[ProxFn]:
    c = rng.standard_normal(n)
    return [
        zero(),
        l1_norm(0.7),
        abs_value(),
        half_sq_norm(2.0),
        sq_distance(c, 1.5),
        box_indicator(-1.0, 2.0),
        nonneg_indicator(),
        nonpos_indicator(),
        linf_ball(1.0),
        linf_ball(0.5),
        l2_norm(1.3),
        point_indicator(c),
    ]


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


# Criteria


def _c1_closed_forms(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed)
    ts = 10.0 * rng.standard_normal(scale.samples)
    gs = rng.uniform(0.01, 10.0, scale.samples)
    for t, g in zip(ts, gs):
        t, g = float(t), float(g)
        if not _close(prox_quadratic(t, g), t / (1.0 + g), 1e-14):
            return False, f'prox_quadratic at t={t}, gamma={g}'
        if not _close(prox_abs(t, g), math.copysign(max(abs(t) - g, 0.0), t), 1e-14):
            return False, f'prox_abs at t={t}, gamma={g}'
        if not _close(proj_interval(t, -1.0, 2.0), min(max(t, -1.0), 2.0), 1e-14):
            return False, f'proj_interval at t={t}'
    for _ in range(scale.samples):
        x = 3.0 * rng.standard_normal(5)
        g = float(rng.uniform(0.01, 5.0))
        nx = norm(x)
        checks = (
            ('prox_l1', prox_l1(x, g), np.sign(x) * np.maximum(np.abs(x) - g, 0.0)),
            ('proj_linf_ball', proj_linf_ball(x), x / np.maximum(1.0, np.abs(x))),
            ('prox_l2norm', prox_l2norm(x, g), max(0.0, 1.0 - g / nx) * x),
        )
        for name, got, want in checks:
            if norm(got - want) > 1e-14 * max(1.0, norm(want)):
                return False, f'{name} mismatch {norm(got - want):.3e}'
    return True, f'{scale.samples} scalars and vectors'


def _c2_moreau_identity(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed + 2)
    worst = 0.0
    for f in _zoo(5, rng):
        fc = f.conjugate()
        for _ in range(scale.pairs):
            x = 3.0 * rng.standard_normal(5)
            moreau_decompose(f, x)
            for g in (0.5, 1.0, 2.0):
                resid = norm(x - f.prox(g, x) - g * fc.prox(1.0 / g, x / g)) / max(1.0, norm(x))
                worst = max(worst, resid)
                if resid > 1e-10:
                    return False, f'{f.name}: residual {resid:.3e}'
    return True, f'worst residual {worst:.2e}'


def _c3_firm_nonexpansive(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed + 3)
    worst = math.inf
    for f in _zoo(5, rng):
        for h in (f, f.conjugate()):
            for g in (0.1, 1.0, 10.0):
                for _ in range(scale.pairs):
                    x, y = 3.0 * rng.standard_normal(5), 3.0 * rng.standard_normal(5)
                    d = h.prox(g, x) - h.prox(g, y)
                    slack = (inner(d, x - y) - inner(d, d)) / max(1.0, inner(x - y, x - y))
                    worst = min(worst, slack)
                    if slack < -1e-10:
                        return False, f'{h.name} gamma={g}: slack {slack:.3e}'
    return True, f'smallest slack {worst:.2e}'


def _huber(t: float, g: float) -> float:
    return abs(t) - 0.5 * g if abs(t) > g else t * t / (2.0 * g)


def _c4_moreau_yosida(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed + 4)
    f = abs_value()
    count = max(scale.samples // 10, 100)
    for _ in range(count):
        t, g = float(3.0 * rng.standard_normal()), float(rng.uniform(0.1, 3.0))
        env = moreau_envelope(f, g, np.array([t]))
        if not _close(env.env_value, _huber(t, g), 1e-12):
            return False, f'Huber mismatch at t={t}, gamma={g}'
    l1 = l1_norm(1.0)
    for _ in range(scale.pairs):
        g = float(rng.uniform(0.1, 3.0))
        x, y = rng.standard_normal(5), rng.standard_normal(5)
        gx = moreau_envelope(l1, g, x).yosida_grad
        gy = moreau_envelope(l1, g, y).yosida_grad
        if norm(gx - gy) > (1.0 / g + 1e-9) * norm(x - y):
            return False, f'Yosida map Lipschitz factor above 1/gamma at gamma={g}'
        h = 1e-6
        fd = np.array([
            (moreau_envelope(l1, g, x + h * e).env_value - moreau_envelope(l1, g, x - h * e).env_value) / (2.0 * h)
            for e in np.eye(5)
        ])
        if norm(fd - gx) > 1e-5 * max(1.0, norm(gx)):
            return False, f'envelope gradient off finite differences by {norm(fd - gx):.3e}'
    return True, f'{count} Huber points, {scale.pairs} gradient checks'


def _c5_fb_strong(scale: Scale) -> Check:
    inst = _boxqp(scale.boxqp_n, scale.seed)
    prob = _composite(inst)
    x_ref = _ref(inst)[0]
    tau = 1.0 / prob.smooth_lipschitz()
    gamma = inst.strong_convexity
    trace = run(prob, 'fb', SolverConfig(tau0=tau, max_iter=scale.strong_iters, tol=0.0), reference=x_ref)
    d0 = norm(x_ref)
    for rec in trace:
        d = rec.dist_to_ref
        if d is None:
            return False, 'no distances recorded'
        bound = fb_strong_bound(d0, tau, gamma, rec.k) * (1.0 + 1e-6) + 1e-20
        if d * d > bound:
            return False, f'k={rec.k}: {d * d:.3e} > {bound:.3e}'
    return True, f'{len(trace)} iterations within (1 + 2 tau gamma)^-N'


def _c6_fb_sublinear(scale: Scale) -> Check:
    fit, win = _fb_lasso_fit(scale)
    ok = fit.model == 'power' and -1.3 <= fit.slope <= -0.9
    return ok, f'{fit.describe()} over {win}'


def _c7_fista(scale: Scale) -> Check:
    ks, vals = _positive_run(_fb_lasso_trace(scale, True, False), 'gap')
    fit, win = _window_fit(ks, vals, scale.window)
    if not _faster_than(fit, -1.7):
        return False, f'{fit.describe()} over {win}'
    lams = inertial_lambdas(scale.lambda_count)
    for k in range(1, len(lams)):
        inv, prev = 1.0 / lams[k], 1.0 / lams[k - 1]
        if inv < 0.5 * (k + 2) * (1.0 - 1e-12):
            return False, f'1/lambda_{k} = {inv} below {(k + 2) / 2}'
        if not _close(inv * inv - inv, prev * prev, 1e-12):
            return False, f'lambda recursion broken at k={k}'
    return True, f'{fit.describe()}, {scale.lambda_count} lambdas'


def _c8_linesearch_fista(scale: Scale) -> Check:
    trace = _fb_lasso_trace(scale, True, True)
    ks, vals = _positive_run(trace, 'gap')
    fit, win = _window_fit(ks, vals, scale.window)
    if not _faster_than(fit, -1.7):
        return False, f'{fit.describe()} over {win}'
    lip = _composite(_lasso_of(scale)).smooth_lipschitz()
    taus = [t for t in trace.column('tau') if t is not None]
    smallest = min(taus)
    if smallest < 0.5 / lip:
        return False, f'accepted tau {smallest:.3e} below 0.5/L = {0.5 / lip:.3e}'
    return True, f'{fit.describe()}, smallest tau*L = {smallest * lip:.3f}'


def _c9_pdps_ergodic(scale: Scale) -> Check:
    inst = _tv1d(scale.tv_n, scale.tv_alpha, 'l1')
    prob = _composite(inst)
    ref = _ref(inst)
    trace = run(
        prob,
        'pdps',
        SolverConfig(max_iter=scale.rate_iters, tol=0.0),
        reference=ref,
        gap_monitor=ErgodicMonitor(prob, ref),
    )
    gaps = [g for g in trace.column('gap') if g is not None]
    low = min(gaps)
    if low < -1e-9:
        return False, f'negative gap {low:.3e}'
    ks, vals = _positive_run(trace, 'gap')
    fit, win = _window_fit(ks, vals, scale.window)
    ok = fit.model == 'power' and -1.3 <= fit.slope <= -0.9
    return ok, f'{fit.describe()} over {win}, smallest gap {low:.2e}'


def _sq_dist_run(trace: Trace, floor: float) -> tuple[list[int], list[float]]:
    ks, ds = _positive_run(trace, 'dist_to_ref', math.sqrt(floor))
    return ks, [d * d for d in ds]


def _c10_accelerated_pdps(scale: Scale) -> Check:
    inst = _tv1d(scale.tv_n, scale.tv_alpha, 'l1')
    prob = _composite(inst)
    cfg = SolverConfig(max_iter=scale.rate_iters, tol=0.0, accel='strong_primal', gamma=1.0)
    trace = run(prob, 'pdps', cfg, reference=_ref(inst)[0])
    ks, vals = _sq_dist_run(trace, 1e-24)
    fit, win = _window_fit(ks, vals, scale.window)
    if not _faster_than(fit, -1.7):
        return False, f'primal acceleration: {fit.describe()} over {win}'

    both = _tv1d(scale.tv_n, 1.0, 'quadratic')
    bprob = _composite(both)
    cfg = SolverConfig(max_iter=scale.rate_iters, tol=0.0, accel='strong_both')
    btrace = run(bprob, 'pdps', cfg, reference=_ref(both)[0])
    first = btrace[0]
    tau, sigma = first.tau, first.sigma
    if tau is None or sigma is None:
        return False, 'steps not recorded'
    theta = min(bprob.dual().strong_convexity * sigma, bprob.primal_strong_convexity() * tau)
    bound = 1.0 / (1.0 + 2.0 * theta) + 0.02
    bks, bvals = _sq_dist_run(btrace, 1e-24)
    bfit = fit_rate(bvals, ks=bks)
    ok = bfit.model == 'superlinear' or (bfit.model == 'linear' and bfit.factor <= bound)
    return ok, f'{fit.describe()}; both sides {bfit.describe()} (bound {bound:.3f})'


def _c11_fejer(scale: Scale) -> Check:
    pp = CompositeProblem(1, half_sq_norm(1.0), name='pp-quadratic')
    trace = run(pp, 'pp', SolverConfig(max_iter=50, tol=0.0), x0=np.array([1.0]), keep_iterates=True)
    runs: list[tuple[str, tuple[bool, int | None]]] = [('pp', fejer_check(trace, np.zeros(1)))]

    box = _boxqp(scale.boxqp_n, scale.seed)
    trace = run(_composite(box), 'fb', SolverConfig(max_iter=500, tol=0.0), keep_iterates=True)
    runs.append(('fb boxqp', fejer_check(trace, _ref(box)[0])))

    lasso = _lasso_of(scale)
    trace = run(_composite(lasso), 'fb', SolverConfig(max_iter=1000, tol=0.0), keep_iterates=True)
    runs.append(('fb lasso', fejer_check(trace, _ref(lasso)[0])))

    tv = _tv1d(scale.tv_n, scale.tv_alpha, 'l1')
    tvp = _composite(tv)
    trace = run(tvp, 'pdps', SolverConfig(max_iter=1000, tol=0.0), keep_iterates=True)
    first = trace[0]
    if first.tau is None or first.sigma is None:
        return False, 'pdps steps not recorded'
    metric = pdps_metric(tvp.op(), first.tau, first.sigma)
    runs.append(('pdps tv1d', fejer_check(trace, _ref(tv), metric=metric)))

    for name, (ok, where) in runs:
        if not ok:
            return False, f'{name}: first violation at index {where}'
    return True, ', '.join(name for name, _ in runs)


def _c12_admm_pdps(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed + 12)
    n, m = 8, 6
    A = LinOp.from_matrix(rng.standard_normal((m, n)))
    a, c = rng.standard_normal(n), rng.standard_normal(m)
    F, G = sq_distance(a), l1_norm(0.5)
    aprob = AdmmProblem(F, G, A, LinOp.identity(m), c)
    tau = 1.0
    sigma = 0.9 / (tau * A.norm() ** 2)
    theta = 1.0 / tau

    states = [SolverState(x=np.zeros(n), y=np.zeros(m), z=np.zeros(m))]
    for _ in range(scale.equiv_iters + 1):
        states.append(precond_admm_step(states[-1], aprob, sigma, theta, tau))

    pd = CompositeProblem(m, F.conjugate(), F0=tilt(G.conjugate(), -c), K=A.adjoint_op(), G_conj=F, name='admm-dual')
    cfg = SolverConfig(tau0=tau, sigma0=sigma)
    lam0 = states[0].y
    if lam0 is None:
        return False, 'no multiplier'
    state = SolverState(x=-lam0, y=states[1].x, tau_k=tau, sigma_k=sigma)
    worst = 0.0
    for j in range(scale.equiv_iters):
        state = pdps_step(state, pd, cfg)
        lam = states[j + 1].y
        if lam is None or state.y is None:
            return False, 'missing iterate'
        err = max(norm(state.x + lam), norm(state.y - states[j + 2].x))
        worst = max(worst, err)
        if err > 1e-8:
            return False, f'iteration {j}: deviation {err:.3e}'
    return True, f'{scale.equiv_iters} iterations, worst deviation {worst:.2e}'


def _c13_drs(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed + 13)
    c = 2.0 * rng.standard_normal(20)
    prob = CompositeProblem(20, l1_norm(0.5), F0=sq_distance(c), name='drs-split')
    trace = run(prob, 'drs', SolverConfig(max_iter=10_000, tol=1e-10))
    final = trace.final
    if final is None or final.y is None or not trace.converged:
        return False, f'no convergence, residual {trace.last_residual:.3e}'
    gap = norm(final.x - final.y)
    fb_res = norm(final.x - prox_l1(final.x - (final.x - c), 0.5))
    ok = gap <= 1e-8 and fb_res <= 1e-8
    return ok, f'|x - y| = {gap:.2e}, forward-backward residual {fb_res:.2e}'


def _ssn_ok(prob: CompositeProblem, x_ref: Point, seed: int) -> Check:
    lip = prob.smooth_lipschitz()
    tau = 1.0 / lip
    nd = build_fb_residual(prob, tau)
    x0 = fb_warm_start(prob, np.zeros(prob.n), tau, 20)
    report = ssn_solve(nd, x0, tol=1e-12, max_iter=30, reference=x_ref)
    if not report.converged:
        return False, f'{prob.name}: residual {report.residual_norms[-1]:.3e} after {report.iterations}'
    tail = report.ratios[-3:]
    if tail:
        if any(r1 >= r0 for r0, r1 in zip(tail, tail[1:])) or tail[-1] >= 0.1:
            return False, f'{prob.name}: error ratios {tail}'
    for s in range(3):
        ratios = approximation_ratios(nd, x_ref, seed=seed + s)
        roundoff = max(ratios) <= 1e-8
        decreasing = all(r1 < r0 for r0, r1 in zip(ratios, ratios[1:]))
        if not (roundoff or decreasing) or ratios[-1] >= 1e-3:
            return False, f'{prob.name}: Newton derivative ratios {ratios}'
    return True, f'{prob.name} in {report.iterations} steps'


def _c14_ssn(scale: Scale) -> Check:
    box = _boxqp(scale.boxqp_n, scale.seed)
    ok1, msg1 = _ssn_ok(_composite(box), _ref(box)[0], scale.seed)
    lasso = _lasso(50, 100, scale.lasso_alpha, scale.seed)
    ok2, msg2 = _ssn_ok(_composite(lasso), _ref(lasso)[0], scale.seed)
    return ok1 and ok2, f'{msg1}; {msg2}'


def _c15_nlpdps(scale: Scale) -> Check:
    inst = make_nl_instance()
    prob = inst.composite
    params = inst.nl_params
    ref = _ref(inst)
    if not isinstance(prob, NonlinearSaddleProblem) or params is None:
        return False, 'nl instance malformed'
    x0, y0, radius = find_safe_start(prob, params, ref, seed=scale.seed)
    trace = run_nlpdps(prob, params, x0=x0, y0=y0, max_iter=scale.nl_iters, tol=0.0, reference=ref)
    d0 = math.hypot(norm(x0 - ref[0]), norm(y0 - ref[1]))
    ks, vals = _positive_run(trace, 'dist_to_ref', 1e-13 * max(d0, 1e-300))
    fit = fit_rate(vals, ks=ks)
    rate_ok = (fit.model == 'linear' and fit.factor < 1.0 and fit.r2 >= 0.95) or fit.model == 'superlinear'
    if not rate_ok:
        return False, f'{fit.describe()} from radius {radius:.3g}'

    lin = make_nl_instance(linear=True)
    lprob = lin.composite
    lparams = lin.nl_params
    if not isinstance(lprob, NonlinearSaddleProblem) or lparams is None:
        return False, 'linear nl instance malformed'
    nl_trace = run_nlpdps(lprob, lparams, max_iter=100, tol=0.0, keep_iterates=True)
    cfg = SolverConfig(tau0=lparams.tau, sigma0=lparams.sigma, max_iter=100, tol=0.0)
    pd_trace = run(as_composite(lprob), 'pdps', cfg, keep_iterates=True)
    worst = 0.0
    for (x1, y1), (x2, y2) in zip(nl_trace.iterates, pd_trace.iterates):
        if y1 is None or y2 is None:
            return False, 'dual iterates missing'
        worst = max(worst, norm(x1 - x2), norm(y1 - y2))
    ok = worst <= 1e-14
    return ok, f'{fit.describe()} from radius {radius:.3g}; affine restriction deviation {worst:.1e}'


def _c16_subregular(scale: Scale) -> Check:
    inst = make_lasso(60, 40, 0.05, scale.seed, rank=20)
    prob = _composite(inst)
    x_ref = _ref(inst)[0]
    dist = make_face_distance(inst.data['A'], inst.data['b'], 0.05, x_ref)
    trace = run(prob, 'fb', SolverConfig(max_iter=3000, tol=0.0), keep_iterates=True)
    vals: list[float] = []
    for x in trace.primal_iterates(with_initial=False):
        d = dist(x)
        if d <= 1e-11:
            break
        vals.append(d)
    fit = fit_rate(vals)
    ok = fit.model == 'superlinear' or (fit.model == 'linear' and fit.factor < 1.0)
    return ok, fit.describe()


def _c17_grad_checks(scale: Scale) -> Check:
    rng = np.random.default_rng(scale.seed + 17)
    D = difference_op(scale.tv_n).to_matrix()
    fns: list[tuple[str, SmoothFn, int]] = []
    for inst in (_lasso_of(scale), _boxqp(scale.boxqp_n, scale.seed)):
        E = _composite(inst).E
        if E is not None:
            fns.append((inst.name, E, inst.n))
    fns.append(('tv1d dual', SmoothFn.quadratic(D @ D.T, rng.standard_normal(scale.tv_n - 1)), scale.tv_n - 1))
    fns.append(('zero', SmoothFn.zero(), 5))
    worst = 0.0
    for name, f, n in fns:
        for _ in range(5):
            err = grad_check(f, rng.standard_normal(n))
            worst = max(worst, err)
            if err >= 1e-6:
                return False, f'{name}: gradient error {err:.3e}'
    return True, f'{len(fns)} smooth functions, worst {worst:.2e}'


def _c18_cli_round_trip(scale: Scale) -> Check:
    inst = _lasso_of(scale)
    fit_in, win = _fb_lasso_fit(scale)
    with tempfile.TemporaryDirectory() as tmp:
        csv_path = Path(tmp) / 'lasso.csv'
        config = {
            'problem': {'name': 'lasso', 'params': dict(inst.params)},
            'algo': 'fb',
            'solver': {'max_iter': scale.rate_iters, 'tol': 0.0},
            'outputs': {'csv_path': str(csv_path)},
        }
        cfg_path = Path(tmp) / 'run.json'
        cfg_path.write_text(json.dumps(config), encoding='utf-8')
        code = cmd_solve(cfg_path, env={})
        if code not in (EXIT_OK, EXIT_MAX_ITER):
            return False, f'solve exited with {code}'
        with open(csv_path, encoding='utf-8') as fh:
            header = fh.readline().rstrip('\n')
        if header != ','.join(COLUMNS):
            return False, f'header {header!r}'
        fit_cli = rates_fit(csv_path, 'gap', win)
    diff = abs(fit_cli.slope - fit_in.slope)
    return diff <= 0.02, f'slopes {fit_in.slope:.4f} in process, {fit_cli.slope:.4f} from CSV'


CRITERIA: dict[int, tuple[str, Callable[[Scale], Check]]] = {
    1: ('prox closed forms', _c1_closed_forms),
    2: ('Moreau identity', _c2_moreau_identity),
    3: ('firm nonexpansivity', _c3_firm_nonexpansive),
    4: ('Moreau-Yosida envelope', _c4_moreau_yosida),
    5: ('forward-backward linear rate', _c5_fb_strong),
    6: ('forward-backward value rate', _c6_fb_sublinear),
    7: ('inertial forward-backward', _c7_fista),
    8: ('line search inertial forward-backward', _c8_linesearch_fista),
    9: ('primal-dual ergodic gap', _c9_pdps_ergodic),
    10: ('accelerated primal-dual', _c10_accelerated_pdps),
    11: ('Fejer monotonicity', _c11_fejer),
    12: ('ADMM and primal-dual equivalence', _c12_admm_pdps),
    13: ('Douglas-Rachford', _c13_drs),
    14: ('semismooth Newton', _c14_ssn),
    15: ('nonlinear primal-dual', _c15_nlpdps),
    16: ('local linear rate under subregularity', _c16_subregular),
    17: ('gradient checks', _c17_grad_checks),
    18: ('command line round trip', _c18_cli_round_trip),
}

QUICK = Scale(
    samples=1000,
    pairs=30,
    lasso_n=40,
    lasso_m=20,
    rate_iters=500,
    window=(20, 500),
    tv_n=30,
    boxqp_n=20,
    strong_iters=100,
    lambda_count=1000,
    equiv_iters=50,
    nl_iters=100,
)

SUITES: dict[str, tuple[Scale, tuple[int, ...]]] = {
    'default': (Scale(), tuple(CRITERIA)),
    'quick': (QUICK, (1, 2, 3, 4, 5, 12, 13, 14, 17)),
}


def run_criterion(number: int, scale: Scale) -> CriterionResult:
    """Run one criterion, any exception counts as a failure."""
    title, check = CRITERIA[number]
    try:
        passed, detail = check(scale)
    except Exception as exc:
        log.exception('criterion %d raised', number)
        passed, detail = False, f'{type(exc).__name__}: {exc}'
    log.info('criterion %d %s', number, 'passed' if passed else 'failed')
    return CriterionResult(number, title, passed, detail)


def run_suite(name: str) -> list[CriterionResult]:
    """
    Run a named suite.

    :raises KeyError: On an unknown suite name.

    """
    scale, numbers = SUITES[name]
    return [run_criterion(number, scale) for number in numbers]
