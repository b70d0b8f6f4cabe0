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
Diagnostics
===========

.. admonition:: Turning convergence statements into measurements

    - Lagrangian and duality gaps, ergodic averages and monitors
    - Fejer monotonicity checks, Euclidean or in a custom metric
    - empirical rate fits: power law, linear, superlinear
    - distance to the solution face of a LASSO problem
    - closed form iteration bounds for forward-backward, its inertial
      variant and primal-dual splitting

"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
import logging
import math
from typing import Literal
import numpy as np
import numpy.typing as npt
from scipy.stats import linregress
from pythonic_fp.proxkit.core import LinOp, Point, inner, norm
from pythonic_fp.proxkit.splitting import CompositeProblem, SolverState, m_norm
from pythonic_fp.proxkit.trace import Trace

__all__ = [
    'GapEval',
    'RateFit',
    'lagrangian_gap',
    'duality_gap',
    'gap_eval',
    'ergodic_average',
    'testing_weights',
    'ErgodicMonitor',
    'fejer_check',
    'pdps_metric',
    'fit_rate',
    'make_face_distance',
    'face_distance',
    'fb_value_bound',
    'fista_value_bound',
    'fb_strong_bound',
    'pdps_gap_bound',
    'value_gap_monitor',
]

log = logging.getLogger(__name__)

type Pair = tuple[Point, Point]


@dataclass(frozen=True, slots=True)
class GapEval:
    """Both gaps at ``at``, the Lagrangian one relative to a base pair."""
    lagrangian_gap: float
    duality_gap: float
    at: Pair


@dataclass(frozen=True, slots=True)
class RateFit:
    """
    .. admonition:: Fitted convergence rate

        - ``power``: ``v_k ~ C k^slope``
        - ``linear``: ``v_k ~ C factor^k``, ``slope = log(factor)``
        - ``superlinear``: successive ratios collapsing

        ``window`` is the inclusive range of ``k`` used, ``stderr`` the
        standard error of ``slope`` (of ``factor`` for the linear model).

    """
    model: Literal['power', 'linear', 'superlinear']
    slope: float
    factor: float
    r2: float
    window: tuple[int, int]
    stderr: float

    def describe(self) -> str:
        match self.model:
            case 'power':
                return f'power slope={self.slope:.2f}±{self.stderr:.2f} r2={self.r2:.4f}'
            case 'linear':
                return f'linear μ={self.factor:.3f}±{self.stderr:.3f} r2={self.r2:.4f}'
            case _:
                return f'superlinear last ratio={self.factor:.3e}'


def _ext_sub(a: float, b: float) -> float:
    d = a - b
    return math.inf if math.isnan(d) else d


def lagrangian_gap(prob: CompositeProblem, u: Pair, base: Pair) -> float:
    """
    .. admonition:: Lagrangian gap

        ``L(x, y_base) - L(x_base, y)`` with
        ``L(x, y) = F0(x) + E(x) + <Kx, y> - G*(y)``. An undefined
        difference of infinities is reported as ``math.inf``.

    """
    x, y = u
    xb, yb = base
    return _ext_sub(prob.lagrangian(x, yb), prob.lagrangian(xb, y))


def duality_gap(prob: CompositeProblem, u: Pair) -> float:
    """Primal minus dual value, needs closed form conjugates."""
    x, y = u
    return _ext_sub(prob.primal_value(x), prob.dual_value(y))


def gap_eval(prob: CompositeProblem, u: Pair, base: Pair) -> GapEval:
    return GapEval(lagrangian_gap(prob, u, base), duality_gap(prob, u), u)


def ergodic_average(points: Sequence[Point], weights: Sequence[float] | None = None) -> Point:
    """
    .. admonition:: Ergodic average

        Convex combination of ``points`` with normalized positive
        ``weights``, uniform when omitted.

    :raises ValueError: On an empty list, a length mismatch or a nonpositive weight.

    """
    if len(points) == 0:
        msg = 'ergodic_average of an empty list'
        raise ValueError(msg)
    pts = np.stack(points)
    if weights is None:
        return np.asarray(pts.mean(axis=0), dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(points),):
        msg = f'{len(points)} points but {w.size} weights'
        raise ValueError(msg)
    if np.any(w <= 0.0):
        msg = 'ergodic weights must be positive'
        raise ValueError(msg)
    return np.asarray((w / w.sum()) @ pts, dtype=np.float64)


def testing_weights(tau0: float, gamma: float, count: int, *, gap_mode: bool = False) -> list[float]:
    """
    .. admonition:: Ergodic weights of the accelerated rule

        ``tau_k phi_k`` for ``k < count`` with ``phi_0 = 1``,
        ``phi_{k+1} = phi_k (1 + 2 gamma tau_k)`` and
        ``tau_{k+1} = tau_k/sqrt(1 + 2 gamma tau_k)``; ``gap_mode``
        replaces the ``2`` by ``1``.

    """
    mult = 1.0 if gap_mode else 2.0
    tau, phi = tau0, 1.0
    out = []
    for _ in range(count):
        out.append(tau * phi)
        grow = 1.0 + mult * gamma * tau
        phi *= grow
        tau /= math.sqrt(grow)
    return out


class ErgodicMonitor:
    """
    .. admonition:: Running ergodic gap

        Usable as the ``gap_monitor`` of ``run``. Keeps a running weighted
        average of ``x^{k+1}`` and of the dual iterates and reports the
        Lagrangian gap of that pair against ``base``.

        - ``weighting``: ``uniform``, ``lambda`` (relaxation parameters)
          or ``testing`` (``tau_k phi_k`` with ``phi`` tracked from the
          step lengths)
        - ``dual``: ``next`` averages ``y^{k+1}``, ``current`` averages ``y^k``

    """
    __slots__ = '_prob', '_base', '_weighting', '_dual', '_wsum', '_xsum', '_ysum', '_phi'

    def __init__(
        self,
        prob: CompositeProblem,
        base: Pair,
        *,
        weighting: Literal['uniform', 'lambda', 'testing'] = 'uniform',
        dual: Literal['next', 'current'] = 'next',
    ) -> None:
        self._prob = prob
        self._base = base
        self._weighting = weighting
        self._dual = dual
        self._wsum = 0.0
        self._xsum = np.zeros(prob.n)
        self._ysum = np.zeros(prob.m)
        self._phi = 1.0

    def __call__(self, prev: SolverState, nxt: SolverState) -> float | None:
        match self._weighting:
            case 'uniform':
                w = 1.0
            case 'lambda':
                w = nxt.lambda_k
            case _:
                w = prev.tau_k * self._phi
                self._phi *= (prev.tau_k / nxt.tau_k) ** 2
        y = nxt.y if self._dual == 'next' else prev.y
        if y is None:
            return None
        self._wsum += w
        self._xsum += w * nxt.x
        self._ysum += w * y
        return lagrangian_gap(self._prob, self.point(), self._base)

    def point(self) -> Pair:
        """Current ergodic pair."""
        if self._wsum == 0.0:
            msg = 'ErgodicMonitor has seen no iterates'
            raise ValueError(msg)
        return self._xsum / self._wsum, self._ysum / self._wsum


def fejer_check(
    trace: Trace | Sequence[Point] | Sequence[Pair],
    reference: Point | Pair,
    *,
    metric: Callable[[Point, Point | None], float] | None = None,
    slack: float = 1e-12,
) -> tuple[bool, int | None]:
    """
    .. admonition:: Fejer monotonicity

        Check ``d_{k+1} <= d_k + slack`` for the distances
        ``d_k`` of the iterates to ``reference``. Distances are Euclidean,
        joint for pair references, or ``metric(dx, dy)`` when given.

    :param trace: A trace with stored iterates, or the iterates themselves.
    :returns: ``(True, None)`` or ``(False, first violating index)``,
              index ``0`` being the first iterate.

    """
    if isinstance(trace, Trace):
        if not trace.has_iterates:
            msg = 'fejer_check needs a trace with stored iterates'
            raise ValueError(msg)
        xs = trace.primal_iterates()
        ys = trace.dual_iterates()
        items: list[tuple[Point, Point | None]] = [
            (x, ys[ii] if ii < len(ys) else None) for ii, x in enumerate(xs)
        ]
    else:
        items = [it if isinstance(it, tuple) else (it, None) for it in trace]

    if isinstance(reference, tuple):
        xr, yr = reference
    else:
        xr, yr = reference, None

    def dist(x: Point, y: Point | None) -> float:
        dx = x - xr
        dy = None if (y is None or yr is None) else y - yr
        if metric is not None:
            return metric(dx, dy)
        return math.sqrt(inner(dx, dx) + (0.0 if dy is None else inner(dy, dy)))

    dists = [dist(x, y) for x, y in items]
    for ii in range(1, len(dists)):
        if dists[ii] > dists[ii - 1] + slack:
            log.info('Fejer violation at index %d: %.6g > %.6g', ii, dists[ii], dists[ii - 1])
            return False, ii
    return True, None


def pdps_metric(K: LinOp, tau: float, sigma: float) -> Callable[[Point, Point | None], float]:
    """The primal-dual metric as a ``fejer_check`` metric."""

    def metric(dx: Point, dy: Point | None) -> float:
        if dy is None:
            return math.sqrt(inner(dx, dx) / tau)
        return m_norm(K, tau, sigma, dx, dy)

    return metric


def _r2(fit_r: float, y: npt.NDArray[np.float64]) -> float:
    if float(np.ptp(y)) == 0.0:
        return 1.0
    return fit_r * fit_r


def fit_rate(
    values: Sequence[float] | npt.NDArray[np.float64],
    window: tuple[int, int] | None = None,
    *,
    burn_in: float = 0.1,
    ks: Sequence[int] | npt.NDArray[np.int_] | None = None,
) -> RateFit:
    """
    .. admonition:: Empirical convergence rate

        ``values[i]`` belongs to iteration ``ks[i]``, by default
        ``k = i + 1``. Without a window the first ``burn_in`` fraction
        of the entries is discarded. Least squares fits of
        ``log v`` against ``log k`` (power) and against ``k`` (linear)
        are compared by ``r2``, ties going to the power law. Three
        successive ratios each at most half the previous one declare
        superlinear convergence. Infinite values are dropped with a warning.

    :param values: Positive sequence.
    :param window: Inclusive range of ``k`` to fit.
    :param ks: Increasing iteration numbers of ``values``.
    :raises ValueError: On nonpositive values in the window or fewer
                        than three usable points.

    """
    vals = np.asarray(values, dtype=np.float64)
    if ks is None:
        kk = np.arange(1, vals.size + 1, dtype=np.float64)
    else:
        kk = np.asarray(ks, dtype=np.float64)
        if kk.shape != vals.shape or np.any(np.diff(kk) <= 0.0) or (kk.size and kk[0] < 1):
            msg = 'fit_rate needs increasing positive iteration numbers, one per value'
            raise ValueError(msg)
    if window is None:
        start = int(math.floor(burn_in * vals.size))
        keep = np.arange(vals.size) >= start
    else:
        lo, hi = window
        if lo < 1 or hi < lo:
            msg = f'invalid rate window {lo}:{hi}'
            raise ValueError(msg)
        keep = (kk >= lo) & (kk <= hi)
    ks_fit, vals = kk[keep], vals[keep]
    inf_mask = np.isinf(vals)
    if np.any(inf_mask):
        log.warning('%d infinite values excluded from the rate fit', int(inf_mask.sum()))
        ks_fit, vals = ks_fit[~inf_mask], vals[~inf_mask]
    if np.any(~(vals > 0.0)):
        msg = 'fit_rate needs positive values in the window'
        raise ValueError(msg)
    if vals.size < 3:
        msg = f'fit_rate needs at least 3 values, got {vals.size}'
        raise ValueError(msg)
    win = (int(ks_fit[0]), int(ks_fit[-1]))

    if vals.size >= 4:
        ratios = vals[-3:] / vals[-4:-1]
        if ratios[1] <= 0.5 * ratios[0] and ratios[2] <= 0.5 * ratios[1]:
            return RateFit('superlinear', math.nan, float(ratios[2]), 1.0, win, math.nan)

    logv = np.log(vals)
    if float(np.ptp(logv)) == 0.0:
        return RateFit('power', 0.0, 1.0, 1.0, win, 0.0)
    pw = linregress(np.log(ks_fit), logv)
    ln = linregress(ks_fit, logv)
    r2_pow, r2_lin = _r2(pw.rvalue, logv), _r2(ln.rvalue, logv)
    if r2_lin > r2_pow:
        mu = math.exp(ln.slope)
        return RateFit('linear', float(ln.slope), mu, r2_lin, win, mu * float(ln.stderr))
    return RateFit('power', float(pw.slope), math.nan, r2_pow, win, float(pw.stderr))


def make_face_distance(
    A: npt.NDArray[np.float64],
    b: Point,
    alpha: float,
    x_ref: Point,
    *,
    tol: float = 1e-8,
) -> Callable[[Point], float]:
    """
    .. admonition:: Distance to the LASSO solution face

        Every solution of ``min |Ax - b|^2/2 + alpha |x|_1`` shares ``Ax``
        and is supported on the equicorrelation set
        ``E = {i : |A^T(A x_ref - b)|_i >= alpha (1 - tol)}``. The returned
        map measures the distance to the affine set
        ``{x : x_i = 0 off E, A_E x_E = A x_ref}``.

    """
    corr = A.T @ (A @ x_ref - b)
    active = np.abs(corr) >= alpha * (1.0 - tol)
    AE = A[:, active]
    target = A @ x_ref
    pinv = np.linalg.pinv(AE) if AE.size else np.zeros((0, A.shape[0]))

    def dist(x: Point) -> float:
        off = x[~active]
        if AE.size == 0:
            return norm(off)
        corr_e = pinv @ (AE @ x[active] - target)
        return math.sqrt(inner(off, off) + inner(corr_e, corr_e))

    return dist


def face_distance(
    x: Point, A: npt.NDArray[np.float64], b: Point, alpha: float, x_ref: Point
) -> float:
    return make_face_distance(A, b, alpha, x_ref)(x)


def fb_value_bound(dist0: float, tau: float, iters: int) -> float:
    """``J(x^N) - J* <= |x^0 - x_ref|^2/(2 tau N)`` for ``tau L <= 1``."""
    return dist0 * dist0 / (2.0 * tau * iters)


def fista_value_bound(dist0: float, tau: float, iters: int) -> float:
    """``J(x^N) - J* <= 2|x^0 - x_ref|^2/(tau (N + 1)^2)`` for the inertial method."""
    return 2.0 * dist0 * dist0 / (tau * (iters + 1) ** 2)


def fb_strong_bound(dist0: float, tau: float, gamma: float, iters: int) -> float:
    """``|x^N - x_ref|^2 <= |x^0 - x_ref|^2 (1 + 2 tau gamma)^{-N}``."""
    return dist0 * dist0 * (1.0 + 2.0 * tau * gamma) ** (-iters)


def pdps_gap_bound(
    K: LinOp, tau: float, sigma: float, u0: Pair, u_ref: Pair, iters: int
) -> float:
    """``G_L(u_N; u_ref) <= |u^0 - u_ref|_M^2/(2N)`` for the uniform ergodic pair."""
    mn = m_norm(K, tau, sigma, u0[0] - u_ref[0], u0[1] - u_ref[1])
    return mn * mn / (2.0 * iters)


def value_gap_monitor(
    prob: CompositeProblem, value_ref: float
) -> Callable[[SolverState, SolverState], float | None]:
    """``gap_monitor`` reporting the primal suboptimality ``J(x+) - J*``."""

    def monitor(prev: SolverState, nxt: SolverState) -> float | None:
        return _ext_sub(prob.primal_value(nxt.x), value_ref)

    return monitor
