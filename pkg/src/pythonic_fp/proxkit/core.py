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
Core
====

.. admonition:: Points, linear operators and smooth functions

    - ``Point``: dense 1-D ``float64`` array, the iterate space of every solver
    - ``LinOp``: linear operator with forward map, adjoint and a norm bound
    - ``SmoothFn``: differentiable function with gradient, Lipschitz
      constant of the gradient and factor of strong convexity
    - ``NonlinearOp``: differentiable operator with Jacobian products
    - numerical utilities: operator norm estimation, gradient checking

Unknown constants are marked with the ``unknown`` sentinel rather than
``None``, which is reserved for absent components.

"""

from collections.abc import Callable, Sequence
import logging
import math
from typing import Final
import numpy as np
import numpy.typing as npt
from pythonic_fp.gadgets.sentinels.novalue import NoValue
from pythonic_fp.proxkit.errors import ConvergenceError, DimensionError

__all__ = [
    'Point',
    'Constant',
    'unknown',
    'is_known',
    'as_point',
    'inner',
    'norm',
    'LinOp',
    'SmoothFn',
    'NonlinearOp',
    'estimate_op_norm',
    'op_norm_bound',
    'check_adjoint',
    'grad_check',
    'check_lipschitz',
    'check_strong_convexity',
    'jacobian_check',
]

log = logging.getLogger(__name__)

type Point = npt.NDArray[np.float64]
type Constant = float | NoValue

unknown: Final[NoValue] = NoValue()


def is_known(c: Constant) -> bool:
    """Return ``True`` when the constant ``c`` is not the ``unknown`` sentinel."""
    return c is not unknown


def as_point(xs: object) -> Point:
    """
    .. admonition:: Make a Point

        Copy ``xs`` into a fresh finite 1-D ``float64`` array. Scalars
        become points of dimension one.

    :param xs: Array-like of real numbers.
    :returns: A new point, never aliasing ``xs``.
    :raises DimensionError: When ``xs`` is empty or not one dimensional.
    :raises ValueError: When an entry is ``NaN`` or infinite.

    """
    x = np.array(xs, dtype=np.float64)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim != 1:
        msg = f'a Point must be one dimensional, got shape {x.shape}'
        raise DimensionError(msg)
    if x.size == 0:
        msg = 'a Point must have positive dimension'
        raise DimensionError(msg)
    if not np.all(np.isfinite(x)):
        msg = 'a Point must have finite entries'
        raise ValueError(msg)
    return x


def _same_dim(x: Point, y: Point, what: str) -> None:
    if x.shape != y.shape:
        msg = f'{what}: dimension mismatch {x.shape} vs {y.shape}'
        raise DimensionError(msg)


def inner(x: Point, y: Point) -> float:
    """Euclidean inner product of two points of equal dimension."""
    _same_dim(x, y, 'inner')
    return float(np.dot(x, y))


def norm(x: Point) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(x))


class LinOp:
    """
    .. admonition:: Linear operator

        Forward and adjoint application between ``R^in_dim`` and
        ``R^out_dim``. Structure (difference operators, diagonals,
        scaled identities) lives in the closures, no sparse matrix
        type is involved.

        - ``norm_bound`` is a known upper bound of the operator norm
          or ``unknown``
        - ``scale`` is set only for scaled identities ``s*Id``
        - an estimated norm is cached on first use of ``norm()``

    """
    __slots__ = (
        '_apply',
        '_adjoint',
        '_in_dim',
        '_out_dim',
        '_norm_bound',
        '_scale',
        '_norm_cache',
    )

    def __init__(
        self,
        apply: Callable[[Point], Point],
        adjoint: Callable[[Point], Point],
        in_dim: int,
        out_dim: int,
        *,
        norm_bound: Constant = unknown,
        scale: float | None = None,
    ) -> None:
        """
        :param apply: The forward map ``x -> Kx``.
        :param adjoint: The adjoint map ``y -> K*y``.
        :param in_dim: Dimension of the domain.
        :param out_dim: Dimension of the codomain.
        :param norm_bound: Known bound on the operator norm, or ``unknown``.
        :param scale: Set to ``s`` when the operator is ``s*Id``.
        :raises ValueError: On nonpositive dimensions or a negative bound.

        """
        if in_dim < 1 or out_dim < 1:
            msg = f'LinOp dimensions must be positive, got {out_dim}x{in_dim}'
            raise ValueError(msg)
        if not isinstance(norm_bound, NoValue) and norm_bound < 0.0:
            msg = f'LinOp norm bound must be nonnegative, got {norm_bound}'
            raise ValueError(msg)
        self._apply = apply
        self._adjoint = adjoint
        self._in_dim = in_dim
        self._out_dim = out_dim
        self._norm_bound: Constant = norm_bound
        self._scale = scale
        self._norm_cache: float | None = None

    @property
    def in_dim(self) -> int:
        return self._in_dim

    @property
    def out_dim(self) -> int:
        return self._out_dim

    @property
    def norm_bound(self) -> Constant:
        return self._norm_bound

    @property
    def scale(self) -> float | None:
        return self._scale

    def __repr__(self) -> str:
        return f'LinOp({self._out_dim}x{self._in_dim})'

    def apply(self, x: Point) -> Point:
        """Forward application ``Kx``."""
        if x.shape != (self._in_dim,):
            msg = f'LinOp expects input of dimension {self._in_dim}, got {x.shape}'
            raise DimensionError(msg)
        return np.asarray(self._apply(x), dtype=np.float64)

    def __call__(self, x: Point) -> Point:
        return self.apply(x)

    def adjoint(self, y: Point) -> Point:
        """Adjoint application ``K*y``."""
        if y.shape != (self._out_dim,):
            msg = f'LinOp adjoint expects dimension {self._out_dim}, got {y.shape}'
            raise DimensionError(msg)
        return np.asarray(self._adjoint(y), dtype=np.float64)

    def adjoint_op(self) -> 'LinOp':
        """The adjoint as a ``LinOp`` in its own right."""
        return LinOp(
            self._adjoint,
            self._apply,
            self._out_dim,
            self._in_dim,
            norm_bound=self._norm_bound,
            scale=self._scale,
        )

    def to_matrix(self) -> npt.NDArray[np.float64]:
        """Dense matrix obtained by applying ``K`` to every coordinate vector."""
        cols = np.empty((self._out_dim, self._in_dim))
        e = np.zeros(self._in_dim)
        for jj in range(self._in_dim):
            e[jj] = 1.0
            cols[:, jj] = self.apply(e)
            e[jj] = 0.0
        return cols

    def norm(self) -> float:
        """
        .. admonition:: Operator norm bound

            The stated ``norm_bound`` when known, otherwise a cached
            upper estimate from ``op_norm_bound``.

        """
        if not isinstance(self._norm_bound, NoValue):
            return self._norm_bound
        if self._norm_cache is None:
            self._norm_cache = op_norm_bound(self)
        return self._norm_cache

    @classmethod
    def from_matrix(
        cls, mat: npt.ArrayLike, *, norm_bound: Constant = unknown
    ) -> 'LinOp':
        """Wrap a dense matrix."""
        m = np.array(mat, dtype=np.float64)
        if m.ndim != 2:
            msg = f'LinOp.from_matrix expects a 2-D array, got shape {m.shape}'
            raise DimensionError(msg)
        return cls(
            lambda x: m @ x,
            lambda y: m.T @ y,
            m.shape[1],
            m.shape[0],
            norm_bound=norm_bound,
        )

    @classmethod
    def identity(cls, n: int, scale: float = 1.0) -> 'LinOp':
        """The scaled identity ``scale*Id`` on ``R^n``."""
        return cls(
            lambda x: scale * x,
            lambda y: scale * y,
            n,
            n,
            norm_bound=abs(scale),
            scale=scale,
        )

    @classmethod
    def zero(cls, out_dim: int, in_dim: int) -> 'LinOp':
        """The zero map."""
        return cls(
            lambda x: np.zeros(out_dim),
            lambda y: np.zeros(in_dim),
            in_dim,
            out_dim,
            norm_bound=0.0,
        )

    @classmethod
    def diag(cls, d: npt.ArrayLike) -> 'LinOp':
        """Diagonal operator ``x -> d*x``."""
        dd = as_point(d)
        return cls(
            lambda x: dd * x,
            lambda y: dd * y,
            dd.size,
            dd.size,
            norm_bound=float(np.max(np.abs(dd))),
        )


def estimate_op_norm(
    K: LinOp, tol: float = 1e-6, max_iter: int = 5000, *, seed: int = 0
) -> float:
    """
    .. admonition:: Power iteration on K*K

        Estimate the spectral norm of ``K`` from a random unit start.
        Stops once successive Rayleigh quotients agree to ``tol``
        relative, then inflates the estimate by ``1 + tol`` so the result
        is usable as an upper bound in step-size conditions.

    :param K: Operator whose norm is wanted.
    :param tol: Relative stopping tolerance, positive.
    :param max_iter: Iteration budget.
    :param seed: Seed of the random start.
    :returns: Inflated estimate of ``||K||``; exactly ``0.0`` for a zero map.
    :raises ValueError: When ``tol`` is not positive.
    :raises ConvergenceError: When the budget is exhausted, carrying the
                              last Rayleigh quotient.

    """
    if tol <= 0.0:
        msg = f'estimate_op_norm tolerance must be positive, got {tol}'
        raise ValueError(msg)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(K.in_dim)
    v /= norm(v)
    r = norm(K.apply(v))
    if r == 0.0:
        return 0.0
    for it in range(max_iter):
        w = K.adjoint(K.apply(v))
        nw = norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        r_next = norm(K.apply(v))
        if abs(r_next - r) <= tol * r_next:
            log.info('power iteration converged after %d steps, norm %.12g', it + 1, r_next)
            return r_next * (1.0 + tol)
        r = r_next
    msg = f'power iteration did not converge in {max_iter} steps'
    raise ConvergenceError(msg, r)


def op_norm_bound(
    K: LinOp, tol: float = 1e-6, max_iter: int = 5000, *, seed: int = 0
) -> float:
    """
    .. admonition:: Safe operator norm bound

        ``estimate_op_norm`` with a Frobenius fallback, which is always an
        upper bound, when power iteration stalls.

    """
    try:
        return estimate_op_norm(K, tol, max_iter, seed=seed)
    except ConvergenceError as exc:
        frob = float(np.linalg.norm(K.to_matrix()))
        log.warning(
            'power iteration stalled at %.6g, falling back to Frobenius bound %.6g',
            exc.last_value,
            frob,
        )
        return frob


def check_adjoint(K: LinOp, trials: int = 100, *, seed: int = 0) -> float:
    """
    .. admonition:: Adjoint identity check

        Largest value of ``|<Kx, y> - <x, K*y>| / (1 + |x||y|)`` over
        random Gaussian pairs.

    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(K.in_dim)
        y = rng.standard_normal(K.out_dim)
        err = abs(inner(K.apply(x), y) - inner(x, K.adjoint(y)))
        worst = max(worst, err / (1.0 + norm(x) * norm(y)))
    return worst


class SmoothFn:
    """
    .. admonition:: Differentiable function

        Value, gradient and optionally Hessian-vector products of a
        function with Lipschitz continuous gradient.

        - ``lipschitz``: Lipschitz factor of the gradient, or ``unknown``
        - ``strong_convexity``: factor of strong convexity, ``0`` when merely convex

    """
    __slots__ = '_value', '_grad', '_hess', '_lipschitz', '_strong_convexity'

    def __init__(
        self,
        value: Callable[[Point], float],
        grad: Callable[[Point], Point],
        *,
        lipschitz: Constant = unknown,
        strong_convexity: float = 0.0,
        hess: Callable[[Point, Point], Point] | None = None,
    ) -> None:
        if strong_convexity < 0.0:
            msg = f'strong convexity factor must be nonnegative, got {strong_convexity}'
            raise ValueError(msg)
        if not isinstance(lipschitz, NoValue) and lipschitz < 0.0:
            msg = f'Lipschitz factor must be nonnegative, got {lipschitz}'
            raise ValueError(msg)
        self._value = value
        self._grad = grad
        self._hess = hess
        self._lipschitz: Constant = lipschitz
        self._strong_convexity = strong_convexity

    @property
    def lipschitz(self) -> Constant:
        return self._lipschitz

    @property
    def strong_convexity(self) -> float:
        return self._strong_convexity

    @property
    def has_hessian(self) -> bool:
        return self._hess is not None

    def value(self, x: Point) -> float:
        return float(self._value(x))

    def __call__(self, x: Point) -> float:
        return self.value(x)

    def grad(self, x: Point) -> Point:
        return np.asarray(self._grad(x), dtype=np.float64)

    def hess_apply(self, x: Point, h: Point) -> Point:
        """Hessian-vector product ``D^2 f(x) h``."""
        if self._hess is None:
            msg = 'SmoothFn has no registered Hessian-vector product'
            raise ValueError(msg)
        return np.asarray(self._hess(x, h), dtype=np.float64)

    def hessian_matrix(self, x: Point) -> npt.NDArray[np.float64]:
        """Dense Hessian assembled column by column."""
        n = x.size
        hmat = np.empty((n, n))
        e = np.zeros(n)
        for jj in range(n):
            e[jj] = 1.0
            hmat[:, jj] = self.hess_apply(x, e)
            e[jj] = 0.0
        return hmat

    def with_lipschitz(self, lipschitz: Constant) -> 'SmoothFn':
        """Copy with a different Lipschitz constant, ``unknown`` to hide it."""
        return SmoothFn(
            self._value,
            self._grad,
            lipschitz=lipschitz,
            strong_convexity=self._strong_convexity,
            hess=self._hess,
        )

    @classmethod
    def quadratic(
        cls, Q: npt.ArrayLike, b: npt.ArrayLike | None = None, c: float = 0.0
    ) -> 'SmoothFn':
        """
        .. admonition:: Quadratic function

            ``x -> <Qx, x>/2 - <b, x> + c`` for symmetric positive
            semidefinite ``Q``; constants taken from its spectrum.

        """
        qq = np.array(Q, dtype=np.float64)
        bb = np.zeros(qq.shape[0]) if b is None else as_point(b)
        eigs = np.linalg.eigvalsh(qq)
        return cls(
            lambda x: 0.5 * float(x @ (qq @ x)) - float(bb @ x) + c,
            lambda x: qq @ x - bb,
            lipschitz=float(max(eigs[-1], 0.0)),
            strong_convexity=float(max(eigs[0], 0.0)),
            hess=lambda x, h: qq @ h,
        )

    @classmethod
    def least_squares(cls, A: npt.ArrayLike, b: npt.ArrayLike) -> 'SmoothFn':
        """The data term ``x -> |Ax - b|^2 / 2``."""
        aa = np.array(A, dtype=np.float64)
        bb = as_point(b)
        svals = np.linalg.svd(aa, compute_uv=False)
        gamma = float(svals[-1] ** 2) if aa.shape[0] >= aa.shape[1] else 0.0

        def value(x: Point) -> float:
            r = aa @ x - bb
            return 0.5 * float(r @ r)

        return cls(
            value,
            lambda x: aa.T @ (aa @ x - bb),
            lipschitz=float(svals[0] ** 2),
            strong_convexity=gamma,
            hess=lambda x, h: aa.T @ (aa @ h),
        )

    @classmethod
    def zero(cls) -> 'SmoothFn':
        """The zero function with Lipschitz factor ``0``."""
        return cls(
            lambda x: 0.0,
            lambda x: np.zeros_like(x),
            lipschitz=0.0,
            hess=lambda x, h: np.zeros_like(h),
        )


def grad_check(f: SmoothFn, x: Point, h: float = 1e-6) -> float:
    """
    .. admonition:: Finite difference gradient check

        Compare ``f.grad(x)`` with central differences along every
        coordinate. The error of coordinate ``i`` is taken relative to
        ``max(1, |g_i|, |d_i|)`` so vanishing components do not blow up.

    :param f: Function under test.
    :param x: Base point.
    :param h: Difference step, positive.
    :returns: Largest coordinatewise relative error.
    :raises ValueError: On a nonpositive step or a non-finite value of ``f``.

    """
    if h <= 0.0:
        msg = f'grad_check step must be positive, got {h}'
        raise ValueError(msg)
    g = f.grad(x)
    e = np.zeros_like(x)
    worst = 0.0
    for ii in range(x.size):
        e[ii] = h
        fp, fm = f.value(x + e), f.value(x - e)
        e[ii] = 0.0
        if not (math.isfinite(fp) and math.isfinite(fm)):
            msg = f'grad_check met a non-finite function value along coordinate {ii}'
            raise ValueError(msg)
        fd = (fp - fm) / (2.0 * h)
        err = abs(g[ii] - fd) / max(1.0, abs(g[ii]), abs(fd))
        worst = max(worst, err)
    return worst


def _random_pairs(
    n: int, trials: int, seed: int, spread: float
) -> Sequence[tuple[Point, Point]]:
    rng = np.random.default_rng(seed)
    return [
        (spread * rng.standard_normal(n), spread * rng.standard_normal(n))
        for _ in range(trials)
    ]


def check_lipschitz(
    f: SmoothFn, n: int, trials: int = 100, *, seed: int = 0, spread: float = 1.0
) -> float:
    """Largest sampled ratio ``|grad f(x) - grad f(y)| / |x - y|``."""
    worst = 0.0
    for x, y in _random_pairs(n, trials, seed, spread):
        worst = max(worst, norm(f.grad(x) - f.grad(y)) / norm(x - y))
    return worst


def check_strong_convexity(
    f: SmoothFn, n: int, trials: int = 100, *, seed: int = 0, spread: float = 1.0
) -> float:
    """Smallest sampled ratio ``<grad f(x) - grad f(y), x - y> / |x - y|^2``."""
    best = math.inf
    for x, y in _random_pairs(n, trials, seed, spread):
        d = x - y
        best = min(best, inner(f.grad(x) - f.grad(y), d) / inner(d, d))
    return best


class NonlinearOp:
    """
    .. admonition:: Differentiable nonlinear operator

        ``K: R^in_dim -> R^out_dim`` with directional Jacobian products
        ``(x, h) -> DK(x)h`` and adjoint products ``(x, y) -> DK(x)*y``.

    """
    __slots__ = '_apply', '_jac', '_jac_adj', '_in_dim', '_out_dim', '_lipschitz_jacobian'

    def __init__(
        self,
        apply: Callable[[Point], Point],
        jacobian_apply: Callable[[Point, Point], Point],
        jacobian_adjoint_apply: Callable[[Point, Point], Point],
        in_dim: int,
        out_dim: int,
        *,
        lipschitz_jacobian: Constant = unknown,
    ) -> None:
        if in_dim < 1 or out_dim < 1:
            msg = f'NonlinearOp dimensions must be positive, got {out_dim}x{in_dim}'
            raise ValueError(msg)
        self._apply = apply
        self._jac = jacobian_apply
        self._jac_adj = jacobian_adjoint_apply
        self._in_dim = in_dim
        self._out_dim = out_dim
        self._lipschitz_jacobian: Constant = lipschitz_jacobian

    @property
    def in_dim(self) -> int:
        return self._in_dim

    @property
    def out_dim(self) -> int:
        return self._out_dim

    @property
    def lipschitz_jacobian(self) -> Constant:
        return self._lipschitz_jacobian

    def apply(self, x: Point) -> Point:
        return np.asarray(self._apply(x), dtype=np.float64)

    def __call__(self, x: Point) -> Point:
        return self.apply(x)

    def jacobian_apply(self, x: Point, h: Point) -> Point:
        return np.asarray(self._jac(x, h), dtype=np.float64)

    def jacobian_adjoint_apply(self, x: Point, y: Point) -> Point:
        return np.asarray(self._jac_adj(x, y), dtype=np.float64)

    def linearize(self, x: Point) -> LinOp:
        """The Jacobian at ``x`` as a ``LinOp``."""
        base = x.copy()
        return LinOp(
            lambda h: self.jacobian_apply(base, h),
            lambda y: self.jacobian_adjoint_apply(base, y),
            self._in_dim,
            self._out_dim,
        )

    @classmethod
    def from_linop(cls, K: LinOp) -> 'NonlinearOp':
        """A linear operator seen as a nonlinear one, Jacobian constant."""
        return cls(
            K.apply,
            lambda x, h: K.apply(h),
            lambda x, y: K.adjoint(y),
            K.in_dim,
            K.out_dim,
            lipschitz_jacobian=0.0,
        )


def jacobian_check(
    K: NonlinearOp, x: Point, h: float = 1e-6, trials: int = 10, *, seed: int = 0
) -> float:
    """
    .. admonition:: Finite difference Jacobian check

        Largest relative error between ``DK(x)d`` and the central
        difference ``(K(x + hd) - K(x - hd)) / 2h`` over random unit ``d``.

    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        d = rng.standard_normal(K.in_dim)
        d /= norm(d)
        jd = K.jacobian_apply(x, d)
        fd = (K.apply(x + h * d) - K.apply(x - h * d)) / (2.0 * h)
        worst = max(worst, norm(jd - fd) / max(1.0, norm(jd)))
    return worst
