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
Proximal maps
=============

.. admonition:: Closed form proximal maps and their calculus

    - scalar and componentwise closed forms
    - ``ProxFn``: convex function with value, prox and optional conjugate data
    - function zoo: norms, quadratics and indicators with closed form conjugates
    - calculus: separable sums, affine precomposition, scaling, linear tilts
    - Moreau decomposition and Moreau-Yosida envelopes

Every prox is evaluated in closed form, no inner iteration is ever run.
Values live in the extended reals, ``math.inf`` outside the domain.

"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
import math
import numpy as np
import numpy.typing as npt
from pythonic_fp.gadgets.sentinels.novalue import NoValue
from pythonic_fp.proxkit.core import Point, SmoothFn, as_point, inner, norm
from pythonic_fp.proxkit.errors import ConsistencyError, DimensionError
from pythonic_fp.proxkit.newton import dn_proj_box, dn_softshrink

__all__ = [
    'ProxFn',
    'EnvelopeEval',
    'prox_quadratic',
    'prox_abs',
    'proj_interval',
    'prox_l1',
    'proj_linf_ball',
    'prox_l2norm',
    'proj_box',
    'prox_conjugate',
    'moreau_decompose',
    'prox_separable_sum',
    'prox_affine_precompose',
    'moreau_envelope',
    'prox_of_smooth',
    'zero',
    'l1_norm',
    'abs_value',
    'half_sq_norm',
    'sq_distance',
    'box_indicator',
    'nonneg_indicator',
    'nonpos_indicator',
    'linf_ball',
    'l2_norm',
    'point_indicator',
    'separable_sum',
    'affine_precompose',
    'scale',
    'tilt',
]

type ProxMap = Callable[[float, Point], Point]
type ValueMap = Callable[[Point], float]
type WeightMap = Callable[[float, Point], Point]

_FEAS_TOL = 1e-12


def _check_gamma(gamma: float) -> None:
    if not gamma > 0.0:
        msg = f'prox step must be positive, got {gamma}'
        raise ValueError(msg)


# Scalar and componentwise closed forms


def prox_quadratic(t: float, gamma: float) -> float:
    """Prox of ``t -> t^2/2`` with step ``gamma``, namely ``t/(1 + gamma)``."""
    _check_gamma(gamma)
    return t / (1.0 + gamma)


def prox_abs(t: float, gamma: float) -> float:
    """
    .. admonition:: Soft shrinkage

        Prox of ``|.|`` with step ``gamma``. The kink interval
        ``[-gamma, gamma]`` maps to ``0``.

    """
    _check_gamma(gamma)
    if t > gamma:
        return t - gamma
    if t < -gamma:
        return t + gamma
    return 0.0


def proj_interval(t: float, a: float, b: float) -> float:
    """Projection of ``t`` onto ``[a, b]``."""
    if a > b:
        msg = f'proj_interval needs a <= b, got [{a}, {b}]'
        raise ValueError(msg)
    return min(max(t, a), b)


def prox_l1(x: Point, gamma: float) -> Point:
    """Componentwise soft shrinkage ``(|x_i| - gamma)^+ sign(x_i)``."""
    _check_gamma(gamma)
    return np.sign(x) * np.maximum(np.abs(x) - gamma, 0.0)


def proj_linf_ball(x: Point) -> Point:
    """Projection onto the unit sup-norm ball, ``x_i / max(1, |x_i|)``."""
    return x / np.maximum(1.0, np.abs(x))


def prox_l2norm(x: Point, gamma: float) -> Point:
    """Block soft shrinkage ``(1 - gamma/|x|)^+ x``."""
    _check_gamma(gamma)
    nx = norm(x)
    if nx <= gamma:
        return np.zeros_like(x)
    return (1.0 - gamma / nx) * x


def proj_box(x: Point, a: float | Point, b: float | Point) -> Point:
    """Componentwise projection onto ``[a, b]``."""
    if np.any(np.asarray(a) > np.asarray(b)):
        msg = 'proj_box needs a <= b componentwise'
        raise ValueError(msg)
    return np.minimum(np.maximum(x, a), b)


class ProxFn:
    """
    .. admonition:: Prox-simple convex function

        Value in the extended reals together with its proximal map.
        Optional data registered at construction:

        - ``conj_value``/``conj_prox``: closed forms for the Fenchel conjugate
        - ``strong_convexity`` of the function, ``conj_strong_convexity``
          of its conjugate
        - ``newton_weights``: diagonal Newton derivative of the prox,
          ``(gamma, v) -> w`` with ``D prox_{gamma f}(v) = diag(w)``

        Instances are immutable; ``conjugate()`` swaps primal and
        conjugate data, falling back to the Moreau decomposition for a
        missing conjugate prox.

    """
    __slots__ = (
        '_value',
        '_prox',
        '_strong_convexity',
        '_conj_value',
        '_conj_prox',
        '_conj_strong_convexity',
        '_domain_check',
        '_newton_weights',
        '_name',
    )

    def __init__(
        self,
        value: ValueMap,
        prox: ProxMap,
        *,
        strong_convexity: float = 0.0,
        conj_value: ValueMap | None = None,
        conj_prox: ProxMap | None = None,
        conj_strong_convexity: float = 0.0,
        domain_check: Callable[[Point], bool] | None = None,
        newton_weights: WeightMap | None = None,
        name: str = 'f',
    ) -> None:
        if strong_convexity < 0.0 or conj_strong_convexity < 0.0:
            msg = 'strong convexity factors must be nonnegative'
            raise ValueError(msg)
        self._value = value
        self._prox = prox
        self._strong_convexity = strong_convexity
        self._conj_value = conj_value
        self._conj_prox = conj_prox
        self._conj_strong_convexity = conj_strong_convexity
        self._domain_check = domain_check
        self._newton_weights = newton_weights
        self._name = name

    def __repr__(self) -> str:
        return f'ProxFn({self._name})'

    @property
    def name(self) -> str:
        return self._name

    @property
    def strong_convexity(self) -> float:
        return self._strong_convexity

    @property
    def conj_strong_convexity(self) -> float:
        return self._conj_strong_convexity

    @property
    def has_conjugate_value(self) -> bool:
        return self._conj_value is not None

    @property
    def has_newton_derivative(self) -> bool:
        return self._newton_weights is not None

    def value(self, x: Point) -> float:
        """Extended real value, ``math.inf`` outside the domain."""
        v = float(self._value(x))
        if math.isnan(v) or v == -math.inf:
            msg = f'{self._name}: value must lie in (-inf, +inf], got {v}'
            raise ValueError(msg)
        return v

    def __call__(self, x: Point) -> float:
        return self.value(x)

    def prox(self, gamma: float, x: Point) -> Point:
        """``prox_{gamma f}(x)``."""
        _check_gamma(gamma)
        return np.asarray(self._prox(gamma, x), dtype=np.float64)

    def conj_value(self, y: Point) -> float:
        """Closed form value of the Fenchel conjugate."""
        if self._conj_value is None:
            msg = f'{self._name}: no conjugate value registered'
            raise ValueError(msg)
        v = float(self._conj_value(y))
        if math.isnan(v) or v == -math.inf:
            msg = f'{self._name}: conjugate value must lie in (-inf, +inf], got {v}'
            raise ValueError(msg)
        return v

    def in_domain(self, x: Point) -> bool:
        if self._domain_check is not None:
            return self._domain_check(x)
        return math.isfinite(self.value(x))

    def newton_weights(self, gamma: float, v: Point) -> Point:
        """Diagonal of a Newton derivative of ``prox_{gamma f}`` at ``v``."""
        if self._newton_weights is None:
            msg = f'{self._name}: prox has no registered Newton derivative'
            raise ValueError(msg)
        _check_gamma(gamma)
        return np.asarray(self._newton_weights(gamma, v), dtype=np.float64)

    def conjugate(self) -> 'ProxFn':
        """The Fenchel conjugate as a ``ProxFn``."""
        conj_prox = self._conj_prox
        if conj_prox is None:
            conj_prox = lambda gamma, x: prox_conjugate(self, gamma, x)
        conj_value = self._conj_value
        if conj_value is None:
            conj_value = lambda y: self.conj_value(y)
        return ProxFn(
            conj_value,
            conj_prox,
            strong_convexity=self._conj_strong_convexity,
            conj_value=self._value,
            conj_prox=self._prox,
            conj_strong_convexity=self._strong_convexity,
            name=f'{self._name}*',
        )


@dataclass(frozen=True, slots=True)
class EnvelopeEval:
    """Moreau envelope value, prox point and Yosida gradient at one point."""
    env_value: float
    prox_point: Point
    yosida_grad: Point


def prox_conjugate(f: ProxFn, gamma: float, x: Point) -> Point:
    """Prox of the conjugate by Moreau, ``x - gamma prox_{f/gamma}(x/gamma)``."""
    _check_gamma(gamma)
    return x - gamma * f.prox(1.0 / gamma, x / gamma)


def moreau_decompose(f: ProxFn, x: Point) -> tuple[Point, Point]:
    """
    .. admonition:: Moreau decomposition

        Split ``x = prox_f(x) + prox_{f*}(x)``, the conjugate part
        computed through ``prox_conjugate``.

    :raises ConsistencyError: When the parts fail to sum back to ``x``.

    """
    p = f.prox(1.0, x)
    q = prox_conjugate(f, 1.0, x)
    defect = norm(p + q - x)
    if defect > 1e-10 * max(1.0, norm(x)):
        msg = f'{f.name}: Moreau decomposition defect {defect:.3e}'
        raise ConsistencyError(msg)
    return p, q


def _split(dims: Sequence[int], x: Point) -> list[Point]:
    if sum(dims) != x.size or any(d < 1 for d in dims):
        msg = f'block dimensions {list(dims)} do not partition a point of size {x.size}'
        raise DimensionError(msg)
    return np.split(x, np.cumsum(dims)[:-1])


def prox_separable_sum(
    fs: Sequence[ProxFn], dims: Sequence[int], gamma: float, x: Point
) -> Point:
    """Blockwise prox of ``(x_1, ..., x_m) -> sum f_i(x_i)`` with one global step."""
    if len(fs) != len(dims):
        msg = f'{len(fs)} functions for {len(dims)} blocks'
        raise DimensionError(msg)
    return np.concatenate([f.prox(gamma, xi) for f, xi in zip(fs, _split(dims, x))])


def prox_affine_precompose(
    f: ProxFn, lam: float, z: Point | float, gamma: float, x: Point
) -> Point:
    """Prox of ``x -> f(lam x + z)``, namely ``(prox_{gamma lam^2 f}(lam x + z) - z)/lam``."""
    if lam == 0.0:
        msg = 'affine precomposition needs a nonzero factor'
        raise ValueError(msg)
    _check_gamma(gamma)
    return (f.prox(gamma * lam * lam, lam * x + z) - z) / lam


def moreau_envelope(f: ProxFn, gamma: float, x: Point) -> EnvelopeEval:
    """
    .. admonition:: Moreau-Yosida regularization

        Envelope ``f_gamma(x) = |p - x|^2/(2 gamma) + f(p)`` with
        ``p = prox_{gamma f}(x)``, together with its gradient, the
        Yosida approximation ``(x - p)/gamma``.

    :raises ConsistencyError: When ``f`` is infinite at its own prox point.

    """
    p = f.prox(gamma, x)
    fp = f.value(p)
    if not math.isfinite(fp):
        msg = f'{f.name}: value infinite at its own prox point'
        raise ConsistencyError(msg)
    d = p - x
    return EnvelopeEval(inner(d, d) / (2.0 * gamma) + fp, p, (x - p) / gamma)


def prox_of_smooth(f: SmoothFn, x: Point) -> Point:
    """The explicit step ``x - grad f(x)/L``, needs a known positive ``L``."""
    lip = f.lipschitz
    if isinstance(lip, NoValue) or lip <= 0.0:
        msg = 'prox_of_smooth needs a known positive Lipschitz constant'
        raise ValueError(msg)
    return x - f.grad(x) / lip


# Function zoo


def _box_ok(x: Point, a: float | Point, b: float | Point) -> bool:
    lo = np.asarray(a) - _FEAS_TOL * np.maximum(1.0, np.abs(a))
    hi = np.asarray(b) + _FEAS_TOL * np.maximum(1.0, np.abs(b))
    return bool(np.all(x >= lo) and np.all(x <= hi))


def _indicator(ok: bool) -> float:
    return 0.0 if ok else math.inf


def zero() -> ProxFn:
    """The zero function, its conjugate is the indicator of the origin."""
    return ProxFn(
        lambda x: 0.0,
        lambda gamma, x: x.copy(),
        conj_value=lambda y: _indicator(bool(np.all(np.abs(y) <= _FEAS_TOL))),
        conj_prox=lambda gamma, y: np.zeros_like(y),
        newton_weights=lambda gamma, v: np.ones_like(v),
        name='zero',
    )


def l1_norm(alpha: float = 1.0, *, name: str | None = None) -> ProxFn:
    """``alpha |x|_1``, conjugate the indicator of the ``alpha`` sup-norm ball."""
    if alpha <= 0.0:
        msg = f'l1 weight must be positive, got {alpha}'
        raise ValueError(msg)
    return ProxFn(
        lambda x: alpha * float(np.sum(np.abs(x))),
        lambda gamma, x: prox_l1(x, gamma * alpha),
        conj_value=lambda y: _indicator(_box_ok(y, -alpha, alpha)),
        conj_prox=lambda gamma, y: np.clip(y, -alpha, alpha),
        domain_check=lambda x: True,
        newton_weights=lambda gamma, v: dn_softshrink(v, gamma * alpha),
        name=f'{alpha:g}*l1' if name is None else name,
    )


def abs_value() -> ProxFn:
    """The absolute value, ``l1_norm(1)`` under another name."""
    return l1_norm(1.0, name='abs')


def half_sq_norm(mu: float = 1.0) -> ProxFn:
    """``mu |x|^2/2``, conjugate ``|y|^2/(2 mu)``."""
    if mu <= 0.0:
        msg = f'quadratic weight must be positive, got {mu}'
        raise ValueError(msg)
    return ProxFn(
        lambda x: 0.5 * mu * inner(x, x),
        lambda gamma, x: x / (1.0 + gamma * mu),
        strong_convexity=mu,
        conj_value=lambda y: 0.5 * inner(y, y) / mu,
        conj_prox=lambda gamma, y: y / (1.0 + gamma / mu),
        conj_strong_convexity=1.0 / mu,
        domain_check=lambda x: True,
        newton_weights=lambda gamma, v: np.full_like(v, 1.0 / (1.0 + gamma * mu)),
        name=f'{mu:g}/2*|.|^2',
    )


def sq_distance(center: npt.ArrayLike, mu: float = 1.0) -> ProxFn:
    """``mu |x - c|^2/2``, conjugate ``<y, c> + |y|^2/(2 mu)``."""
    if mu <= 0.0:
        msg = f'quadratic weight must be positive, got {mu}'
        raise ValueError(msg)
    c = as_point(center)
    return ProxFn(
        lambda x: 0.5 * mu * inner(x - c, x - c),
        lambda gamma, x: (x + gamma * mu * c) / (1.0 + gamma * mu),
        strong_convexity=mu,
        conj_value=lambda y: inner(y, c) + 0.5 * inner(y, y) / mu,
        conj_prox=lambda gamma, y: (y - gamma * c) / (1.0 + gamma / mu),
        conj_strong_convexity=1.0 / mu,
        domain_check=lambda x: True,
        newton_weights=lambda gamma, v: np.full_like(v, 1.0 / (1.0 + gamma * mu)),
        name='sq_distance',
    )


def box_indicator(a: float | npt.ArrayLike, b: float | npt.ArrayLike) -> ProxFn:
    """
    .. admonition:: Indicator of a finite box

        Conjugate is the support function ``sum max(a_i y_i, b_i y_i)``.
        Feasibility is tested with a relative slack of ``1e-12`` so convex
        combinations of feasible points stay feasible.

    """
    lo = np.asarray(a, dtype=np.float64)
    hi = np.asarray(b, dtype=np.float64)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        msg = 'box_indicator needs finite bounds, use nonneg_indicator for half lines'
        raise ValueError(msg)
    if np.any(lo > hi):
        msg = 'box_indicator needs a <= b componentwise'
        raise ValueError(msg)
    return ProxFn(
        lambda x: _indicator(_box_ok(x, lo, hi)),
        lambda gamma, x: proj_box(x, lo, hi),
        conj_value=lambda y: float(np.sum(np.maximum(lo * y, hi * y))),
        domain_check=lambda x: _box_ok(x, lo, hi),
        newton_weights=lambda gamma, v: dn_proj_box(v, lo, hi),
        name='box',
    )


def nonneg_indicator() -> ProxFn:
    """Indicator of the nonnegative orthant, its conjugate is that of the nonpositive one."""
    return ProxFn(
        lambda x: _indicator(bool(np.all(x >= -_FEAS_TOL))),
        lambda gamma, x: np.maximum(x, 0.0),
        conj_value=lambda y: _indicator(bool(np.all(y <= _FEAS_TOL))),
        conj_prox=lambda gamma, y: np.minimum(y, 0.0),
        newton_weights=lambda gamma, v: (v >= 0.0).astype(np.float64),
        name='nonneg',
    )


def nonpos_indicator() -> ProxFn:
    """Indicator of the nonpositive orthant."""
    return ProxFn(
        lambda x: _indicator(bool(np.all(x <= _FEAS_TOL))),
        lambda gamma, x: np.minimum(x, 0.0),
        conj_value=lambda y: _indicator(bool(np.all(y >= -_FEAS_TOL))),
        conj_prox=lambda gamma, y: np.maximum(y, 0.0),
        newton_weights=lambda gamma, v: (v <= 0.0).astype(np.float64),
        name='nonpos',
    )


def linf_ball(radius: float = 1.0) -> ProxFn:
    """Indicator of the sup-norm ball, conjugate ``radius |y|_1``."""
    if radius <= 0.0:
        msg = f'ball radius must be positive, got {radius}'
        raise ValueError(msg)
    if radius == 1.0:
        proj: ProxMap = lambda gamma, x: proj_linf_ball(x)
    else:
        proj = lambda gamma, x: np.clip(x, -radius, radius)
    return ProxFn(
        lambda x: _indicator(_box_ok(x, -radius, radius)),
        proj,
        conj_value=lambda y: radius * float(np.sum(np.abs(y))),
        conj_prox=lambda gamma, y: prox_l1(y, gamma * radius),
        domain_check=lambda x: _box_ok(x, -radius, radius),
        newton_weights=lambda gamma, v: dn_proj_box(v, -radius, radius),
        name=f'linf_ball({radius:g})',
    )


def l2_norm(alpha: float = 1.0) -> ProxFn:
    """``alpha |x|``, conjugate the indicator of the ``alpha`` Euclidean ball."""
    if alpha <= 0.0:
        msg = f'norm weight must be positive, got {alpha}'
        raise ValueError(msg)

    def ball_proj(gamma: float, y: Point) -> Point:
        ny = norm(y)
        return y if ny <= alpha else (alpha / ny) * y

    return ProxFn(
        lambda x: alpha * norm(x),
        lambda gamma, x: prox_l2norm(x, gamma * alpha),
        conj_value=lambda y: _indicator(norm(y) <= alpha * (1.0 + _FEAS_TOL)),
        conj_prox=ball_proj,
        domain_check=lambda x: True,
        name=f'{alpha:g}*l2',
    )


def point_indicator(center: npt.ArrayLike) -> ProxFn:
    """Indicator of ``{c}``, conjugate the linear function ``<y, c>``."""
    c = as_point(center)
    return ProxFn(
        lambda x: _indicator(_box_ok(x, c, c)),
        lambda gamma, x: c.copy(),
        conj_value=lambda y: inner(y, c),
        conj_prox=lambda gamma, y: y - gamma * c,
        newton_weights=lambda gamma, v: np.zeros_like(v),
        name='point',
    )


# Calculus


def separable_sum(fs: Sequence[ProxFn], dims: Sequence[int]) -> ProxFn:
    """``(x_1, ..., x_m) -> sum f_i(x_i)`` on a product of blocks."""
    fs = tuple(fs)
    dims = tuple(dims)
    if len(fs) != len(dims) or len(fs) == 0:
        msg = f'{len(fs)} functions for {len(dims)} blocks'
        raise DimensionError(msg)

    def conj_value(y: Point) -> float:
        return sum(f.conj_value(yi) for f, yi in zip(fs, _split(dims, y)))

    def conj_prox(gamma: float, y: Point) -> Point:
        return np.concatenate(
            [prox_conjugate(f, gamma, yi) for f, yi in zip(fs, _split(dims, y))]
        )

    weights: WeightMap | None = None
    if all(f.has_newton_derivative for f in fs):
        weights = lambda gamma, v: np.concatenate(
            [f.newton_weights(gamma, vi) for f, vi in zip(fs, _split(dims, v))]
        )

    return ProxFn(
        lambda x: sum(f.value(xi) for f, xi in zip(fs, _split(dims, x))),
        lambda gamma, x: prox_separable_sum(fs, dims, gamma, x),
        strong_convexity=min(f.strong_convexity for f in fs),
        conj_value=conj_value if all(f.has_conjugate_value for f in fs) else None,
        conj_prox=conj_prox,
        conj_strong_convexity=min(f.conj_strong_convexity for f in fs),
        newton_weights=weights,
        name='+'.join(f.name for f in fs),
    )


def affine_precompose(f: ProxFn, lam: float, z: Point | float = 0.0) -> ProxFn:
    """``x -> f(lam x + z)``, conjugate ``y -> f*(y/lam) - <z, y>/lam``."""
    if lam == 0.0:
        msg = 'affine precomposition needs a nonzero factor'
        raise ValueError(msg)

    def conj_value(y: Point) -> float:
        return f.conj_value(y / lam) - float(np.sum(z * y)) / lam

    weights: WeightMap | None = None
    if f.has_newton_derivative:
        weights = lambda gamma, v: f.newton_weights(gamma * lam * lam, lam * v + z)

    return ProxFn(
        lambda x: f.value(lam * x + z),
        lambda gamma, x: prox_affine_precompose(f, lam, z, gamma, x),
        strong_convexity=lam * lam * f.strong_convexity,
        conj_value=conj_value if f.has_conjugate_value else None,
        conj_strong_convexity=f.conj_strong_convexity / (lam * lam),
        newton_weights=weights,
        name=f'{f.name}({lam:g}x+z)',
    )


def scale(f: ProxFn, alpha: float) -> ProxFn:
    """``alpha f`` for ``alpha > 0``, conjugate ``y -> alpha f*(y/alpha)``."""
    if alpha <= 0.0:
        msg = f'scale factor must be positive, got {alpha}'
        raise ValueError(msg)
    conj = f.conjugate()

    weights: WeightMap | None = None
    if f.has_newton_derivative:
        weights = lambda gamma, v: f.newton_weights(gamma * alpha, v)

    return ProxFn(
        lambda x: alpha * f.value(x),
        lambda gamma, x: f.prox(gamma * alpha, x),
        strong_convexity=alpha * f.strong_convexity,
        conj_value=(lambda y: alpha * f.conj_value(y / alpha))
        if f.has_conjugate_value
        else None,
        conj_prox=lambda gamma, y: alpha * conj.prox(gamma / alpha, y / alpha),
        conj_strong_convexity=f.conj_strong_convexity / alpha,
        newton_weights=weights,
        name=f'{alpha:g}*{f.name}',
    )


def tilt(f: ProxFn, c: npt.ArrayLike) -> ProxFn:
    """``x -> f(x) + <c, x>``, conjugate ``y -> f*(y - c)``."""
    cc = as_point(c)
    conj = f.conjugate()

    weights: WeightMap | None = None
    if f.has_newton_derivative:
        weights = lambda gamma, v: f.newton_weights(gamma, v - gamma * cc)

    return ProxFn(
        lambda x: f.value(x) + inner(cc, x),
        lambda gamma, x: f.prox(gamma, x - gamma * cc),
        strong_convexity=f.strong_convexity,
        conj_value=(lambda y: f.conj_value(y - cc)) if f.has_conjugate_value else None,
        conj_prox=lambda gamma, y: cc + conj.prox(gamma, y - cc),
        conj_strong_convexity=f.conj_strong_convexity,
        newton_weights=weights,
        name=f'{f.name}+<c,.>',
    )
