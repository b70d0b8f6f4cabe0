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
Trace
=====

.. admonition:: Append only per-iteration solver log

    - one ``TraceRecord`` per iteration, columns named as in the CSV output
    - optional stored iterates for Fejer and ergodic diagnostics
    - O(1) length and indexing, iteration in order of ``k``

"""

from collections.abc import Iterator
from dataclasses import dataclass
import math
from typing import TYPE_CHECKING, overload
import numpy as np
import numpy.typing as npt
from pythonic_fp.proxkit.core import Point

if TYPE_CHECKING:
    from pythonic_fp.proxkit.splitting import SolverState

__all__ = ['COLUMNS', 'TraceRecord', 'Trace']

COLUMNS: tuple[str, ...] = (
    'k',
    'residual',
    'primal_value',
    'dual_value',
    'gap',
    'dist_to_ref',
    'tau',
    'sigma',
    'omega',
    'lambda',
)


@dataclass(frozen=True, slots=True)
class TraceRecord:
    """One iteration. ``None`` marks a quantity not tracked by the run."""
    k: int
    residual: float
    primal_value: float | None = None
    dual_value: float | None = None
    gap: float | None = None
    dist_to_ref: float | None = None
    tau: float | None = None
    sigma: float | None = None
    omega: float | None = None
    lambda_k: float | None = None

    def get(self, column: str) -> float | int | None:
        """Look up a field by its CSV column name."""
        if column not in COLUMNS:
            msg = f'unknown trace column {column!r}'
            raise KeyError(msg)
        return getattr(self, 'lambda_k' if column == 'lambda' else column)


class Trace:
    """
    .. admonition:: Solver trace

        Records are appended by the driver and never mutated afterwards.
        When the driver keeps iterates, ``iterates[i]`` is the pair
        ``(x, y)`` after the iteration of ``self[i]``, with
        ``initial`` holding the starting pair.

    """
    __slots__ = (
        '_records',
        '_iterates',
        '_initial',
        'algo',
        'converged',
        'final',
        'excursions',
    )

    def __init__(self, algo: str = '', *, initial: tuple[Point, Point | None] | None = None) -> None:
        self._records: list[TraceRecord] = []
        self._iterates: list[tuple[Point, Point | None]] = []
        self._initial = initial
        self.algo = algo
        self.converged = False
        self.final: SolverState | None = None
        self.excursions = 0

    def __bool__(self) -> bool:
        return len(self._records) > 0

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(tuple(self._records))

    @overload
    def __getitem__(self, idx: int) -> TraceRecord: ...
    @overload
    def __getitem__(self, idx: slice) -> list[TraceRecord]: ...

    def __getitem__(self, idx: int | slice) -> TraceRecord | list[TraceRecord]:
        if isinstance(idx, slice):
            return self._records[idx]

        cnt = len(self._records)
        if -cnt <= idx < cnt:
            return self._records[idx]

        if cnt == 0:
            msg0 = 'Trying to get a record from an empty Trace.'
            raise IndexError(msg0)

        msg1 = 'Out of bounds: '
        msg2 = f'index = {idx} not between {-cnt} and {cnt - 1} '
        msg3 = 'while getting a record from a Trace.'
        raise IndexError(msg1 + msg2 + msg3)

    def __repr__(self) -> str:
        state = 'converged' if self.converged else 'open'
        return f'Trace({self.algo!r}, {len(self)} records, {state})'

    def append(
        self, record: TraceRecord, x: Point | None = None, y: Point | None = None
    ) -> None:
        """Append a record, its ``k`` must exceed that of the last record."""
        if self._records and record.k <= self._records[-1].k:
            msg = f'Trace records must have increasing k, got {record.k} after {self._records[-1].k}'
            raise ValueError(msg)
        if record.residual < 0.0:
            msg = f'Trace residual must be nonnegative, got {record.residual}'
            raise ValueError(msg)
        self._records.append(record)
        if x is not None:
            self._iterates.append((x, y))

    @property
    def initial(self) -> tuple[Point, Point | None] | None:
        return self._initial

    @property
    def iterates(self) -> tuple[tuple[Point, Point | None], ...]:
        return tuple(self._iterates)

    @property
    def has_iterates(self) -> bool:
        return len(self._iterates) == len(self._records) and self._initial is not None

    def primal_iterates(self, *, with_initial: bool = True) -> list[Point]:
        """``x^0, x^1, ...`` when iterates were kept."""
        xs = [x for x, _ in self._iterates]
        if with_initial and self._initial is not None:
            return [self._initial[0], *xs]
        return xs

    def dual_iterates(self, *, with_initial: bool = True) -> list[Point]:
        ys = [y for _, y in self._iterates if y is not None]
        if with_initial and self._initial is not None and self._initial[1] is not None:
            return [self._initial[1], *ys]
        return ys

    def column(self, name: str) -> list[float | int | None]:
        """One CSV column, ``None`` where the quantity was not tracked."""
        return [rec.get(name) for rec in self._records]

    def values(self, name: str) -> npt.NDArray[np.float64]:
        """Tracked finite values of a column as an array."""
        return np.array(
            [v for v in self.column(name) if v is not None and math.isfinite(v)],
            dtype=np.float64,
        )

    @property
    def last_residual(self) -> float:
        if not self._records:
            return math.inf
        return self._records[-1].residual
