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
Exceptions
==========

.. admonition:: Exception types raised by proxkit

    All derive from both ``ProxkitError`` and the builtin exception a
    caller would naturally catch, so ``except ValueError`` keeps working.

"""

__all__ = [
    'ProxkitError',
    'DimensionError',
    'AdmissibilityError',
    'ConvergenceError',
    'SingularSystemError',
    'ConsistencyError',
]


class ProxkitError(Exception):
    """Base of all proxkit exceptions."""


class DimensionError(ProxkitError, ValueError):
    """Points or operators of incompatible dimensions."""


class AdmissibilityError(ProxkitError, ValueError):
    """Step sizes or relaxation parameters outside their admissible range."""


class ConvergenceError(ProxkitError, ArithmeticError):
    """
    .. admonition:: Iteration budget exhausted

        Raised when an inner iteration does not reach its tolerance.

    :param msg: Human readable message.
    :param last_value: Last monitored quantity, Rayleigh quotient,
                       residual or step length depending on the raiser.

    """
    def __init__(self, msg: str, last_value: float) -> None:
        super().__init__(msg)
        self.last_value = last_value


class SingularSystemError(ProxkitError, ArithmeticError):
    """
    .. admonition:: Singular Newton system

        The assembled Newton derivative is numerically singular.

    :param msg: Human readable message.
    :param iteration: Newton iteration at which the system failed.
    :param condition: Estimated condition number of the system.

    """
    def __init__(self, msg: str, iteration: int, condition: float) -> None:
        super().__init__(msg)
        self.iteration = iteration
        self.condition = condition


class ConsistencyError(ProxkitError, ArithmeticError):
    """An identity which holds by construction was violated numerically."""
