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
Proximal Kit
============

.. admonition:: Proximal splitting methods with convergence diagnostics

    - proximal maps in closed form and a calculus combining them
    - proximal point, forward-backward, Douglas-Rachford, primal-dual
      and ADMM iterations behind one driver
    - over-relaxation, inertia and line search wrappers
    - semismooth Newton on forward-backward fixed point equations
    - a nonlinear primal-dual method with a safe start search
    - gaps, Fejer checks and empirical rate fits
    - LASSO, 1D total variation, box QP and a nonlinear test problem
    - ``proxkit`` command line: ``solve``, ``rates``, ``bench``

"""

__author__ = 'Geoffrey R. Scheller'
__copyright__ = 'Copyright (c) 2026 Geoffrey R. Scheller'
__license__ = 'Apache License 2.0'
