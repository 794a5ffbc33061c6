# wvapy simulates weak-value-amplified estimation of optomechanical couplings
# Copyright (C) 2022-2026 The wvapy developers

# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; in version 2
# of the License.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor,
# Boston, MA  02110-1301, USA.
"""Exceptions raised by wvapy."""


class WvaError(Exception):
    """Base class of all wvapy errors."""


class DomainError(WvaError, ValueError):
    """A parameter lies outside of the domain of the quantity."""


class RangeError(DomainError):
    """A combinatorial or moment order is outside of the supported range."""


class PreconditionError(DomainError):
    """The caller picked a routine whose precondition does not hold."""


class DegenerateInputError(WvaError, ValueError):
    """The inputs are valid, but the requested quantity is undefined."""


class ZeroPostselectionsError(DegenerateInputError):
    """Not a single photon was postselected during an experiment."""


class AllTrialsFailedError(DegenerateInputError):
    """Every trial of a Monte-Carlo run had zero postselections."""


class DimensionError(WvaError, ValueError):
    """Data and covariance do not have matching shapes."""


class SingularCovarianceError(WvaError, ValueError):
    """The covariance matrix is not positive definite."""


class ConfigError(WvaError, ValueError):
    """A run configuration contains an unknown or malformed entry."""
