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
# Core Library
import sys
import warnings

_python_version = sys.version_info

if _python_version.major == 3 and _python_version.minor < 8:
    warnings.warn(
        "Python 3.7 and older are not supported by wvapy. "
        "Please use Python 3.8 or newer."
    )

__version__ = "0.1.0"
