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
"""Set up the wvapy package"""

# Third party
from setuptools import setup

packagedata = {"wvapy": ["data/*"]}


setup(package_data=packagedata)
