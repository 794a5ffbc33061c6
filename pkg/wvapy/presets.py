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
"""
Named parameter sets of the standard experiments.

The presets reproduce the parameters quoted for the postselection sweep
(``sweep-p``), the photon-number sweep (``sweep-m``), the summary table
(``table1``) and the signal-to-noise example (``snr``). They are stored as
package data in ``data/presets.json`` and use the same keys as a run
configuration file.
"""

# Core Library
import copy
import json
from typing import Any, Dict, List

# Third party
from pkg_resources import resource_filename

# First party
from wvapy.exceptions import ConfigError

with open(resource_filename(__name__, "data/presets.json"), "r") as f:
    _presets: Dict[str, Dict[str, Any]] = json.load(f)

PRESET_NAMES: List[str] = sorted(_presets)


def get_preset(name: str) -> Dict[str, Any]:
    """
    Get a copy of the named preset.

    Parameters
    ----------
    name : str
        one of ``PRESET_NAMES``

    Returns
    -------
    preset : Dict[str, Any]
        run configuration keys and values

    Examples
    --------
    >>> get_preset("sweep-p")["eta_sq"]
    0.05
    """
    if name not in _presets:
        raise ConfigError(
            f"Unknown preset '{name}', choose one of {', '.join(PRESET_NAMES)}"
        )
    return copy.deepcopy(_presets[name])
