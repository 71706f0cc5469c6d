"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``SOCIALRRT_NO_NUMBA`` is unset or ``0``. Set it to ``1`` to run
everything through the vectorised numpy implementations instead.
"""

import os

from . import _numpy

BACKEND = "numpy"
_impl = _numpy

if os.environ.get("SOCIALRRT_NO_NUMBA", "0") in ("", "0"):
    try:
        from . import _numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        BACKEND = "numba"
        _impl = _numba


def get_backend(name=None):
    """Return a kernel module by name (``"numba"`` or ``"numpy"``), or the active one."""
    if name is None:
        return _impl
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba as mod

        return mod
    raise ValueError(f"unknown kernel backend {name!r}")


wrap_angle = _impl.wrap_angle
wrap_positive = _impl.wrap_positive
config_distance = _impl.config_distance
config_distances = _impl.config_distances
n_steps = _impl.n_steps
interpolate = _impl.interpolate
forward_points = _impl.forward_points
agf_values = _impl.agf_values
social_costs = _impl.social_costs
motion_social_cost = _impl.motion_social_cost
edge_social_costs = _impl.edge_social_costs
valid_configs = _impl.valid_configs
collision_free = _impl.collision_free

__all__ = [
    "BACKEND",
    "get_backend",
    "wrap_angle",
    "wrap_positive",
    "config_distance",
    "config_distances",
    "n_steps",
    "interpolate",
    "forward_points",
    "agf_values",
    "social_costs",
    "motion_social_cost",
    "edge_social_costs",
    "valid_configs",
    "collision_free",
]
