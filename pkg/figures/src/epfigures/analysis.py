"""Crossing-pattern extraction from exported trajectories.

Used by the test suite to assert which planar projections of the two energy
branches actually cross, without any image comparison.
"""

from __future__ import annotations

import numpy as np

from .io import Trajectory

# a projection "crosses" when the branch separation collapses below this
# fraction of its maximum (or changes sign outright)
_COLLAPSE = 0.05


def _collapses(diff: np.ndarray) -> bool:
    span = float(np.max(np.abs(diff)))
    if span == 0.0:
        return True
    return bool(np.min(np.abs(diff)) < _COLLAPSE * span or np.any(np.diff(np.sign(diff)) != 0))


def real_projection_crosses(traj: Trajectory) -> bool:
    """Do the (xi1, Re E) curves of the two branches cross?"""
    return _collapses(traj.energy_n.real - traj.energy_m.real)


def imag_projection_crosses(traj: Trajectory) -> bool:
    """Do the (xi1, Im E) curves of the two branches cross?"""
    return _collapses(traj.energy_n.imag - traj.energy_m.imag)


def plane_projection_crosses(traj: Trajectory) -> bool:
    """Do the two branch curves intersect in the complex energy plane?"""
    d = np.abs(traj.energy_n[:, None] - traj.energy_m[None, :])
    pts = np.concatenate([traj.energy_n, traj.energy_m])
    span = float(np.max(np.abs(pts[:, None] - pts[None, :])))
    if span == 0.0:
        return True
    return bool(np.min(d) < _COLLAPSE * span)
