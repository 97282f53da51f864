"""Columnar CSV/JSON writers for modes, trajectories, drift series and wavefunctions."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = [
    "write_csv",
    "write_mode_csv",
    "write_trajectory_csv",
    "write_wavefunction_csv",
    "write_distribution_csv",
    "write_json",
]

FLOAT_FMT = "%.17g"


def write_csv(path, header, columns):
    """Write equal-length columns with 17 significant digits."""
    path = Path(path)
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",", header=",".join(header), comments="")
    return path


def write_mode_csv(path, mode, t=None):
    t = mode.grid if t is None else np.asarray(t, dtype=float)
    u, ud = mode.u_and_udot(t)
    return write_csv(path, ["t", "re_u", "im_u", "re_udot", "im_udot"], [t, u.real, u.imag, ud.real, ud.imag])


def write_trajectory_csv(path, traj, t=None):
    t = traj.t if t is None else np.asarray(t, dtype=float)
    q, p = traj.state(t)
    return write_csv(path, ["t", "q", "p"], [t, q, p])


def write_wavefunction_csv(path, q, psi):
    psi = np.asarray(psi, dtype=complex)
    return write_csv(path, ["q", "re_psi", "im_psi", "abs2"], [q, psi.real, psi.imag, np.abs(psi) ** 2])


def write_distribution_csv(path, dist):
    total = float(np.sum(dist.probabilities))
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"phase distribution sums to {total!r}")
    return write_csv(path, ["theta", "probability"], [dist.angles, dist.probabilities])


def write_json(path, obj):
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")
    return path
