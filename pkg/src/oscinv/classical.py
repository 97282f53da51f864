"""Classical mode functions and Hamiltonian trajectories.

The mode equation d/dt(u'/X) + Omega^2 u/X = 0 is integrated as the first
order system

    u' = X w,    w' = -(Omega^2 / X) u,      w = u'/X,

so X is never differentiated inside the stepper.  Integration uses scipy's
DOP853 with its native dense output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from scipy.integrate import solve_ivp

from .errors import AccuracyError, ContractError, DegenerateModeError, IntegrationError, OutOfDomainError

__all__ = [
    "ClassicalMode",
    "PhaseTrajectory",
    "integrate_mode",
    "integrate_real_pair",
    "adiabatic_seed",
    "wronskian",
    "normalize_wronskian",
    "evolve_phase_point",
]

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
_RTOL_RANGE = (1e-12, 1e-4)
_SPAN_SLACK = 1e-12


@dataclass(frozen=True)
class _Segment:
    lo: float
    hi: float
    sol: object  # scipy OdeSolution
    t: np.ndarray
    y: np.ndarray


def _check_rtol(rel_tol):
    lo, hi = _RTOL_RANGE
    if not lo <= rel_tol <= hi:
        raise ContractError(f"rel_tol={rel_tol!r} outside [{lo:g}, {hi:g}]")


def _check_span(profile, t_span):
    t0, t1 = map(float, t_span)
    if not t0 < t1:
        raise ContractError(f"t_span must be increasing, got {t_span!r}")
    d0, d1 = profile.t_domain
    if t0 < d0 or t1 > d1:
        raise OutOfDomainError(f"t_span {t_span!r} not inside profile domain {profile.t_domain}")
    return t0, t1


def _solve(fun, t_from, t_to, y0, rtol, atol):
    res = solve_ivp(fun, (t_from, t_to), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True)
    if res.status != 0:
        raise IntegrationError(f"integration failed: {res.message}", last_t=float(res.t[-1]))
    lo, hi = sorted((t_from, t_to))
    return _Segment(lo, hi, res.sol, res.t, res.y)


def _two_sided(fun, t_span, t_seed, y0, rtol, atol):
    t0, t1 = t_span
    segs = []
    if t_seed > t0:
        segs.append(_solve(fun, t_seed, t0, y0, rtol, atol))
    if t_seed < t1:
        segs.append(_solve(fun, t_seed, t1, y0, rtol, atol))
    return tuple(segs)


def _dense(segments, t, t_span):
    """Evaluate piecewise dense output; returns array of shape (n_state, *t.shape)."""
    t = np.asarray(t, dtype=float)
    t0, t1 = t_span
    if np.any(t < t0 - _SPAN_SLACK) or np.any(t > t1 + _SPAN_SLACK) or np.any(~np.isfinite(t)):
        raise OutOfDomainError(f"t outside integrated span {t_span}")
    flat = np.clip(t.ravel(), t0, t1)
    out = None
    for k, seg in enumerate(segments):
        # the seed point is owned by the last segment that contains it
        mask = (flat >= seg.lo) & (flat <= seg.hi)
        if k + 1 < len(segments):
            mask &= flat < segments[k + 1].lo
        if not mask.any():
            continue
        vals = seg.sol(flat[mask])
        if out is None:
            out = np.empty((vals.shape[0], flat.size), dtype=vals.dtype)
        out[:, mask] = vals
    return out.reshape((out.shape[0],) + t.shape)


@dataclass(frozen=True)
class ClassicalMode:
    """A solution of the mode equation with dense output.

    ``kind == "complex_mode"`` holds one complex solution u.  ``kind ==
    "real_pair"`` holds two real solutions (u1, u2), stored as the complex
    combination u = (i u1 + u2)/sqrt(2); the accessors ``u1``/``u2`` invert
    that map for either kind.
    """

    profile: object
    kind: Literal["complex_mode", "real_pair"]
    t_span: tuple[float, float]
    t_seed: float
    segments: tuple
    scale: complex = 1.0
    wronskian_value: complex = 0.0

    def _raw(self, t):
        return _dense(self.segments, t, self.t_span)

    @property
    def grid(self):
        """Accepted solver nodes over the whole span, sorted."""
        return np.unique(np.concatenate([s.t for s in self.segments]))

    def u(self, t):
        return self.scale * self._raw(t)[0]

    def w(self, t):
        return self.scale * self._raw(t)[1]

    def udot(self, t):
        return self.profile.x(t) * self.w(t)

    def u_and_udot(self, t):
        s, w = self._raw(t)
        return self.scale * s, self.scale * self.profile.x(t) * w

    def u1(self, t):
        return np.sqrt(2.0) * self.u(t).imag

    def u2(self, t):
        return np.sqrt(2.0) * self.u(t).real

    def rho(self, t):
        return np.abs(self.u(t))

    def rho_dot(self, t):
        """Time derivative of |u|, evaluated as |u| Re(u'/u)."""
        u, ud = self.u_and_udot(t)
        return (np.conj(u) * ud).real / np.abs(u)

    def theta_u(self, t):
        """Continuous phase with u = |u| exp(-i theta_u).

        The branch is fixed by theta_u(t_seed) in (-pi, pi] and unwrapped
        along the solver grid.
        """
        nodes, phases = self._phase_table()
        t = np.asarray(t, dtype=float)
        raw = -np.angle(self.u(t))
        idx = np.clip(np.searchsorted(nodes, t), 0, nodes.size - 1)
        left = np.clip(idx - 1, 0, nodes.size - 1)
        near = np.where(np.abs(nodes[left] - t) < np.abs(nodes[idx] - t), left, idx)
        ref = phases[near]
        return ref + _wrap(raw - ref)

    def _phase_table(self):
        cached = self.__dict__.get("_phase_cache")
        if cached is not None:
            return cached
        nodes = self.grid
        raw = -np.angle(self.u(nodes))
        steps = _wrap(np.diff(raw))
        if np.any(np.abs(steps) >= np.pi - 1e-6):
            raise AccuracyError("solver grid too coarse to unwrap the mode phase")
        phases = np.concatenate([[0.0], np.cumsum(steps)]) + raw[0]
        seed_phase = -np.angle(self.u(self.t_seed))
        i_seed = int(np.argmin(np.abs(nodes - self.t_seed)))
        ref = phases[i_seed] + _wrap(seed_phase - phases[i_seed])
        phases = phases + (seed_phase - ref)
        object.__setattr__(self, "_phase_cache", (nodes, phases))
        return nodes, phases


def _wrap(x):
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)


def _mode_rhs(profile):
    def fun(t, y):
        x = profile.x(t)
        return np.array([x * y[1], -(profile.omega_sq(t) / x) * y[0]])

    return fun


def integrate_mode(profile, u0, udot0, t_span, rel_tol=DEFAULT_RTOL, *, t_seed=None, abs_tol=DEFAULT_ATOL):
    """Integrate a complex solution of the mode equation.

    The seed (u0, udot0) is imposed at ``t_seed`` (default: start of
    ``t_span``); when the seed lies inside the span the solution is
    integrated in both directions.  The result is not normalized; see
    :func:`normalize_wronskian`.
    """
    _check_rtol(rel_tol)
    span = _check_span(profile, t_span)
    t_seed = span[0] if t_seed is None else float(t_seed)
    if not span[0] <= t_seed <= span[1]:
        raise ContractError(f"t_seed={t_seed} outside t_span {span}")
    y0 = np.array([complex(u0), complex(udot0) / float(profile.x(t_seed))], dtype=complex)
    segs = _two_sided(_mode_rhs(profile), span, t_seed, y0, rel_tol, abs_tol)
    mode = ClassicalMode(profile, "complex_mode", span, t_seed, segs)
    return replace(mode, wronskian_value=complex(wronskian(mode, t_seed)))


def integrate_real_pair(profile, seed1, seed2, t_span, rel_tol=DEFAULT_RTOL, *, t_seed=None, abs_tol=DEFAULT_ATOL):
    """Integrate two real solutions u1, u2 seeded by ``(u, udot)`` pairs."""
    (u10, ud10), (u20, ud20) = seed1, seed2
    vals = (u10, ud10, u20, ud20)
    if any(complex(v).imag != 0.0 for v in vals):
        raise ContractError("real-pair seeds must be real")
    z0 = complex(float(u20), float(u10))
    zd0 = complex(float(ud20), float(ud10))
    mode = integrate_mode(profile, z0, zd0, t_span, rel_tol, t_seed=t_seed, abs_tol=abs_tol)
    mode = replace(mode, kind="real_pair", scale=1.0 / np.sqrt(2.0))
    return replace(mode, wronskian_value=complex(wronskian(mode, mode.t_seed)))


def adiabatic_seed(profile, t0):
    """Seed (u0, udot0) of the instantaneous ground state at ``t0``.

    u0 = sqrt(X/(2 Omega)), udot0 = -i Omega u0, which satisfies the complex
    Wronskian condition exactly.  Requires Omega^2(t0) > 0.
    """
    w2 = float(profile.omega_sq(t0))
    if w2 <= 0.0:
        raise ContractError(f"Omega^2(t0) = {w2} is not positive; no adiabatic seed")
    om = np.sqrt(w2)
    u0 = np.sqrt(float(profile.x(t0)) / (2.0 * om))
    return complex(u0), complex(-1j * om * u0)


def wronskian(mode, t):
    """(1/X)(u u'* - u* u') for complex modes, (1/X)(u1 u2' - u1' u2) for real pairs."""
    u, ud = mode.u_and_udot(t)
    w = (u * np.conj(ud) - np.conj(u) * ud) / mode.profile.x(t)
    if mode.kind == "real_pair":
        w = (w / 1j).real
        return float(w) if np.ndim(w) == 0 else w
    return complex(w) if np.ndim(w) == 0 else w


def normalize_wronskian(mode):
    """Rescale a mode so its Wronskian is exactly i (complex) or 1 (real pair) at the seed.

    Drift away from the normalized value is left alone afterwards.
    """
    w = complex(wronskian(mode, mode.t_seed))
    # for both kinds the normalized value corresponds to k == 1
    k = w.real if mode.kind == "real_pair" else w.imag
    if abs(w) <= 1e-12:
        raise DegenerateModeError(f"Wronskian {w!r} vanishes: solutions are linearly dependent")
    if k <= 0.0:
        hint = "swap u1 and u2" if mode.kind == "real_pair" else "use the complex-conjugate seed"
        raise DegenerateModeError(f"Wronskian {w!r} has the wrong orientation; {hint}")
    if abs(k - 1.0) <= 4 * np.finfo(float).eps:
        return mode
    out = replace(mode, scale=mode.scale / np.sqrt(k))
    return replace(out, wronskian_value=complex(wronskian(out, out.t_seed)))


@dataclass(frozen=True)
class PhaseTrajectory:
    """Solution (q(t), p(t)) of Hamilton's equations with dense output."""

    profile: object
    t_span: tuple[float, float]
    segments: tuple

    @property
    def t(self):
        return np.unique(np.concatenate([s.t for s in self.segments]))

    def state(self, t):
        return _dense(self.segments, t, self.t_span)

    def q(self, t):
        return self.state(t)[0]

    def p(self, t):
        return self.state(t)[1]


def evolve_phase_point(profile, q0, p0, t_span, rel_tol=DEFAULT_RTOL, *, abs_tol=DEFAULT_ATOL):
    """Integrate q' = Xp + Yq, p' = -Yp - Zq from (q0, p0) at the start of ``t_span``."""
    _check_rtol(rel_tol)
    span = _check_span(profile, t_span)

    def fun(t, y):
        x, yy, z = profile.x(t), profile.y(t), profile.z(t)
        return np.array([x * y[1] + yy * y[0], -yy * y[1] - z * y[0]])

    y0 = np.array([float(q0), float(p0)])
    segs = _two_sided(fun, span, span[0], y0, rel_tol, abs_tol)
    return PhaseTrajectory(profile, span, segs)
