"""Linear and quadratic invariants, action-phase variables and their oracles.

Conventions:

* a = sqrt(I) exp(i theta_a), so theta_a = arg(a);
* u = rho exp(-i theta_u), so theta_u = -arg(u);
* all windowed phases live in (-pi, pi] (two-argument arctangent).

With these signs the ellipse phase satisfies vartheta = theta_a - theta_u.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classical import _wrap
from .errors import ContractError, DegenerateModeError

__all__ = [
    "InvariantFrame",
    "ActionPhase",
    "QuadraticInvariantSpec",
    "AreaEstimate",
    "eval_real_pair",
    "eval_complex_pair",
    "action",
    "theta",
    "theta_a",
    "theta_u",
    "vartheta",
    "action_phase",
    "quadratic_invariant",
    "poisson_bracket_numeric",
    "phase_space_area",
    "reconstruct_qp",
    "scaled_canonical_qp",
    "reduced_hamiltonian",
    "wrap_angle",
    "unwrap_series",
]

_WRONSKIAN_TOL = 1e-9
_ZERO_ACTION = 1e-300


def wrap_angle(x):
    """Map angles into (-pi, pi]."""
    return _wrap(x)


def unwrap_series(phases):
    """Continuous version of a sampled phase series (cumulative 2 pi correction)."""
    return np.unwrap(np.asarray(phases, dtype=float))


@dataclass(frozen=True)
class InvariantFrame:
    """Evaluators of the invariants built from one Wronskian-normalized mode."""

    mode: object

    def __post_init__(self):
        m = self.mode
        w = complex(m.wronskian_value)
        target = 1.0 if m.kind == "real_pair" else 1j
        if abs(w - target) > _WRONSKIAN_TOL:
            raise ContractError(f"mode is not Wronskian-normalized (W = {w!r})")

    @property
    def profile(self):
        return self.mode.profile

    def _coeffs(self, t):
        t = np.asarray(t, dtype=float)
        u, ud = self.mode.u_and_udot(t)
        x, y = self.profile.x(t), self.profile.y(t)
        return u, ud, x, y


@dataclass(frozen=True)
class ActionPhase:
    """Action and the three phase variables at one phase-space point.

    At zero action the phases are undefined and ``phase_defined`` is False;
    the phase fields are then None.
    """

    I: float
    theta: Optional[float]
    theta_a: Optional[float]
    vartheta: Optional[float]

    @property
    def phase_defined(self):
        return self.theta is not None


@dataclass(frozen=True)
class QuadraticInvariantSpec:
    """Parameters of the general real quadratic invariant in (a1, a2)."""

    A: complex
    B: float

    @property
    def matrix(self):
        """Symmetric matrix M with invariant = (a1, a2) M (a1, a2)^T."""
        x, y = complex(self.A).real, complex(self.A).imag
        return np.array([[0.5 * self.B + x, -y], [-y, 0.5 * self.B - x]])

    @property
    def positive_definite(self):
        # equivalent to B > 2|A| for this parametrization
        m = self.matrix
        return bool(m[0, 0] > 0 and np.linalg.det(m) > 0)


def eval_real_pair(frame, q, p, t):
    """Real linear invariants a_i = u_i p - (u_i' - Y u_i) q / X."""
    u, ud, x, y = frame._coeffs(t)
    u1, u2 = np.sqrt(2.0) * u.imag, np.sqrt(2.0) * u.real
    ud1, ud2 = np.sqrt(2.0) * ud.imag, np.sqrt(2.0) * ud.real
    a1 = u1 * p - (ud1 - y * u1) * q / x
    a2 = u2 * p - (ud2 - y * u2) * q / x
    return a1, a2


def eval_complex_pair(frame, q, p, t):
    """Complex invariant a = i{u* p - (u'* - Y u*) q / X} and its conjugate."""
    u, ud, x, y = frame._coeffs(t)
    uc, udc = np.conj(u), np.conj(ud)
    a = 1j * (uc * p - (udc - y * uc) * q / x)
    return a, np.conj(a)


def action(frame, q, p, t):
    a, _ = eval_complex_pair(frame, q, p, t)
    return np.abs(a) ** 2


def theta(frame, q, p, t):
    """Angle of (a1, a2) in (-pi, pi]."""
    a1, a2 = eval_real_pair(frame, q, p, t)
    return np.arctan2(a2, a1)


def theta_a(frame, q, p, t):
    """arg(a) in (-pi, pi]."""
    a, _ = eval_complex_pair(frame, q, p, t)
    return np.angle(a)


def theta_u(frame, t):
    """Windowed mode phase, -arg(u) in (-pi, pi]."""
    return _wrap(-np.angle(frame.mode.u(np.asarray(t, dtype=float))))


def vartheta(frame, q, p, t):
    """Ellipse phase from cos/sin components, in (-pi, pi]."""
    u, ud, x, y = frame._coeffs(t)
    uu = np.abs(u) ** 2
    big_i = action(frame, q, p, t)
    # d/dt ln|u| = Re(u'/u), taken from the stored derivative
    dlog = (np.conj(u) * ud).real / uu
    # -Im(u* u')/X is 1/2 for a normalized mode; the local value keeps the
    # identity with theta_a - theta_u exact despite integrator drift
    half_w = -(np.conj(u) * ud).imag / x
    cos_part = q * half_w / np.sqrt(uu * big_i)
    sin_part = np.sqrt(uu / big_i) * (p + (y / x - dlog / x) * q)
    return np.arctan2(sin_part, cos_part)


def action_phase(frame, q, p, t):
    """Action I = |a|^2 and phases theta, theta_a, vartheta at a scalar point."""
    big_i = float(action(frame, q, p, t))
    if big_i <= _ZERO_ACTION:
        return ActionPhase(big_i, None, None, None)
    return ActionPhase(
        big_i,
        float(theta(frame, q, p, t)),
        float(theta_a(frame, q, p, t)),
        float(vartheta(frame, q, p, t)),
    )


def quadratic_invariant(spec, a1, a2):
    """Three-parameter quadratic invariant evaluated on (a1, a2)."""
    A, B = complex(spec.A), float(spec.B)
    Ac = np.conj(A)
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    val = 0.5 * (B + Ac + A) * a1**2 + (Ac - A) / 2j * 2.0 * a1 * a2 + 0.5 * (B - Ac - A) * a2**2
    scale = np.maximum(1.0, (abs(A) + abs(B)) * (a1**2 + a2**2))
    if np.any(np.abs(val.imag) > 1e-12 * scale):
        raise ArithmeticError("quadratic invariant acquired an imaginary part")
    val = val.real
    return float(val) if val.ndim == 0 else val


_STENCIL = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))


def _partial(f, q, p, h, wrt):
    total = 0.0
    for k, c in _STENCIL:
        if wrt == 0:
            total = total + c * f(q + k * h, p)
        else:
            total = total + c * f(q, p + k * h)
    return total / h


def poisson_bracket_numeric(f, g, q, p, h=1e-4):
    """Centered-difference estimate of {f, g} = f_q g_p - f_p g_q.

    Uses the five-point (fourth order) centered stencil in each variable.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ContractError(f"step h={h!r} outside [1e-7, 1e-3]")
    fq, fp = _partial(f, q, p, h, 0), _partial(f, q, p, h, 1)
    gq, gp = _partial(g, q, p, h, 0), _partial(g, q, p, h, 1)
    return fq * gp - fp * gq


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    stderr: float
    n_samples: int

    def __float__(self):
        return self.value


def _ellipse_box(frame, I0, t):
    """Half-widths of the bounding box of {I <= I0} at time t."""
    u, ud, x, y = frame._coeffs(t)
    rho = float(np.abs(u))
    rho_dot = float((np.conj(u) * ud).real) / rho
    x, y = float(x), float(y)
    half_q = 2.0 * np.sqrt(I0) * rho
    half_p = np.sqrt(I0) * np.hypot(2.0 * (rho_dot - y * rho) / x, 1.0 / rho)
    return half_q, half_p


def phase_space_area(frame, I0, t, n_samples=1_000_000, rng=0):
    """Monte-Carlo area of {(q, p): I(q, p, t) <= I0} with its standard error."""
    if I0 < 0:
        raise ContractError("I0 must be non-negative")
    if n_samples < 100_000:
        raise ContractError("n_samples must be at least 1e5")
    if I0 == 0:
        return AreaEstimate(0.0, 0.0, int(n_samples))
    half_q, half_p = _ellipse_box(frame, I0, t)
    box = 4.0 * half_q * half_p
    if not (np.isfinite(box) and box > 0):
        raise DegenerateModeError(f"sampling box is degenerate (area {box!r})")
    gen = np.random.default_rng(rng)
    qs = gen.uniform(-half_q, half_q, n_samples)
    ps = gen.uniform(-half_p, half_p, n_samples)
    frac = float(np.mean(action(frame, qs, ps, t) <= I0))
    return AreaEstimate(box * frac, box * np.sqrt(frac * (1.0 - frac) / n_samples), int(n_samples))


def reconstruct_qp(frame, I, theta_a, t):
    """Phase-space point with action I and phase theta_a at time t."""
    if np.any(np.asarray(I) < 0):
        raise ContractError("action must be non-negative")
    u, ud, x, y = frame._coeffs(t)
    rho = np.abs(u)
    rho_dot = (np.conj(u) * ud).real / rho
    phi = theta_a + np.angle(u)  # theta_a - theta_u
    s = np.sqrt(I)
    q = 2.0 * s * rho * np.cos(phi)
    p = 2.0 * s / x * (rho_dot - y * rho) * np.cos(phi) + s / rho * np.sin(phi)
    return q, p


def scaled_canonical_qp(profile, q, p, t):
    """Canonical variables Q = q/sqrt(X), P = sqrt(X)(p + Y q / X)."""
    t = profile.check_time(t)
    x, y = profile.x(t), profile.y(t)
    return q / np.sqrt(x), np.sqrt(x) * (p + y * q / x)


def reduced_hamiltonian(profile, Q, P, t):
    """Energy in the (Q, P) variables at fixed t: P^2/2 + (XZ - Y^2) Q^2/2."""
    t = profile.check_time(t)
    x, y, z = profile.x(t), profile.y(t), profile.z(t)
    return 0.5 * P * P + 0.5 * (x * z - y * y) * Q * Q
