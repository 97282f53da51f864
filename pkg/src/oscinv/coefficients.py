"""Time-dependent coefficients of the quadratic oscillator.

The Hamiltonian is

    H(t) = X(t)/2 p^2 + Y(t)/2 (pq + qp) + Z(t)/2 q^2

and everything downstream only needs X, Y, Z and the first derivatives of
X and Y (second derivative of X for the auxiliary-equation residuals).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import OutOfDomainError

__all__ = [
    "CoefficientProfile",
    "constant",
    "caldirola_kanai",
    "pumped",
    "cross_term",
    "CATALOG",
    "from_catalog",
    "effective_frequency_sq",
    "hamiltonian_value",
]

Func = Callable[[np.ndarray], np.ndarray]

_N_POSITIVITY_SAMPLES = 1000
_N_DERIVATIVE_SAMPLES = 25
_DERIVATIVE_RTOL = 1e-6


def _fd_step(t):
    return 1e-5 * np.maximum(1.0, np.abs(t))


def _centered(f, t):
    h = _fd_step(t)
    return (f(t + h) - f(t - h)) / (2.0 * h)


def _centered2(f, t):
    h = 1e-4 * np.maximum(1.0, np.abs(t))
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)


@dataclass(frozen=True)
class CoefficientProfile:
    """Coefficient functions X(t), Y(t), Z(t) on a closed time interval.

    Derivatives that are not supplied fall back to centered differences with
    step ``1e-5 * max(1, |t|)``.  Construction samples X on 1000 points and
    rejects the profile if X is not strictly positive there.
    """

    name: str
    X: Func
    Y: Func
    Z: Func
    t_domain: tuple[float, float] = (-100.0, 100.0)
    dX: Optional[Func] = None
    dY: Optional[Func] = None
    ddX: Optional[Func] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        t0, t1 = map(float, self.t_domain)
        if not t0 < t1:
            raise ValueError(f"empty time domain {self.t_domain!r}")
        object.__setattr__(self, "t_domain", (t0, t1))

        ts = np.linspace(t0, t1, _N_POSITIVITY_SAMPLES)
        xs = np.asarray(self.X(ts), dtype=float) * np.ones_like(ts)
        if not np.all(np.isfinite(xs)) or np.any(xs <= 0.0):
            raise ValueError(f"profile {self.name!r}: X(t) must be positive on {self.t_domain}")

        # closed-form derivatives are cross-checked, not trusted
        h = _fd_step(np.array([abs(t0), abs(t1)])).max()
        ts = np.linspace(t0 + 2 * h, t1 - 2 * h, _N_DERIVATIVE_SAMPLES)
        for label, f, df in (("dX", self.X, self.dX), ("dY", self.Y, self.dY)):
            if df is None:
                continue
            exact = np.asarray(df(ts), dtype=float) * np.ones_like(ts)
            approx = _centered(f, ts)
            scale = np.maximum(1.0, np.abs(exact))
            if np.any(np.abs(exact - approx) > _DERIVATIVE_RTOL * scale):
                raise ValueError(f"profile {self.name!r}: {label} disagrees with finite differences")

    def check_time(self, t):
        t = np.asarray(t, dtype=float)
        t0, t1 = self.t_domain
        if np.any(t < t0) or np.any(t > t1) or np.any(~np.isfinite(t)):
            raise OutOfDomainError(f"t outside profile domain {self.t_domain}")
        return t

    def x(self, t):
        return np.asarray(self.X(t), dtype=float) * np.ones_like(t, dtype=float)

    def y(self, t):
        return np.asarray(self.Y(t), dtype=float) * np.ones_like(t, dtype=float)

    def z(self, t):
        return np.asarray(self.Z(t), dtype=float) * np.ones_like(t, dtype=float)

    def dx(self, t):
        if self.dX is not None:
            return np.asarray(self.dX(t), dtype=float) * np.ones_like(t, dtype=float)
        return _centered(self.x, np.asarray(t, dtype=float))

    def dy(self, t):
        if self.dY is not None:
            return np.asarray(self.dY(t), dtype=float) * np.ones_like(t, dtype=float)
        return _centered(self.y, np.asarray(t, dtype=float))

    def ddx(self, t):
        if self.ddX is not None:
            return np.asarray(self.ddX(t), dtype=float) * np.ones_like(t, dtype=float)
        return _centered2(self.x, np.asarray(t, dtype=float))

    def omega_sq(self, t):
        """XZ - Y^2 + (X'Y - XY')/X, without the domain check."""
        x, y = self.x(t), self.y(t)
        return x * self.z(t) - y * y + (self.dx(t) * y - x * self.dy(t)) / x


def _zero(t):
    return np.zeros_like(np.asarray(t, dtype=float))


def _const(c):
    return lambda t: np.full_like(np.asarray(t, dtype=float), c)


def constant(omega0=1.0, t_domain=(-100.0, 100.0)):
    """Time-independent oscillator: X = 1, Y = 0, Z = omega0^2."""
    w2 = float(omega0) ** 2
    return CoefficientProfile(
        "constant", _const(1.0), _zero, _const(w2), t_domain,
        dX=_zero, dY=_zero, ddX=_zero, params={"omega0": float(omega0)},
    )


def caldirola_kanai(gamma=0.2, omega0=1.0, t_domain=(-100.0, 100.0)):
    """Damped oscillator: X = exp(-gamma t), Y = 0, Z = omega0^2 exp(gamma t)."""
    g, w2 = float(gamma), float(omega0) ** 2
    return CoefficientProfile(
        "caldirola_kanai",
        lambda t: np.exp(-g * np.asarray(t, dtype=float)),
        _zero,
        lambda t: w2 * np.exp(g * np.asarray(t, dtype=float)),
        t_domain,
        dX=lambda t: -g * np.exp(-g * np.asarray(t, dtype=float)),
        dY=_zero,
        ddX=lambda t: g * g * np.exp(-g * np.asarray(t, dtype=float)),
        params={"gamma": g, "omega0": float(omega0)},
    )


def pumped(omega0=1.0, epsilon=0.1, nu=2.0, t_domain=(-100.0, 100.0)):
    """Parametrically pumped oscillator: Z = omega0^2 (1 + epsilon cos(nu t))."""
    w2, eps, nu = float(omega0) ** 2, float(epsilon), float(nu)
    return CoefficientProfile(
        "pumped",
        _const(1.0),
        _zero,
        lambda t: w2 * (1.0 + eps * np.cos(nu * np.asarray(t, dtype=float))),
        t_domain,
        dX=_zero, dY=_zero, ddX=_zero,
        params={"omega0": float(omega0), "epsilon": eps, "nu": nu},
    )


def cross_term(omega0=1.0, y0=0.5, t_domain=(-100.0, 100.0)):
    """Constant oscillator with a pq cross term: X = 1, Y = y0, Z = omega0^2 + y0^2."""
    w2, y0 = float(omega0) ** 2, float(y0)
    return CoefficientProfile(
        "cross_term", _const(1.0), _const(y0), _const(w2 + y0 * y0), t_domain,
        dX=_zero, dY=_zero, ddX=_zero, params={"omega0": float(omega0), "y0": y0},
    )


CATALOG = {
    "constant": constant,
    "caldirola_kanai": caldirola_kanai,
    "pumped": pumped,
    "cross_term": cross_term,
}


def from_catalog(name, **params):
    """Build a catalog profile by identifier, e.g. ``from_catalog("pumped", epsilon=0.2)``."""
    try:
        factory = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown profile {name!r}; known: {sorted(CATALOG)}") from None
    return factory(**params)


def effective_frequency_sq(profile, t):
    """Coefficient of the mode equation, XZ - Y^2 + (X'Y - XY')/X.

    May be negative (inverted oscillator).
    """
    t = profile.check_time(t)
    out = profile.omega_sq(t)
    return float(out) if out.ndim == 0 else out


def hamiltonian_value(profile, q, p, t):
    """Classical energy X/2 p^2 + Y pq + Z/2 q^2."""
    t = profile.check_time(t)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    out = 0.5 * profile.x(t) * p * p + profile.y(t) * p * q + 0.5 * profile.z(t) * q * q
    return float(out) if np.ndim(out) == 0 else out
