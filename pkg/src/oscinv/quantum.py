"""Number-state wavefunctions of the time-dependent oscillator.

With u = rho exp(-i theta_u) a Wronskian-normalized mode, the n-th number
state of the invariant a^dagger a is

    Psi_n(q, t) = (2 hbar rho^2)^(-1/4) phi_n(x) exp(-i (2n+1) theta_u / 2)
                  exp(i kappa q^2),

    x = q / sqrt(2 hbar rho^2),   kappa = (rho'/rho - Y) / (2 hbar X),

where phi_n are the normalized Hermite functions.  theta_u is the
continuous branch fixed at the seed time of the mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, ContractError, SingularityError, WavefunctionRangeError
from .operators import ladder_matrices

__all__ = [
    "WaveFunctionFamily",
    "AuxiliaryForms",
    "GeometricPhase",
    "hermite_functions",
    "psi_n",
    "inner_product",
    "default_q_grid",
    "ladder_q_grid",
    "apply_hamiltonian",
    "apply_annihilation",
    "apply_creation",
    "schrodinger_residual",
    "geometric_phase_check",
    "auxiliary_forms",
    "ladder_matrices",
]

_X_LIMIT = 1e150
_FIVE_POINT_D1 = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_FIVE_POINT_D2 = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))


def hermite_functions(n_max, x):
    """Normalized Hermite functions phi_0..phi_{n_max} at x, shape (n_max+1, *x.shape).

    Upward recurrence phi_{k+1} = sqrt(2/(k+1)) x phi_k - sqrt(k/(k+1)) phi_{k-1};
    the 1/sqrt(2^n n!) normalization is carried by the recurrence, so nothing
    overflows for moderate n.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(np.abs(x) > _X_LIMIT):
        raise WavefunctionRangeError("Hermite argument is not finite or too large")
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


@lru_cache(maxsize=64)
def _gauss_hermite(n_nodes):
    x, w = np.polynomial.hermite.hermgauss(n_nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class WaveFunctionFamily:
    frame: object
    hbar: float = 1.0
    n_max: int = 8

    def __post_init__(self):
        if not self.hbar > 0:
            raise ContractError("hbar must be positive")
        if self.n_max < 0:
            raise ContractError("n_max must be non-negative")

    @property
    def mode(self):
        return self.frame.mode

    @property
    def profile(self):
        return self.frame.mode.profile

    def geometry(self, t):
        """(rho, width s, chirp kappa, theta_u) at time t."""
        mode = self.mode
        u, ud = mode.u_and_udot(t)
        rho = np.abs(u)
        rho_dot = (np.conj(u) * ud).real / rho
        x, y = self.profile.x(t), self.profile.y(t)
        s = np.sqrt(2.0 * self.hbar) * rho
        kappa = (rho_dot / rho - y) / (2.0 * self.hbar * x)
        return float(rho), float(s), float(kappa), float(mode.theta_u(t))

    def _check_n(self, n):
        if not 0 <= n <= self.n_max:
            raise ContractError(f"n={n} outside 0..{self.n_max}")


def _components(family, n_top, q, t):
    """Hermite table, prefactor (per n via phase), chirp factor and x for q at t."""
    rho, s, kappa, th = family.geometry(t)
    q = np.asarray(q, dtype=float)
    x = q / s
    table = hermite_functions(n_top, x)
    chirp = np.exp(1j * kappa * q * q)
    return table, chirp, x, s, kappa, th


def psi_n(family, n, q, t):
    """Wavefunction of the n-th number state at positions q and time t."""
    family._check_n(n)
    table, chirp, x, s, kappa, th = _components(family, n, q, t)
    pref = s ** -0.5 * np.exp(-0.5j * (2 * n + 1) * th)
    out = pref * table[n] * chirp
    if not np.all(np.isfinite(out)):
        raise WavefunctionRangeError("wavefunction evaluation produced non-finite values")
    return out


def _psi_and_derivatives(family, n, q, t):
    """Psi, dPsi/dq, d2Psi/dq2 evaluated in closed form via Hermite-function identities."""
    table, chirp, x, s, kappa, th = _components(family, n + 1, q, t)
    q = np.asarray(q, dtype=float)
    phi = table[n]
    dphi = -np.sqrt((n + 1) / 2.0) * table[n + 1]
    if n > 0:
        dphi = dphi + np.sqrt(n / 2.0) * table[n - 1]
    ddphi = (x * x - (2 * n + 1)) * phi
    pref = s ** -0.5 * np.exp(-0.5j * (2 * n + 1) * th) * chirp
    psi = pref * phi
    d1 = pref * (dphi / s + 2j * kappa * q * phi)
    d2 = pref * (ddphi / s**2 + 4j * kappa * q * dphi / s + (2j * kappa - 4.0 * kappa**2 * q * q) * phi)
    return psi, d1, d2


def _hamiltonian_from_derivatives(family, q, t, psi, d1, d2):
    prof, hb = family.profile, family.hbar
    X, Y, Z = float(prof.x(t)), float(prof.y(t)), float(prof.z(t))
    return -0.5 * hb * hb * X * d2 - 0.5j * hb * Y * (psi + 2.0 * q * d1) + 0.5 * Z * q * q * psi


def _gh_sum(family, t, n_nodes, integrand):
    """Integral over q of integrand(q) assuming Gaussian decay set by the mode width."""
    _, s, _, _ = family.geometry(t)
    xs, ws = _gauss_hermite(n_nodes)
    q = s * xs
    return np.sum(ws * np.exp(xs * xs) * integrand(q)) * s


def _converged_quadrature(family, t, base_nodes, integrand, tol=1e-10):
    v1 = _gh_sum(family, t, base_nodes, integrand)
    v2 = _gh_sum(family, t, 2 * base_nodes, integrand)
    if abs(v2 - v1) > tol:
        raise AccuracyError(f"quadrature not converged: |{v2} - {v1}| > {tol}")
    return v2


def inner_product(family, n, m, t):
    """<Psi_n | Psi_m> by Gauss-Hermite quadrature in x = q / sqrt(2 hbar |u|^2)."""
    family._check_n(n)
    family._check_n(m)
    return complex(
        _converged_quadrature(
            family, t, n + m + 20, lambda q: np.conj(psi_n(family, n, q, t)) * psi_n(family, m, q, t)
        )
    )


def _time_derivative(f, t, dt):
    return sum(c * f(t + k * dt) for k, c in _FIVE_POINT_D1) / dt


def _time_step(family, t):
    w2 = abs(float(family.profile.omega_sq(t)))
    timescale = 1.0 / max(1.0, np.sqrt(w2))
    return 1e-4 * timescale


def default_q_grid(family, n, t, n_points=1024):
    """Uniform grid reaching about nine Gaussian widths past the classical turning region."""
    _, s, kappa, _ = family.geometry(t)
    half = (np.sqrt(2 * n + 1) + 9.0) * s
    # resolve the chirp 2 kappa q and the envelope bandwidth
    k_need = 2.0 * abs(kappa) * half + (np.sqrt(2 * n + 1) + 9.0) / s
    n_req = int(np.ceil(1.5 * k_need * 2.0 * half / np.pi))
    size = max(n_points, 1 << int(np.ceil(np.log2(max(n_req, 2)))))
    return np.linspace(-half, half, size, endpoint=False)


def ladder_q_grid(family, n, t):
    """Smallest adequate grid for repeated ladder operations up to level n.

    Each spectral derivative multiplies roundoff by up to (q_max + k_max), so
    the window (seven widths past the turning region) and the bandwidth of
    the de-chirped envelope are kept tight instead of generous.
    """
    _, s, _, _ = family.geometry(t)
    w = np.sqrt(2 * n + 1) + 7.0
    half = w * s
    k_need = (w + 2.0) / s
    size = 2 * int(np.ceil(1.2 * half * k_need / np.pi))
    return np.linspace(-half, half, size, endpoint=False)


def _spectral_derivative(f, dq, order=1):
    k = 2.0 * np.pi * np.fft.fftfreq(f.size, d=dq)
    return np.fft.ifft((1j * k) ** order * np.fft.fft(f))


def _dechirped_derivative(family, psi, q, dq, t):
    # d/dq (e^{i kappa q^2} chi) with chi differentiated spectrally: chi has the envelope bandwidth only
    kappa = family.geometry(t)[2]
    chirp = np.exp(1j * kappa * q * q)
    return chirp * _spectral_derivative(psi * np.conj(chirp), dq) + 2j * kappa * q * psi


def _grid_step(q_grid):
    q_grid = np.asarray(q_grid, dtype=float)
    d = np.diff(q_grid)
    if q_grid.ndim != 1 or q_grid.size < 2 or np.max(np.abs(d - d[0])) > 1e-9 * abs(d[0]):
        raise ContractError("q_grid must be a uniform one-dimensional grid")
    return q_grid, float(d[0])


def apply_hamiltonian(family, psi, q_grid, t):
    """H psi on a uniform grid, with spectral q-derivatives."""
    q, dq = _grid_step(q_grid)
    d1 = _spectral_derivative(psi, dq, 1)
    d2 = _spectral_derivative(psi, dq, 2)
    return _hamiltonian_from_derivatives(family, q, t, psi, d1, d2)


def apply_annihilation(family, psi, q_grid, t):
    """a psi = sqrt(hbar) u* psi' - i (u'* - Y u*) q psi / (sqrt(hbar) X)."""
    q, dq = _grid_step(q_grid)
    u, ud = family.mode.u_and_udot(t)
    X, Y = float(family.profile.x(t)), float(family.profile.y(t))
    hb = family.hbar
    uc, udc = np.conj(u), np.conj(ud)
    return np.sqrt(hb) * uc * _dechirped_derivative(family, psi, q, dq, t) - 1j * (udc - Y * uc) * q * psi / (np.sqrt(hb) * X)


def apply_creation(family, psi, q_grid, t):
    """a^dagger psi = -sqrt(hbar) u psi' + i (u' - Y u) q psi / (sqrt(hbar) X)."""
    q, dq = _grid_step(q_grid)
    u, ud = family.mode.u_and_udot(t)
    X, Y = float(family.profile.x(t)), float(family.profile.y(t))
    hb = family.hbar
    return -np.sqrt(hb) * u * _dechirped_derivative(family, psi, q, dq, t) + 1j * (ud - Y * u) * q * psi / (np.sqrt(hb) * X)


def _relative_residual(diff, ref):
    den = np.linalg.norm(ref)
    if not den > 0:
        raise ContractError("residual undefined: H psi vanishes identically")
    return float(np.linalg.norm(diff) / den)


def _residual_on_grid(family, n, t, q, dt):
    psi = psi_n(family, n, q, t)
    dpsi_dt = _time_derivative(lambda s: psi_n(family, n, q, s), t, dt)
    h_psi = apply_hamiltonian(family, psi, q, t)
    return _relative_residual(1j * family.hbar * dpsi_dt - h_psi, h_psi)


def schrodinger_residual(family, n, t, q_grid=None):
    """Relative L2 residual ||i hbar dPsi/dt - H Psi|| / ||H Psi|| on a uniform q grid.

    The time derivative uses a five-point centered stencil; q derivatives are
    spectral.  The grid must cover the wavefunction (edge values below 1e-8
    of the peak) and must not be so coarse that halving it changes the
    answer materially.
    """
    family._check_n(n)
    if q_grid is None:
        q_grid = default_q_grid(family, n, t)
    q, _ = _grid_step(q_grid)
    _, s, _, _ = family.geometry(t)
    sigma = s * np.sqrt(n + 0.5)
    if q.size < 512 or (q[-1] - q[0]) < 8.0 * sigma:
        raise ContractError("q_grid needs >= 512 points spanning >= 8 standard deviations")
    psi_abs = np.abs(psi_n(family, n, q, t))
    if max(psi_abs[0], psi_abs[-1]) > 1e-8 * psi_abs.max():
        raise AccuracyError("q_grid does not contain the decay of the wavefunction")
    dt = _time_step(family, t)
    res = _residual_on_grid(family, n, t, q, dt)
    res_half = _residual_on_grid(family, n, t, q[::2], dt)
    if res > 1e-6 and res_half > 2.0 * res:
        raise AccuracyError(f"grid too coarse: residual {res:.3g} (halved grid {res_half:.3g})")
    return res


@dataclass(frozen=True)
class GeometricPhase:
    lhs: float
    rhs: float
    lhs_imag: float
    rhs_imag: float


def geometric_phase_check(family, n, t):
    """<Psi_n| i hbar d/dt |Psi_n> against <Psi_n| H |Psi_n> by Gauss-Hermite quadrature.

    The left side uses only time differences of Psi_n; the right side uses
    closed-form q-derivatives.
    """
    family._check_n(n)
    dt = _time_step(family, t)

    def lhs_integrand(q):
        psi = psi_n(family, n, q, t)
        dpsi = _time_derivative(lambda s: psi_n(family, n, q, s), t, dt)
        return np.conj(psi) * 1j * family.hbar * dpsi

    def rhs_integrand(q):
        psi, d1, d2 = _psi_and_derivatives(family, n, q, t)
        return np.conj(psi) * _hamiltonian_from_derivatives(family, q, t, psi, d1, d2)

    lhs = complex(_converged_quadrature(family, t, n + 40, lhs_integrand, tol=1e-8))
    rhs = complex(_converged_quadrature(family, t, n + 20, rhs_integrand))
    tol = 1e-8 * max(1.0, abs(rhs))
    if abs(lhs.imag) > tol or abs(rhs.imag) > tol:
        raise AccuracyError(f"expectation values not real: lhs={lhs}, rhs={rhs}")
    return GeometricPhase(lhs.real, rhs.real, lhs.imag, rhs.imag)


@dataclass(frozen=True)
class AuxiliaryForms:
    """Amplitude/phase decompositions u = sqrt(X/2) zeta e^{-i theta} = xi e^{-i theta}/sqrt(2).

    Residual fields hold max-abs residuals over ``t``.
    """

    t: np.ndarray
    zeta: np.ndarray
    theta_zeta: np.ndarray
    xi: np.ndarray
    theta_xi: np.ndarray
    zeta_residual: float
    xi_residual: float
    zeta_rate_residual: float
    xi_rate_residual: float


def auxiliary_forms(frame, t=None, h=2e-3):
    """Build zeta, xi and their phases and report the auxiliary-equation residuals.

    zeta'' + [Omega^2 + X''/(2X) - 3 X'^2/(4X^2)] zeta = 1/zeta^3
    xi'' - (X'/X) xi' + Omega^2 xi = X^2/xi^3
    theta_zeta' zeta^2 = 1,  theta_xi' xi^2 = X

    Derivatives of zeta, xi and the phases are five-point finite differences
    of the dense mode output with step ``h``.
    """
    mode = frame.mode
    prof = mode.profile
    t0, t1 = mode.t_span
    if t is None:
        t = np.linspace(t0 + 2 * h, t1 - 2 * h, 401)
    t = np.asarray(t, dtype=float)

    def parts(s):
        x = prof.x(s)
        rho2 = np.abs(mode.u(s)) ** 2
        if np.any(x <= 0):
            raise SingularityError("X(t) <= 0")
        if np.any(rho2 < 1e-300):
            raise SingularityError("mode passes through zero")
        return np.sqrt(2.0 * rho2 / x), np.sqrt(2.0 * rho2), mode.theta_u(s)

    zeta, xi, th = parts(t)
    stack = {k: parts(t + k * h) for k in (-2, -1, 1, 2)}
    stack[0] = (zeta, xi, th)

    def d1(i):
        return sum(c * stack[k][i] for k, c in _FIVE_POINT_D1) / h

    def d2(i):
        return sum(c * stack[k][i] for k, c in _FIVE_POINT_D2) / (h * h)

    x, dx, ddx = prof.x(t), prof.dx(t), prof.ddx(t)
    w2 = prof.omega_sq(t)
    zeta_res = d2(0) + (w2 + ddx / (2 * x) - 0.75 * dx**2 / x**2) * zeta - zeta**-3
    xi_res = d2(1) - (dx / x) * d1(1) + w2 * xi - x**2 / xi**3
    theta_dot = d1(2)
    return AuxiliaryForms(
        t=t,
        zeta=zeta,
        theta_zeta=th,
        xi=xi,
        theta_xi=th,
        zeta_residual=float(np.max(np.abs(zeta_res))),
        xi_residual=float(np.max(np.abs(xi_res))),
        zeta_rate_residual=float(np.max(np.abs(theta_dot * zeta**2 - 1.0))),
        xi_rate_residual=float(np.max(np.abs(theta_dot * xi**2 / x - 1.0))),
    )
