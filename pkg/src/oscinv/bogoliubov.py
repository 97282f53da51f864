"""Bogoliubov coefficients between mode frames and squeezing of quadratic invariants.

Operator conventions: the general quadratic invariant is

    I = A/2 a^dag^2 + B/2 (a^dag a + a a^dag) + A*/2 a^2,

and with z = r exp(i (delta + pi)) and S(z) = exp[(z* a^2 - z a^dag^2)/2]
the substitution a = cosh r a~ + e^{i delta} sinh r a~^dag is realized as
a = S(z)^dag a~ S(z).  In matrices (a~ the standard ladder matrix) the
canonical form is therefore S(z)^dag I S(z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .classical import wronskian
from .errors import AccuracyError, ContractError, UnsupportedSignatureError
from .operators import OperatorMatrix, interior_size, ladder_matrices

__all__ = [
    "BogoliubovCoefficients",
    "SqueezeSpec",
    "coefficients_between_modes",
    "mixed_wronskian",
    "squeeze_parameters",
    "squeeze_operator_matrix",
    "quadratic_invariant_matrix",
    "canonical_form_check",
    "invariant_spectrum",
    "apply_bogoliubov",
    "compose",
    "vacuum_overlap",
]

_CONSTRAINT_TOL = 1e-9


@dataclass(frozen=True)
class BogoliubovCoefficients:
    """b = alpha a + beta a^dagger with |alpha|^2 - |beta|^2 = 1."""

    alpha: complex
    beta: complex

    @property
    def constraint(self):
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    def check(self, tol=_CONSTRAINT_TOL):
        if abs(self.constraint - 1.0) > tol:
            raise ContractError(f"|alpha|^2 - |beta|^2 = {self.constraint!r}, expected 1")
        return self


def mixed_wronskian(f_mode, g_mode, t, conj_f=False):
    """W(f, g) = (f g' - f' g)/X, with f optionally conjugated."""
    f, fd = f_mode.u_and_udot(t)
    g, gd = g_mode.u_and_udot(t)
    if conj_f:
        f, fd = np.conj(f), np.conj(fd)
    return (f * gd - fd * g) / f_mode.profile.x(t)


def coefficients_between_modes(u, v, t=None):
    """Coefficients relating the invariants of mode ``v`` to those of ``u``.

    With v = alpha* u - beta* u*, the Wronskian projections give
    alpha* = i W(u*, v) and beta* = i W(u, v).  ``t`` may be an array, in
    which case arrays of alpha, beta are returned (useful to check they
    are constant).
    """
    for m in (u, v):
        if m.kind != "complex_mode" or abs(complex(wronskian(m, m.t_seed)) - 1j) > _CONSTRAINT_TOL:
            raise ContractError("both modes must be Wronskian-normalized complex modes")
    if u.profile is not v.profile:
        raise ContractError("modes must share a profile")
    if t is None:
        t = max(u.t_span[0], v.t_span[0])
    alpha = np.conj(1j * mixed_wronskian(u, v, t, conj_f=True))
    beta = np.conj(1j * mixed_wronskian(u, v, t))
    if np.ndim(alpha) == 0:
        return BogoliubovCoefficients(complex(alpha), complex(beta))
    return alpha, beta


@dataclass(frozen=True)
class SqueezeSpec:
    r: float
    delta: float
    B_tilde: float
    B_tilde_halved: float  # variant with B cosh 2r also inside the overall 1/2, kept for comparison

    @property
    def z(self):
        return self.r * np.exp(1j * (self.delta + np.pi))


def squeeze_parameters(A, B):
    """Squeeze parameters (r, delta) and canonical coefficient B~ for B > |A|.

    e^{i delta} tanh r = (-B + sqrt(B^2 - |A|^2)) / A*, the root with
    |tanh r| < 1, evaluated as -A / (B + sqrt(B^2 - |A|^2)).  B~ = (A/2) sinh 2r e^{-i delta} + B cosh 2r
    + (A*/2) sinh 2r e^{i delta}, which equals sqrt(B^2 - |A|^2).
    """
    A, B = complex(A), float(B)
    if not B > abs(A):
        raise UnsupportedSignatureError(f"B={B} must exceed |A|={abs(A)}")
    if A == 0:
        r, delta = 0.0, 0.0
    else:
        root = np.sqrt(B * B - abs(A) ** 2)
        # (-B + root)/A* rewritten without cancellation; the other root has |w| > 1
        w = -A / (B + root)
        r = float(np.arctanh(abs(w)))
        delta = float(np.angle(w))
        if delta <= -np.pi:
            delta += 2.0 * np.pi
    s2, c2 = np.sinh(2 * r), np.cosh(2 * r)
    ph = np.exp(1j * delta)
    b_t = 0.5 * A * s2 / ph + B * c2 + 0.5 * np.conj(A) * s2 * ph
    halved = 0.5 * (A * s2 / ph + B * c2 + np.conj(A) * s2 * ph)
    if abs(b_t.imag) > 1e-12 * max(1.0, abs(b_t)):
        raise AccuracyError(f"B~ is not real: {b_t}")
    return SqueezeSpec(r, delta, float(b_t.real), float(halved.real))


def squeeze_operator_matrix(z, dim):
    """exp[(z* a^2 - z a^dag^2)/2] on the truncated basis (no re-unitarization)."""
    a, ad, _ = ladder_matrices(dim)
    gen = 0.5 * (np.conj(z) * (a.entries @ a.entries) - z * (ad.entries @ ad.entries))
    # the generator changes n by 2, so even and odd number states exponentiate separately
    out = np.zeros((dim, dim), dtype=complex)
    for parity in (0, 1):
        idx = np.arange(parity, dim, 2)
        out[np.ix_(idx, idx)] = expm(gen[np.ix_(idx, idx)])
    return OperatorMatrix(out)


def quadratic_invariant_matrix(A, B, dim):
    a, ad, _ = ladder_matrices(dim)
    a, ad = a.entries, ad.entries
    A = complex(A)
    return OperatorMatrix(0.5 * A * ad @ ad + 0.5 * B * (ad @ a + a @ ad) + 0.5 * np.conj(A) * a @ a)


def _transformed_block(A, B, z, dim, work_dim):
    S = squeeze_operator_matrix(z, work_dim).entries
    M = quadratic_invariant_matrix(A, B, work_dim).entries
    return (S.conj().T @ M @ S)[:dim, :dim]


def _off_diagonal_norm(block):
    return float(np.linalg.norm(block - np.diag(np.diag(block))))


def canonical_form_check(A, B, dim, work_dim=None, tol=1e-12, max_factor=32):
    """Off-diagonal Frobenius residual of S^dag I S on the interior of a dim-state basis.

    The squeeze operator spreads every number state upward, so an exponential
    taken in exactly ``dim`` states corrupts far more than the top of the
    basis.  By default the product is therefore formed in a working basis
    that is doubled until the reported dim x dim block stops changing
    (max-abs change below ``tol`` times the largest entry, or below ``tol``
    when no entry exceeds 1).  Passing ``work_dim=dim`` gives the raw
    truncated result.
    """
    spec = squeeze_parameters(A, B)
    k = interior_size(dim)
    if work_dim is not None:
        if work_dim < dim:
            raise ContractError("work_dim must be at least dim")
        block = _transformed_block(A, B, spec.z, dim, int(work_dim))
        return _off_diagonal_norm(block[:k, :k])
    if spec.r == 0.0:
        return _off_diagonal_norm(quadratic_invariant_matrix(A, B, dim).entries[:k, :k])
    w = dim
    prev = _transformed_block(A, B, spec.z, dim, w)
    while True:
        w *= 2
        if w > max_factor * dim:
            raise AccuracyError(f"canonical form not converged up to working dimension {w // 2}")
        cur = _transformed_block(A, B, spec.z, dim, w)
        scale = max(1.0, float(np.max(np.abs(cur[:k, :k]))))
        if np.max(np.abs(cur[:k, :k] - prev[:k, :k])) < tol * scale:
            return _off_diagonal_norm(cur[:k, :k])
        prev = cur


def invariant_spectrum(A, B, n_levels, tol=1e-12, max_dim=4096):
    """Lowest ``n_levels`` eigenvalues of the quadratic invariant, converged in basis size."""
    dim = max(2 * n_levels, 16)
    prev = None
    while dim <= max_dim:
        ev = np.linalg.eigvalsh(quadratic_invariant_matrix(A, B, dim).entries)[:n_levels]
        if prev is not None and np.max(np.abs(ev - prev)) < tol * max(1.0, np.max(np.abs(ev))):
            return ev
        prev, dim = ev, 2 * dim
    raise AccuracyError("invariant spectrum did not converge")


def apply_bogoliubov(coeffs, a_mat, adag_mat):
    """b = alpha a + beta a^dagger and its adjoint."""
    coeffs.check()
    a = a_mat.entries if isinstance(a_mat, OperatorMatrix) else np.asarray(a_mat)
    ad = adag_mat.entries if isinstance(adag_mat, OperatorMatrix) else np.asarray(adag_mat)
    b = coeffs.alpha * a + coeffs.beta * ad
    bd = np.conj(coeffs.alpha) * ad + np.conj(coeffs.beta) * a
    return OperatorMatrix(b), OperatorMatrix(bd)


def compose(first, second):
    """Coefficients of applying ``first`` (a -> b) and then ``second`` (b -> c)."""
    a1, b1 = first.alpha, first.beta
    a2, b2 = second.alpha, second.beta
    return BogoliubovCoefficients(a2 * a1 + b2 * np.conj(b1), a2 * b1 + b2 * np.conj(a1))


def vacuum_overlap(coeffs, dim):
    """|<0_b|0_a>|^2 with |0_b> the lowest eigenvector of b^dag b in ``dim`` states."""
    a, ad, _ = ladder_matrices(dim)
    b, bd = apply_bogoliubov(coeffs, a, ad)
    vals, vecs = np.linalg.eigh((bd @ b).entries)
    return float(abs(vecs[0, 0]) ** 2)
