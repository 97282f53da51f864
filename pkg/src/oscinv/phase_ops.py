"""Finite-dimensional realizations of candidate phase operators.

All matrices act on the instantaneous number basis |n, t>; the time
dependence of the oscillator lives entirely in those basis states, so the
matrices themselves are time independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .operators import OperatorMatrix, commutator, ladder_matrices

__all__ = [
    "PhaseDistribution",
    "susskind_glogower",
    "dirac_phase",
    "pegg_barnett",
    "pegg_barnett_angles",
    "pegg_barnett_exponential",
    "extended_phase_operator",
    "lerner_check",
    "phase_distribution",
]


def susskind_glogower(dim):
    """One-sided shift E = sum_n |n><n+1| and its adjoint."""
    if dim < 2:
        raise ContractError("dim must be at least 2")
    E = np.eye(dim, k=1, dtype=complex)
    return OperatorMatrix(E), OperatorMatrix(E.conj().T)


def dirac_phase(dim):
    """a n^{-1/2} with the pseudo-inverse convention n^{-1/2}|0> = 0.

    The division by sqrt(n) is done entrywise so the result is exactly the
    Susskind-Glogower shift.
    """
    a, _, _ = ladder_matrices(dim)
    root_n = np.sqrt(np.arange(dim, dtype=float))
    out = np.zeros((dim, dim))
    # real division: complex division by sqrt(n) is not exact in floating point
    np.divide(a.entries.real, root_n[None, :], out=out, where=root_n[None, :] > 0)
    return OperatorMatrix(out.astype(complex))


def pegg_barnett_angles(dim, theta0=0.0):
    """theta_m = theta0 + 2 pi m / (s+1), m = 0..s, with dim = s+1."""
    return theta0 + 2.0 * np.pi * np.arange(dim) / dim


def _phase_states(dim, theta0):
    angles = pegg_barnett_angles(dim, theta0)
    n = np.arange(dim)
    # column m is |theta_m> = (s+1)^{-1/2} sum_n e^{i n theta_m} |n>
    return angles, np.exp(1j * np.outer(n, angles)) / np.sqrt(dim)


def pegg_barnett(dim, theta0=0.0):
    """Hermitian phase operator sum_m theta_m |theta_m><theta_m| and its eigenbasis.

    Returns the operator and the list of phase-state vectors.
    """
    if dim < 2:
        raise ContractError("dim must be at least 2")
    angles, U = _phase_states(dim, theta0)
    op = (U * angles[None, :]) @ U.conj().T
    return OperatorMatrix(op), [U[:, m].copy() for m in range(dim)]


def pegg_barnett_exponential(dim, theta0=0.0):
    """exp(i theta_PB) = sum_m e^{i theta_m} |theta_m><theta_m|."""
    angles, U = _phase_states(dim, theta0)
    return OperatorMatrix((U * np.exp(1j * angles)[None, :]) @ U.conj().T)


def extended_phase_operator(n_min, n_max, cyclic=True):
    """Shift sum_n |n><n+1| on the index window [n_min, n_max].

    Row/column j corresponds to n = n_min + j.  With ``cyclic`` the window is
    closed by the entry |n_max><n_min| and the matrix is an exact
    permutation (unitary); without it the two window edges are defective.
    Negative indices are bookkeeping only; they carry no physical states.
    """
    if not n_min < 0 < n_max:
        raise ContractError("window must satisfy n_min < 0 < n_max")
    size = n_max - n_min + 1
    E = np.eye(size, k=1, dtype=complex)
    if cyclic:
        E[size - 1, 0] = 1.0
    return OperatorMatrix(E)


def lerner_check(E, hbar=1.0, dim=None):
    """Max-norm of [E, hbar n] - hbar E over rows/columns 0..dim-2."""
    if dim is not None and dim != E.dim:
        raise ContractError(f"dimension mismatch: E has {E.dim}, expected {dim}")
    _, _, n = ladder_matrices(E.dim)
    res = commutator(E, hbar * n.entries) - hbar * E.entries
    k = E.dim - 1
    return float(np.max(np.abs(res[:k, :k])))


@dataclass(frozen=True)
class PhaseDistribution:
    angles: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise ContractError("probabilities must be non-negative and sum to 1")


def phase_distribution(state_coeffs, pegg_basis, angles=None):
    """|<theta_m|psi>|^2 for a normalized number-basis state."""
    psi = np.asarray(state_coeffs, dtype=complex)
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise ContractError("state must be normalized")
    basis = np.asarray(pegg_basis, dtype=complex)
    if basis.shape != (psi.size, psi.size):
        raise ContractError("basis does not match the state dimension")
    probs = np.abs(basis.conj() @ psi) ** 2
    # renormalize rounding only; the input norm was already checked
    probs = probs / probs.sum()
    if angles is None:
        angles = pegg_barnett_angles(psi.size)
    return PhaseDistribution(np.asarray(angles, dtype=float), probs)
