"""Dense operator matrices on a truncated number basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError

__all__ = ["OperatorMatrix", "ladder_matrices", "commutator", "interior_size"]

INTERIOR_FRACTION = 0.6


def interior_size(dim):
    """Number of leading basis states on which truncated identities are asserted."""
    return max(1, int(INTERIOR_FRACTION * dim))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Complex matrix acting on span{|0>, ..., |dim-1>}."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ContractError(f"operator matrix must be square with dim >= 2, got {m.shape}")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self):
        return self.entries.shape[0]

    def dag(self):
        return OperatorMatrix(self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.entries @ other.entries)
        return self.entries @ other

    def is_hermitian(self, tol=1e-12):
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def is_unitary(self, tol=1e-12):
        eye = np.eye(self.dim)
        m = self.entries
        return bool(
            np.max(np.abs(m @ m.conj().T - eye)) <= tol
            and np.max(np.abs(m.conj().T @ m - eye)) <= tol
        )

    def interior(self, k=None):
        k = interior_size(self.dim) if k is None else k
        return self.entries[:k, :k]


def commutator(a, b):
    a = a.entries if isinstance(a, OperatorMatrix) else np.asarray(a)
    b = b.entries if isinstance(b, OperatorMatrix) else np.asarray(b)
    return a @ b - b @ a


def ladder_matrices(dim):
    """Truncated annihilation, creation and number matrices.

    [a, a^dagger] is the identity except for the last diagonal entry, which
    equals -(dim - 1).
    """
    dim = int(dim)
    if dim < 2:
        raise ContractError("dim must be at least 2")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    n = np.diag(np.arange(dim, dtype=float)).astype(complex)
    return OperatorMatrix(a), OperatorMatrix(a.conj().T), OperatorMatrix(n)
