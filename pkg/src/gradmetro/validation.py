"""Input validation helpers shared by the core modules and the estimator."""
from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12


class DimensionCapError(ValueError):
    """Raised when a Hilbert space would exceed the configured dimension cap."""


def check_spin(j) -> float:
    """Return ``j`` as a float after checking that ``2j`` is a non-negative integer."""
    two_j = 2 * float(j)
    if two_j < 0 or abs(two_j - round(two_j)) > 1e-12:
        raise ValueError(f"invalid spin quantum number j={j!r}; 2j must be a non-negative integer")
    return round(two_j) / 2


def check_square(matrix, name: str = "matrix") -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square 2-d array, got shape {m.shape}")
    return m


def check_hermitian(matrix, tol: float = HERMITIAN_TOL, name: str = "operator") -> np.ndarray:
    """Validate a Hermitian matrix and return it as a complex ndarray.

    The check is entrywise, ``max |M - M^dagger| <= tol``.
    """
    m = check_square(matrix, name)
    residue = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if residue > tol:
        raise ValueError(f"{name} is not Hermitian (max |M - M^H| = {residue:.3e})")
    return m


def check_density_matrix(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, no eigenvalue below ``-tol``."""
    m = check_hermitian(rho, tol, name="density matrix")
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol * max(1, m.shape[0]):
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lowest = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if lowest < -1e-10:
        raise ValueError(f"density matrix has negative eigenvalue {lowest:.3e}")
    return m


def check_same_dim(op: np.ndarray, dim: int, name: str = "operator") -> None:
    if op.shape != (dim, dim):
        raise ValueError(f"{name} has shape {op.shape}, expected ({dim}, {dim})")


def check_positions(positions, n_particles: int) -> np.ndarray:
    x = np.asarray(positions, dtype=float).reshape(-1)
    if x.shape[0] != n_particles:
        raise ValueError(f"expected {n_particles} positions, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("positions must be finite")
    return x
