"""Spin states used for gradient magnetometry, stored as density matrices.

Every constructor returns a :class:`SpinState`; pure states are rank-one
density matrices.  The eigendecomposition needed by the QFI engine is computed
on first use and cached.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from math import comb

import numpy as np

from .spin_algebra import (
    SpinSystem,
    collective,
    single_spin_matrices,
    site_swap_unitary,
    total_spin_squared,
)
from .validation import check_density_matrix

EIGEN_CUTOFF = 1e-12


class UnsupportedStateError(ValueError):
    """The requested state family does not exist for this (N, j)."""


class SpinState:
    """Density matrix on the spin space of ``system``."""

    def __init__(self, rho, system: SpinSystem, label: str = ""):
        rho = check_density_matrix(rho)
        if rho.shape[0] != system.dimension:
            raise ValueError(f"density matrix has dimension {rho.shape[0]}, system needs {system.dimension}")
        rho = 0.5 * (rho + rho.conj().T)
        rho.setflags(write=False)
        self.rho = rho
        self.system = system
        self.label = label
        self._lock = threading.Lock()
        self._eig = None

    @classmethod
    def from_vector(cls, psi, system: SpinSystem, label: str = "") -> "SpinState":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ValueError("zero state vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), system, label)

    def __repr__(self):
        name = self.label or "SpinState"
        return f"<{name} N={self.system.n_particles} j={self.system.spin} dim={self.dim}>"

    @property
    def dim(self) -> int:
        return self.system.dimension

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues ``p_k`` (clamped at the cutoff) and eigenvectors as columns."""
        if self._eig is None:
            with self._lock:
                if self._eig is None:
                    p, v = np.linalg.eigh(self.rho)
                    p = np.where(p < EIGEN_CUTOFF, 0.0, p)
                    p.setflags(write=False)
                    v.setflags(write=False)
                    self._eig = (p, v)
        return self._eig

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigh()[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.eigh()[1]

    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.purity() - 1.0) <= tol

    def state_vector(self) -> np.ndarray:
        """Return the vector of a pure state (global phase arbitrary)."""
        if not self.is_pure():
            raise ValueError("state is mixed")
        p, v = self.eigh()
        return v[:, np.argmax(p)]

    def expectation(self, op) -> float:
        val = np.trace(self.rho @ op)
        return float(val.real)

    def variance(self, op) -> float:
        op = np.asarray(op)
        return self.expectation(op @ op) - self.expectation(op) ** 2

    def commutator_norm(self, op) -> float:
        """Max-entry norm of ``[rho, op]``."""
        return float(np.max(np.abs(self.rho @ op - op @ self.rho)))

    def is_permutation_invariant(self, tol: float = 1e-10) -> bool:
        N = self.system.n_particles
        for n, m in itertools.combinations(range(1, N + 1), 2):
            p = site_swap_unitary(self.system, n, m)
            if np.max(np.abs(p @ self.rho @ p.T - self.rho)) > tol:
                return False
        return True

    def mix(self, other: "SpinState", p: float) -> "SpinState":
        """Convex combination ``p * self + (1 - p) * other``."""
        if other.system != self.system:
            raise ValueError("states live on different systems")
        return SpinState(p * self.rho + (1 - p) * other.rho, self.system, "mixture")


@dataclass(frozen=True)
class SingletBasis:
    """Orthonormal basis of the ``J^2 = 0`` (hence ``J_z = 0``) subspace."""

    system: SpinSystem
    vectors: np.ndarray  # columns

    @property
    def count(self) -> int:
        return self.vectors.shape[1]


def _product(vectors) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.kron(out, v)
    return out


def _basis_vector(local_dim: int, index: int) -> np.ndarray:
    e = np.zeros(local_dim, dtype=complex)
    e[index] = 1.0
    return e


def _require_qubits(system: SpinSystem, name: str) -> None:
    if system.spin != 0.5:
        raise UnsupportedStateError(f"{name} states are defined here for j = 1/2 only (got j = {system.spin})")


def polarized_y(system: SpinSystem) -> SpinState:
    """All spins in the ``j_y = +j`` eigenstate."""
    _, jy, _ = single_spin_matrices(system.spin)
    w, v = np.linalg.eigh(jy)
    up_y = v[:, np.argmax(w)]
    return SpinState.from_vector(_product([up_y] * system.n_particles), system, "polarized_y")


def polarized_z(system: SpinSystem) -> SpinState:
    """``|j>^{(x)N}``, all spins maximally polarized along +z."""
    up = _basis_vector(system.local_dim, 0)
    return SpinState.from_vector(_product([up] * system.n_particles), system, "polarized_z")


def ghz(system: SpinSystem) -> SpinState:
    """``(|00...0> + |11...1>)/sqrt(2)`` for qubits."""
    _require_qubits(system, "GHZ")
    psi = np.zeros(system.dimension, dtype=complex)
    psi[0] = psi[-1] = 1.0
    return SpinState.from_vector(psi, system, "ghz")


def _dicke_z_vector(n: int) -> np.ndarray:
    psi = np.zeros(2 ** n, dtype=complex)
    for ups in itertools.combinations(range(n), n // 2):
        idx = sum(1 << (n - 1 - k) for k in ups)
        psi[idx] = 1.0
    return psi / np.sqrt(comb(n, n // 2))


def dicke(system: SpinSystem, axis: str = "z") -> SpinState:
    """Unpolarized symmetric Dicke state along ``axis`` ('z' or 'x').

    The x version is the z version rotated by the N-fold tensor power of the
    single-qubit unitary taking the j_z eigenbasis to the j_x eigenbasis.
    """
    _require_qubits(system, "Dicke")
    N = system.n_particles
    if N % 2:
        raise UnsupportedStateError(f"unpolarized Dicke states need even N, got {N}")
    psi = _dicke_z_vector(N)
    if axis == "x":
        jx, _, _ = single_spin_matrices(0.5)
        w, v = np.linalg.eigh(jx)
        u = v[:, np.argsort(-w)]  # column k: j_x eigenvector with m = +1/2, -1/2
        psi = _kron_power(u, N) @ psi
    elif axis != "z":
        raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")
    return SpinState.from_vector(psi, system, f"dicke_{axis}")


def _kron_power(u: np.ndarray, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, u)
    return out


def singlet_basis(system: SpinSystem, tol: float = 1e-8) -> SingletBasis:
    """All orthonormal vectors with ``J^2 = 0``; empty when no singlet exists."""
    w, v = np.linalg.eigh(total_spin_squared(system))
    null = v[:, w < tol]
    if null.shape[1]:
        null, _ = np.linalg.qr(null)
    return SingletBasis(system, null)


def singlet_mixture(basis: SingletBasis, weights) -> SpinState:
    """``sum_D p_D |0,0,D><0,0,D|`` over the basis vectors."""
    p = np.asarray(weights, dtype=float).reshape(-1)
    if p.shape[0] != basis.count:
        raise ValueError(f"expected {basis.count} weights, got {p.shape[0]}")
    if basis.count == 0:
        raise ValueError("singlet subspace is empty")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError("weights must be a probability vector")
    v = basis.vectors
    rho = (v * p) @ v.conj().T
    return SpinState(rho, basis.system, "singlet")


def best_separable(system: SpinSystem) -> SpinState:
    """Product of ``(|-j> + |+j>)/sqrt(2)``, maximizing every ``Var(j_z^(n))``."""
    d = system.local_dim
    single = (_basis_vector(d, 0) + _basis_vector(d, d - 1)) / np.sqrt(2)
    return SpinState.from_vector(_product([single] * system.n_particles), system, "best_separable")


def maximally_mixed(system: SpinSystem) -> SpinState:
    return SpinState(np.eye(system.dimension) / system.dimension, system, "maximally_mixed")


def two_well_product(left: SpinState, right: SpinState) -> SpinState:
    """``|psi>_L (x) |psi>_R``; sites ``1..N/2`` form the left well."""
    if left.system.spin != right.system.spin:
        raise ValueError("wells hold particles of different spin")
    if left.system.n_particles != right.system.n_particles:
        raise ValueError("wells must hold the same number of particles")
    if not (left.is_pure() and right.is_pure()):
        raise ValueError("two-well product states are built from pure well states")
    n = 2 * left.system.n_particles
    system = SpinSystem(n, left.system.spin, left.system.dim_cap)
    psi = np.kron(left.state_vector(), right.state_vector())
    label = f"{left.label}(x){right.label}" if left.label and right.label else "two_well_product"
    return SpinState.from_vector(psi, system, label)


def two_well_optimal(system: SpinSystem) -> SpinState:
    """``(|j..j>_L|-j..-j>_R + |-j..-j>_L|j..j>_R)/sqrt(2)``."""
    N = system.n_particles
    if N % 2:
        raise UnsupportedStateError(f"two-well states need even N, got {N}")
    d = system.local_dim
    up, down = _basis_vector(d, 0), _basis_vector(d, d - 1)
    half = N // 2
    psi = _product([up] * half + [down] * half) + _product([down] * half + [up] * half)
    return SpinState.from_vector(psi, system, "two_well_optimal")


def random_pure(system: SpinSystem, rng: np.random.Generator) -> SpinState:
    psi = rng.normal(size=system.dimension) + 1j * rng.normal(size=system.dimension)
    return SpinState.from_vector(psi, system, "random_pure")


def random_product(system: SpinSystem, rng: np.random.Generator) -> SpinState:
    d = system.local_dim
    factors = [rng.normal(size=d) + 1j * rng.normal(size=d) for _ in range(system.n_particles)]
    return SpinState.from_vector(_product(factors), system, "random_product")


def random_mixed(system: SpinSystem, rng: np.random.Generator, rank: int | None = None) -> SpinState:
    """Random density matrix ``G G^dagger / tr`` with Ginibre ``G`` of the given rank."""
    rank = rank or system.dimension
    g = rng.normal(size=(system.dimension, rank)) + 1j * rng.normal(size=(system.dimension, rank))
    rho = g @ g.conj().T
    return SpinState(rho / np.trace(rho).real, system, "random_mixed")


def is_jz_eigenstate(state: SpinState, tol: float = 1e-10) -> bool:
    """True if ``J_z rho = lambda rho`` for some real lambda."""
    jz = collective("z", state.system)
    lam = state.expectation(jz)
    return bool(np.max(np.abs(jz @ state.rho - lam * state.rho)) <= tol)


def state_zoo(system: SpinSystem) -> dict[str, SpinState]:
    """Every named state family that exists for ``system``, keyed by name."""
    zoo = {
        "polarized_y": polarized_y(system),
        "polarized_z": polarized_z(system),
        "best_separable": best_separable(system),
    }
    basis = singlet_basis(system)
    if basis.count:
        zoo["singlet"] = singlet_mixture(basis, np.full(basis.count, 1 / basis.count))
    if system.spin == 0.5:
        zoo["ghz"] = ghz(system)
        if system.n_particles % 2 == 0:
            zoo["dicke_z"] = dicke(system, "z")
            zoo["dicke_x"] = dicke(system, "x")
    if system.n_particles % 2 == 0:
        zoo["two_well_optimal"] = two_well_optimal(system)
        if system.spin == 0.5 and system.n_particles >= 4:
            zoo["ghz(x)ghz"] = two_well_product(*[ghz(system.with_particles(system.n_particles // 2))] * 2)
    return zoo
