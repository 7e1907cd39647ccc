"""Spin-j matrices, tensor embedding and collective angular momentum.

Operators are dense complex ndarrays.  Sites are numbered ``1..N`` and site 1
is the leftmost tensor factor, so the product basis index of
``|m_1, m_2, ..., m_N>`` is the usual row-major (Kronecker) index with
``m = j, j-1, ..., -j`` along each factor.
"""
from __future__ import annotations

import math

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .validation import DimensionCapError, check_positions, check_spin, check_square

DEFAULT_DIM_CAP = 16384

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class SpinSystem:
    """N spin-j particles; the Hilbert space has dimension (2j+1)^N."""

    n_particles: int
    spin: float
    dim_cap: int = field(default=DEFAULT_DIM_CAP, compare=False)

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ValueError(f"n_particles must be a positive integer, got {self.n_particles!r}")
        j = check_spin(self.spin)
        if j <= 0:
            raise ValueError("spin must be positive")
        object.__setattr__(self, "n_particles", int(self.n_particles))
        object.__setattr__(self, "spin", j)
        # compare in log space first so astronomically large N never builds a huge int
        too_big = self.n_particles * math.log2(self.local_dim) > math.log2(self.dim_cap) + 1
        if too_big or self.dimension > self.dim_cap:
            raise DimensionCapError(
                f"dimension {self.local_dim}^{self.n_particles} exceeds the cap {self.dim_cap}"
            )

    @property
    def local_dim(self) -> int:
        return int(round(2 * self.spin)) + 1

    @property
    def dimension(self) -> int:
        return self.local_dim ** self.n_particles

    def with_particles(self, n: int) -> "SpinSystem":
        return SpinSystem(n, self.spin, self.dim_cap)


@lru_cache(maxsize=None)
def _spin_matrices(two_j: int):
    j = two_j / 2
    m = j - np.arange(two_j + 1)
    # <m+1| j_+ |m> = sqrt(j(j+1) - m(m+1)); basis ordered m = j, ..., -j
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    jz = np.diag(m).astype(complex)
    for a in (jx, jy, jz):
        a.setflags(write=False)
    return jx, jy, jz


def single_spin_matrices(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(j_x, j_y, j_z)`` for a single spin-j particle.

    >>> jx, jy, jz = single_spin_matrices(0.5)
    >>> np.diag(jz).real
    array([ 0.5, -0.5])
    """
    j = check_spin(j)
    return tuple(a.copy() for a in _spin_matrices(int(round(2 * j))))


def _axis_index(axis: str) -> int:
    try:
        return AXES.index(axis)
    except ValueError:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}") from None


def embed(op, site: int, system: SpinSystem) -> np.ndarray:
    """Place a single-particle operator on ``site`` (1-based) of ``system``."""
    op = check_square(op, "single-particle operator")
    d = system.local_dim
    if op.shape[0] != d:
        raise ValueError(f"operator acts on dimension {op.shape[0]}, system sites have dimension {d}")
    if not 1 <= site <= system.n_particles:
        raise IndexError(f"site {site} out of range 1..{system.n_particles}")
    left = np.eye(d ** (site - 1))
    right = np.eye(d ** (system.n_particles - site))
    return np.kron(np.kron(left, op), right)


def site_jz_diagonals(system: SpinSystem) -> np.ndarray:
    """Real diagonals of ``j_z^(1), ..., j_z^(N)``, shape (N, dim); row ``n-1`` is site ``n``."""
    d, n = system.local_dim, system.n_particles
    m = system.spin - np.arange(d)
    out = np.empty((n, d ** n))
    for k in range(n):
        out[k] = np.tile(np.repeat(m, d ** (n - k - 1)), d ** k)
    return out


def collective(axis: str, system: SpinSystem) -> np.ndarray:
    """Collective operator ``J_axis = sum_n j_axis^(n)``."""
    single = single_spin_matrices(system.spin)[_axis_index(axis)]
    out = np.zeros((system.dimension, system.dimension), dtype=complex)
    for n in range(1, system.n_particles + 1):
        out += embed(single, n, system)
    return out


def total_spin_squared(system: SpinSystem) -> np.ndarray:
    """``J^2 = J_x^2 + J_y^2 + J_z^2``."""
    out = np.zeros((system.dimension, system.dimension), dtype=complex)
    for axis in AXES:
        j_l = collective(axis, system)
        out += j_l @ j_l
    return out


def gradient_generator_spin_part(positions, system: SpinSystem) -> np.ndarray:
    """``H_1 = sum_n x_n j_z^(n)`` for particles fixed at ``positions``.

    The result is diagonal in the product j_z basis.
    """
    x = check_positions(positions, system.n_particles)
    return np.diag(x @ site_jz_diagonals(system)).astype(complex)


def site_swap_unitary(system: SpinSystem, n: int, m: int) -> np.ndarray:
    """Permutation matrix exchanging sites ``n`` and ``m`` (1-based)."""
    d, N = system.local_dim, system.n_particles
    order = list(range(N))
    order[n - 1], order[m - 1] = order[m - 1], order[n - 1]
    idx = np.arange(system.dimension).reshape((d,) * N).transpose(order).reshape(-1)
    return np.eye(system.dimension)[idx]
