"""Spatial part of the atomic state, represented through position moments.

Every bound in this package depends on the position distribution only
through ``E[x_n]`` and ``E[x_n x_m]``, so a model never stores samples.  The
pointlike models (``Chain``, ``DoubleWell``, ``ParametricPI``) describe an
incoherent mixture of position eigenstates.  ``Bec`` describes a coherent
product wavefunction shared by all particles, which changes how the QFI is
assembled (see :mod:`gradmetro.bounds`).

All lengths share one unit; no conversion happens here.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

_EDGE = 1e-15


def eta_range(sigma2: float, n_particles: int) -> tuple[float, float]:
    """Admissible pair covariance ``-sigma2/(N-1) <= eta <= sigma2``."""
    if n_particles < 2:
        raise ValueError("the pair covariance needs at least two particles")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return -sigma2 / (n_particles - 1), float(sigma2)


class SpatialModel:
    """Common moment machinery; subclasses define the per-site moments."""

    n_particles: int
    coherent = False
    permutation_invariant = False

    def first_moment(self, n: int) -> float:
        raise NotImplementedError

    def second_moment(self, n: int, m: int) -> float:
        raise NotImplementedError

    def translate(self, d: float) -> "SpatialModel":
        raise NotImplementedError

    def _check_site(self, n: int) -> None:
        if not 1 <= n <= self.n_particles:
            raise IndexError(f"site {n} out of range 1..{self.n_particles}")

    def mean_vector(self) -> np.ndarray:
        return np.array([self.first_moment(n) for n in range(1, self.n_particles + 1)])

    def second_moment_matrix(self) -> np.ndarray:
        N = self.n_particles
        return np.array([[self.second_moment(n, m) for m in range(1, N + 1)] for n in range(1, N + 1)])

    def covariance_matrix(self) -> np.ndarray:
        mu = self.mean_vector()
        return self.second_moment_matrix() - np.outer(mu, mu)

    def summary_moments(self) -> tuple[float, float, float]:
        """``(mu, sigma2, eta)`` from the defining site averages.

        ``eta`` is ``nan`` for a single particle.
        """
        N = self.n_particles
        mu = self.mean_vector().mean()
        s = self.second_moment_matrix()
        sigma2 = np.trace(s) / N - mu ** 2
        if N < 2:
            return float(mu), float(sigma2), float("nan")
        eta = (s.sum() - np.trace(s)) / (N * (N - 1)) - mu ** 2
        return float(mu), float(sigma2), float(eta)

    def center(self) -> "SpatialModel":
        """Translate so that the mean particle position is zero."""
        return self.translate(-self.summary_moments()[0])


class _Deterministic(SpatialModel):
    """Particles sitting at fixed points: ``E[x_n x_m] = x_n x_m``."""

    def positions(self) -> np.ndarray:
        raise NotImplementedError

    def first_moment(self, n: int) -> float:
        self._check_site(n)
        return float(self.positions()[n - 1])

    def second_moment(self, n: int, m: int) -> float:
        self._check_site(n)
        self._check_site(m)
        x = self.positions()
        return float(x[n - 1] * x[m - 1])


@dataclass(frozen=True)
class Chain(_Deterministic):
    """Equidistant chain, particle ``n`` at ``origin + n*a``."""

    a: float
    n_particles: int
    origin: float = 0.0

    def positions(self) -> np.ndarray:
        return self.origin + self.a * np.arange(1, self.n_particles + 1)

    def summary_moments(self):
        N = self.n_particles
        mu = self.origin + self.a * (N + 1) / 2
        sigma2 = self.a ** 2 * (N ** 2 - 1) / 12
        eta = -sigma2 / (N - 1) if N > 1 else float("nan")
        return float(mu), float(sigma2), float(eta)

    def translate(self, d: float) -> "Chain":
        return replace(self, origin=self.origin + d)


@dataclass(frozen=True)
class DoubleWell(_Deterministic):
    """Two point-like wells at ``center -/+ a`` holding ``N/2`` particles each.

    Sites ``1..N/2`` form the left well.
    """

    a: float
    n_particles: int
    center_position: float = 0.0

    def __post_init__(self):
        if self.n_particles % 2:
            raise ValueError(f"a double well needs even N, got {self.n_particles}")

    def positions(self) -> np.ndarray:
        half = self.n_particles // 2
        return self.center_position + self.a * np.repeat([-1.0, 1.0], half)

    def summary_moments(self):
        N = self.n_particles
        sigma2 = self.a ** 2
        return float(self.center_position), float(sigma2), float(-sigma2 / (N - 1))

    def translate(self, d: float) -> "DoubleWell":
        return replace(self, center_position=self.center_position + d)


@dataclass(frozen=True)
class ParametricPI(SpatialModel):
    """Permutationally invariant incoherent mixture given by ``(mu, sigma2, eta)``."""

    mu: float
    sigma2: float
    eta: float
    n_particles: int

    permutation_invariant = True

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        if self.n_particles < 2:
            raise ValueError("ParametricPI needs at least two particles")
        low, high = eta_range(self.sigma2, self.n_particles)
        if not low - _EDGE <= self.eta <= high + _EDGE:
            raise ValueError(f"eta={self.eta} outside the admissible range [{low}, {high}]")

    def first_moment(self, n: int) -> float:
        self._check_site(n)
        return float(self.mu)

    def second_moment(self, n: int, m: int) -> float:
        self._check_site(n)
        self._check_site(m)
        return float((self.sigma2 if n == m else self.eta) + self.mu ** 2)

    def summary_moments(self):
        return float(self.mu), float(self.sigma2), float(self.eta)

    def translate(self, d: float) -> "ParametricPI":
        return replace(self, mu=self.mu + d)


@dataclass(frozen=True)
class Bec(SpatialModel):
    """All particles in one pure single-particle wavefunction; positions uncorrelated."""

    mu: float
    sigma2: float
    n_particles: int

    coherent = True
    permutation_invariant = True

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")

    def first_moment(self, n: int) -> float:
        self._check_site(n)
        return float(self.mu)

    def second_moment(self, n: int, m: int) -> float:
        self._check_site(n)
        self._check_site(m)
        return float((self.sigma2 if n == m else 0.0) + self.mu ** 2)

    def summary_moments(self):
        eta = 0.0 if self.n_particles > 1 else float("nan")
        return float(self.mu), float(self.sigma2), eta

    def translate(self, d: float) -> "Bec":
        return replace(self, mu=self.mu + d)
