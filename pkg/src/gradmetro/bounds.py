"""Precision bounds ``(Delta b_1)^{-2}`` for gradient estimation.

Two routes are provided and meant to be compared:

* :func:`general_bound` assembles the 2x2 QFI matrix of the homogeneous and
  gradient generators from per-site QFIs of the spin state and the position
  moments of a spatial model, then takes ``F11 - F01^2 / F00`` (or ``F11`` for
  states insensitive to homogeneous fields).
* the closed-form functions below evaluate the formulas for the named state
  families directly from ``(sigma2, eta, N, j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .qfi import QfiMatrix, compatibility_check, qfi_site_matrix, weak_compatibility
from .spatial import SpatialModel, _Deterministic
from .spin_algebra import collective, site_jz_diagonals
from .states import SpinState

INSENSITIVE_TOL = 1e-10
NEGATIVE_TOL = 1e-9


class InconsistentBoundError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrecisionReport:
    bound: float
    sensitive: bool
    qfi_matrix: QfiMatrix
    saturable_norm: float
    method_tag: str = "general"
    weak_saturable_norm: float = 0.0


@dataclass(frozen=True)
class FieldParams:
    """``gamma`` in rad s^-1 T^-1 and evolution ``time`` in s; ``b_i = gamma B_i t``."""

    gamma: float
    time: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.time >= 0:
            raise ValueError("time must be non-negative")


def _gradient_generator(model: SpatialModel, diagonals: np.ndarray) -> np.ndarray:
    """Spin-space stand-in for ``H_1`` used by the SLD compatibility check.

    Fixed-position models give ``sum_n x_n j_z^(n)``.  Permutationally invariant
    models use the mean-position form ``mu J_z``.
    """
    if isinstance(model, _Deterministic):
        return np.diag(model.positions() @ diagonals).astype(complex)
    mu = model.summary_moments()[0]
    return np.diag(mu * diagonals.sum(axis=0)).astype(complex)


def qfi_matrix_for(state: SpinState, model: SpatialModel, site_qfi: np.ndarray | None = None) -> QfiMatrix:
    """QFI matrix of ``H0 = J_z`` and ``H1 = sum_n x_n j_z^(n)`` for spin state x spatial model.

    For incoherent (pointlike) models ``F11 = sum_nm E[x_n x_m] F_nm``.  For a
    coherent spatial wavefunction the position fluctuations contribute
    ``4 sum_nm Cov(x_n, x_m) <j_z^(n) j_z^(m)>`` instead of being weighted by
    the spin QFI.
    """
    if state.system.n_particles != model.n_particles:
        raise ValueError(
            f"state has {state.system.n_particles} particles, spatial model has {model.n_particles}"
        )
    diagonals = site_jz_diagonals(state.system)
    if site_qfi is None:
        site_qfi = qfi_site_matrix(state, [np.diag(d) for d in diagonals])
    mean = model.mean_vector()
    f00 = site_qfi.sum()
    f01 = mean @ site_qfi.sum(axis=1)
    if model.coherent:
        pops = np.real(np.diag(state.rho))
        second = (diagonals * pops) @ diagonals.T  # <j_z^(n) j_z^(m)>
        f11 = mean @ site_qfi @ mean + 4 * np.sum(model.covariance_matrix() * second)
    else:
        f11 = np.sum(model.second_moment_matrix() * site_qfi)
    return QfiMatrix(float(f00), float(f01), float(f11))


def general_bound(
    state: SpinState,
    model: SpatialModel,
    centered: bool = True,
    fault: bool = False,
) -> PrecisionReport:
    """Best gradient precision for ``state`` with spatial ``model``.

    The model is moved to zero mean first (the bound is translation invariant)
    unless ``centered=False``.  ``fault=True`` flips the sign of the
    ``F01^2/F00`` term and exists only to prove the validation suite catches it.
    """
    evaluated = model.center() if centered else model
    diagonals = site_jz_diagonals(state.system)
    site_qfi = qfi_site_matrix(state, [np.diag(d) for d in diagonals])
    fm = qfi_matrix_for(state, evaluated, site_qfi)
    sensitive = fm.f00 >= INSENSITIVE_TOL
    if sensitive:
        if not fm.f00 > 0:
            raise InconsistentBoundError("state flagged sensitive but F00 vanishes")
        correction = fm.f01 ** 2 / fm.f00
        bound = fm.f11 + correction if fault else fm.f11 - correction
    else:
        bound = fm.f11
    if bound < -NEGATIVE_TOL * max(1.0, abs(fm.f11)):
        raise InconsistentBoundError(f"negative precision bound {bound}")
    bound = max(bound, 0.0)

    h0 = collective("z", state.system)
    h1 = _gradient_generator(evaluated, diagonals)
    return PrecisionReport(
        bound=float(bound),
        sensitive=bool(sensitive),
        qfi_matrix=fm,
        saturable_norm=compatibility_check(state, h0, h1),
        method_tag="general",
        weak_saturable_norm=weak_compatibility(state, h0, h1),
    )


# closed forms ---------------------------------------------------------------

ModelLike = Union[SpatialModel, tuple]


def _moments(model: ModelLike) -> tuple[float, float, int]:
    """``(sigma2, eta, N)`` from a spatial model or a plain tuple."""
    if isinstance(model, SpatialModel):
        _, sigma2, eta = model.summary_moments()
        return sigma2, eta, model.n_particles
    sigma2, eta, n = model
    return float(sigma2), float(eta), n


def singlet_bound(model: ModelLike, j: float) -> float:
    sigma2, eta, n = _moments(model)
    return (sigma2 - eta) * n * 4 * j * (j + 1) / 3


def polarized_bound(model: ModelLike, j: float) -> float:
    sigma2, _, n = _moments(model)
    return 2 * sigma2 * n * j


def separable_bound(model: ModelLike, j: float) -> float:
    sigma2, _, n = _moments(model)
    return 4 * sigma2 * n * j ** 2


def dicke_bound(model: ModelLike, axis: str = "z") -> float:
    sigma2, eta, n = _moments(model)
    if axis == "z":
        return (sigma2 - eta) * n
    if axis == "x":
        return (sigma2 - eta) * n + eta * n * (n + 2) / 2
    raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")


def ghz_bound(model: ModelLike) -> float:
    sigma2, eta, n = _moments(model)
    return (sigma2 - eta) * n + eta * n ** 2


def bec_bound(model: ModelLike, j: float) -> float:
    """``4 sigma2 N j^2``; positions in a condensate are uncorrelated, so no Heisenberg scaling."""
    sigma2, _, n = _moments(model)
    return 4 * sigma2 * n * j ** 2


def chain_polarized_bound(a: float, n: int, j: float) -> float:
    return 2 * a ** 2 * (n ** 2 - 1) / 12 * n * j


def double_well_optimal_bound(a: float, n: int, j: float) -> float:
    return 4 * a ** 2 * n ** 2 * j ** 2


TABLE1_STATES = ("polarized", "separable", "ghz", "dicke_x")


def table1_bound(state_name: str, a: float, n: int, j: float = 0.5) -> float:
    """``2 a^2 F[psi_L, J_z^L]`` for a product of two identical wells of ``N/2`` particles."""
    if n % 2:
        raise ValueError(f"two wells need even N, got {n}")
    if state_name == "polarized":
        return 2 * a ** 2 * n * j
    if state_name == "separable":
        return 4 * a ** 2 * n * j ** 2
    if state_name == "ghz":
        return a ** 2 * n ** 2 / 2
    if state_name == "dicke_x":
        return a ** 2 * n * (n + 4) / 4
    raise ValueError(f"unknown two-well state {state_name!r}; choose from {TABLE1_STATES}")


def to_field_sensitivity(report: Union[PrecisionReport, float], params: FieldParams) -> float:
    """Field-gradient uncertainty ``Delta B_1 = bound^{-1/2} / (gamma t)``."""
    bound = report.bound if isinstance(report, PrecisionReport) else float(report)
    if params.time <= 0 or bound <= 0:
        raise ValueError("sensitivity is undefined for zero evolution time or a zero bound")
    return bound ** -0.5 / (params.gamma * params.time)


def relative_error(closed_form: float, oracle: float) -> float:
    """``|c - o| / |c|``, falling back to ``|c - o|`` when the closed form is zero."""
    diff = abs(closed_form - oracle)
    return diff / abs(closed_form) if abs(closed_form) > 1e-12 else diff
