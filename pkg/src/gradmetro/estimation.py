"""Unitary phase evolution and J_x^2 error propagation for gradient estimation.

Both generators, ``H0 = J_z`` and ``H1 = sum_n x_n j_z^(n)``, are diagonal in
the product j_z basis, so ``U = exp(-i(b0 H0 + b1 H1))`` is applied as an
elementwise phase and no matrix exponential is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qfi import qfi
from .spin_algebra import collective, site_jz_diagonals, total_spin_squared
from .states import SpinState
from .validation import check_positions

VARIANCE_FLOOR = 1e-14
DEFAULT_B1_GRID = (1e-2, 1e-3, 1e-4)


class IndeterminateError(ArithmeticError):
    """Error propagation hit 0/0: the J_x^2 signal and its variance both vanish."""


@dataclass(frozen=True)
class EvolutionParams:
    b0: float
    b1: float
    positions: Sequence[float]


def _phases(state: SpinState, b0: float, b1: float, positions) -> np.ndarray:
    diagonals = site_jz_diagonals(state.system)
    x = check_positions(positions, state.system.n_particles)
    return np.exp(-1j * (b0 * diagonals.sum(axis=0) + b1 * (x @ diagonals)))


def evolve(state: SpinState, params: EvolutionParams) -> SpinState:
    """``U rho U^dagger`` with ``U = exp(-i(b0 J_z + b1 sum_n x_n j_z^(n)))``."""
    u = _phases(state, params.b0, params.b1, params.positions)
    rho = state.rho * np.outer(u, u.conj())
    return SpinState(rho, state.system, state.label)


def _weighted_vectors(state: SpinState) -> np.ndarray:
    p, v = state.eigh()
    keep = p > 0
    return v[:, keep] * np.sqrt(p[keep])


def _jx_moments(state: SpinState, positions, b1: float) -> tuple[float, float]:
    """``<J_x^2>`` and ``<J_x^4>`` after evolving by ``b1`` under ``H1``.

    Written as ``sum_k p_k ||J_x^m U v_k||^2`` so small values keep full
    relative precision near ``b1 = 0``.
    """
    jx = collective("x", state.system)
    w = _phases(state, 0.0, b1, positions)[:, None] * _weighted_vectors(state)
    once = jx @ w
    twice = jx @ once
    return float(np.sum(np.abs(once) ** 2)), float(np.sum(np.abs(twice) ** 2))


def error_propagation_jx2(state: SpinState, positions, b1: float, step: float | None = None) -> float:
    """``|d<J_x^2>/db1|^2 / Var(J_x^2)`` at ``b1``, derivative by central differences."""
    h = step if step is not None else max(1e-6, 1e-4 * abs(b1))
    m2, m4 = _jx_moments(state, positions, b1)
    var = m4 - m2 ** 2
    if var <= VARIANCE_FLOOR:
        raise IndeterminateError(f"Var(J_x^2) = {var:.3e} at b1 = {b1}")
    plus, _ = _jx_moments(state, positions, b1 + h)
    minus, _ = _jx_moments(state, positions, b1 - h)
    slope = (plus - minus) / (2 * h)
    return slope ** 2 / var


def _require_singlet(state: SpinState) -> None:
    jz = collective("z", state.system)
    if qfi(state, jz) >= 1e-10 or state.expectation(total_spin_squared(state.system)) >= 1e-8:
        raise ValueError("state is not supported on the singlet subspace")


def singlet_shorttime_limit(state: SpinState, positions) -> float:
    """``4 <H1 J_x^2 H1>^2 / <H1 J_x^4 H1>`` for a singlet; equals ``4 <H1^2>``."""
    _require_singlet(state)
    x = check_positions(positions, state.system.n_particles)
    h1 = x @ site_jz_diagonals(state.system)
    jx = collective("x", state.system)
    hw = h1[:, None] * _weighted_vectors(state)
    if np.sum(np.abs(hw) ** 2) < VARIANCE_FLOOR:
        return 0.0
    once = jx @ hw
    num = np.sum(np.abs(once) ** 2)
    den = np.sum(np.abs(jx @ once) ** 2)
    return float(4 * num ** 2 / den)


def richardson(steps: Sequence[float], values: Sequence[float], power: int = 2) -> float:
    """Extrapolate ``values(step)`` to ``step = 0`` assuming an expansion in ``step**power``.

    Neville's tableau on the variable ``step**power``, so uneven grids are fine.
    """
    t = [float(v) for v in values]
    s = [float(h) ** power for h in steps]
    n = len(t)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            t[i] = t[i] + (t[i] - t[i - 1]) * s[i] / (s[i - k] - s[i])
    return t[-1]


def shorttime_extrapolation(state: SpinState, positions, b1_grid: Sequence[float] = DEFAULT_B1_GRID) -> float:
    """Error-propagation precision extrapolated to ``b1 -> 0`` (equivalently ``t -> 0``)."""
    grid = [float(b) for b in b1_grid]
    if len(grid) < 3:
        raise ValueError("the extrapolation grid needs at least three points")
    if any(b <= 0 for b in grid) or any(b2 >= b1 for b1, b2 in zip(grid, grid[1:])):
        raise ValueError("the grid must be positive and strictly decreasing")
    steps, values = [], []
    for b in grid:
        try:
            values.append(error_propagation_jx2(state, positions, b))
        except IndeterminateError:
            continue
        steps.append(b)
    if not values:
        raise IndeterminateError("error propagation is indeterminate at every grid point")
    return richardson(steps, values)
