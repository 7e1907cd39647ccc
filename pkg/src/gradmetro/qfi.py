"""Quantum Fisher information for unitary families generated by Hermitian operators.

For ``rho = sum_k p_k |k><k|`` the two-operator QFI is

    F[rho, A, B] = 2 sum_{k,k'} (p_k - p_k')^2 / (p_k + p_k') A_{kk'} B_{k'k},

with pairs whose populations sum below ``EIGEN_CUTOFF`` left out.  Terms with
``p_k = p_k'`` vanish on their own, so degenerate eigenspaces need no care.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import EIGEN_CUTOFF, SpinState
from .validation import check_same_dim

IMAG_TOL = 1e-10


class QfiInternalError(RuntimeError):
    """A QFI came out complex: some generator upstream was not Hermitian."""


@dataclass(frozen=True)
class QfiMatrix:
    """2x2 QFI matrix for the homogeneous (0) and gradient (1) parameters."""

    f00: float
    f01: float
    f11: float

    def __post_init__(self):
        scale = max(1.0, abs(self.f00 * self.f11))
        if self.f00 * self.f11 - self.f01 ** 2 < -1e-9 * scale:
            raise ValueError(f"QFI matrix is not positive semidefinite: {self}")

    @property
    def f10(self) -> float:
        return self.f01

    def as_array(self) -> np.ndarray:
        return np.array([[self.f00, self.f01], [self.f01, self.f11]])


@dataclass(frozen=True)
class SldOperator:
    matrix: np.ndarray
    generator_tag: str = ""


def _weights(p: np.ndarray):
    """Pair weights and the mask of retained pairs."""
    s = p[:, None] + p[None, :]
    keep = s >= EIGEN_CUTOFF
    safe = np.where(keep, s, 1.0)
    return s, safe, keep


def _in_eigenbasis(state: SpinState, *ops):
    p, v = state.eigh()
    out = []
    for op in ops:
        op = np.asarray(op)
        check_same_dim(op, state.dim)
        out.append(v.conj().T @ op @ v)
    return p, out


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise QfiInternalError(f"{what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def qfi_ab(state: SpinState, a, b) -> float:
    """Two-operator QFI ``F[rho, A, B]``; symmetric and bilinear in ``A, B``."""
    p, (ak, bk) = _in_eigenbasis(state, a, b)
    _, safe, keep = _weights(p)
    w = np.where(keep, (p[:, None] - p[None, :]) ** 2 / safe, 0.0)
    return _real(2 * np.sum(w * ak * bk.T), "QFI")


def qfi(state: SpinState, a) -> float:
    """``F[rho, A]``, the QFI of the family ``exp(-i theta A) rho exp(i theta A)``."""
    return qfi_ab(state, a, a)


def qfi_alt(state: SpinState, a, b) -> float:
    """Same quantity as :func:`qfi_ab` written as ``4<AB> - 8 sum p p'/(p+p') A B``.

    Kept as an independent evaluation path for cross-checks.
    """
    p, (ak, bk) = _in_eigenbasis(state, a, b)
    _, safe, keep = _weights(p)
    w = np.where(keep, p[:, None] * p[None, :] / safe, 0.0)
    # only the symmetrized correlation survives: the weighted sum is already real
    corr = np.sum(p * np.einsum("ij,ji->i", ak, bk)).real
    return _real(4 * corr - 8 * np.sum(w * ak * bk.T), "QFI (correlation form)")


def qfi_site_matrix(state: SpinState, ops) -> np.ndarray:
    """Matrix ``F[n, m] = F[rho, ops[n], ops[m]]`` for a list of operators."""
    p, ks = _in_eigenbasis(state, *ops)
    _, safe, keep = _weights(p)
    w = np.where(keep, (p[:, None] - p[None, :]) ** 2 / safe, 0.0)
    k = len(ks)
    out = np.empty((k, k))
    for n in range(k):
        wn = w * ks[n]
        for m in range(n, k):
            out[n, m] = out[m, n] = _real(2 * np.sum(wn * ks[m].T), "QFI")
    return out


def qfi_matrix(state: SpinState, h0, h1) -> QfiMatrix:
    return QfiMatrix(qfi(state, h0), qfi_ab(state, h0, h1), qfi(state, h1))


def sld(state: SpinState, a, tag: str = "") -> SldOperator:
    """Symmetric logarithmic derivative ``L`` with ``(L rho + rho L)/2 = i[rho, A]``.

    Blocks with ``p_k + p_k'`` below the cutoff (the kernel of rho) are set to zero.
    """
    p, (ak,) = _in_eigenbasis(state, a)
    _, safe, keep = _weights(p)
    r = np.where(keep, (p[:, None] - p[None, :]) / safe, 0.0)
    v = state.eigenvectors
    lk = 2j * r * ak
    mat = v @ lk @ v.conj().T
    return SldOperator(0.5 * (mat + mat.conj().T), tag)


def compatibility_check(state: SpinState, h0, h1) -> float:
    """Max-entry norm of ``[L(rho, H0), L(rho, H1)]``; zero certifies commuting SLDs."""
    l0 = sld(state, h0, "H0").matrix
    l1 = sld(state, h1, "H1").matrix
    return float(np.max(np.abs(l0 @ l1 - l1 @ l0)))


def weak_compatibility(state: SpinState, h0, h1) -> float:
    """``|tr(rho [L0, L1])|``, the expectation-value form of SLD compatibility."""
    l0 = sld(state, h0, "H0").matrix
    l1 = sld(state, h1, "H1").matrix
    return float(abs(np.trace(state.rho @ (l0 @ l1 - l1 @ l0))))
