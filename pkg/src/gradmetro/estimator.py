"""scikit-learn style wrapper around :func:`gradmetro.bounds.general_bound`.

The "samples" are spin states: a density matrix, a stack of them, or
:class:`~gradmetro.states.SpinState` objects.  ``fit`` only fixes the spin
system and checks shapes; there is nothing to learn.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bounds import general_bound
from .spatial import SpatialModel
from .spin_algebra import DEFAULT_DIM_CAP, SpinSystem
from .states import SpinState

FEATURE_NAMES = np.array(["f00", "f01", "f11", "bound"], dtype=object)


class GradientBoundEstimator(TransformerMixin, BaseEstimator):
    """Gradient precision bound of each input state under a fixed spatial model.

    Parameters
    ----------
    spatial_model : SpatialModel
        Position statistics shared by every state.
    spin : float
        Single-particle spin ``j``.
    centered : bool
        Evaluate with the zero-mean copy of the model.
    dim_cap : int
        Refuse Hilbert spaces larger than this.
    """

    def __init__(self, spatial_model: SpatialModel | None = None, spin: float = 0.5,
                 centered: bool = True, dim_cap: int = DEFAULT_DIM_CAP):
        self.spatial_model = spatial_model
        self.spin = spin
        self.centered = centered
        self.dim_cap = dim_cap

    def _as_states(self, X) -> list[SpinState]:
        if isinstance(X, SpinState):
            X = [X]
        if isinstance(X, (list, tuple)) and X and all(isinstance(x, SpinState) for x in X):
            for x in X:
                if x.system.dimension != self.system_.dimension or x.system.spin != self.system_.spin:
                    raise ValueError(f"state {x.label or '?'} does not live on {self.system_}")
            return list(X)
        arr = np.asarray(X, dtype=complex)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected density matrices of shape (k, d, d), got {arr.shape}")
        if arr.shape[1] != self.n_features_in_:
            raise ValueError(f"expected dimension {self.n_features_in_}, got {arr.shape[1]}")
        return [SpinState(rho, self.system_) for rho in arr]

    def fit(self, X, y=None):
        if not isinstance(self.spatial_model, SpatialModel):
            raise TypeError("spatial_model must be a SpatialModel instance")
        self.system_ = SpinSystem(self.spatial_model.n_particles, self.spin, self.dim_cap)
        self.n_features_in_ = self.system_.dimension
        self._as_states(X)
        return self

    def _reports(self, X):
        check_is_fitted(self, "system_")
        return [general_bound(s, self.spatial_model, centered=self.centered) for s in self._as_states(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([r.bound for r in self._reports(X)])

    def transform(self, X) -> np.ndarray:
        """Rows ``[F00, F01, F11, bound]``, one per state."""
        reports = self._reports(X)
        return np.array([[r.qfi_matrix.f00, r.qfi_matrix.f01, r.qfi_matrix.f11, r.bound] for r in reports])

    def saturable_norms(self, X) -> np.ndarray:
        return np.array([r.saturable_norm for r in self._reports(X)])

    def get_feature_names_out(self, input_features=None):
        return FEATURE_NAMES.copy()
