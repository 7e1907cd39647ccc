"""Precision bounds for magnetic-field gradient estimation with spin ensembles."""
from .bounds import (
    FieldParams,
    InconsistentBoundError,
    PrecisionReport,
    bec_bound,
    chain_polarized_bound,
    dicke_bound,
    double_well_optimal_bound,
    general_bound,
    ghz_bound,
    polarized_bound,
    qfi_matrix_for,
    relative_error,
    separable_bound,
    singlet_bound,
    table1_bound,
    to_field_sensitivity,
)
from .estimation import (
    EvolutionParams,
    IndeterminateError,
    error_propagation_jx2,
    evolve,
    richardson,
    shorttime_extrapolation,
    singlet_shorttime_limit,
)
from .estimator import GradientBoundEstimator
from .qfi import QfiInternalError, QfiMatrix, SldOperator, compatibility_check, qfi_ab, qfi_alt, qfi_matrix, sld
from .spatial import Bec, Chain, DoubleWell, ParametricPI, SpatialModel, eta_range
from .spin_algebra import SpinSystem, collective, embed, single_spin_matrices, total_spin_squared
from .states import SpinState, UnsupportedStateError, state_zoo
from .validation import DimensionCapError

__version__ = "0.1.0"
