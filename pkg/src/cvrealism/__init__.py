"""Irreality of observables on discretized phase space and in damped quantum motion."""
from . import ck, grid, numerics, pointer, realism, states
from .ck import CKParams, classical_trajectory, irreality_series, tdse_propagate, widths
from .errors import ConvergenceError, DimensionError, DomainError, LeakageError, ValidityError
from .grid import GridSpec, make_grid
from .pointer import PointerParams, entanglement, purity_oracle, reduced_purity
from .realism import (
    BipartiteState,
    ObservableBasis,
    dephase,
    info_lower_bound,
    irreality,
    momentum_basis,
    position_basis,
    uncertainty_slack,
)
from .states import DensityMatrix, GaussianSpec, PureState, eta, gaussian_state, uniform_state

__all__ = [
    "ck", "grid", "numerics", "pointer", "realism", "states",
    "CKParams", "classical_trajectory", "irreality_series", "tdse_propagate", "widths",
    "ConvergenceError", "DimensionError", "DomainError", "LeakageError", "ValidityError",
    "GridSpec", "make_grid",
    "PointerParams", "entanglement", "purity_oracle", "reduced_purity",
    "BipartiteState", "ObservableBasis", "dephase", "info_lower_bound", "irreality",
    "momentum_basis", "position_basis", "uncertainty_slack",
    "DensityMatrix", "GaussianSpec", "PureState", "eta", "gaussian_state", "uniform_state",
]

__version__ = "0.1.0"
