"""Gradient descent as singular-value shrinkage for shallow networks."""

from .activations import ActivationSpec, Monotonicity, classify, evaluate
from .design import DesignMatrix, Grid1D, build, predict
from .spectral import (
    SpectralDecomposition,
    decompose,
    dst_correlation,
    dst_mode,
    normalized_spectrum,
    principal_component_function,
)
from .shrinkage import (
    ShrinkagePolicy,
    StabilityError,
    apply,
    mask_gd,
    mask_gd_neumann,
    mask_pca,
    solve,
)
from .trainer import DivergenceError, TrainerConfig, TrainResult, step, train
from .calculus import (
    E_INV,
    active_window_rho,
    bandwidth_to_K,
    effective_component_count,
    grey_zone_width_db,
    iterations_for_K,
    kappa_from,
)

__version__ = "0.1.0"
