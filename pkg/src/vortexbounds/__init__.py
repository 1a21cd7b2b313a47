"""Desk-scale vorticity-form Navier-Stokes solver with growth-bound auditing."""

__version__ = "0.1.0"

from .bounds import (
    ANCHORS,
    CONSTANTS,
    BoundInputs,
    BoundReport,
    ContinuationSchedule,
    bound_enstrophy_time_integral,
    bound_grad_3eps,
    bound_grad_l2,
    bound_l2eps_norm,
    bound_lp_sup_growth,
    bound_second_grad_integral,
    bound_weighted_grad_integral,
    continuation_schedule,
    n_threshold,
    triple_log_envelope,
    verify_trajectory,
)
from .logscalar import LogScalar
from .norms import (
    NormSample,
    NormSeries,
    enstrophy_balance_residual,
    grad_lp_norm,
    lp_norm,
    sample_norms,
    second_grad_l2,
    stretching_functional,
    sup_norm,
    time_integral,
    weighted_dissipation,
)
from .scenarios import ScenarioConfig, init_scenario, reference_config
from .solver import (
    BlowUpError,
    FlowState,
    SolverConfig,
    Trajectory,
    run_simulation,
    step,
    vorticity_rhs,
)
from .spectral import (
    GridSpec,
    ScalarField,
    SpectralVectorField,
    VectorField,
    biot_savart_velocity,
    curl,
    dealias,
    forward_transform,
    gradient,
    inverse_transform,
    make_grid,
    project_solenoidal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
