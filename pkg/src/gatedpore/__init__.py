"""Gated-pore selective transport: lattice Monte Carlo, exact chain
propagation, scaling-regime classification, and 1D gated-diffusion PDE
solvers, built around the flux-to-density estimator whose thermodynamic
limit is 2*mu*D0/sqrt(pi*D1).
"""
from .engine import (
    NCHUNKS,
    RunResult,
    occupancy_profile,
    read_cycles_csv,
    run,
    run_until,
    write_cycles_csv,
)
from .exact import (
    CycleExpectations,
    alpha_estimate,
    closed_stationary,
    expected_cycle_observables,
    transition_operator,
)
from .params import (
    BridgeResult,
    ContinuumParams,
    DiscreteParams,
    bridge,
    k_theory,
)
from .pde import (
    AlternatingResult,
    GridSpec,
    RobinResult,
    StudyResult,
    convergence_study,
    robin_ratio_richardson,
    solve_alternating,
    solve_robin,
)
from .regimes import (
    PoreGeometry,
    PowerLaw,
    RegimeReport,
    ScalingFamily,
    classify,
    effective_ratio,
    rho,
    rho_1d,
)
from .stats import (
    EstimatorConfig,
    KEstimate,
    SweepFit,
    SweepRow,
    estimate_K,
    sweep_convergence,
    write_gnuplot_dat,
    write_sweep_csv,
)

__all__ = [
    "AlternatingResult",
    "BridgeResult",
    "ContinuumParams",
    "CycleExpectations",
    "DiscreteParams",
    "EstimatorConfig",
    "GridSpec",
    "KEstimate",
    "NCHUNKS",
    "PoreGeometry",
    "PowerLaw",
    "RegimeReport",
    "RobinResult",
    "RunResult",
    "ScalingFamily",
    "StudyResult",
    "SweepFit",
    "SweepRow",
    "alpha_estimate",
    "bridge",
    "classify",
    "closed_stationary",
    "convergence_study",
    "effective_ratio",
    "estimate_K",
    "expected_cycle_observables",
    "k_theory",
    "occupancy_profile",
    "read_cycles_csv",
    "robin_ratio_richardson",
    "rho",
    "rho_1d",
    "run",
    "run_until",
    "solve_alternating",
    "solve_robin",
    "sweep_convergence",
    "transition_operator",
    "write_cycles_csv",
    "write_gnuplot_dat",
    "write_sweep_csv",
]

__version__ = "0.1.0"
