"""Joint actuator/sensor placement for stochastic linear plants.

Minimizes the infinite-horizon time-averaged LQG cost over unit actuator and
sensor directions via a double-bracket gradient flow on the product of unit
spheres, with analytic zero-gain equilibrium enumeration and a Monte Carlo
validator.
"""

from .cost import (
    CostReport,
    cost_report,
    directional_derivative,
    phi,
    phi_bar,
    phi_gain_sensitivity,
)
from .equilibria import (
    BetaGamma,
    EquilibriumCandidate,
    Spectrum,
    analytic_gains_at_v1,
    analytic_minimum,
    beta_gamma_coords,
    candidate_match_distance,
    cauchy_matrix,
    classify_candidates,
    classify_stability,
    enumerate_equilibria_zero,
    hessian_matrix,
    is_equilibrium,
    xi_vector,
)
from .errors import (
    AllStartsFailed,
    CodesignError,
    DegenerateStep,
    DimensionTooLarge,
    NoStabilizingSolution,
    NonConvergence,
    NonNegativeEigenvalue,
    NotAnEquilibrium,
    NotHurwitz,
    NotSkew,
    PBHViolation,
    ProblemFormatError,
    SimulationDiverged,
    SingularBlock,
)
from .flow import (
    FlowIterate,
    FlowOptions,
    FlowTrace,
    MultiStartResult,
    OrbitGradient,
    flow_step,
    gradient,
    multi_start,
    random_placement,
    run_flow,
)
from .plant import Placement, Plant
from .riccati import (
    AdjointPair,
    GainPair,
    PBHReport,
    adjoint_pair,
    gain_pair,
    pbh_check,
    solve_care,
    solve_lyapunov,
)
from .simulate import SimConfig, SimResult, estimate_eta, simulate_path

__version__ = "0.1.0"

__all__ = [
    "AdjointPair",
    "AllStartsFailed",
    "BetaGamma",
    "CodesignError",
    "CostReport",
    "DegenerateStep",
    "DimensionTooLarge",
    "EquilibriumCandidate",
    "FlowIterate",
    "FlowOptions",
    "FlowTrace",
    "GainPair",
    "MultiStartResult",
    "NoStabilizingSolution",
    "NonConvergence",
    "NonNegativeEigenvalue",
    "NotAnEquilibrium",
    "NotHurwitz",
    "NotSkew",
    "OrbitGradient",
    "PBHReport",
    "PBHViolation",
    "Placement",
    "Plant",
    "ProblemFormatError",
    "SimConfig",
    "SimResult",
    "SimulationDiverged",
    "SingularBlock",
    "Spectrum",
    "adjoint_pair",
    "analytic_gains_at_v1",
    "analytic_minimum",
    "beta_gamma_coords",
    "candidate_match_distance",
    "cauchy_matrix",
    "classify_candidates",
    "classify_stability",
    "cost_report",
    "directional_derivative",
    "enumerate_equilibria_zero",
    "estimate_eta",
    "flow_step",
    "gain_pair",
    "gradient",
    "hessian_matrix",
    "is_equilibrium",
    "multi_start",
    "pbh_check",
    "phi",
    "phi_bar",
    "phi_gain_sensitivity",
    "random_placement",
    "run_flow",
    "simulate_path",
    "solve_care",
    "solve_lyapunov",
    "xi_vector",
]
