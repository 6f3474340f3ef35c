"""Steady states, stability, and Gaussian entanglement of a driven
four-mode optomechanical system (optical cavity, intracavity
second-harmonic mode, mechanical resonator, microwave cavity)."""

from .params import (ConfigError, CouplingSpec, DerivedRates, PhysicalConfig,
                     derive_rates, thermal_occupancy, validate_config)
from .steadystate import (JacobianSingular, NonConvergence, SolverOptions,
                          SteadyState, decoupled_steady_state,
                          relative_residual, solve_steady_state,
                          steady_state_residual)
from .dynamics import (StabilityReport, UnstableDrift, assess_stability,
                       build_diffusion, build_drift)
from .gaussian import (BipartitePair, EntanglementResult, InvalidState,
                       SolveSingular, check_physicality, entanglement_verdict,
                       lyapunov_residual, reduce_bipartite, solve_lyapunov,
                       symplectic_eigenvalues, symplectic_eta_minus)
from .oracle import (EnsembleEstimate, StepTooLarge, compare_cm,
                     simulate_ensemble, suggested_times)
from .pipeline import (CSV_COLUMNS, PointResult, SweepRow, SweepSpec,
                       config_from_dict, config_to_dict, load_config,
                       run_point, run_sweep, write_csv)

__version__ = "0.1.0"

__all__ = [
    "BipartitePair", "ConfigError", "CouplingSpec", "CSV_COLUMNS",
    "DerivedRates", "EnsembleEstimate", "EntanglementResult", "InvalidState",
    "JacobianSingular", "NonConvergence", "PhysicalConfig", "PointResult",
    "SolveSingular", "SolverOptions", "StabilityReport", "SteadyState",
    "StepTooLarge", "SweepRow", "SweepSpec", "UnstableDrift",
    "assess_stability", "build_diffusion", "build_drift", "check_physicality",
    "compare_cm", "config_from_dict", "config_to_dict",
    "decoupled_steady_state", "derive_rates", "entanglement_verdict",
    "load_config", "lyapunov_residual", "reduce_bipartite",
    "relative_residual", "run_point", "run_sweep", "simulate_ensemble",
    "solve_lyapunov", "solve_steady_state", "steady_state_residual",
    "suggested_times", "symplectic_eigenvalues", "symplectic_eta_minus",
    "thermal_occupancy", "validate_config", "write_csv",
]
