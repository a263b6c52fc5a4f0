"""Variational laboratory for a singularly perturbed Perona-Malik energy.

Modules
-------
energy_core
    Discrete energies, grids, and the bending-optimal cubic.
pure_jump
    Pure jump functions, square-root jump energies, canonical staircases.
limit_solver
    Limit minimum problems, brute-force oracle, local-minimality checks.
variational_solver
    Quasi-Newton minimization of the discretized energies.
gamma_tools
    Substitution skeletons and lower-bound certificates.
blowup_analysis
    Blow-up extraction, staircase fitting, varifold pairings.
experiment_cli
    Sweep orchestration, records, plots, and the command-line interface.
"""

from .energy_core import (CubicSolution, EnergyBreakdown, GridError,
                          SampledFunction, cubic_interpolant, eval_pmf,
                          eval_rpm, eval_rpmf, omega)
from .pure_jump import (ALPHA0, PureJumpFunction, StaircaseSpec,
                        canonical_staircase, j_half, jf_half,
                        nearest_translation, pj_value, semi_entire_minimizer,
                        staircase_params, staircase_params_general,
                        strict_distance, translate)
from .limit_solver import (LimitProblem, LocalMinReport, equipartition_minimize,
                           mu0, mu0_oracle, mu0_star, mu_bounds,
                           oracle_resolution_bound, verify_local_minimizer)
from .variational_solver import (BoundaryPatch, GridResolutionError,
                                 SolveOptions, SolveResult, boundary_patch,
                                 minimize_pmf, minimize_rpmf,
                                 recovery_construction, required_grid_size)
from .gamma_tools import (SubstitutionCertificate, basic_lower_bound,
                          jhalf_lsc_probe, substitute, substitution_constant)
from .blowup_analysis import (BlowUp, StaircaseFit, extract_blowup,
                              fit_staircase, lowres_blowup, test_function,
                              varifold_limit, varifold_pair)
from .experiment_cli import (ExperimentConfig, SweepRecord, get_forcing,
                             parse_config, run_sweep)

__version__ = "0.1.0"
