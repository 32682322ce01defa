"""Exact numerics for finite birth-and-death Markov chains: mixing,
relaxation, hitting and separation quantities, cutoff diagnostics, and
Monte Carlo cross-checks."""

__version__ = "0.1.0"

from .chain import (ChainFlags, ChainSpec, ChainValidationError,
                    ReducibleChainError, detailed_balance_residual,
                    from_conductances, lazy_version, new_chain,
                    quantile_state, quantile_symmetry_report, stationary)
from .config import DEFAULT_TOL, MAX_STATES, structural_tol
from .cutoff_analysis import (ChainAnalysis, FamilyReport, LemmaSuiteReport,
                              WindowVerdict, analyze_chain, family_scan,
                              lemma_suite, submultiplicativity_check,
                              trend_slope, window_bound_check, window_constant)
from .evolve import (DistanceProfile, Evolution, HeatKernelRow,
                     HorizonExceededError, binomial_heat_approx,
                     binomial_kernel_chain, distance_profile, distribution_at,
                     heat_kernel_row, mixing_time, pairwise_tv,
                     step_distribution, tv_distance, worst_tv)
from .families import (FamilySpec, InfeasibleFamilyError, TightnessReport,
                       biased_walk, ehrenfest_like, generate, lazy_srw,
                       pure_birth, random_lazy_chain, random_monotone_chain,
                       realize_eigenvalues, tightness_family)
from .hitting import (HittingLaw, MomentBoundsReport, absorbing_variant,
                      expected_hitting_time, geometric_convolution_pmf,
                      hitting_moment_bounds, hitting_pgf, hitting_pmf,
                      spectral_hitting)
from .io import chain_from_dict, chain_to_dict, dump_chain, load_chain
from .montecarlo import (CouplingResult, HittingSample, SimConfig,
                         delta_lazy_coupling, empirical_distribution,
                         empirical_hitting, make_rng, no_crossing_coupling,
                         sample_path, sample_states, thin_kernel)
from .separation import (LikelihoodRatioReport, SeparationReport, apply_kernel,
                         is_monotone_vector, is_unimodal,
                         likelihood_ratio_checks, separation_at,
                         separation_symmetry_check, separation_time,
                         worst_separation)
from .spectral import (SpectrumReport, absorbing_submatrix_spectrum,
                       eigenvalues, symmetrized_tridiagonal)
