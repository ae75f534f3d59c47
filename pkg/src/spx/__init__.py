"""spx: exact minimization of sign polynomials and weighted CSP
objectives by conditioning-and-search, with an exhaustive oracle,
exponent calculators, and a reproducible experiment harness."""

__version__ = "0.1.0"

from .instances import (Assignment, Constraint, CspInstance,
                        DimensionMismatchError, InstanceStats,
                        InvalidInstanceError, Lin2Instance,
                        centered_mean_check, compute_stats, evaluate_csp,
                        evaluate_lin2, hamming_distance, lin2_of_csp_parity)
from .formats import (SpxSyntaxError, format_rational, gen_planted_csp,
                      gen_random_csp, gen_random_lin2, import_dimacs_cnf,
                      parse_instance, parse_rational, parity_family,
                      sat_clause_family, write_instance)
from .oracle import (DegenerateInstanceError, OracleCapExceeded, OracleResult,
                     brute_force_minimum, correlated_expectation_enumeration,
                     exact_correlated_expectation, exact_landing_probability,
                     successful_set_count_correlated, sublevel_counts,
                     threshold_set_count)
from .exponents import (BinomialBoundCheck, ExponentReport, FlipRates,
                        binary_entropy, case2_corollary_bound,
                        classical_exponent_case1, classical_exponent_case2,
                        flip_rates, lipschitz_params, mcdiarmid_gamma,
                        quantum_comparison, quantum_exponent_case1,
                        quantum_exponent_case2, verify_binomial_bounds)
from .sampling import (BallSpec, RawDrawBudgetExceeded, RngStream,
                       ball_search_min, correlated_sample, enumerate_ball,
                       in_typical_shell, light_coords,
                       rejection_sample_threshold)
from .solvers import (BoundedSearchResult, RankedBudgetError, SolveOutcome,
                      SweepTrace, bounded_sweep_solve, ranked_solve,
                      search_bounded, solve_case1, solve_case2)

__all__ = [name for name in dir() if not name.startswith("_")]
