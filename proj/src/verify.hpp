#pragma once

#include "barriers.hpp"
#include "ergodic.hpp"

namespace ergolab {

struct RateFit {
  double window_lo = 0.0, window_hi = 0.0;  // distance window actually used
  double fitted_exponent = 0.0;   // log-log slope (slope of u on |log d| when gamma = 0)
  double fitted_prefactor = 0.0;  // estimate of the boundary constant
  double r_squared = 0.0;
  int points = 0;
};

// Boundary-rate fit over the window [5h, 0.05 extent] (overridable):
// gamma > 0 regresses log u on log d, gamma = 0 regresses u on |log d|.
RateFit fit_boundary_rate(const GridField& field, const Exponents& e, double C,
                          std::optional<double> window_lo = std::nullopt,
                          std::optional<double> window_hi = std::nullopt);

struct GradientBoundReport {
  double Q_coarse = 0.0, Q_fine = 0.0, ratio = 0.0;
  bool pass = false;
};

// Interior gradient-bound check: Q = max |Du| d^(1/(beta-alpha-1)) must stay
// bounded under refinement (ratio <= 1.2).
GradientBoundReport check_gradient_bound(const GridField& coarse, const GridField& fine,
                                         const Exponents& e);

struct ComparisonReport {
  bool pass = false;
  double worst_gap = 0.0;  // max(u_low - u_high), should be <= allowance
  int worst_node = -1;
  double allowance = 0.0;
};

// Ordering certificate for two converged Dirichlet solves whose data are
// ordered: f_low <= f_high pointwise and g_low <= g_high. Throws
// HypothesisUnmet outside the regime where comparison is available
// (lambda = 0 with no strict forcing gap needs alpha = 0 or f < 0).
ComparisonReport check_comparison(const Problem& low_problem,
                                  const DirichletSolution& low,
                                  const Problem& high_problem,
                                  const DirichletSolution& high);

// max over a fine grid of G0(test function) - f; the ergodic constant is
// bounded above by the result. Interval domains, zero-order term excluded.
double mu_star_upper_bound(const Problem& problem, int n_fine = 4001);

struct DomainMonotonicityReport {
  std::vector<double> c_values;
  bool nondecreasing = false;
  bool strict_applicable = false;
  bool strict_pass = false;
  double tolerance = 0.0;
};

// Ergodic constants across strictly nested domains (smallest first) via the
// explosive-path estimator; checks the nondecreasing map and, when the
// strictness hypotheses hold, strict increase above the noise floor.
DomainMonotonicityReport domain_monotonicity(const Problem& problem,
                                             const std::vector<Domain1D>& domains,
                                             int grid_n,
                                             const ErgodicOptions& opts = ErgodicOptions());

}  // namespace ergolab
