#pragma once

#include "solve.hpp"

namespace ergolab {

enum class CaseTag { ergodic_regime, dirichlet_solvable, undetermined };

const char* to_string(CaseTag tag);

struct ErgodicEstimate {
  std::vector<double> lambdas;   // strictly decreasing schedule
  std::vector<double> c_values;  // c_k per rung (requested grid)
  double c_extrapolated = 0.0;
  double c_requested_grid = 0.0;  // pre-h-extrapolation value, 0 when unused
  double theta = 0.0;             // fitted convergence exponent, 0 when not fitted
  CaseTag case_tag = CaseTag::undetermined;
  GridField profile;              // field at the smallest lambda (requested grid)
  std::string notes;
};

struct ErgodicOptions {
  int k_max = 12;                // lambda_k = 2^-k, k = 0..k_max
  double probe_fraction = 0.25;  // probes at nodes with d >= fraction * extent
  SolveOptions solve;
  LadderOptions ladder;
  // optional probe override: use nodes whose coordinate lies in [lo, hi]
  bool probe_window_set = false;
  double probe_lo = 0.0, probe_hi = 0.0;
  // repeat the ladder on the refined grid and remove the O(h) boundary-layer
  // consistency error by Richardson extrapolation in h
  bool grid_extrapolation = true;
};

// Ergodic constant through explosive solutions: c_k = -lambda_k <|U|^a U>
// averaged over interior probes, extrapolated in lambda. Always tagged
// ergodic_regime (this route needs no solvability dichotomy).
ErgodicEstimate estimate_constant_explosive(const Problem& problem, const Grid& grid,
                                            const ErgodicOptions& opts = ErgodicOptions());

// Ergodic constant through the zero-boundary Dirichlet family: tracks
// s_k = lambda_k (max(-min u, 0))^(1+a) and classifies the alternative
// (bounded family vs. blow-down with s_k -> c >= 0).
ErgodicEstimate estimate_constant_dirichlet(const Problem& problem, const Grid& grid,
                                            const ErgodicOptions& opts = ErgodicOptions());

// Subtracts the minimum nodal value; the result has minimum zero.
GridField normalized_profile(const GridField& field);

}  // namespace ergolab
