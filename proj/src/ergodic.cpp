#include "ergodic.hpp"

#include <algorithm>
#include <cmath>

namespace ergolab {

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::ergodic_regime: return "ergodic_regime";
    case CaseTag::dirichlet_solvable: return "dirichlet_solvable";
    case CaseTag::undetermined: return "undetermined";
  }
  return "?";
}

namespace {

std::vector<int> probe_nodes(const Grid& grid, const ErgodicOptions& opts) {
  std::vector<int> probes;
  for (int i = grid.interior_lo(); i <= grid.interior_hi(); ++i) {
    if (opts.probe_window_set) {
      if (grid.nodes[i] >= opts.probe_lo && grid.nodes[i] <= opts.probe_hi)
        probes.push_back(i);
    } else if (grid.d_values[i] >= opts.probe_fraction * grid.dom.extent()) {
      probes.push_back(i);
    }
  }
  if (probes.empty())
    throw Error(ERGOLAB_ERR_REGION_EMPTY, "no interior probe nodes on this grid");
  return probes;
}

// Aitken extrapolation of c_k = c + b lambda_k^theta on a halving schedule.
// Falls back to the last rung when the tail is not geometric.
void extrapolate(ErgodicEstimate& est) {
  const auto& c = est.c_values;
  const int n = static_cast<int>(c.size());
  est.c_extrapolated = c.back();
  est.theta = 0.0;
  if (n < 3) return;
  const double d1 = c[n - 2] - c[n - 3];
  const double d2 = c[n - 1] - c[n - 2];
  if (d1 == 0.0 || d2 == 0.0) return;  // already settled
  const double r = d2 / d1;
  if (!(r > 0.02 && r < 0.98)) return;
  est.c_extrapolated = c[n - 1] + d2 * r / (1.0 - r);
  est.theta = -std::log2(r);
}

// Divergence guard on the rung-to-rung deltas.
void check_ladder_stability(const ErgodicEstimate& est) {
  const auto& c = est.c_values;
  const int n = static_cast<int>(c.size());
  if (n < 4) return;
  const double d1 = std::abs(c[n - 3] - c[n - 4]);
  const double d2 = std::abs(c[n - 2] - c[n - 3]);
  const double d3 = std::abs(c[n - 1] - c[n - 2]);
  const double scale = 1.0 + std::abs(c[n - 1]);
  if (d3 > d2 && d2 > d1 && d3 > 1e-3 * scale)
    throw Error(ERGOLAB_ERR_LADDER_UNSTABLE,
                "vanishing-discount ladder deltas are growing; estimate not settled");
}

}  // namespace

namespace {

// One explosive-path ladder on a single grid.
ErgodicEstimate explosive_ladder(const Problem& problem, const Grid& grid,
                                 const ErgodicOptions& opts) {
  const std::vector<int> probes = probe_nodes(grid, opts);
  const double alpha = problem.params.alpha();

  ErgodicEstimate est;
  std::optional<GridField> warm;
  for (int k = 0; k <= opts.k_max; ++k) {
    const double lambda = std::pow(2.0, -k);
    const Problem pk = problem.with_lambda(lambda);
    ExplosiveSolution sol = solve_explosive(pk, grid, opts.solve, opts.ladder, warm);
    if (!sol.ladder.settled)
      throw Error(ERGOLAB_ERR_LADDER_NOT_SETTLED,
                  "R-ladder still moving at its last rung (lambda = " +
                      std::to_string(lambda) + ")");

    double acc = 0.0;
    for (int i : probes) acc += odd_pow(alpha, sol.field.values[i]);
    est.lambdas.push_back(lambda);
    est.c_values.push_back(-lambda * acc / probes.size());
    warm = sol.field;
    if (k == opts.k_max) est.profile = std::move(sol.field);
  }

  est.case_tag = CaseTag::ergodic_regime;
  check_ladder_stability(est);
  extrapolate(est);
  return est;
}

}  // namespace

ErgodicEstimate estimate_constant_explosive(const Problem& problem, const Grid& grid,
                                            const ErgodicOptions& opts) {
  ErgodicEstimate est = explosive_ladder(problem, grid, opts);
  if (opts.grid_extrapolation) {
    // the boundary-layer consistency error is Theta(h); one refinement
    // step removes the leading term
    const ErgodicEstimate fine = explosive_ladder(problem, grid.refined(), opts);
    est.c_requested_grid = est.c_extrapolated;
    est.c_extrapolated = 2.0 * fine.c_extrapolated - est.c_extrapolated;
    est.theta = fine.theta;
    est.notes = "h-extrapolated across one refinement";
  }
  return est;
}

namespace {

ErgodicEstimate dirichlet_ladder(const Problem& problem, const Grid& grid,
                                 const ErgodicOptions& opts) {
  if (!problem.forcing.bounded())
    throw Error(ERGOLAB_ERR_BAD_FORCING,
                "the Dirichlet-family estimator needs bounded forcing");
  const double alpha = problem.params.alpha();
  const BoundaryData bc =
      grid.is_ball() ? BoundaryData::radial(0.0) : BoundaryData::interval(0.0, 0.0);

  ErgodicEstimate est;
  std::optional<GridField> warm;
  double prev_min = 0.0;
  int stable_steps = 0;
  for (int k = 0; k <= opts.k_max; ++k) {
    const double lambda = std::pow(2.0, -k);
    const Problem pk = problem.with_lambda(lambda);
    DirichletSolution sol = solve_dirichlet(pk, bc, grid, warm, opts.solve);
    require_converged(sol.report);

    double umin = 0.0;
    for (double v : sol.field.values) umin = std::min(umin, v);
    const double s_k = lambda * std::pow(std::max(-umin, 0.0), 1.0 + alpha);
    est.lambdas.push_back(lambda);
    est.c_values.push_back(s_k);

    if (k > 0 && std::abs(umin - prev_min) < 1e-4 * (1.0 + std::abs(umin)))
      ++stable_steps;
    else
      stable_steps = 0;
    prev_min = umin;

    warm = sol.field;
    if (k == opts.k_max) est.profile = std::move(sol.field);
  }

  if (stable_steps >= 2) {
    // the family stopped moving: the zero-discount problem is solvable and
    // the s_k tail only reports the c <= 0 side of the alternative
    est.case_tag = CaseTag::dirichlet_solvable;
    extrapolate(est);
    est.notes = "u_lambda bounded; extrapolated value bounds c from above by 0";
    return est;
  }

  check_ladder_stability(est);
  extrapolate(est);
  const int n = static_cast<int>(est.c_values.size());
  const double tail = est.c_values[n - 1];
  const double tail_delta = std::abs(est.c_values[n - 1] - est.c_values[n - 2]);
  if (tail > 1e-6 && tail_delta < 0.25 * std::abs(tail))
    est.case_tag = CaseTag::ergodic_regime;
  else
    est.case_tag = CaseTag::undetermined;
  return est;
}

}  // namespace

ErgodicEstimate estimate_constant_dirichlet(const Problem& problem, const Grid& grid,
                                            const ErgodicOptions& opts) {
  ErgodicEstimate est = dirichlet_ladder(problem, grid, opts);
  if (opts.grid_extrapolation && est.case_tag == CaseTag::ergodic_regime) {
    const ErgodicEstimate fine = dirichlet_ladder(problem, grid.refined(), opts);
    if (fine.case_tag == CaseTag::ergodic_regime) {
      est.c_requested_grid = est.c_extrapolated;
      est.c_extrapolated = 2.0 * fine.c_extrapolated - est.c_extrapolated;
      est.theta = fine.theta;
      est.notes = "h-extrapolated across one refinement";
    }
  }
  return est;
}

GridField normalized_profile(const GridField& field) {
  GridField out = field;
  const double m = *std::min_element(out.values.begin(), out.values.end());
  for (double& v : out.values) v -= m;
  out.boundary.lo -= m;
  out.boundary.hi -= m;
  return out;
}

}  // namespace ergolab
