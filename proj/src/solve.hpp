#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"

namespace ergolab {

struct SolveOptions {
  double tol = 1e-8;       // max-norm residual target
  int max_sweeps = 50000;  // total passes (Gauss-Seidel sweeps + Newton steps)
  bool newton_acceleration = true;
  int hamiltonian_order = 2;  // see Stencil
  // Solve against min(f, forcing_cap); the R-ladder caps each rung at R.
  double forcing_cap = std::numeric_limits<double>::infinity();
};

struct SolveReport {
  bool converged = false;
  int sweeps = 0;
  double final_residual = 0.0;
  double tolerance = 0.0;
  std::string wall_notes;
};

struct DirichletSolution {
  GridField field;
  SolveReport report;
};

// Stationary solve of the lambda-discounted Dirichlet problem with constant
// boundary data. Alternating-direction nonlinear Gauss-Seidel (per-node
// safeguarded scalar solves) with a damped tridiagonal Newton accelerator;
// explicit pseudo-time marching as a stall fallback. The returned residual
// is re-assembled through discrete_G, not taken from the solver loop.
DirichletSolution solve_dirichlet(const Problem& problem, const BoundaryData& g,
                                  const Grid& grid,
                                  const std::optional<GridField>& init = std::nullopt,
                                  const SolveOptions& opts = SolveOptions());

// Throws NotConverged when the report says so.
void require_converged(const SolveReport& report);

struct LadderOptions {
  double r0 = 0.0;       // 0 = auto: max(1, |f|_inf^(1/(1+alpha)))
  int max_rungs = 20;
  double tol_ladder = 1e-6;   // interior settling threshold
  double d_cut_factor = 10.0; // interior = nodes with d >= d_cut_factor * h
  double tol_mono = 1e-8;     // slack for the monotonicity certificate
};

struct RLadderReport {
  std::vector<double> R_values;
  std::vector<double> interior_deltas;  // max interior change per rung
  bool monotone_ok = false;
  bool settled = false;
  // true when the ladder stopped because R outgrew every scale the grid can
  // resolve (blow-up value one cell from the boundary + interior scale);
  // past that point extra rungs only feed the unresolvable boundary cell
  bool resolution_capped = false;
};

struct ExplosiveSolution {
  GridField field;
  RLadderReport ladder;
  SolveReport solve;
};

// Minimal explosive solution via the increasing-R ladder: solve with
// u = R_k on the boundary and forcing min(f, R_k), warm-started rung to
// rung, until the interior stops moving. `warm` seeds the first rung (and
// fast-forwards the schedule) when stepping the discount parameter.
ExplosiveSolution solve_explosive(const Problem& problem, const Grid& grid,
                                  const SolveOptions& sopts = SolveOptions(),
                                  const LadderOptions& lopts = LadderOptions(),
                                  const std::optional<GridField>& warm = std::nullopt);

}  // namespace ergolab
