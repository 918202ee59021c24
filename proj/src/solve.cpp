#include "solve.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

namespace ergolab {

namespace {

constexpr double kHuge = 1e300;

// Monotone scalar solve of residual_i(v) = 0 with neighbors frozen.
// Newton candidates inside a safeguarded bracket; the scalar map is
// nondecreasing in v (strictly when lambda > 0).
double scalar_solve(const Stencil& st, const std::vector<double>& u, int i,
                    double tol_node) {
  double v = u[i];
  double r = st.residual_at(u, i, v);
  if (std::abs(r) <= tol_node || !std::isfinite(r)) return v;

  double slope = std::max(st.diagonal_slope(u, i, v), 1e-14);
  double step = std::max(std::abs(r) / slope, 1e-18);

  double lo, hi, rlo, rhi;
  if (r > 0.0) {
    hi = v;
    rhi = r;
    lo = v - step;
    rlo = st.residual_at(u, i, lo);
    for (int k = 0; k < 200 && rlo > 0.0; ++k) {
      hi = lo;
      rhi = rlo;
      step *= 2.0;
      lo -= step;
      if (std::abs(lo) > kHuge) return std::abs(rlo) < std::abs(r) ? lo : v;
      rlo = st.residual_at(u, i, lo);
    }
    if (rlo > 0.0) return v;
  } else {
    lo = v;
    rlo = r;
    hi = v + step;
    rhi = st.residual_at(u, i, hi);
    for (int k = 0; k < 200 && rhi < 0.0; ++k) {
      lo = hi;
      rlo = rhi;
      step *= 2.0;
      hi += step;
      if (std::abs(hi) > kHuge) return std::abs(rhi) < std::abs(r) ? hi : v;
      rhi = st.residual_at(u, i, hi);
    }
    if (rhi < 0.0) return v;
  }

  double best = std::abs(rlo) < std::abs(rhi) ? lo : hi;
  double rb = std::min(std::abs(rlo), std::abs(rhi));
  for (int it = 0; it < 100; ++it) {
    if (rb <= tol_node || hi - lo <= 1e-16 * (1.0 + std::abs(lo) + std::abs(hi))) break;
    slope = std::max(st.diagonal_slope(u, i, best), 1e-14);
    double cand = best - st.residual_at(u, i, best) / slope;
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    const double rc = st.residual_at(u, i, cand);
    if (!std::isfinite(rc)) break;
    if (rc > 0.0) {
      hi = cand;
    } else {
      lo = cand;
    }
    if (std::abs(rc) < rb) {
      rb = std::abs(rc);
      best = cand;
    }
  }
  return best;
}

void gs_sweep(const Stencil& st, std::vector<double>& u, bool ascending, double tol_node) {
  const Grid& g = st.grid();
  if (ascending) {
    for (int i = g.interior_lo(); i <= g.interior_hi(); ++i)
      u[i] = scalar_solve(st, u, i, tol_node);
  } else {
    for (int i = g.interior_hi(); i >= g.interior_lo(); --i)
      u[i] = scalar_solve(st, u, i, tol_node);
  }
}

void thomas(std::vector<double>& lower, std::vector<double>& diag,
            std::vector<double>& upper, std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int k = 0; k < n; ++k)
    if (std::abs(diag[k]) < 1e-300) diag[k] = diag[k] < 0.0 ? -1e-300 : 1e-300;
  for (int k = 1; k < n; ++k) {
    const double m = lower[k] / diag[k - 1];
    diag[k] -= m * upper[k - 1];
    rhs[k] -= m * rhs[k - 1];
    if (std::abs(diag[k]) < 1e-300) diag[k] = diag[k] < 0.0 ? -1e-300 : 1e-300;
  }
  rhs[n - 1] /= diag[n - 1];
  for (int k = n - 2; k >= 0; --k) rhs[k] = (rhs[k] - upper[k] * rhs[k + 1]) / diag[k];
}

// Damped Newton step on the full interior; accepted only when the max-norm
// residual actually drops.
bool newton_step(const Stencil& st, std::vector<double>& u, double& res,
                 std::vector<double>& lower, std::vector<double>& diag,
                 std::vector<double>& upper, std::vector<double>& rhs,
                 std::vector<double>& trial) {
  const Grid& g = st.grid();
  st.jacobian(u, lower, diag, upper, rhs);
  for (double& r : rhs) r = -r;
  thomas(lower, diag, upper, rhs);

  double du_max = 0.0;
  for (double d : rhs) {
    if (!std::isfinite(d)) return false;
    du_max = std::max(du_max, std::abs(d));
  }
  if (du_max == 0.0) return false;

  double scale = 1.0;
  double u_scale = 1.0;
  for (int i = 0; i < g.n; ++i) u_scale = std::max(u_scale, std::abs(u[i]));
  if (du_max > 100.0 * u_scale) scale = 100.0 * u_scale / du_max;

  for (double s = scale; s >= scale / 256.0; s *= 0.5) {
    trial = u;
    for (int i = g.interior_lo(); i <= g.interior_hi(); ++i)
      trial[i] = u[i] + s * rhs[i - g.interior_lo()];
    const double r_try = st.max_abs_residual(trial);
    if (std::isfinite(r_try) && r_try < res * (1.0 - 1e-4 * s)) {
      u.swap(trial);
      res = r_try;
      return true;
    }
  }
  return false;
}

// Explicit pseudo-time block; the step obeys the diagonal stability bound
// h^2/(2 A w + ...) through the assembled diagonal slope.
void pseudo_time_block(const Stencil& st, std::vector<double>& u, int steps) {
  const Grid& g = st.grid();
  std::vector<double> res;
  for (int s = 0; s < steps; ++s) {
    st.residual(u, res);
    double slope_max = 1e-14;
    for (int i = g.interior_lo(); i <= g.interior_hi(); ++i)
      slope_max = std::max(slope_max, st.diagonal_slope(u, i, u[i]));
    const double dt = 0.9 / slope_max;
    for (int i = g.interior_lo(); i <= g.interior_hi(); ++i)
      u[i] -= dt * res[i - g.interior_lo()];
  }
}


// Newton-accelerated alternating Gauss-Seidel relaxation on one stencil;
// returns passes spent. Stops at certified excess <= tol.
int relax_to_tolerance(const Stencil& st, std::vector<double>& u, double tol,
                       int max_passes, const SolveOptions& opts, bool& used_pseudo_time) {
  double res = 0.0;
  double excess = st.certified_excess(u, &res);
  double best = excess;
  int since_improvement = 0;
  int newton_cooldown = 0;
  bool ascending = true;
  int passes = 0;

  while (excess > tol && passes < max_passes) {
    if (!std::isfinite(res))
      throw Error(ERGOLAB_ERR_NAN_DETECTED, "non-finite residual during solve");

    bool stepped = false;
    if (opts.newton_acceleration && newton_cooldown == 0) {
      static thread_local std::vector<double> lower, diag, upper, rhs, trial;
      stepped = newton_step(st, u, res, lower, diag, upper, rhs, trial);
      if (!stepped) newton_cooldown = 4;
      ++passes;
    }
    if (!stepped) {
      const double tol_node = std::max(0.02 * tol, 1e-4 * res);
      gs_sweep(st, u, ascending, tol_node);
      ascending = !ascending;
      if (newton_cooldown > 0) --newton_cooldown;
      ++passes;
    }
    excess = st.certified_excess(u, &res);

    if (excess < best - 1e-6 * std::abs(best) - 1e-300) {
      best = excess;
      since_improvement = 0;
    } else if (++since_improvement > 60) {
      pseudo_time_block(st, u, 200);
      used_pseudo_time = true;
      excess = st.certified_excess(u, &res);
      passes += 200;
      since_improvement = 0;
      if (excess < best) best = excess;
    }
  }
  return passes;
}

}  // namespace

void require_converged(const SolveReport& report) {
  if (!report.converged)
    throw Error(ERGOLAB_ERR_NOT_CONVERGED,
                "solver stopped after " + std::to_string(report.sweeps) +
                    " sweeps with residual " + std::to_string(report.final_residual));
}

DirichletSolution solve_dirichlet(const Problem& problem, const BoundaryData& g,
                                  const Grid& grid, const std::optional<GridField>& init,
                                  const SolveOptions& opts) {
  GridField field;
  if (init) {
    if (init->grid.n != grid.n)
      throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "warm-start field is on a different grid");
    field = *init;
    field.boundary = g;
    field.apply_boundary();
  } else {
    field.grid = grid;
    field.boundary = g;
    field.values.resize(grid.n);
    // linear interpolation between the boundary values
    const double glo = grid.is_ball() ? g.hi : g.lo;
    for (int i = 0; i < grid.n; ++i) {
      const double w = static_cast<double>(i) / (grid.n - 1);
      field.values[i] = (1.0 - w) * glo + w * g.hi;
    }
    field.apply_boundary();
  }

  SolveReport report;
  int total_passes = 0;
  bool used_pseudo_time = false;

  if (opts.hamiltonian_order == 1) {
    const Stencil st(problem, grid, opts.forcing_cap, 1);
    total_passes = relax_to_tolerance(st, field.values, opts.tol, opts.max_sweeps, opts,
                                      used_pseudo_time);
  } else {
    // Defect correction: the limited second-order flux enters as a lagged
    // source for the monotone first-order solve. Outer steps are accepted
    // only when the certified order-2 excess drops; rejected steps shrink
    // the source blending weight, so the outer iteration cannot diverge.
    const Stencil st2(problem, grid, opts.forcing_cap, 2);
    const Stencil st1(problem, grid, opts.forcing_cap, 1);
    const int count = grid.interior_count();
    std::vector<double> src(count, 0.0);
    std::vector<double> res1(count), res2(count), src_try(count), neg_src(count);

    std::vector<double> u_best = field.values;
    double ex_best = st2.certified_excess(u_best);
    double theta = 1.0;
    const int max_outer = 200;
    for (int outer = 0; outer < max_outer && ex_best > opts.tol; ++outer) {
      if (total_passes >= opts.max_sweeps) break;
      st1.residual(u_best, res1);
      st2.residual(u_best, res2);
      for (int k = 0; k < count; ++k)
        src_try[k] = (1.0 - theta) * src[k] + theta * (res2[k] - res1[k]);

      Stencil inner(problem, grid, opts.forcing_cap, 1);
      for (int k = 0; k < count; ++k) neg_src[k] = -src_try[k];
      inner.add_interior_forcing(neg_src);

      field.values = u_best;
      const int budget = std::min(opts.max_sweeps - total_passes, 1500);
      const double inner_tol = std::max(0.25 * opts.tol, 0.02 * ex_best);
      total_passes += relax_to_tolerance(inner, field.values, inner_tol, budget, opts,
                                         used_pseudo_time);
      const double ex_try = st2.certified_excess(field.values);
      if (!std::isfinite(ex_try))
        throw Error(ERGOLAB_ERR_NAN_DETECTED, "non-finite residual during solve");
      if (ex_try < ex_best * 0.999 || ex_try <= opts.tol) {
        u_best = field.values;
        ex_best = ex_try;
        src = src_try;
        theta = std::min(1.0, theta * 1.3);
      } else {
        theta *= 0.4;
        if (theta < 1e-4) break;
      }
    }
    field.values = u_best;
  }

  for (double v : field.values)
    if (!std::isfinite(v)) throw Error(ERGOLAB_ERR_NAN_DETECTED, "non-finite field value");

  // independent certificate: fresh assembly, not the solver loop's residual
  const Stencil recheck(problem, grid, opts.forcing_cap, opts.hamiltonian_order);
  double certified = 0.0, binding_floor = 0.0;
  const double certified_ex = recheck.certified_excess(field.values, &certified, &binding_floor);

  report.sweeps = total_passes;
  report.final_residual = certified;
  report.tolerance = opts.tol + binding_floor;
  report.converged = certified_ex <= opts.tol;
  if (binding_floor > opts.tol)
    report.wall_notes = "binding node sits on its roundoff floor";
  if (used_pseudo_time) {
    if (!report.wall_notes.empty()) report.wall_notes += "; ";
    report.wall_notes += "pseudo-time fallback engaged";
  }
  return {std::move(field), report};
}

ExplosiveSolution solve_explosive(const Problem& problem, const Grid& grid,
                                  const SolveOptions& sopts, const LadderOptions& lopts,
                                  const std::optional<GridField>& warm) {
  if (!(problem.params.lambda() > 0.0))
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT,
                "explosive solves need lambda > 0");

  double r0 = lopts.r0;
  if (r0 <= 0.0) {
    double fmax = 0.0;
    for (int i = grid.interior_lo(); i <= grid.interior_hi(); ++i)
      fmax = std::max(fmax,
                      std::abs(problem.forcing.at(grid.nodes[i], grid.d_values[i])));
    r0 = std::max(1.0, std::pow(fmax, 1.0 / (1.0 + problem.params.alpha())));
  }

  const double d_cut = std::min(lopts.d_cut_factor * grid.h, 0.45 * grid.dom.max_distance());

  // value of the blow-up law one cell from the boundary: boundary data far
  // above this is below grid resolution and only feeds the boundary-cell
  // cascade, so the ladder stops once R dwarfs every resolved scale
  const double C = boundary_constant(problem.params, problem.domain, problem.exponents);
  const double gamma = problem.exponents.gamma;
  const double blowup_at_cell = gamma > 0.0 ? C * std::pow(grid.h, -gamma)
                                            : C * std::abs(std::log(grid.h));

  RLadderReport ladder;
  ladder.monotone_ok = true;

  int kstart = 0;
  std::optional<GridField> current;
  if (warm) {
    double umax = r0;
    for (double v : warm->values) umax = std::max(umax, v);
    while (kstart < lopts.max_rungs - 1 && r0 * std::pow(2.0, kstart) < umax) ++kstart;
    current = *warm;
  }

  SolveReport last_report;
  GridField prev;
  bool have_prev = false;

  for (int k = kstart; k < lopts.max_rungs; ++k) {
    const double R = r0 * std::pow(2.0, k);
    const BoundaryData bc =
        grid.is_ball() ? BoundaryData::radial(R) : BoundaryData::interval(R, R);

    if (current) {
      // boundary data must dominate the warm start
      for (double& v : current->values) v = std::min(v, R);
    }

    SolveOptions so = sopts;
    so.forcing_cap = R;
    DirichletSolution rung = solve_dirichlet(problem, bc, grid, current, so);
    require_converged(rung.report);
    last_report = rung.report;

    ladder.R_values.push_back(R);
    double interior_scale = 0.0;
    for (int i = 0; i < grid.n; ++i)
      if (grid.d_values[i] >= d_cut)
        interior_scale = std::max(interior_scale, std::abs(rung.field.values[i]));
    if (have_prev) {
      double delta = 0.0;
      double drop = 0.0;
      for (int i = 0; i < grid.n; ++i) {
        drop = std::max(drop, prev.values[i] - rung.field.values[i]);
        if (grid.d_values[i] >= d_cut)
          delta = std::max(delta, std::abs(rung.field.values[i] - prev.values[i]));
      }
      ladder.interior_deltas.push_back(delta);
      if (drop > lopts.tol_mono) ladder.monotone_ok = false;
      if (delta <= lopts.tol_ladder) {
        ladder.settled = true;
        return {std::move(rung.field), std::move(ladder), last_report};
      }
      const double reach = 4.0 * (interior_scale + blowup_at_cell + r0);
      if (R >= reach) {
        ladder.settled = true;
        ladder.resolution_capped = true;
        return {std::move(rung.field), std::move(ladder), last_report};
      }
    }
    prev = rung.field;
    have_prev = true;
    current = std::move(rung.field);
  }

  return {std::move(*current), std::move(ladder), last_report};
}

}  // namespace ergolab
