#include "ergolab.h"

#include <algorithm>
#include <cstring>
#include <iostream>
#include <new>
#include <sstream>

#include "report.hpp"
#include "runner.hpp"
#include "verify.hpp"

using namespace ergolab;

// Opaque handle bodies.
struct ergolab_problem {
  Problem problem;
  int grid_n;
};

struct ergolab_field {
  Problem problem;
  GridField field;
  SolveReport report;
};

struct ergolab_ergodic {
  ErgodicEstimate estimate;
};

namespace {

void copy_message(const char* msg, char* buf, size_t len) {
  if (!buf || len == 0) return;
  std::strncpy(buf, msg, len - 1);
  buf[len - 1] = '\0';
}

template <typename Fn>
ergolab_status guarded(Fn&& fn, char* errbuf = nullptr, size_t errlen = 0) {
  try {
    return fn();
  } catch (const Error& e) {
    copy_message(e.what(), errbuf, errlen);
    return e.code;
  } catch (const std::bad_alloc&) {
    copy_message("out of memory", errbuf, errlen);
    return ERGOLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    copy_message(e.what(), errbuf, errlen);
    return ERGOLAB_ERR_INTERNAL;
  }
}

ergolab_status make_problem(const Config& cfg, ergolab_problem** out) {
  const ExperimentSetup setup = load_setup(cfg);
  *out = new ergolab_problem{setup.problem, setup.grid_n};
  return ERGOLAB_OK;
}

int resolve_n(const ergolab_problem* p, int grid_n) { return grid_n > 0 ? grid_n : p->grid_n; }

}  // namespace

extern "C" {

const char* ergolab_version(void) { return "1.0.0"; }

ergolab_status ergolab_problem_from_string(const char* text, ergolab_problem** out,
                                           char* errbuf, size_t errbuf_len) {
  if (!text || !out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { return make_problem(Config::parse(text), out); }, errbuf,
                 errbuf_len);
}

ergolab_status ergolab_problem_from_file(const char* path, ergolab_problem** out,
                                         char* errbuf, size_t errbuf_len) {
  if (!path || !out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { return make_problem(Config::parse_file(path), out); }, errbuf,
                 errbuf_len);
}

void ergolab_problem_free(ergolab_problem* p) { delete p; }

ergolab_status ergolab_problem_exponents(const ergolab_problem* p, double* gamma_out,
                                         double* tau_out, double* grad_rate_out) {
  if (!p) return ERGOLAB_ERR_INVALID_ARGUMENT;
  if (gamma_out) *gamma_out = p->problem.exponents.gamma;
  if (tau_out) *tau_out = p->problem.exponents.tau;
  if (grad_rate_out) *grad_rate_out = p->problem.exponents.grad_rate;
  return ERGOLAB_OK;
}

ergolab_status ergolab_problem_boundary_constant(const ergolab_problem* p, double* c_out) {
  if (!p || !c_out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *c_out = boundary_constant(p->problem.params, p->problem.domain, p->problem.exponents);
    return ERGOLAB_OK;
  });
}

ergolab_status ergolab_problem_uniqueness(const ergolab_problem* p, int* status_out) {
  if (!p || !status_out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    switch (uniqueness_status(p->problem.params, p->problem.forcing)) {
      case Uniqueness::unique: *status_out = ERGOLAB_UNIQUE; break;
      case Uniqueness::unique_if_singular_regime:
        *status_out = ERGOLAB_UNIQUE_IF_SINGULAR_REGIME;
        break;
      case Uniqueness::unknown: *status_out = ERGOLAB_UNIQUENESS_UNKNOWN; break;
    }
    return ERGOLAB_OK;
  });
}

ergolab_status ergolab_mu_star_upper_bound(const ergolab_problem* p, double* bound_out) {
  if (!p || !bound_out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *bound_out = mu_star_upper_bound(p->problem);
    return ERGOLAB_OK;
  });
}

ergolab_status ergolab_solve_dirichlet(const ergolab_problem* p, int grid_n, double g_lo,
                                       double g_hi, ergolab_field** out) {
  if (!p || !out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    const Grid grid = Grid::make(p->problem.domain, resolve_n(p, grid_n));
    const BoundaryData bc = grid.is_ball() ? BoundaryData::radial(g_hi)
                                           : BoundaryData::interval(g_lo, g_hi);
    DirichletSolution sol = solve_dirichlet(p->problem, bc, grid);
    const bool converged = sol.report.converged;
    *out = new ergolab_field{p->problem, std::move(sol.field), std::move(sol.report)};
    return converged ? ERGOLAB_OK : ERGOLAB_ERR_NOT_CONVERGED;
  });
}

ergolab_status ergolab_solve_explosive(const ergolab_problem* p, int grid_n,
                                       ergolab_field** out) {
  if (!p || !out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    const Grid grid = Grid::make(p->problem.domain, resolve_n(p, grid_n));
    ExplosiveSolution sol = solve_explosive(p->problem, grid);
    const bool settled = sol.ladder.settled;
    *out = new ergolab_field{p->problem, std::move(sol.field), std::move(sol.solve)};
    return settled ? ERGOLAB_OK : ERGOLAB_ERR_LADDER_NOT_SETTLED;
  });
}

void ergolab_field_free(ergolab_field* f) { delete f; }

int ergolab_field_size(const ergolab_field* f) { return f ? f->field.grid.n : 0; }

ergolab_status ergolab_field_copy(const ergolab_field* f, double* x, double* d, double* u,
                                  int n) {
  if (!f || n < 0) return ERGOLAB_ERR_INVALID_ARGUMENT;
  const int count = std::min(n, f->field.grid.n);
  for (int i = 0; i < count; ++i) {
    if (x) x[i] = f->field.grid.nodes[i];
    if (d) d[i] = f->field.grid.d_values[i];
    if (u) u[i] = f->field.values[i];
  }
  return ERGOLAB_OK;
}

ergolab_status ergolab_field_solve_info(const ergolab_field* f, int* converged,
                                        int* sweeps, double* final_residual) {
  if (!f) return ERGOLAB_ERR_INVALID_ARGUMENT;
  if (converged) *converged = f->report.converged ? 1 : 0;
  if (sweeps) *sweeps = f->report.sweeps;
  if (final_residual) *final_residual = f->report.final_residual;
  return ERGOLAB_OK;
}

ergolab_status ergolab_field_fit_rate(const ergolab_field* f, double* exponent_out,
                                      double* prefactor_out, double* r_squared_out) {
  if (!f) return ERGOLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const double C = boundary_constant(f->problem.params, f->problem.domain,
                                       f->problem.exponents);
    const RateFit fit = fit_boundary_rate(f->field, f->problem.exponents, C);
    if (exponent_out) *exponent_out = fit.fitted_exponent;
    if (prefactor_out) *prefactor_out = fit.fitted_prefactor;
    if (r_squared_out) *r_squared_out = fit.r_squared;
    return ERGOLAB_OK;
  });
}

ergolab_status ergolab_estimate_ergodic(const ergolab_problem* p, int grid_n, int path,
                                        int lambda_k_max, ergolab_ergodic** out) {
  if (!p || !out) return ERGOLAB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    const Grid grid = Grid::make(p->problem.domain, resolve_n(p, grid_n));
    ErgodicOptions opts;
    if (lambda_k_max > 0) opts.k_max = lambda_k_max;
    ErgodicEstimate est = path == ERGOLAB_PATH_DIRICHLET
                              ? estimate_constant_dirichlet(p->problem, grid, opts)
                              : estimate_constant_explosive(p->problem, grid, opts);
    *out = new ergolab_ergodic{std::move(est)};
    return ERGOLAB_OK;
  });
}

void ergolab_ergodic_free(ergolab_ergodic* e) { delete e; }

ergolab_status ergolab_ergodic_result(const ergolab_ergodic* e, double* c_out,
                                      int* case_tag_out) {
  if (!e) return ERGOLAB_ERR_INVALID_ARGUMENT;
  if (c_out) *c_out = e->estimate.c_extrapolated;
  if (case_tag_out) {
    switch (e->estimate.case_tag) {
      case CaseTag::ergodic_regime: *case_tag_out = ERGOLAB_CASE_ERGODIC_REGIME; break;
      case CaseTag::dirichlet_solvable:
        *case_tag_out = ERGOLAB_CASE_DIRICHLET_SOLVABLE;
        break;
      case CaseTag::undetermined: *case_tag_out = ERGOLAB_CASE_UNDETERMINED; break;
    }
  }
  return ERGOLAB_OK;
}

int ergolab_ergodic_ladder_size(const ergolab_ergodic* e) {
  return e ? static_cast<int>(e->estimate.lambdas.size()) : 0;
}

ergolab_status ergolab_ergodic_ladder_copy(const ergolab_ergodic* e, double* lambdas,
                                           double* c_values, int n) {
  if (!e || n < 0) return ERGOLAB_ERR_INVALID_ARGUMENT;
  const int count = std::min<int>(n, static_cast<int>(e->estimate.lambdas.size()));
  for (int i = 0; i < count; ++i) {
    if (lambdas) lambdas[i] = e->estimate.lambdas[i];
    if (c_values) c_values[i] = e->estimate.c_values[i];
  }
  return ERGOLAB_OK;
}

ergolab_status ergolab_run(const char* command, const char* config_path,
                           const char* out_dir, int grid_n_override, char* errbuf,
                           size_t errbuf_len) {
  if (!command || !config_path || !out_dir) return ERGOLAB_ERR_INVALID_ARGUMENT;
  return guarded(
      [&] {
        const RunResult r =
            run_command(command, config_path, out_dir, grid_n_override, std::cout);
        if (r.status != ERGOLAB_OK) copy_message(r.message.c_str(), errbuf, errbuf_len);
        return r.status;
      },
      errbuf, errbuf_len);
}

}  // extern "C"
