#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "report.hpp"
#include "verify.hpp"

namespace ergolab {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void echo_config(Report& report, const ExperimentSetup& setup) {
  Report& cfg = report.child("config");
  const Config resolved = resolved_config(setup);
  for (const auto& sec : resolved.sections()) {
    if (sec.name.empty() || sec.entries.empty()) continue;
    Report& node = cfg.child(sec.name);
    for (const auto& e : sec.entries) node.set(e.key, e.value);
  }
}

void put_solve_report(Report& node, const SolveReport& rep) {
  node.set("converged", rep.converged);
  node.set("sweeps", rep.sweeps);
  node.set("final_residual", rep.final_residual);
  node.set("tolerance", rep.tolerance);
  if (!rep.wall_notes.empty()) node.set("notes", rep.wall_notes);
}

void put_ladder_report(Report& node, const RLadderReport& rep) {
  node.set("rungs", static_cast<int>(rep.R_values.size()));
  node.set("monotone_ok", rep.monotone_ok);
  node.set("settled", rep.settled);
  for (size_t k = 0; k < rep.R_values.size(); ++k) {
    Report& rung = node.child("rung_" + std::to_string(k));
    rung.set("R", rep.R_values[k]);
    if (k > 0 && k - 1 < rep.interior_deltas.size())
      rung.set("interior_delta", rep.interior_deltas[k - 1]);
  }
}

void put_ergodic_estimate(Report& node, const ErgodicEstimate& est) {
  node.set("case_tag", to_string(est.case_tag));
  node.set("c_extrapolated", est.c_extrapolated);
  node.set("theta", est.theta);
  if (!est.notes.empty()) node.set("notes", est.notes);
  Report& ladder = node.child("ladder");
  for (size_t k = 0; k < est.lambdas.size(); ++k) {
    Report& rung = ladder.child("k_" + std::to_string(k));
    rung.set("lambda", est.lambdas[k]);
    rung.set("c", est.c_values[k]);
  }
}

struct Artifacts {
  std::string dir;
  Report report;
  std::string log;

  void note(const std::string& line) { log += line + "\n"; }
  void flush() {
    atomic_write(dir + "/report.txt", report.serialize());
    atomic_write(dir + "/run.log", log);
  }
};

ErgodicOptions ergodic_options(const ExperimentSetup& setup) {
  ErgodicOptions opts = setup.ergodic;
  opts.solve = setup.solve;
  opts.ladder = setup.ladder;
  return opts;
}

int run_verify(const ExperimentSetup& setup, Artifacts& art, std::ostream& out);

}  // namespace

RunResult run_command(const std::string& command, const std::string& config_path,
                      const std::string& out_dir, int grid_n_override,
                      std::ostream& out) {
  Artifacts art;
  art.dir = out_dir;
  try {
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    return {ERGOLAB_ERR_IO, std::string("cannot create output directory: ") + e.what()};
  }

  std::optional<ExperimentSetup> loaded;
  try {
    loaded.emplace(load_setup(Config::parse_file(config_path), grid_n_override));
  } catch (const Error& e) {
    // config errors precede any artifact
    return {e.code, e.what()};
  }
  ExperimentSetup& setup = *loaded;

  art.report.set("command", command);
  echo_config(art.report, setup);
  art.note("config loaded from " + config_path);

  try {
    const Problem& problem = setup.problem;

    if (command == "exponents") {
      const Exponents& e = problem.exponents;
      const double C = boundary_constant(problem.params, problem.domain, e);
      const Uniqueness u = uniqueness_status(problem.params, problem.forcing);
      out << "gamma=" << fmt_g(e.gamma) << " tau=" << fmt_g(e.tau)
          << " grad_rate=" << fmt_g(e.grad_rate) << " C=" << fmt_g(C)
          << " uniqueness=" << to_string(u) << "\n";
      Report& res = art.report.child("result");
      res.set("gamma", e.gamma);
      res.set("tau", e.tau);
      res.set("grad_rate", e.grad_rate);
      res.set("C", C);
      res.set("uniqueness", to_string(u));
      art.note("exponents computed");
      art.flush();
      return {ERGOLAB_OK, ""};
    }

    const Grid grid = Grid::make(problem.domain, setup.grid_n);

    if (command == "solve") {
      DirichletSolution sol = solve_dirichlet(problem, setup.boundary, grid,
                                              std::nullopt, setup.solve);
      write_profile(art.dir + "/profile.csv", problem, sol.field);
      put_solve_report(art.report.child("result"), sol.report);
      out << "converged=" << (sol.report.converged ? 1 : 0)
          << " sweeps=" << sol.report.sweeps
          << " residual=" << fmt_g(sol.report.final_residual) << "\n";
      art.note("dirichlet solve finished");
      art.flush();
      return sol.report.converged ? RunResult{ERGOLAB_OK, ""}
                                  : RunResult{ERGOLAB_ERR_NOT_CONVERGED,
                                              "solver did not reach tolerance"};
    }

    if (command == "explosive") {
      const Problem p = problem.params.lambda() > 0.0 ? problem : problem.with_lambda(1.0);
      if (problem.params.lambda() <= 0.0)
        art.note("lambda <= 0 in config; explosive solve uses lambda = 1");
      ExplosiveSolution sol = solve_explosive(p, grid, setup.solve, setup.ladder);
      write_profile(art.dir + "/profile.csv", p, sol.field);
      put_solve_report(art.report.child("result"), sol.solve);
      put_ladder_report(art.report.child("ladder"), sol.ladder);
      out << "rungs=" << sol.ladder.R_values.size()
          << " settled=" << (sol.ladder.settled ? 1 : 0)
          << " monotone=" << (sol.ladder.monotone_ok ? 1 : 0)
          << " residual=" << fmt_g(sol.solve.final_residual) << "\n";
      art.note("explosive ladder finished");
      art.flush();
      return sol.ladder.settled ? RunResult{ERGOLAB_OK, ""}
                                : RunResult{ERGOLAB_ERR_LADDER_NOT_SETTLED,
                                            "interior still moving at the last rung"};
    }

    if (command == "ergodic") {
      const ErgodicOptions opts = ergodic_options(setup);
      const ErgodicEstimate est = setup.ergodic_path == "dirichlet"
                                      ? estimate_constant_dirichlet(problem, grid, opts)
                                      : estimate_constant_explosive(problem, grid, opts);
      write_profile(art.dir + "/profile.csv", problem.with_lambda(est.lambdas.back()),
                    normalized_profile(est.profile));
      put_ergodic_estimate(art.report.child("result"), est);
      out << "c=" << fmt_g(est.c_extrapolated) << " case=" << to_string(est.case_tag)
          << " rungs=" << est.lambdas.size() << "\n";
      art.note("vanishing-discount ladder finished (" + setup.ergodic_path + " path)");
      art.flush();
      return {ERGOLAB_OK, ""};
    }

    if (command == "rate") {
      GridField field;
      Problem p = problem;
      if (!setup.rate_profile.empty()) {
        field = read_profile(setup.rate_profile, problem.domain);
        art.note("profile loaded from " + setup.rate_profile);
      } else {
        p = problem.params.lambda() > 0.0 ? problem : problem.with_lambda(1.0);
        ExplosiveSolution sol = solve_explosive(p, grid, setup.solve, setup.ladder);
        field = std::move(sol.field);
        art.note("explosive profile solved for the fit");
      }
      const double C = boundary_constant(p.params, p.domain, p.exponents);
      const RateFit fit = fit_boundary_rate(field, p.exponents, C, setup.rate_window_lo,
                                            setup.rate_window_hi);
      if (!setup.rate_profile.empty())
        write_profile(art.dir + "/profile.csv", p, field);
      Report& res = art.report.child("result");
      res.set("window_lo", fit.window_lo);
      res.set("window_hi", fit.window_hi);
      res.set("points", fit.points);
      res.set("fitted_exponent", fit.fitted_exponent);
      res.set("fitted_prefactor", fit.fitted_prefactor);
      res.set("r_squared", fit.r_squared);
      res.set("expected_exponent", -p.exponents.gamma);
      res.set("expected_prefactor", C);
      out << "exponent=" << fmt_g(fit.fitted_exponent)
          << " prefactor=" << fmt_g(fit.fitted_prefactor)
          << " r_squared=" << fmt_g(fit.r_squared) << "\n";
      art.flush();
      return {ERGOLAB_OK, ""};
    }

    if (command == "verify") {
      const int failures = run_verify(setup, art, out);
      art.flush();
      return failures == 0 ? RunResult{ERGOLAB_OK, ""}
                           : RunResult{ERGOLAB_ERR_CHECK_FAILED,
                                       std::to_string(failures) + " verify check(s) failed"};
    }

    return {ERGOLAB_ERR_INVALID_ARGUMENT, "unknown command '" + command + "'"};
  } catch (const Error& e) {
    art.report.child("error")
        .set("status", ergolab_status_name(e.code))
        .set("message", e.what());
    art.note(std::string("error: ") + e.what());
    art.flush();
    return {e.code, e.what()};
  }
}

namespace {

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

void emit(std::ostream& out, Report& checks, std::vector<CheckLine>& all,
          const CheckLine& line) {
  out << "check=" << line.name << " pass=" << (line.pass ? 1 : 0);
  if (!line.detail.empty()) out << " " << line.detail;
  out << "\n";
  Report& node = checks.child(line.name);
  node.set("pass", line.pass);
  if (!line.detail.empty()) node.set("detail", line.detail);
  all.push_back(line);
}

int run_verify(const ExperimentSetup& setup, Artifacts& art, std::ostream& out) {
  const Problem& problem = setup.problem;
  const Problem lam = problem.params.lambda() > 0.0 ? problem : problem.with_lambda(1.0);
  Report& checks = art.report.child("checks");
  std::vector<CheckLine> lines;

  for (const std::string& name : setup.verify_checks) {
    if (name == "barriers") {
      CheckLine line{"barriers"};
      const double half = problem.domain.max_distance();
      // interior lower barrier: shrink the collar until the stated margin
      // dominates the forcing bound
      bool interior_ok = false;
      double delta0 = 0.2 * half;
      for (int k = 0; k < 24 && !interior_ok; ++k, delta0 *= 0.5) {
        const BarrierSpec spec =
            make_interior_lower(lam.params, 0.1 * delta0, delta0);
        const InequalityReport rep = check_inequality(
            spec, lam, 0.0, Side::sub, Region{0.0, delta0}, 2001);
        interior_ok = rep.pass;
      }
      bool super_ok = false, mu_ok = true;
      const BarrierSpec sup = make_explosive_super(lam, 0.5, 0.0);
      super_ok = check_inequality(sup, lam, 0.0, Side::super,
                                  Region{1e-6 * half, half}, 4001)
                     .pass;
      if (problem.domain.kind == Domain1D::Kind::interval) {
        const Problem noz = problem.with_lambda(0.0);
        const double bound = mu_star_upper_bound(noz);
        const BarrierSpec test = make_mu_star_test(noz.params, noz.domain);
        mu_ok = check_inequality(test, noz, bound, Side::sub,
                                 Region{0.0, noz.domain.extent()}, 2001)
                    .pass;
      }
      line.pass = interior_ok && super_ok && mu_ok;
      line.detail = std::string("interior=") + (interior_ok ? "1" : "0") +
                    " super=" + (super_ok ? "1" : "0") + " mu_star=" + (mu_ok ? "1" : "0");
      emit(out, checks, lines, line);
    } else if (name == "comparison") {
      CheckLine line{"comparison"};
      const Grid grid = Grid::make(problem.domain, setup.grid_n);
      const BoundaryData lo_bc = grid.is_ball() ? BoundaryData::radial(0.0)
                                                : BoundaryData::interval(0.0, 0.0);
      const BoundaryData hi_bc = grid.is_ball() ? BoundaryData::radial(1.0)
                                                : BoundaryData::interval(1.0, 1.0);
      DirichletSolution lo = solve_dirichlet(lam, lo_bc, grid, std::nullopt, setup.solve);
      DirichletSolution hi = solve_dirichlet(lam, hi_bc, grid, std::nullopt, setup.solve);
      require_converged(lo.report);
      require_converged(hi.report);
      const ComparisonReport rep = check_comparison(lam, lo, lam, hi);
      line.pass = rep.pass;
      line.detail = "worst_gap=" + fmt_g(rep.worst_gap);
      emit(out, checks, lines, line);
    } else if (name == "gradient") {
      CheckLine line{"gradient"};
      const Grid coarse = Grid::make(problem.domain, setup.grid_n);
      const Grid fine = coarse.refined();
      ExplosiveSolution a = solve_explosive(lam, coarse, setup.solve, setup.ladder);
      ExplosiveSolution b = solve_explosive(lam, fine, setup.solve, setup.ladder);
      const GradientBoundReport rep =
          check_gradient_bound(a.field, b.field, problem.exponents);
      line.pass = rep.pass;
      line.detail = "ratio=" + fmt_g(rep.ratio);
      emit(out, checks, lines, line);
    } else if (name == "mu_star") {
      CheckLine line{"mu_star"};
      if (problem.domain.kind != Domain1D::Kind::interval) {
        line.pass = true;
        line.detail = "skipped=ball_domain";
      } else {
        const double bound = mu_star_upper_bound(problem);
        const double shifted = mu_star_upper_bound(problem.with_forcing_shift(1.0));
        const double err = std::abs(shifted - (bound - 1.0));
        line.pass = err <= 1e-9 * (1.0 + std::abs(bound));
        line.detail = "bound=" + fmt_g(bound) + " shift_error=" + fmt_g(err);
      }
      emit(out, checks, lines, line);
    } else if (name == "domain") {
      CheckLine line{"domain"};
      if (setup.verify_deltas.empty()) {
        line.pass = true;
        line.detail = "skipped=no_deltas";
      } else {
        std::vector<Domain1D> domains;
        std::vector<double> deltas = setup.verify_deltas;
        std::sort(deltas.rbegin(), deltas.rend());
        for (double d : deltas) domains.push_back(problem.domain.inner(d));
        domains.push_back(problem.domain);
        const DomainMonotonicityReport rep = domain_monotonicity(
            lam, domains, setup.grid_n, ergodic_options(setup));
        line.pass = rep.nondecreasing;
        std::string cs;
        for (double c : rep.c_values) cs += (cs.empty() ? "" : ",") + fmt_g(c);
        line.detail = "c=" + cs;
      }
      emit(out, checks, lines, line);
    } else if (name == "rate") {
      CheckLine line{"rate"};
      const Grid grid = Grid::make(problem.domain, setup.grid_n);
      ExplosiveSolution sol = solve_explosive(lam, grid, setup.solve, setup.ladder);
      const double C = boundary_constant(lam.params, lam.domain, lam.exponents);
      const RateFit fit = fit_boundary_rate(sol.field, lam.exponents, C,
                                            setup.rate_window_lo, setup.rate_window_hi);
      const bool exp_ok = lam.exponents.gamma == 0.0 ||
                          std::abs(fit.fitted_exponent + lam.exponents.gamma) <= 0.05;
      const bool pre_ok = std::abs(fit.fitted_prefactor / C - 1.0) <= 0.10;
      line.pass = exp_ok && pre_ok;
      line.detail = "exponent=" + fmt_g(fit.fitted_exponent) +
                    " prefactor=" + fmt_g(fit.fitted_prefactor);
      emit(out, checks, lines, line);
    } else {
      throw Error(ERGOLAB_ERR_CONFIG, "unknown verify check '" + name + "'");
    }
  }

  int failures = 0;
  for (const auto& l : lines)
    if (!l.pass) ++failures;
  out << "all_pass=" << (failures == 0 ? 1 : 0) << "\n";
  art.report.set("all_pass", failures == 0);
  art.note("verify finished");
  return failures;
}

}  // namespace

}  // namespace ergolab
