#include "verify.hpp"

#include <algorithm>
#include <cmath>

namespace ergolab {

RateFit fit_boundary_rate(const GridField& field, const Exponents& e, double C,
                          std::optional<double> window_lo,
                          std::optional<double> window_hi) {
  const Grid& g = field.grid;
  RateFit fit;
  fit.window_lo = window_lo.value_or(5.0 * g.h);
  fit.window_hi = window_hi.value_or(0.05 * g.dom.extent());

  std::vector<double> xs, ys;
  for (int i = 0; i < g.n; ++i) {
    const double d = g.d_values[i];
    if (d < fit.window_lo || d > fit.window_hi) continue;
    const double u = field.values[i];
    if (e.gamma > 0.0) {
      if (u <= 0.0) continue;
      xs.push_back(std::log(d));
      ys.push_back(std::log(u));
    } else {
      xs.push_back(std::abs(std::log(d)));
      ys.push_back(u);
    }
  }
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 5)
    throw Error(ERGOLAB_ERR_WINDOW_TOO_NARROW,
                "rate window holds only " + std::to_string(fit.points) + " nodes");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int k = 0; k < fit.points; ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
    syy += ys[k] * ys[k];
  }
  const double nn = fit.points;
  const double denom = nn * sxx - sx * sx;
  const double slope = (nn * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / nn;
  const double ss_tot = syy - sy * sy / nn;
  double ss_res = 0.0;
  for (int k = 0; k < fit.points; ++k) {
    const double r = ys[k] - (slope * xs[k] + intercept);
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  fit.fitted_exponent = slope;
  fit.fitted_prefactor = e.gamma > 0.0 ? std::exp(intercept) : slope;
  (void)C;
  return fit;
}

namespace {

double gradient_q(const GridField& field, const Exponents& e) {
  const Grid& g = field.grid;
  double q = 0.0;
  for (int i = 1; i <= g.n - 2; ++i) {
    const double grad = (field.values[i + 1] - field.values[i - 1]) / (2.0 * g.h);
    const double d = g.d_values[i];
    if (d <= 0.0) continue;
    q = std::max(q, std::abs(grad) * std::pow(d, e.grad_rate));
  }
  return q;
}

}  // namespace

GradientBoundReport check_gradient_bound(const GridField& coarse, const GridField& fine,
                                         const Exponents& e) {
  GradientBoundReport rep;
  rep.Q_coarse = gradient_q(coarse, e);
  rep.Q_fine = gradient_q(fine, e);
  rep.ratio = rep.Q_coarse > 0.0 ? rep.Q_fine / rep.Q_coarse : 1.0;
  rep.pass = std::isfinite(rep.Q_coarse) && std::isfinite(rep.Q_fine) && rep.ratio <= 1.2;
  return rep;
}

ComparisonReport check_comparison(const Problem& low_problem,
                                  const DirichletSolution& low,
                                  const Problem& high_problem,
                                  const DirichletSolution& high) {
  const Grid& g = low.field.grid;
  if (high.field.grid.n != g.n)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "comparison needs a shared grid");

  // ordered data: f_low <= f_high, g_low <= g_high
  double min_fgap = 1e300;
  for (int i = g.interior_lo(); i <= g.interior_hi(); ++i) {
    const double fl = low_problem.forcing.at(g.nodes[i], g.d_values[i]);
    const double fh = high_problem.forcing.at(g.nodes[i], g.d_values[i]);
    min_fgap = std::min(min_fgap, fh - fl);
  }
  if (min_fgap < 0.0)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "forcing terms are not ordered");
  if (low.field.boundary.lo > high.field.boundary.lo ||
      low.field.boundary.hi > high.field.boundary.hi)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "boundary data are not ordered");

  const double lambda = low_problem.params.lambda();
  const double alpha = low_problem.params.alpha();
  if (!(lambda > 0.0)) {
    const bool strict_gap = min_fgap > 0.0;
    double fmax = -1e300;
    for (int i = g.interior_lo(); i <= g.interior_hi(); ++i)
      fmax = std::max(fmax,
                      high_problem.forcing.at(g.nodes[i], g.d_values[i]));
    const bool negative_forcing = fmax < 0.0;
    if (!strict_gap && alpha != 0.0 && !negative_forcing)
      throw Error(ERGOLAB_ERR_HYPOTHESIS_UNMET,
                  "comparison without zero-order term needs a strict forcing gap, "
                  "alpha = 0, or strictly negative forcing");
  }

  ComparisonReport rep;
  rep.allowance = 1e-6 + low.report.final_residual + high.report.final_residual;
  rep.worst_gap = -1e300;
  for (int i = 0; i < g.n; ++i) {
    const double gap = low.field.values[i] - high.field.values[i];
    if (gap > rep.worst_gap) {
      rep.worst_gap = gap;
      rep.worst_node = i;
    }
  }
  rep.pass = rep.worst_gap <= rep.allowance;
  return rep;
}

double mu_star_upper_bound(const Problem& problem, int n_fine) {
  const Problem pr = problem.with_lambda(0.0);
  const BarrierSpec spec = make_mu_star_test(pr.params, pr.domain);
  const Region region{0.0, pr.domain.extent()};
  // max of G0(phi) - f is exactly the sub-solution margin at mu = 0
  const InequalityReport rep =
      check_inequality(spec, pr, 0.0, Side::sub, region, n_fine);
  return rep.max_margin;
}

DomainMonotonicityReport domain_monotonicity(const Problem& problem,
                                             const std::vector<Domain1D>& domains,
                                             int grid_n, const ErgodicOptions& opts) {
  if (domains.size() < 2)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "need at least two nested domains");

  DomainMonotonicityReport rep;
  std::vector<double> uncertainties;
  for (const Domain1D& dom : domains) {
    const Problem p = problem.with_domain(dom);
    const Grid grid = Grid::make(dom, grid_n);
    const ErgodicEstimate est = estimate_constant_explosive(p, grid, opts);
    rep.c_values.push_back(est.c_extrapolated);
    const int n = static_cast<int>(est.c_values.size());
    const double last_step = n >= 2
        ? std::abs(est.c_values[n - 1] - est.c_values[n - 2])
        : 0.0;
    uncertainties.push_back(last_step + 1e-3 * (1.0 + std::abs(est.c_extrapolated)));
  }

  double cmax = 0.0;
  for (double c : rep.c_values) cmax = std::max(cmax, std::abs(c));
  rep.tolerance = 0.01 * (1.0 + cmax);

  rep.nondecreasing = true;
  for (size_t k = 0; k + 1 < rep.c_values.size(); ++k)
    if (rep.c_values[k + 1] < rep.c_values[k] - rep.tolerance) rep.nondecreasing = false;

  // strict increase is only claimed under the hypotheses that support it
  const double sup_f = problem.forcing.regular_max(problem.domain);
  rep.strict_applicable =
      problem.params.alpha() == 0.0 || sup_f + rep.c_values.back() < 0.0;
  if (rep.strict_applicable) {
    rep.strict_pass = true;
    for (size_t k = 0; k + 1 < rep.c_values.size(); ++k) {
      const double margin = 3.0 * (uncertainties[k] + uncertainties[k + 1]);
      if (!(rep.c_values[k + 1] - rep.c_values[k] > margin)) rep.strict_pass = false;
    }
  }
  return rep;
}

}  // namespace ergolab
