#include "barriers.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <vector>

namespace ergolab {

namespace {

// Sum of terms c * t^p * (ln t)^(0|1) plus a constant; exact derivatives.
struct TermSum {
  struct Term {
    double c, p;
    bool log;
  };
  std::vector<Term> terms;
  double constant = 0.0;

  BarrierJet jet(double t) const {
    BarrierJet j;
    j.value = constant;
    const double lt = std::log(t);
    for (const Term& tm : terms) {
      const double tp = std::pow(t, tm.p);
      if (!tm.log) {
        j.value += tm.c * tp;
        j.d1 += tm.c * tm.p * tp / t;
        j.d2 += tm.c * tm.p * (tm.p - 1.0) * tp / (t * t);
      } else {
        j.value += tm.c * tp * lt;
        j.d1 += tm.c * (tp / t) * (tm.p * lt + 1.0);
        j.d2 += tm.c * (tp / (t * t)) * (tm.p * (tm.p - 1.0) * lt + 2.0 * tm.p - 1.0);
      }
    }
    return j;
  }
};

// Blow-up branch main(d) + sign*corr(d) + offset, as a TermSum in t (= d or
// d+s). gamma = 0 switches to the |log| forms (valid for t < 1).
TermSum blowup_branch(double C, double gamma, double nu, double gamma1, double sign,
                      double offset) {
  TermSum ts;
  ts.constant = offset;
  if (gamma > 0.0) {
    ts.terms.push_back({C, -gamma, false});
    if (nu != 0.0) ts.terms.push_back({sign * nu, gamma1 - gamma, false});
  } else {
    ts.terms.push_back({-C, 0.0, true});
    if (nu != 0.0) ts.terms.push_back({-sign * nu, gamma1, true});
  }
  return ts;
}

double blowup_value(double C, double gamma, double d) {
  return gamma > 0.0 ? C * std::pow(d, -gamma) : C * std::abs(std::log(d));
}

double correction_value(double nu, double gamma, double gamma1, double d) {
  if (nu == 0.0) return 0.0;
  return gamma > 0.0 ? nu * std::pow(d, gamma1 - gamma)
                     : nu * std::pow(d, gamma1) * std::abs(std::log(d));
}

BarrierJet collar_jet(const BarrierSpec& spec, double d) {
  // C g(delta) exp(1/(d - 2 delta) + 1/delta) + E on [delta, 2 delta)
  const double gd = blowup_value(spec.prefactor, spec.gamma, spec.delta);
  const double w = d - 2.0 * spec.delta;  // < 0 inside the collar
  BarrierJet j;
  if (w >= 0.0) {
    j.value = spec.E;
    return j;
  }
  const double q = 1.0 / w + 1.0 / spec.delta;
  const double eq = std::exp(q);
  const double q1 = -1.0 / (w * w);
  const double q2 = 2.0 / (w * w * w);
  j.value = gd * eq + spec.E;
  j.d1 = gd * eq * q1;
  j.d2 = gd * eq * (q2 + q1 * q1);
  return j;
}

void require_prefactor(const BarrierSpec& spec) {
  if (!std::isfinite(spec.prefactor))
    throw Error(ERGOLAB_ERR_UNSET_PREFACTOR, "barrier prefactor not set");
}

double sub_constant_branch(const BarrierSpec& spec) {
  const double t = spec.delta + spec.s;
  return blowup_value(spec.prefactor, spec.gamma, t) -
         correction_value(spec.nu, spec.gamma, spec.gamma1, t) - spec.D;
}

}  // namespace

int barrier_jets(const BarrierSpec& spec, double coord, BarrierJet out[2]) {
  require_prefactor(spec);
  switch (spec.kind) {
    case BarrierKind::interior_lower: {
      TermSum ts;
      if (spec.gamma > 0.0) {
        ts.terms.push_back({spec.prefactor, -spec.gamma, false});
        ts.constant = -spec.prefactor * std::pow(spec.delta0 + spec.s, -spec.gamma);
      } else {
        ts.terms.push_back({-spec.prefactor, 0.0, true});
        ts.constant = spec.prefactor * std::log(spec.delta0 + spec.s);
      }
      out[0] = ts.jet(coord + spec.s);
      return 1;
    }
    case BarrierKind::mu_star_test: {
      TermSum ts;
      ts.terms.push_back({spec.prefactor, spec.power, false});
      out[0] = ts.jet(coord);
      return 1;
    }
    case BarrierKind::explosive_super: {
      const double kink_tol = 1e-9 * std::max(spec.delta, 1.0);
      if (coord >= 2.0 * spec.delta) {
        out[0] = BarrierJet{spec.E, 0.0, 0.0};
        return 1;
      }
      const TermSum zone1 =
          blowup_branch(spec.prefactor, spec.gamma, spec.nu, spec.gamma1, +1.0, spec.D);
      if (std::abs(coord - spec.delta) <= kink_tol) {
        out[0] = zone1.jet(coord);
        out[1] = collar_jet(spec, coord);
        return 2;
      }
      out[0] = coord < spec.delta ? zone1.jet(coord) : collar_jet(spec, coord);
      return 1;
    }
    case BarrierKind::explosive_sub: {
      const TermSum outer =
          blowup_branch(spec.prefactor, spec.gamma, spec.nu, spec.gamma1, -1.0, -spec.D);
      const double cbr = sub_constant_branch(spec);
      if (coord > spec.delta) {
        out[0] = BarrierJet{cbr, 0.0, 0.0};
        return 1;
      }
      const BarrierJet oj = outer.jet(coord + spec.s);
      const double scale = std::max({std::abs(oj.value), std::abs(cbr), 1.0});
      if (std::abs(oj.value - cbr) <= 1e-9 * scale || coord == spec.delta) {
        out[0] = oj.value >= cbr ? oj : BarrierJet{cbr, 0.0, 0.0};
        out[1] = oj.value >= cbr ? BarrierJet{cbr, 0.0, 0.0} : oj;
        return 2;
      }
      out[0] = oj.value > cbr ? oj : BarrierJet{cbr, 0.0, 0.0};
      return 1;
    }
  }
  throw Error(ERGOLAB_ERR_INTERNAL, "unreachable barrier kind");
}

BarrierJet barrier_jet(const BarrierSpec& spec, double coord) {
  BarrierJet jets[2];
  barrier_jets(spec, coord, jets);
  return jets[0];
}

double eval_barrier(const BarrierSpec& spec, const ValidatedParams&,
                    const Domain1D& dom, double x) {
  if (!dom.contains(x))
    throw Error(ERGOLAB_ERR_OUTSIDE_DOMAIN, "evaluation point outside the domain closure");
  const double coord =
      spec.kind == BarrierKind::mu_star_test ? x - dom.coord_lo() : dom.distance(x);
  return barrier_jet(spec, coord).value;
}

BarrierSpec make_interior_lower(const ValidatedParams& p, double s, double delta0) {
  if (!(s > 0.0) || !(delta0 > 0.0))
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "interior barrier needs s > 0 and delta0 > 0");
  const Exponents e = compute_exponents(p.alpha(), p.beta());
  BarrierSpec spec;
  spec.kind = BarrierKind::interior_lower;
  spec.gamma = e.gamma;
  spec.s = s;
  spec.delta0 = delta0;
  if (e.gamma > 0.0) {
    spec.prefactor =
        std::pow((e.gamma + 1.0) * p.a() / 2.0, 1.0 / (p.beta() - p.alpha() - 1.0)) / e.gamma;
  } else {
    spec.prefactor = p.a() / 2.0;
  }
  return spec;
}

BarrierSpec make_mu_star_test(const ValidatedParams& p, const Domain1D& dom) {
  if (dom.kind != Domain1D::Kind::interval)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "the power test function lives on intervals");
  const double R = dom.extent();
  const double alpha = p.alpha(), beta = p.beta();
  BarrierSpec spec;
  spec.kind = BarrierKind::mu_star_test;
  spec.power = (alpha + 2.0) / (alpha + 1.0);
  spec.prefactor = std::pow(p.a() / (2.0 * (alpha + 1.0)), 1.0 / (beta - alpha - 1.0)) *
                   ((alpha + 1.0) / (alpha + 2.0)) *
                   std::pow(R, -beta / ((alpha + 1.0) * (beta - alpha - 1.0)));
  return spec;
}

namespace {

// Margin G(barrier) - (f + mu) at a single coordinate, for one jet, at one
// representative point. Returns false (skip) where the evaluation is
// singular or overflows.
bool margin_at(const Problem& problem, const BarrierSpec& spec, double coord,
               const BarrierJet& jet, bool left_rep, double mu, double& margin,
               double& roundoff) {
  const auto& p = problem.params;
  const Domain1D& dom = problem.domain;
  const bool mu_star = spec.kind == BarrierKind::mu_star_test;

  double x, d;
  if (mu_star) {
    x = dom.coord_lo() + coord;
    d = dom.distance(x);
  } else {
    d = coord;
    if (dom.kind == Domain1D::Kind::interval)
      x = left_rep ? dom.lo + d : dom.hi - d;
    else
      x = dom.radius - d;
  }

  double m = jet.d2;
  double t = 0.0;
  int mult = 0;
  double grad = jet.d1;
  if (!mu_star && dom.kind == Domain1D::Kind::ball) {
    mult = dom.tangential_multiplicity();
    const double r = dom.radius - d;
    grad = -jet.d1;  // radial derivative of B(R - r)
    t = r > 0.0 ? grad / r : m;
  }

  double f_val;
  try {
    f_val = problem.forcing.at(x, d);
  } catch (const Error&) {
    return false;
  }

  const double F_val = eval_F(p.op(), p.a(), p.A(), m, t, mult);
  const double g = std::abs(grad);
  double diffusion;
  if (g == 0.0) {
    if (p.alpha() < 0.0 && F_val != 0.0) return false;
    diffusion = p.alpha() == 0.0 ? F_val : 0.0;
  } else {
    diffusion = std::pow(g, p.alpha()) * F_val;
  }
  const double hamiltonian = g == 0.0 ? 0.0 : std::pow(g, p.beta());
  const double zero_order = p.lambda() * odd_pow(p.alpha(), jet.value);
  margin = -diffusion + hamiltonian + zero_order - f_val - mu;
  if (!std::isfinite(margin)) return false;
  roundoff = 512.0 * DBL_EPSILON *
             (std::abs(diffusion) + std::abs(hamiltonian) + std::abs(zero_order) +
              std::abs(f_val) + std::abs(mu));
  return true;
}

}  // namespace

InequalityReport check_inequality(const BarrierSpec& spec, const Problem& problem,
                                  double mu, Side side, Region region, int n) {
  if (!(region.hi > region.lo) || n < 2)
    throw Error(ERGOLAB_ERR_REGION_EMPTY, "empty check region");
  require_prefactor(spec);

  InequalityReport rep;
  rep.min_margin = 1e300;
  rep.max_margin = -1e300;
  double tol_at_min = 0.0, tol_at_max = 0.0;

  const bool interval = problem.domain.kind == Domain1D::Kind::interval;
  const bool mu_star = spec.kind == BarrierKind::mu_star_test;
  const int reps = (!mu_star && interval) ? 2 : 1;

  for (int i = 0; i < n; ++i) {
    const double coord = region.lo + (region.hi - region.lo) * i / (n - 1);
    BarrierJet jets[2];
    const int nj = barrier_jets(spec, coord, jets);
    if (nj == 2) ++rep.nonsmooth;
    for (int j = 0; j < nj; ++j) {
      for (int r = 0; r < reps; ++r) {
        double margin, roundoff;
        if (!margin_at(problem, spec, coord, jets[j], r == 0, mu, margin, roundoff)) {
          ++rep.skipped;
          continue;
        }
        ++rep.checked;
        if (margin < rep.min_margin) {
          rep.min_margin = margin;
          rep.at_min = coord;
          tol_at_min = roundoff;
        }
        if (margin > rep.max_margin) {
          rep.max_margin = margin;
          rep.at_max = coord;
          tol_at_max = roundoff;
        }
      }
    }
  }
  if (rep.checked == 0)
    throw Error(ERGOLAB_ERR_REGION_EMPTY, "no admissible evaluation points in region");

  if (side == Side::sub) {
    rep.tol = 1e-8 + tol_at_max;
    rep.pass = rep.max_margin <= rep.tol;
  } else {
    rep.tol = 1e-8 + tol_at_min;
    rep.pass = rep.min_margin >= -rep.tol;
  }
  return rep;
}

double collar_operator_bound(const BarrierSpec& spec, const Problem& problem,
                             int samples) {
  const auto& p = problem.params;
  const Domain1D& dom = problem.domain;
  double bound = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double d = spec.delta * (1.0 + static_cast<double>(i) / samples);
    const BarrierJet jet = collar_jet(spec, d);
    const int reps = dom.kind == Domain1D::Kind::interval ? 2 : 1;
    for (int r = 0; r < reps; ++r) {
      double m = jet.d2, t = 0.0, grad = jet.d1;
      int mult = 0;
      if (dom.kind == Domain1D::Kind::ball) {
        mult = dom.tangential_multiplicity();
        const double rr = dom.radius - d;
        grad = -jet.d1;
        t = rr > 0.0 ? grad / rr : m;
      }
      const double g = std::abs(grad);
      if (g == 0.0) continue;
      const double F_val = eval_F(p.op(), p.a(), p.A(), m, t, mult);
      const double v = -std::pow(g, p.alpha()) * F_val + std::pow(g, p.beta());
      if (std::isfinite(v)) bound = std::max(bound, std::abs(v));
    }
  }
  return bound;
}

namespace {

// Admissibility of a collar width: the exponential branch must leave d =
// delta steeper than the blow-up branch, and the zone-1 margins must have
// the right sign for both envelope sides.
bool collar_admissible(const Problem& problem, double C, const Exponents& e, double nu,
                       double gamma1, double s, double delta) {
  BarrierSpec sup;
  sup.kind = BarrierKind::explosive_super;
  sup.gamma = e.gamma;
  sup.delta = delta;
  sup.nu = nu;
  sup.gamma1 = gamma1;
  sup.prefactor = C;
  sup.D = 0.0;
  sup.E = correction_value(nu, e.gamma, gamma1, delta);

  BarrierSpec sub;
  sub.kind = BarrierKind::explosive_sub;
  sub.gamma = e.gamma;
  sub.delta = delta;
  sub.nu = nu;
  sub.gamma1 = gamma1;
  sub.s = s;
  sub.prefactor = C;
  sub.D = blowup_value(C, e.gamma, delta) + 1.0;

  const double eps = delta * 1e-9;
  const BarrierJet zone1 = barrier_jet(sup, delta - eps);
  const BarrierJet collar = collar_jet(sup, delta + eps);
  if (!(collar.d1 < zone1.d1)) return false;  // both negative: steeper detach

  const int reps = problem.domain.kind == Domain1D::Kind::interval ? 2 : 1;
  const int probes = 160;
  for (int i = 0; i <= probes; ++i) {
    const double d = delta * std::pow(10.0, -6.0 * (1.0 - static_cast<double>(i) / probes));
    BarrierJet jsup[2], jsub[2];
    barrier_jets(sup, d, jsup);
    const int nj = barrier_jets(sub, d, jsub);
    double margin, roundoff;
    for (int r = 0; r < reps; ++r) {
      if (margin_at(problem, sup, d, jsup[0], r == 0, 0.0, margin, roundoff) &&
          margin < -roundoff - 1e-10)
        return false;
      for (int j = 0; j < nj; ++j) {
        // constant branches satisfy the inequality through the zero-order
        // term once D is fixed; only the decaying branch is probed here
        if (jsub[j].d1 == 0.0) continue;
        if (margin_at(problem, sub, d, jsub[j], r == 0, 0.0, margin, roundoff) &&
            margin > roundoff + 1e-10)
          return false;
      }
    }
  }
  return true;
}

}  // namespace

double default_collar(const Problem& problem, double nu, double gamma1, double s) {
  const Exponents& e = problem.exponents;
  const double C = boundary_constant(problem.params, problem.domain, e);
  double hi = std::min({problem.domain.extent() / 4.0,
                        0.45 * problem.domain.max_distance(), 0.4});
  if (collar_admissible(problem, C, e, nu, gamma1, s, hi)) return hi;

  double lo = hi;
  bool found = false;
  for (int k = 0; k < 60 && !found; ++k) {
    lo *= 0.5;
    if (lo < 1e-12) break;
    found = collar_admissible(problem, C, e, nu, gamma1, s, lo);
  }
  if (!found)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT,
                "no admissible collar width found for the barrier pair");
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (collar_admissible(problem, C, e, nu, gamma1, s, mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

BarrierSpec make_explosive_super(const Problem& problem, double nu, double gamma1,
                                 double delta) {
  const Exponents& e = problem.exponents;
  if (nu < 0.0) throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "nu must be >= 0");
  if (gamma1 < 0.0 || gamma1 >= 1.0 || (e.gamma > 0.0 && gamma1 >= e.gamma))
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT,
                "gamma1 must lie in [0, min(1, gamma)) for the explosive envelopes");
  if (!(problem.params.lambda() > 0.0))
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "explosive envelopes need lambda > 0");

  BarrierSpec spec;
  spec.kind = BarrierKind::explosive_super;
  spec.gamma = e.gamma;
  spec.nu = nu;
  spec.gamma1 = gamma1;
  spec.prefactor = boundary_constant(problem.params, problem.domain, e);
  spec.delta = delta > 0.0 ? delta : default_collar(problem, nu, gamma1);
  spec.E = 0.0;
  spec.D = 0.0;

  const double k4 = collar_operator_bound(spec, problem);
  // sup |f| over the inner domain {d >= delta}
  double fsup = 0.0;
  const int samples = 2048;
  for (int i = 0; i <= samples; ++i) {
    const double d = spec.delta +
                     (problem.domain.max_distance() - spec.delta) * i / samples;
    const double xl = problem.domain.kind == Domain1D::Kind::interval
                          ? problem.domain.lo + d
                          : problem.domain.radius - d;
    fsup = std::max(fsup, std::abs(problem.forcing.at(xl, d)));
    if (problem.domain.kind == Domain1D::Kind::interval)
      fsup = std::max(fsup, std::abs(problem.forcing.at(problem.domain.hi - d, d)));
  }
  spec.D = std::pow((fsup + k4) / problem.params.lambda(),
                    1.0 / (1.0 + problem.params.alpha()));
  spec.E = correction_value(nu, e.gamma, gamma1, spec.delta) + spec.D;
  return spec;
}

BarrierSpec make_explosive_sub(const Problem& problem, double nu, double gamma1,
                               double s, double delta) {
  const Exponents& e = problem.exponents;
  if (nu < 0.0 || s < 0.0)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "nu and s must be >= 0");
  if (gamma1 < 0.0 || gamma1 >= 1.0 || (e.gamma > 0.0 && gamma1 >= e.gamma))
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT,
                "gamma1 must lie in [0, min(1, gamma)) for the explosive envelopes");
  if (!(problem.params.lambda() > 0.0))
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "explosive envelopes need lambda > 0");

  BarrierSpec spec;
  spec.kind = BarrierKind::explosive_sub;
  spec.gamma = e.gamma;
  spec.nu = nu;
  spec.gamma1 = gamma1;
  spec.s = s;
  spec.prefactor = boundary_constant(problem.params, problem.domain, e);
  spec.delta = delta > 0.0 ? delta : default_collar(problem, nu, gamma1, s);

  const double fneg = std::max(0.0, -problem.forcing.regular_min(problem.domain));
  spec.D = blowup_value(spec.prefactor, e.gamma, spec.delta) +
           std::pow(fneg / problem.params.lambda(), 1.0 / (1.0 + problem.params.alpha()));
  return spec;
}

double envelope_upper(const Problem& problem, double nu, double gamma1, double D,
                      double d) {
  const double C = boundary_constant(problem.params, problem.domain, problem.exponents);
  const double g = problem.exponents.gamma;
  return blowup_value(C, g, d) + correction_value(nu, g, gamma1, d) + D;
}

double envelope_lower(const Problem& problem, double nu, double gamma1, double D,
                      double d, double s) {
  const double C = boundary_constant(problem.params, problem.domain, problem.exponents);
  const double g = problem.exponents.gamma;
  return blowup_value(C, g, d + s) - correction_value(nu, g, gamma1, d + s) - D;
}

}  // namespace ergolab
