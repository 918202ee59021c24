#pragma once

#include <limits>

#include "model.hpp"

namespace ergolab {

enum class BarrierKind { interior_lower, explosive_super, explosive_sub, mu_star_test };

enum class Side { sub, super };

// Closed-form barrier description. `prefactor` is sigma for interior_lower,
// the boundary constant C for the explosive envelopes, and the power-law
// coefficient for mu_star_test. delta/delta0/s/nu/gamma1/D as in the zone
// formulas; E is the interior plateau of the glued super-solution.
struct BarrierSpec {
  BarrierKind kind = BarrierKind::interior_lower;
  double gamma = 0.0;
  double s = 0.0;
  double delta = 0.0;
  double delta0 = 0.0;
  double nu = 0.0;
  double gamma1 = 0.0;
  double D = 0.0;
  double E = 0.0;
  double prefactor = std::numeric_limits<double>::quiet_NaN();
  double power = 0.0;  // mu_star_test exponent (alpha+2)/(alpha+1)
};

// Value and first/second derivatives with respect to the barrier coordinate
// (boundary distance d, or the first coordinate for mu_star_test).
struct BarrierJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

BarrierSpec make_interior_lower(const ValidatedParams& p, double s, double delta0);
BarrierSpec make_mu_star_test(const ValidatedParams& p, const Domain1D& dom);

// Three-zone glued super-solution of the explosive problem. delta <= 0
// selects the collar width by bisection; D is then set from the measured
// operator bound on the exponential collar and E = corr(delta) + D.
BarrierSpec make_explosive_super(const Problem& problem, double nu, double gamma1,
                                 double delta = 0.0);
// Shifted sub-solution (max of the decaying branch and a constant).
BarrierSpec make_explosive_sub(const Problem& problem, double nu, double gamma1,
                               double s, double delta = 0.0);

// One-sided jets at the given coordinate; returns 1 away from branch
// switches, 2 at them.
int barrier_jets(const BarrierSpec& spec, double coord, BarrierJet out[2]);
BarrierJet barrier_jet(const BarrierSpec& spec, double coord);

double eval_barrier(const BarrierSpec& spec, const ValidatedParams& p,
                    const Domain1D& dom, double x);

// Measured bound on |−|w'|^a F(w'') + |w'|^b| over the exponential collar
// [delta, 2 delta]; plays the role of the non-explicit collar constant.
double collar_operator_bound(const BarrierSpec& spec, const Problem& problem,
                             int samples = 4096);

// Largest collar width for which the zone margins have the right sign and
// the exponential branch detaches below the blow-up branch at d = delta.
double default_collar(const Problem& problem, double nu, double gamma1, double s = 0.0);

struct Region {
  double lo = 0.0;
  double hi = 0.0;
};

struct InequalityReport {
  bool pass = false;
  double min_margin = 0.0;
  double max_margin = 0.0;
  double at_min = 0.0;
  double at_max = 0.0;
  int checked = 0;
  int skipped = 0;      // nodes where the operator is singular/overflows
  int nonsmooth = 0;    // branch-switch nodes (flagged, both sides tested)
  double tol = 0.0;     // allowance applied at the binding node
};

// Certifies G(barrier) <= f + mu (side = sub) or >= f + mu (side = super)
// over a coordinate region, using the analytic jets. The margin is
// G(barrier) - (f + mu); interval domains are checked at both points
// sharing each distance value.
InequalityReport check_inequality(const BarrierSpec& spec, const Problem& problem,
                                  double mu, Side side, Region region, int n);

// Boundary-law envelopes (blow-up branch extended to the whole domain).
double envelope_upper(const Problem& problem, double nu, double gamma1, double D,
                      double d);
double envelope_lower(const Problem& problem, double nu, double gamma1, double D,
                      double d, double s = 0.0);

}  // namespace ergolab
