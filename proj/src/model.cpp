#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ergolab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

extern "C" const char* ergolab_status_name(ergolab_status status) {
  switch (status) {
    case ERGOLAB_OK: return "ok";
    case ERGOLAB_ERR_ALPHA_OUT_OF_RANGE: return "alpha_out_of_range";
    case ERGOLAB_ERR_BETA_OUT_OF_RANGE: return "beta_out_of_range";
    case ERGOLAB_ERR_BAD_ELLIPTICITY: return "bad_ellipticity";
    case ERGOLAB_ERR_NEGATIVE_LAMBDA: return "negative_lambda";
    case ERGOLAB_ERR_TRACE_NEEDS_EQUAL_CONSTANTS: return "trace_needs_equal_constants";
    case ERGOLAB_ERR_SINGULAR_GRADIENT: return "singular_gradient";
    case ERGOLAB_ERR_BAD_FORCING: return "bad_forcing";
    case ERGOLAB_ERR_SINGULAR_FORCING_AT_NODE: return "singular_forcing_at_node";
    case ERGOLAB_ERR_BAD_DOMAIN: return "bad_domain";
    case ERGOLAB_ERR_GRID_TOO_COARSE: return "grid_too_coarse";
    case ERGOLAB_ERR_NOT_CONVERGED: return "not_converged";
    case ERGOLAB_ERR_NAN_DETECTED: return "nan_detected";
    case ERGOLAB_ERR_LADDER_NOT_SETTLED: return "ladder_not_settled";
    case ERGOLAB_ERR_LADDER_UNSTABLE: return "ladder_unstable";
    case ERGOLAB_ERR_WINDOW_TOO_NARROW: return "window_too_narrow";
    case ERGOLAB_ERR_REGION_EMPTY: return "region_empty";
    case ERGOLAB_ERR_OUTSIDE_DOMAIN: return "outside_domain";
    case ERGOLAB_ERR_UNSET_PREFACTOR: return "unset_prefactor";
    case ERGOLAB_ERR_HYPOTHESIS_UNMET: return "hypothesis_unmet";
    case ERGOLAB_ERR_CONFIG: return "config_error";
    case ERGOLAB_ERR_IO: return "io_error";
    case ERGOLAB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ERGOLAB_ERR_CHECK_FAILED: return "check_failed";
    case ERGOLAB_ERR_INTERNAL: return "internal_error";
  }
  return "unknown_status";
}

const char* to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::trace: return "trace";
    case OperatorKind::pucci_plus: return "pucci_plus";
    case OperatorKind::pucci_minus: return "pucci_minus";
  }
  return "?";
}

const char* to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::unique: return "unique";
    case Uniqueness::unique_if_singular_regime: return "unique_if_singular_regime";
    case Uniqueness::unknown: return "unknown";
  }
  return "?";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "trace") return OperatorKind::trace;
  if (s == "pucci_plus") return OperatorKind::pucci_plus;
  if (s == "pucci_minus") return OperatorKind::pucci_minus;
  throw Error(ERGOLAB_ERR_CONFIG, "unknown operator '" + s + "'");
}

ValidatedParams validate_params(const EquationParams& p) {
  if (!(p.alpha > -1.0))
    throw Error(ERGOLAB_ERR_ALPHA_OUT_OF_RANGE,
                "alpha must satisfy alpha > -1, got " + fmt(p.alpha));
  if (!(p.beta > p.alpha + 1.0) || !(p.beta <= p.alpha + 2.0))
    throw Error(ERGOLAB_ERR_BETA_OUT_OF_RANGE,
                "beta must satisfy alpha+1 < beta <= alpha+2, got beta=" + fmt(p.beta) +
                    " with alpha=" + fmt(p.alpha));
  if (!(p.a > 0.0) || !(p.A >= p.a))
    throw Error(ERGOLAB_ERR_BAD_ELLIPTICITY,
                "ellipticity constants must satisfy 0 < a <= A, got a=" + fmt(p.a) +
                    " A=" + fmt(p.A));
  if (!(p.lambda >= 0.0))
    throw Error(ERGOLAB_ERR_NEGATIVE_LAMBDA, "lambda must be >= 0, got " + fmt(p.lambda));
  if (p.op == OperatorKind::trace && p.a != p.A)
    throw Error(ERGOLAB_ERR_TRACE_NEEDS_EQUAL_CONSTANTS,
                "trace operator requires a == A, got a=" + fmt(p.a) + " A=" + fmt(p.A));
  return ValidatedParams(p);
}

ValidatedParams ValidatedParams::with_lambda(double lambda) const {
  EquationParams q = p_;
  q.lambda = lambda;
  return validate_params(q);
}

Exponents compute_exponents(double alpha, double beta) {
  EquationParams probe;
  probe.alpha = alpha;
  probe.beta = beta;
  validate_params(probe);

  const double denom = beta - 1.0 - alpha;
  Exponents e;
  e.gamma = (2.0 + alpha - beta) / denom;
  if (beta == alpha + 2.0) e.gamma = 0.0;
  e.tau = (beta + std::max(-alpha, 0.0)) / denom;
  e.grad_rate = 1.0 / denom;
  return e;
}

Domain1D Domain1D::interval(double lo, double hi) {
  if (!(lo < hi))
    throw Error(ERGOLAB_ERR_BAD_DOMAIN, "interval requires lo < hi, got [" + fmt(lo) + ", " + fmt(hi) + "]");
  Domain1D d;
  d.kind = Kind::interval;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain1D Domain1D::ball(double radius, int dim) {
  if (!(radius > 0.0))
    throw Error(ERGOLAB_ERR_BAD_DOMAIN, "ball requires radius > 0, got " + fmt(radius));
  if (dim < 1)
    throw Error(ERGOLAB_ERR_BAD_DOMAIN, "ball requires dim >= 1, got " + fmt(dim));
  Domain1D d;
  d.kind = Kind::ball;
  d.radius = radius;
  d.dim = dim;
  d.lo = 0.0;
  d.hi = radius;
  return d;
}

double Domain1D::distance(double x) const {
  if (kind == Kind::interval) return std::min(x - lo, hi - x);
  return radius - x;
}

double Domain1D::max_distance() const {
  return kind == Kind::interval ? 0.5 * (hi - lo) : radius;
}

Domain1D Domain1D::inner(double delta) const {
  if (!(delta >= 0.0) || delta >= max_distance())
    throw Error(ERGOLAB_ERR_BAD_DOMAIN, "inner sub-domain margin " + fmt(delta) + " leaves no interior");
  if (kind == Kind::interval) return interval(lo + delta, hi - delta);
  return ball(radius - delta, dim);
}

bool Domain1D::contains(double x) const {
  return x >= coord_lo() && x <= coord_hi();
}

double eval_F(OperatorKind op, double a, double A, double m, double t, int mult) {
  if (mult < 0) throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "tangential multiplicity must be >= 0");
  const double mp = std::max(m, 0.0), mm = std::max(-m, 0.0);
  const double tp = std::max(t, 0.0), tm = std::max(-t, 0.0);
  switch (op) {
    case OperatorKind::trace:
      if (a != A)
        throw Error(ERGOLAB_ERR_TRACE_NEEDS_EQUAL_CONSTANTS, "trace operator requires a == A");
      return a * (m + mult * t);
    case OperatorKind::pucci_plus:
      return A * mp - a * mm + mult * (A * tp - a * tm);
    case OperatorKind::pucci_minus:
      return a * mp - A * mm + mult * (a * tp - A * tm);
  }
  return 0.0;
}

double odd_pow(double alpha, double u) {
  if (u == 0.0) return 0.0;
  const double mag = std::pow(std::abs(u), 1.0 + alpha);
  return u > 0.0 ? mag : -mag;
}

double eval_G(const ValidatedParams& p, double u, double grad, double F_val, double f_val) {
  const double g = std::abs(grad);
  double diffusion;
  if (g == 0.0) {
    if (p.alpha() < 0.0) {
      if (F_val != 0.0)
        throw Error(ERGOLAB_ERR_SINGULAR_GRADIENT,
                    "operator is singular at vanishing gradient for alpha < 0; "
                    "use the regularized grid pathway");
      diffusion = 0.0;
    } else if (p.alpha() == 0.0) {
      diffusion = F_val;
    } else {
      diffusion = 0.0;
    }
  } else {
    diffusion = std::pow(g, p.alpha()) * F_val;
  }
  const double hamiltonian = g == 0.0 ? 0.0 : std::pow(g, p.beta());
  return -diffusion + hamiltonian + p.lambda() * odd_pow(p.alpha(), u) - f_val;
}

double boundary_constant(const ValidatedParams& p, const Domain1D& dom, const Exponents& e) {
  // F on the rank-one matrix grad d ⊗ grad d (|grad d| = 1 near the boundary):
  // one unit eigenvalue, the rest zero.
  const double F1 = eval_F(p.op(), p.a(), p.A(), 1.0, 0.0, dom.tangential_multiplicity());
  if (e.gamma == 0.0) return F1;
  const double r = 1.0 / (p.beta() - p.alpha() - 1.0);
  return std::pow((e.gamma + 1.0) * F1, r) / e.gamma;
}

Forcing Forcing::constant(double c) {
  Forcing f;
  f.kind = Kind::constant;
  f.c0 = c;
  return f;
}

Forcing Forcing::polynomial(std::vector<double> coeffs) {
  Forcing f;
  f.kind = Kind::polynomial;
  f.coeffs = std::move(coeffs);
  return f;
}

Forcing Forcing::cosine(double amplitude, double frequency) {
  Forcing f;
  f.kind = Kind::cosine;
  f.amplitude = amplitude;
  f.frequency = frequency;
  return f;
}

double Forcing::regular_at(double x) const {
  double v = c0;
  if (kind == Kind::polynomial) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    v += acc;
  } else if (kind == Kind::cosine) {
    v += amplitude * std::cos(frequency * x);
  }
  return v;
}

double Forcing::at(double x, double d) const {
  double v = regular_at(x);
  if (kappa > 0.0) {
    if (d <= 0.0)
      throw Error(ERGOLAB_ERR_SINGULAR_FORCING_AT_NODE,
                  "singular forcing evaluated on the boundary (d = 0)");
    v += kappa * std::pow(d, -q);
  }
  return v;
}

void Forcing::validate(const ValidatedParams& p) const {
  if (kappa < 0.0)
    throw Error(ERGOLAB_ERR_BAD_FORCING, "singular coefficient kappa must be >= 0");
  if (q < 0.0) throw Error(ERGOLAB_ERR_BAD_FORCING, "singular exponent q must be >= 0");
  if (gamma0 < 0.0) throw Error(ERGOLAB_ERR_BAD_FORCING, "growth margin gamma0 must be >= 0");
  if (kappa > 0.0) {
    const double limit = p.beta() / (p.beta() - p.alpha() - 1.0);
    if (!(q + gamma0 < limit))
      throw Error(ERGOLAB_ERR_BAD_FORCING,
                  "growth condition violated: q + gamma0 = " + fmt(q + gamma0) +
                      " must be < beta/(beta-alpha-1) = " + fmt(limit));
  }
}

double Forcing::regular_max(const Domain1D& dom) const {
  if (kind == Kind::constant) return c0;
  double m = -1e300;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    const double x = dom.coord_lo() + dom.extent() * i / samples;
    m = std::max(m, regular_at(x));
  }
  return m;
}

double Forcing::regular_min(const Domain1D& dom) const {
  if (kind == Kind::constant) return c0;
  double m = 1e300;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    const double x = dom.coord_lo() + dom.extent() * i / samples;
    m = std::min(m, regular_at(x));
  }
  return m;
}

Uniqueness uniqueness_status(const ValidatedParams& p, const Forcing& f) {
  if (p.alpha() >= 0.0) return Uniqueness::unique;
  const double threshold =
      (1.0 - p.alpha() - p.alpha() * p.alpha()) / (1.0 - p.alpha());
  if (p.beta() > threshold) {
    const Exponents e = compute_exponents(p.alpha(), p.beta());
    if (f.gamma0 > -p.alpha() * e.gamma) return Uniqueness::unique;
  }
  return Uniqueness::unknown;
}

Problem Problem::make(const EquationParams& p, const Domain1D& dom, const Forcing& f) {
  ValidatedParams vp = validate_params(p);
  f.validate(vp);
  Exponents e = compute_exponents(p.alpha, p.beta);
  return Problem{vp, dom, f, e};
}

Problem Problem::with_lambda(double lambda) const {
  Problem q = *this;
  q.params = params.with_lambda(lambda);
  return q;
}

Problem Problem::with_domain(const Domain1D& dom) const {
  return Problem{params, dom, forcing, exponents};
}

Problem Problem::with_forcing_shift(double mu) const {
  Problem q = *this;
  q.forcing.c0 += mu;
  return q;
}

}  // namespace ergolab
