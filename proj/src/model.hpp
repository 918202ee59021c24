#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ergolab.h"

namespace ergolab {

// Library error: a status code plus a human-readable message. The C layer
// maps the code straight onto the ABI.
struct Error : std::runtime_error {
  ergolab_status code;
  Error(ergolab_status c, const std::string& what) : std::runtime_error(what), code(c) {}
};

enum class OperatorKind { trace, pucci_plus, pucci_minus };

enum class Uniqueness { unique, unique_if_singular_regime, unknown };

const char* to_string(OperatorKind op);
const char* to_string(Uniqueness u);
OperatorKind operator_kind_from_string(const std::string& s);

// Raw equation parameters: exponents alpha/beta, ellipticity pair (a, A),
// discount lambda, operator choice.
struct EquationParams {
  double alpha = 0.0;
  double beta = 2.0;
  double a = 1.0;
  double A = 1.0;
  double lambda = 0.0;
  OperatorKind op = OperatorKind::trace;
};

// Rates derived from (alpha, beta):
//   gamma     = (2+alpha-beta)/(beta-1-alpha)   blow-up rate, >= 0
//   tau       = (beta+alpha^-)/(beta-alpha-1)   Lipschitz-estimate rate
//   grad_rate = 1/(beta-alpha-1)                interior gradient rate
struct Exponents {
  double gamma = 0.0;
  double tau = 0.0;
  double grad_rate = 0.0;
};

// Parameters that passed validate_params(). Only obtainable through
// validation, so downstream code can rely on the invariants.
class ValidatedParams {
 public:
  const EquationParams& raw() const { return p_; }
  double alpha() const { return p_.alpha; }
  double beta() const { return p_.beta; }
  double a() const { return p_.a; }
  double A() const { return p_.A; }
  double lambda() const { return p_.lambda; }
  OperatorKind op() const { return p_.op; }

  ValidatedParams with_lambda(double lambda) const;

 private:
  friend ValidatedParams validate_params(const EquationParams&);
  explicit ValidatedParams(const EquationParams& p) : p_(p) {}
  EquationParams p_;
};

// Throws on violated invariants: alpha > -1, alpha+1 < beta <= alpha+2,
// 0 < a <= A, lambda >= 0, trace requires a == A.
ValidatedParams validate_params(const EquationParams& p);

Exponents compute_exponents(double alpha, double beta);

// 1-D interval (lo, hi) or radial ball of radius R in dimension dim.
struct Domain1D {
  enum class Kind { interval, ball };

  Kind kind = Kind::interval;
  double lo = 0.0;
  double hi = 1.0;
  double radius = 1.0;
  int dim = 1;

  static Domain1D interval(double lo, double hi);
  static Domain1D ball(double radius, int dim);

  // Grid coordinate range: [lo, hi] for intervals, [0, radius] for balls.
  double coord_lo() const { return kind == Kind::interval ? lo : 0.0; }
  double coord_hi() const { return kind == Kind::interval ? hi : radius; }
  double extent() const { return coord_hi() - coord_lo(); }

  // Distance to the boundary at coordinate x.
  double distance(double x) const;
  // Largest attained distance (interval midpoint / ball center).
  double max_distance() const;
  // Number of equal tangential Hessian eigenvalues for radial fields.
  int tangential_multiplicity() const { return kind == Kind::ball ? dim - 1 : 0; }

  // Inner sub-domain {d > delta}.
  Domain1D inner(double delta) const;

  bool contains(double x) const;
};

// F evaluated on a radial Hessian with second radial derivative m and
// tangential eigenvalue t repeated mult times.
double eval_F(OperatorKind op, double a, double A, double m, double t, int mult);

// sign(u) |u|^(1+alpha); continuous through u = 0 for every alpha > -1.
double odd_pow(double alpha, double u);

// Full operator value -|g|^alpha F + |g|^beta + lambda sign(u)|u|^(1+alpha) - f.
// Throws SingularGradient when alpha < 0, g == 0 and F != 0.
double eval_G(const ValidatedParams& p, double u, double grad, double F_val, double f_val);

// The constant C in the blow-up law C d^-gamma (C |log d| when gamma = 0),
// constant on intervals and balls.
double boundary_constant(const ValidatedParams& p, const Domain1D& dom, const Exponents& e);

// Forcing catalog: a closed-form regular part plus an optional
// boundary-singular term kappa * d^-q, with declared growth margin gamma0.
struct Forcing {
  enum class Kind { constant, polynomial, cosine };

  Kind kind = Kind::constant;
  double c0 = 0.0;             // constant offset, applied for every kind
  std::vector<double> coeffs;  // polynomial in the coordinate x
  double amplitude = 0.0;
  double frequency = 0.0;
  double kappa = 0.0;
  double q = 0.0;
  double gamma0 = 0.0;

  static Forcing constant(double c);
  static Forcing polynomial(std::vector<double> coeffs);
  static Forcing cosine(double amplitude, double frequency);

  double regular_at(double x) const;
  // Value at coordinate x with distance d. Throws when d == 0 and kappa > 0.
  double at(double x, double d) const;

  bool bounded() const { return kappa == 0.0; }

  // Growth condition: kappa > 0 requires q + gamma0 < beta/(beta-alpha-1).
  void validate(const ValidatedParams& p) const;

  // Bounds of the regular part over the domain (dense sampling; catalog
  // entries are smooth so this is reliable at the tolerances used here).
  double regular_max(const Domain1D& dom) const;
  double regular_min(const Domain1D& dom) const;
};

Uniqueness uniqueness_status(const ValidatedParams& p, const Forcing& f);

// A validated problem instance: parameters + domain + forcing, with the
// cross-invariants (forcing growth vs exponents) checked at construction.
struct Problem {
  ValidatedParams params;
  Domain1D domain;
  Forcing forcing;
  Exponents exponents;

  static Problem make(const EquationParams& p, const Domain1D& dom, const Forcing& f);
  Problem with_lambda(double lambda) const;
  Problem with_domain(const Domain1D& dom) const;
  Problem with_forcing_shift(double mu) const;  // f + mu (regular part shifted)
};

}  // namespace ergolab
