#include "grid.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace ergolab {

Grid Grid::make(const Domain1D& dom, int n) {
  if (n < 16)
    throw Error(ERGOLAB_ERR_GRID_TOO_COARSE,
                "grid needs at least 16 nodes, got " + std::to_string(n));
  Grid g;
  g.dom = dom;
  g.n = n;
  g.h = dom.extent() / (n - 1);
  g.nodes.resize(n);
  g.d_values.resize(n);
  for (int i = 0; i < n; ++i) g.nodes[i] = dom.coord_lo() + i * g.h;
  g.nodes[0] = dom.coord_lo();
  g.nodes[n - 1] = dom.coord_hi();
  for (int i = 0; i < n; ++i) g.d_values[i] = std::max(dom.distance(g.nodes[i]), 0.0);
  return g;
}

Grid Grid::refined() const { return make(dom, 2 * n - 1); }

GridField GridField::flat(const Grid& g, double value, const BoundaryData& bc) {
  GridField f;
  f.grid = g;
  f.values.assign(g.n, value);
  f.boundary = bc;
  f.apply_boundary();
  return f;
}

void GridField::apply_boundary() {
  if (!grid.is_ball()) values[0] = boundary.lo;
  values[grid.n - 1] = boundary.hi;
}

bool GridField::boundary_consistent(double tol) const {
  if (!grid.is_ball() && std::abs(values[0] - boundary.lo) > tol) return false;
  return std::abs(values[grid.n - 1] - boundary.hi) <= tol;
}

Stencil::Stencil(const Problem& problem, const Grid& grid, double forcing_cap,
                 int hamiltonian_order)
    : problem_(problem), grid_(grid), ham_order_(hamiltonian_order) {
  if (hamiltonian_order != 1 && hamiltonian_order != 2)
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "hamiltonian_order must be 1 or 2");
  // The |p|^alpha coefficient needs a floor only where the exponent is
  // negative; the floor vanishes with h, so consistency is kept.
  eps_ = problem_.params.alpha() < 0.0 ? grid_.h : 0.0;
  f_at_.assign(grid_.n, 0.0);
  for (int i = grid_.interior_lo(); i <= grid_.interior_hi(); ++i)
    f_at_[i] = std::min(problem_.forcing.at(grid_.nodes[i], grid_.d_values[i]), forcing_cap);
}

namespace {

inline double pow_or_zero(double base, double e) {
  return base <= 0.0 ? 0.0 : std::pow(base, e);
}

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

// Slope of F per unit of a single eigenvalue of the given sign.
inline double operator_slope(OperatorKind op, double a, double A, double eig) {
  switch (op) {
    case OperatorKind::trace: return a;
    case OperatorKind::pucci_plus: return eig >= 0.0 ? A : a;
    case OperatorKind::pucci_minus: return eig >= 0.0 ? a : A;
  }
  return 0.0;
}

}  // namespace

// One-sided gradient estimates fed to the Godunov flux. Order 2 adds the
// minmod-limited half-cell correction; ball grids mirror across r = 0.
void Stencil::gradient_pair(const std::vector<double>& u, int i, double ui, double& pm,
                            double& pp) const {
  const double h = grid_.h;
  const bool ball = grid_.is_ball();
  auto at = [&](int j) -> double {
    if (j < 0) j = -j;  // even reflection (balls only reach here)
    return j == i ? ui : u[j];
  };
  const double um = ball && i == 0 ? at(1) : at(i - 1);
  const double up = at(i + 1);
  pm = (ui - um) / h;
  pp = (up - ui) / h;
  if (ham_order_ == 1) return;
  if (ball && i == 0) return;  // symmetric node: plain differences suffice

  const double d2c = (up - 2.0 * ui + um) / (h * h);
  if (i - 2 >= 0 || ball) {
    const double d2m = (ui - 2.0 * um + at(i - 2)) / (h * h);
    pm += 0.5 * h * minmod(d2c, d2m);
  }
  if (i + 2 <= grid_.n - 1) {
    const double d2p = (at(i + 2) - 2.0 * up + ui) / (h * h);
    pp -= 0.5 * h * minmod(d2c, d2p);
  }
}

void Stencil::add_interior_forcing(const std::vector<double>& offsets) {
  if (static_cast<int>(offsets.size()) != grid_.interior_count())
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT, "forcing offset size mismatch");
  for (int i = grid_.interior_lo(); i <= grid_.interior_hi(); ++i)
    f_at_[i] += offsets[i - grid_.interior_lo()];
}

double Stencil::residual_at(const std::vector<double>& u, int i, double ui) const {
  const auto& p = problem_.params;
  const double h = grid_.h;
  const bool center = grid_.is_ball() && i == 0;
  const double um = center ? u[1] : u[i - 1];
  const double up = u[i + 1];

  const double m = (up - 2.0 * ui + um) / (h * h);
  const double c = center ? 0.0 : (up - um) / (2.0 * h);
  const double pbar = std::max(std::abs(c), eps_);
  const double w = p.alpha() == 0.0 ? 1.0 : pow_or_zero(pbar, p.alpha());

  double t = 0.0;
  int mult = 0;
  if (grid_.is_ball()) {
    mult = grid_.dom.tangential_multiplicity();
    t = center ? m : c / grid_.nodes[i];
  }
  const double F = eval_F(p.op(), p.a(), p.A(), m, t, mult);

  double pm, pp;
  gradient_pair(u, i, ui, pm, pp);
  const double H = godunov_flux(pm, pp, p.beta());

  return -w * F + H + p.lambda() * odd_pow(p.alpha(), ui) - f_at_[i];
}

double Stencil::residual_at(const std::vector<double>& u, int i) const {
  return residual_at(u, i, u[i]);
}

void Stencil::residual(const std::vector<double>& u, std::vector<double>& out) const {
  out.resize(grid_.interior_count());
  for (int i = grid_.interior_lo(); i <= grid_.interior_hi(); ++i)
    out[i - grid_.interior_lo()] = residual_at(u, i);
}

double Stencil::max_abs_residual(const std::vector<double>& u) const {
  double m = 0.0;
  for (int i = grid_.interior_lo(); i <= grid_.interior_hi(); ++i)
    m = std::max(m, std::abs(residual_at(u, i)));
  return m;
}

double Stencil::certified_excess(const std::vector<double>& u, double* max_res,
                                 double* binding_floor) const {
  const auto& p = problem_.params;
  const double h = grid_.h;
  double excess = -1e300, res_max = 0.0, floor_at = 0.0;
  for (int i = grid_.interior_lo(); i <= grid_.interior_hi(); ++i) {
    const bool center = grid_.is_ball() && i == 0;
    const double ui = u[i];
    const double um = center ? u[1] : u[i - 1];
    const double up = u[i + 1];
    const int mult = grid_.is_ball() ? grid_.dom.tangential_multiplicity() : 0;

    const double c = center ? 0.0 : (up - um) / (2.0 * h);
    const double pbar = std::max(std::abs(c), eps_);
    const double w = p.alpha() == 0.0 ? 1.0 : pow_or_zero(pbar, p.alpha());

    const double r = residual_at(u, i);
    double pm, pp;
    gradient_pair(u, i, ui, pm, pp);
    const double hp = std::max(std::max(pm, 0.0), std::max(-pp, 0.0));

    // forward error bound: the second difference and the one-sided slopes
    // cancel, so their floors scale with the raw node magnitudes
    const double mag = std::abs(up) + 2.0 * std::abs(ui) + std::abs(um);
    double diff_scale = w * p.A() * mag / (h * h);
    if (grid_.is_ball() && !center && mult > 0)
      diff_scale +=
          w * p.A() * mult * (std::abs(up) + std::abs(um)) / (2.0 * h * grid_.nodes[i]);
    const double ham_scale =
        hp > 0.0 ? p.beta() * pow_or_zero(hp, p.beta() - 1.0) * mag / h : 0.0;
    const double z = p.lambda() * odd_pow(p.alpha(), ui);
    const double floor = 64.0 * DBL_EPSILON *
                         (diff_scale + ham_scale + std::abs(z) + std::abs(f_at_[i]));
    const double ex = std::abs(r) - floor;
    if (ex > excess) {
      excess = ex;
      floor_at = floor;
    }
    res_max = std::max(res_max, std::abs(r));
  }
  if (max_res) *max_res = res_max;
  if (binding_floor) *binding_floor = floor_at;
  return excess;
}

double Stencil::diagonal_slope(const std::vector<double>& u, int i, double ui) const {
  const auto& p = problem_.params;
  const double h = grid_.h;
  const bool center = grid_.is_ball() && i == 0;
  const double um = center ? u[1] : u[i - 1];
  const double up = u[i + 1];

  const double m = (up - 2.0 * ui + um) / (h * h);
  const double c = center ? 0.0 : (up - um) / (2.0 * h);
  const double pbar = std::max(std::abs(c), eps_);
  const double w = p.alpha() == 0.0 ? 1.0 : pow_or_zero(pbar, p.alpha());

  double fm = operator_slope(p.op(), p.a(), p.A(), m);
  if (center)
    fm += grid_.dom.tangential_multiplicity() * operator_slope(p.op(), p.a(), p.A(), m);

  double slope = w * fm * 2.0 / (h * h);

  // first-order Hamiltonian slope (adequate as a safeguarded-Newton guess)
  const double bdiff = (ui - um) / h;
  const double fdiff = (up - ui) / h;
  if (bdiff >= -fdiff && bdiff > 0.0)
    slope += std::min(p.beta() * pow_or_zero(bdiff, p.beta() - 1.0), 1e14) / h;
  else if (-fdiff > 0.0)
    slope += std::min(p.beta() * pow_or_zero(-fdiff, p.beta() - 1.0), 1e14) / h;

  const double zmag = std::max(std::abs(ui), 1e-100);
  slope += p.lambda() * (1.0 + p.alpha()) * std::min(std::pow(zmag, p.alpha()), 1e14);
  return slope;
}

// Tridiagonal Jacobian with first-order Hamiltonian slopes; at order 2 the
// wide-stencil couplings are dropped, which only weakens the Newton model
// (the line search keeps steps honest).
void Stencil::jacobian(const std::vector<double>& u, std::vector<double>& lower,
                       std::vector<double>& diag, std::vector<double>& upper,
                       std::vector<double>& res) const {
  const auto& p = problem_.params;
  const double h = grid_.h;
  const int count = grid_.interior_count();
  lower.assign(count, 0.0);
  diag.assign(count, 0.0);
  upper.assign(count, 0.0);
  res.resize(count);

  for (int i = grid_.interior_lo(); i <= grid_.interior_hi(); ++i) {
    const int k = i - grid_.interior_lo();
    const bool center = grid_.is_ball() && i == 0;
    const double ui = u[i];
    const double um = center ? u[1] : u[i - 1];
    const double up = u[i + 1];
    const int mult = grid_.is_ball() ? grid_.dom.tangential_multiplicity() : 0;

    const double m = (up - 2.0 * ui + um) / (h * h);
    const double c = center ? 0.0 : (up - um) / (2.0 * h);
    const double pbar = std::max(std::abs(c), eps_);
    const double w = p.alpha() == 0.0 ? 1.0 : pow_or_zero(pbar, p.alpha());

    double t = 0.0;
    if (grid_.is_ball() && !center) t = c / grid_.nodes[i];
    const double F = eval_F(p.op(), p.a(), p.A(), m, center ? m : t, mult);
    double fm = operator_slope(p.op(), p.a(), p.A(), m);
    double ft = mult * operator_slope(p.op(), p.a(), p.A(), center ? m : t);
    if (center) {
      fm += ft;  // t coincides with m at the center
      ft = 0.0;
    }

    const double dpbar = std::abs(c) > eps_ ? (c > 0.0 ? 1.0 : -1.0) : 0.0;
    const double dw = p.alpha() == 0.0
                          ? 0.0
                          : p.alpha() * pow_or_zero(pbar, p.alpha() - 1.0) * dpbar;

    const double bdiff = (ui - um) / h;
    const double fdiff = (up - ui) / h;
    double hb = 0.0, hf = 0.0;
    if (bdiff >= -fdiff && bdiff > 0.0)
      hb = std::min(p.beta() * pow_or_zero(bdiff, p.beta() - 1.0), 1e14);
    else if (-fdiff > 0.0)
      hf = std::min(p.beta() * pow_or_zero(-fdiff, p.beta() - 1.0), 1e14);

    const double zmag = std::max(std::abs(ui), 1e-100);
    const double zslope =
        p.lambda() * (1.0 + p.alpha()) * std::min(std::pow(zmag, p.alpha()), 1e14);

    diag[k] = w * fm * 2.0 / (h * h) + hb / h + hf / h + zslope;

    if (center) {
      upper[k] = -w * fm * 2.0 / (h * h) - hf / h;
    } else {
      const double dt_dup = grid_.is_ball() ? 1.0 / (2.0 * h * grid_.nodes[i]) : 0.0;
      const double dt_dum = -dt_dup;
      lower[k] = -dw * (-1.0 / (2.0 * h)) * F - w * (fm / (h * h) + ft * dt_dum) - hb / h;
      upper[k] = -dw * (1.0 / (2.0 * h)) * F - w * (fm / (h * h) + ft * dt_dup) - hf / h;
    }
    res[k] = residual_at(u, i);
  }
}

std::vector<double> discrete_G(const Problem& problem, const GridField& field,
                               int hamiltonian_order) {
  if (!field.boundary_consistent())
    throw Error(ERGOLAB_ERR_INVALID_ARGUMENT,
                "field boundary record disagrees with nodal values");
  Stencil st(problem, field.grid, std::numeric_limits<double>::infinity(),
             hamiltonian_order);
  std::vector<double> out;
  st.residual(field.values, out);
  return out;
}

}  // namespace ergolab
