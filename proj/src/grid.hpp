#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "model.hpp"

namespace ergolab {

// Uniform grid over an interval [lo, hi] or a radial span [0, R].
// Ball grids place a node at r = 0; only the outer node is boundary.
struct Grid {
  Domain1D dom;
  int n = 0;
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<double> d_values;

  static Grid make(const Domain1D& dom, int n);
  Grid refined() const;  // 2n-1 nodes, old nodes preserved

  bool is_ball() const { return dom.kind == Domain1D::Kind::ball; }
  int interior_lo() const { return is_ball() ? 0 : 1; }
  int interior_hi() const { return n - 2; }
  int interior_count() const { return interior_hi() - interior_lo() + 1; }
};

// Constant Dirichlet data: two values for an interval, the outer value for
// a ball (lo is ignored there).
struct BoundaryData {
  double lo = 0.0;
  double hi = 0.0;
  static BoundaryData interval(double g_lo, double g_hi) { return {g_lo, g_hi}; }
  static BoundaryData radial(double g_outer) { return {0.0, g_outer}; }
};

struct GridField {
  Grid grid;
  std::vector<double> values;
  BoundaryData boundary;

  static GridField flat(const Grid& g, double value, const BoundaryData& bc);
  void apply_boundary();
  // Boundary record and nodal values must agree.
  bool boundary_consistent(double tol = 0.0) const;
};

// Discrete operator on a fixed problem + grid: residual assembly and the
// tridiagonal Jacobian used by the Newton accelerator. Forcing values are
// cached per interior node at construction.
class Stencil {
 public:
  // forcing_cap truncates the cached forcing to min(f, cap) (the R-ladder
  // solves with capped forcing); +inf leaves it untouched.
  //
  // hamiltonian_order selects the one-sided gradient estimates fed to the
  // Godunov flux: 1 = plain differences (monotone scheme, first order),
  // 2 = minmod-limited second-order reconstruction (default; restores
  // O(h^2) consistency on smooth profiles, falls back to order 1 where the
  // wide stencil is unavailable).
  Stencil(const Problem& problem, const Grid& grid,
          double forcing_cap = std::numeric_limits<double>::infinity(),
          int hamiltonian_order = 2);

  const Grid& grid() const { return grid_; }
  const Problem& problem() const { return problem_; }
  double regularization() const { return eps_; }

  // Residual at interior node i, with the value at i overridden by ui.
  double residual_at(const std::vector<double>& u, int i, double ui) const;
  double residual_at(const std::vector<double>& u, int i) const;

  // Residual over all interior nodes (out resized to interior_count()).
  void residual(const std::vector<double>& u, std::vector<double>& out) const;
  double max_abs_residual(const std::vector<double>& u) const;
  // Per-node certificate: max over interior nodes of
  //   |residual_i| - 64 eps * term_scale_i
  // where term_scale_i is the magnitude of the assembled terms at i (the
  // attainable roundoff floor). max_res/binding_floor report the raw
  // max-norm residual and the floor at its node.
  double certified_excess(const std::vector<double>& u, double* max_res = nullptr,
                          double* binding_floor = nullptr) const;

  // Tridiagonal Jacobian rows (lower/diag/upper per interior node) and the
  // residual, for the Newton step. One-sided slopes at kinks.
  void jacobian(const std::vector<double>& u, std::vector<double>& lower,
                std::vector<double>& diag, std::vector<double>& upper,
                std::vector<double>& res) const;

  double forcing_at(int i) const { return f_at_[i]; }
  // Adds per-interior-node offsets to the cached forcing (defect-correction
  // source term); offsets are indexed like the residual vector.
  void add_interior_forcing(const std::vector<double>& offsets);
  // Scalar-solve derivative d residual_i / d u_i (one-sided at kinks).
  double diagonal_slope(const std::vector<double>& u, int i, double ui) const;

 private:
  Problem problem_;
  Grid grid_;
  double eps_;  // gradient-magnitude floor for the |p|^alpha coefficient
  int ham_order_;
  std::vector<double> f_at_;

  // one-sided gradient pair (p_minus, p_plus) fed to the Godunov flux
  void gradient_pair(const std::vector<double>& u, int i, double ui, double& pm,
                     double& pp) const;
};

// Godunov flux for the even convex Hamiltonian |p|^beta.
inline double godunov_flux(double p_minus, double p_plus, double beta) {
  const double arg = std::max(std::max(p_minus, 0.0), std::max(-p_plus, 0.0));
  return arg <= 0.0 ? 0.0 : std::pow(arg, beta);
}

// One-shot residual assembly (fresh stencil each call).
std::vector<double> discrete_G(const Problem& problem, const GridField& field,
                               int hamiltonian_order = 2);

}  // namespace ergolab
