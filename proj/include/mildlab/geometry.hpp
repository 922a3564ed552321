#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mildlab/jets.hpp"
#include "mildlab/mildness.hpp"
#include "mildlab/multiindex.hpp"

namespace mildlab {

/// One fiber of a definable family: the frozen parameter values and a
/// label for reports.
struct FamilyFiber {
  std::vector<double> t;
  std::string description;
};

/// b(x) = a * x_1^{mu_1} * ... * x_m^{mu_m} with real exponents and a
/// declared bound on |b| over its cell.
struct BoundedMonomial {
  double coefficient = 1.0;
  std::vector<double> exponents;
  double range_bound = 1.0;

  int dim() const { return static_cast<int>(exponents.size()); }
  /// max(|mu_1|, ..., |mu_m|, 1): growth rate of the derivative bound.
  double exponent_magnitude() const;
  double value(std::span<const double> x) const;
  Jet jet(std::span<const double> x, int order) const;
};

/// Exact derivative d^nu b(x): falling-factorial coefficient times
/// a * x^{mu - nu}.
double bm_exact_derivative(const BoundedMonomial& b, const MultiIndex& nu,
                           std::span<const double> x);

/// x^{-nu} * |b(x)| * M^|nu| * |nu|! with M = exponent_magnitude().
double bm_derivative_bound(const BoundedMonomial& b, const MultiIndex& nu,
                           std::span<const double> x);

/// Analytic factor F applied to monomial tuples; non-vanishing on the range
/// of its arguments, with a declared derivative growth certificate.
struct Unit {
  Expr expr;       // variables index the monomial components fed to F
  MildParams mild;
};

/// f(x) = b_lead(x) * F(b_1(x), ..., b_N(x)) on a cell.
struct PreparedFunction {
  std::vector<BoundedMonomial> monomials;
  int lead = 0;
  Unit unit;
  /// Declared bound on the C^1 norm of the monomial map (0 = undeclared).
  double c1_bound = 0.0;

  int dim() const;
  double value(std::span<const double> x) const;
};

/// Constant prepared function (unit F == 1 and a single constant monomial).
PreparedFunction constant_prepared(int dim, double value);
/// Single monomial a * x^mu with trivial unit.
PreparedFunction monomial_prepared(double coefficient, std::vector<double> exponents,
                                   double range_bound, double c1_bound = 0.0);

/// Jet of a prepared function at x (componentwise x > 0 where exponents
/// demand it).  Throws std::domain_error when the unit's magnitude at the
/// monomial values falls below 1e-6.
Jet prepared_jet(const PreparedFunction& f, std::span<const double> x, int order);

/// Analytic derivative bound x^{-nu} |b_lead(x)| B_f A_f^|nu| |nu|! with
///   A_f = 2 max(A, M_lead),  B_f = B_F,
///   A   = A_b (N A_F B_b + 1),
/// where (A_F, B_F) certify the unit, A_b / B_b are the componentwise
/// maxima of exponent magnitudes / range bounds, and N counts monomials.
double prepared_derivative_bound(const PreparedFunction& f, const MultiIndex& nu,
                                 std::span<const double> x);

/// The (A_f, B_f) pair used by prepared_derivative_bound.
std::pair<double, double> prepared_bound_constants(const PreparedFunction& f);

/// Wall of a cell: a constant or a prepared function of the preceding
/// coordinates (arity = wall position).
struct Wall {
  std::variant<double, PreparedFunction> f;

  bool is_constant() const { return std::holds_alternative<double>(f); }
  int arity() const;
  double value(std::span<const double> prefix) const;
};

/// Open cell {x : alpha_i(x_1..x_{i-1}) < x_i < beta_i(x_1..x_{i-1})}
/// inside (0,1)^m.
struct Cell {
  int dim = 0;
  std::vector<std::pair<Wall, Wall>> walls;
  FamilyFiber fiber;

  bool contains(std::span<const double> x, double margin = 0.0) const;
  /// Lower/upper wall values along a point's prefix.
  std::pair<double, double> wall_values(std::span<const double> x, int i) const;
};

/// Cell over (0,1)^dim with constant walls 0 and 1.
Cell unit_cube_cell(int dim);

struct CellValidation {
  bool pass = false;
  double min_gap = 0.0;       // min over samples of beta - alpha
  double min_wall = 0.0;      // min sampled wall value
  double max_wall = 0.0;      // max sampled wall value
  std::string message;
};

/// Samples the walls over a boundary-refined grid and checks strictness
/// (alpha < beta), range ([0,1]), and wall arity.
CellValidation validate_cell(const Cell& cell, int grid_density);

struct C1Report {
  double max_norm = 0.0;   // max over grid, components, |nu| <= 1 of |d^nu|/nu!
  std::vector<double> worst_point;
  int worst_component = 0;
  bool pass = false;
};

/// Checks the monomial map of f against a declared C^1 bound on a grid
/// restricted to the cell.
C1Report c1_norm_check(const PreparedFunction& f, const Cell& cell,
                       const std::vector<std::vector<double>>& grid,
                       double declared_bound);

}  // namespace mildlab
