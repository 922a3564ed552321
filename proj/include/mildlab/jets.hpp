#pragma once

#include <array>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "mildlab/multiindex.hpp"

namespace mildlab {

/// Immutable index table shared by all jets of a given (dim, order):
/// the graded-lex list of multi-indices with |nu| <= order, the inverse
/// rank map, per-rank factorials, and the truncated convolution pairs.
/// Instances are cached per (dim, order) and never freed.
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& index(int rank) const { return indices_[static_cast<std::size_t>(rank)]; }
  int rank(const MultiIndex& nu) const;
  double factorial(int rank) const { return factorial_[static_cast<std::size_t>(rank)]; }
  /// Flat (i, j, k) triples with index(i) + index(j) = index(k).
  const std::vector<std::array<int, 3>>& conv() const { return conv_; }

 private:
  JetLayout(int dim, int order);

  int dim_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::unordered_map<MultiIndex, int, MultiIndexHash> rank_;
  std::vector<double> factorial_;
  std::vector<std::array<int, 3>> conv_;
};

/// Truncated Taylor expansion of a scalar function at a base point,
/// stored as normalized coefficients f^(nu)(x0) / nu! in graded-lex order.
/// Value semantics; all binary operations require matching base point and
/// order.
class Jet {
 public:
  Jet() = default;
  Jet(std::vector<double> base_point, int order);  // zero jet

  static Jet constant(std::vector<double> base_point, int order, double c);
  static Jet variable(std::vector<double> base_point, int order, int i);

  int dim() const { return layout_ ? layout_->dim() : 0; }
  int order() const { return layout_ ? layout_->order() : 0; }
  const std::vector<double>& base_point() const { return base_; }
  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }

  double value() const { return c_[0]; }
  double coeff(int rank) const { return c_[static_cast<std::size_t>(rank)]; }
  double coeff(const MultiIndex& nu) const;
  double& coeff_ref(int rank) { return c_[static_cast<std::size_t>(rank)]; }
  /// f^(nu)(x0) = coeff(nu) * nu!.
  double derivative(const MultiIndex& nu) const;
  const std::vector<double>& coeffs() const { return c_; }

  /// Derivative table for all 0 <= |nu| <= order (keyed map form).
  std::map<MultiIndex, double> derivative_table() const;

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> base_;
  std::vector<double> c_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_scale(const Jet& a, double s);
Jet jet_shift(const Jet& a, double s);  // a + s
Jet jet_mul(const Jet& a, const Jet& b);

inline Jet operator+(const Jet& a, const Jet& b) { return jet_add(a, b); }
inline Jet operator-(const Jet& a, const Jet& b) { return jet_sub(a, b); }
inline Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }
inline Jet operator*(double s, const Jet& a) { return jet_scale(a, s); }

/// Jet of x^mu = prod x_i^{mu_i} with real exponents, at x > 0
/// componentwise (componentwise positivity is only required where the
/// exponent calls for it: integer exponents >= 0 admit any x_i).
/// Coefficients use exact falling factorials:
/// coeff(nu) = prod_i mu_i (mu_i - 1) ... (mu_i - nu_i + 1) x_i^{mu_i - nu_i} / nu_i!.
Jet jet_monomial(std::span<const double> mu, std::span<const double> x,
                 int order);

/// Truncated power-series substitution outer(inner_1, ..., inner_d).
/// outer lives in d variables at base point equal to the inner values
/// (checked to 1e-12); the inners share a common base point and order.
Jet jet_compose(const Jet& outer, const std::vector<Jet>& inner);

Jet jet_exp(const Jet& a);
/// Requires a.value() != 0.
Jet jet_reciprocal(const Jet& a);
/// a^mu for real mu; requires a.value() > 0.
Jet jet_pow(const Jet& a, double mu);

/// Falling factorial product mu (mu-1) ... (mu-k+1); 1 for k = 0.
double falling_factorial(double mu, int k);

/// Expression tree over scalar functions of x in R^m: constants, variables,
/// sums, products, real powers, exp, reciprocals, and affine images.
/// Immutable; copies share structure.
class Expr {
 public:
  enum class Kind { Constant, Variable, Add, Mul, Power, Exp, Reciprocal, Affine };

  Expr() = default;

  static Expr constant(double c);
  static Expr variable(int index);
  static Expr add(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  /// arg^mu; evaluation requires arg > 0.
  static Expr power(Expr arg, double mu);
  static Expr exp(Expr arg);
  /// 1 / arg; evaluation requires arg != 0.
  static Expr reciprocal(Expr arg);
  /// a * arg + b.
  static Expr affine(double a, double b, Expr arg);

  Kind kind() const;
  double constant_value() const;
  int variable_index() const;
  double exponent() const;
  double affine_a() const;
  double affine_b() const;
  const Expr& child(int i) const;
  int child_count() const;
  /// Smallest m such that the expression reads only x_0 .. x_{m-1}.
  int min_dim() const;

  double eval(std::span<const double> x) const;
  Jet jet(std::span<const double> x, int order) const;

  bool valid() const { return node_ != nullptr; }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Evaluates the jet of an expression tree at x; alias for Expr::jet kept
/// as a free function entry point.
Jet jet_eval_expr(const Expr& e, std::span<const double> x, int order);

}  // namespace mildlab
