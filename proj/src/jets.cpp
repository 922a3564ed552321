#include "mildlab/jets.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mildlab {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1) throw std::invalid_argument("JetLayout: dim must be >= 1");
  if (order < 0) throw std::invalid_argument("JetLayout: order must be >= 0");
  indices_ = enumerate_multiindices(dim, order);
  rank_.reserve(indices_.size() * 2);
  factorial_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    rank_.emplace(indices_[i], static_cast<int>(i));
    factorial_.push_back(indices_[i].factorial().convert_to<double>());
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (indices_[i].total() + indices_[j].total() > order) continue;
      const int k = rank_.at(indices_[i].plus(indices_[j]));
      conv_.push_back({static_cast<int>(i), static_cast<int>(j), k});
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto layout = std::shared_ptr<const JetLayout>(new JetLayout(dim, order));
  cache.emplace(key, layout);
  return layout;
}

int JetLayout::rank(const MultiIndex& nu) const {
  auto it = rank_.find(nu);
  if (it == rank_.end()) {
    throw std::out_of_range("JetLayout: index " + nu.str() + " outside table");
  }
  return it->second;
}

Jet::Jet(std::vector<double> base_point, int order)
    : layout_(JetLayout::get(static_cast<int>(base_point.size()), order)),
      base_(std::move(base_point)),
      c_(static_cast<std::size_t>(layout_->size()), 0.0) {}

Jet Jet::constant(std::vector<double> base_point, int order, double c) {
  Jet j(std::move(base_point), order);
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(std::vector<double> base_point, int order, int i) {
  if (i < 0 || i >= static_cast<int>(base_point.size())) {
    throw std::invalid_argument("Jet::variable: index out of range");
  }
  Jet j(std::move(base_point), order);
  j.c_[0] = j.base_[static_cast<std::size_t>(i)];
  if (order >= 1) {
    j.c_[static_cast<std::size_t>(j.layout_->rank(MultiIndex::axis(j.dim(), i)))] = 1.0;
  }
  return j;
}

double Jet::coeff(const MultiIndex& nu) const {
  return c_[static_cast<std::size_t>(layout_->rank(nu))];
}

double Jet::derivative(const MultiIndex& nu) const {
  const int r = layout_->rank(nu);
  return c_[static_cast<std::size_t>(r)] * layout_->factorial(r);
}

std::map<MultiIndex, double> Jet::derivative_table() const {
  std::map<MultiIndex, double> t;
  for (int r = 0; r < layout_->size(); ++r) {
    t.emplace(layout_->index(r), c_[static_cast<std::size_t>(r)] * layout_->factorial(r));
  }
  return t;
}

namespace {

void require_compatible(const Jet& a, const Jet& b, const char* op) {
  if (a.dim() != b.dim() || a.order() != b.order() || a.base_point() != b.base_point()) {
    throw std::invalid_argument(std::string(op) + ": mismatched base point or order");
  }
}

}  // namespace

Jet jet_add(const Jet& a, const Jet& b) {
  require_compatible(a, b, "jet_add");
  Jet r = a;
  for (int i = 0; i < a.layout()->size(); ++i) r.coeff_ref(i) += b.coeff(i);
  return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  require_compatible(a, b, "jet_sub");
  Jet r = a;
  for (int i = 0; i < a.layout()->size(); ++i) r.coeff_ref(i) -= b.coeff(i);
  return r;
}

Jet jet_scale(const Jet& a, double s) {
  Jet r = a;
  for (int i = 0; i < a.layout()->size(); ++i) r.coeff_ref(i) *= s;
  return r;
}

Jet jet_shift(const Jet& a, double s) {
  Jet r = a;
  r.coeff_ref(0) += s;
  return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  require_compatible(a, b, "jet_mul");
  Jet r(a.base_point(), a.order());
  for (const auto& [i, j, k] : a.layout()->conv()) {
    r.coeff_ref(k) += a.coeff(i) * b.coeff(j);
  }
  return r;
}

double falling_factorial(double mu, int k) {
  double p = 1.0;
  for (int j = 0; j < k; ++j) p *= (mu - j);
  return p;
}

Jet jet_monomial(std::span<const double> mu, std::span<const double> x,
                 int order) {
  const int m = static_cast<int>(x.size());
  if (static_cast<int>(mu.size()) != m) {
    throw std::invalid_argument("jet_monomial: exponent/point dimension mismatch");
  }
  // Per-axis normalized coefficient tables; the jet is their tensor product.
  std::vector<std::vector<double>> axis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double mui = mu[static_cast<std::size_t>(i)];
    const double xi = x[static_cast<std::size_t>(i)];
    const bool integral = mui >= 0.0 && mui == std::floor(mui);
    if (xi <= 0.0 && !integral) {
      throw std::domain_error("jet_monomial: nonpositive coordinate with real exponent");
    }
    auto& t = axis[static_cast<std::size_t>(i)];
    t.resize(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
      const double c = falling_factorial(mui, k);
      t[static_cast<std::size_t>(k)] =
          c == 0.0 ? 0.0 : c * std::pow(xi, mui - k) / factorial_d(k);
    }
  }
  Jet r(std::vector<double>(x.begin(), x.end()), order);
  const auto& idx = r.layout()->indices();
  for (int rank = 0; rank < r.layout()->size(); ++rank) {
    double p = 1.0;
    for (int i = 0; i < m; ++i) {
      p *= axis[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(rank)][i])];
    }
    r.coeff_ref(rank) = p;
  }
  return r;
}

Jet jet_compose(const Jet& outer, const std::vector<Jet>& inner) {
  const int d = static_cast<int>(inner.size());
  if (d < 1) throw std::invalid_argument("jet_compose: no inner jets");
  if (outer.dim() != d) {
    throw std::invalid_argument("jet_compose: outer dimension != number of inner jets");
  }
  for (const Jet& g : inner) require_compatible(inner[0], g, "jet_compose");
  if (outer.order() != inner[0].order()) {
    throw std::invalid_argument("jet_compose: order mismatch");
  }
  const int order = outer.order();
  for (int c = 0; c < d; ++c) {
    if (std::abs(inner[static_cast<std::size_t>(c)].value() -
                 outer.base_point()[static_cast<std::size_t>(c)]) > 1e-12) {
      throw std::invalid_argument("jet_compose: outer base point does not match inner values");
    }
  }

  // Centered inner jets and their truncated powers.
  std::vector<std::vector<Jet>> pw(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) {
    Jet p = inner[static_cast<std::size_t>(c)];
    p.coeff_ref(0) = 0.0;
    auto& tab = pw[static_cast<std::size_t>(c)];
    tab.push_back(Jet::constant(p.base_point(), order, 1.0));
    for (int k = 1; k <= order; ++k) tab.push_back(jet_mul(tab.back(), p));
  }

  Jet r(inner[0].base_point(), order);
  for (const MultiIndex& lambda : outer.layout()->indices()) {
    const double oc = outer.coeff(lambda);
    if (oc == 0.0) continue;
    Jet term = jet_scale(pw[0][static_cast<std::size_t>(lambda[0])], oc);
    for (int c = 1; c < d; ++c) {
      term = jet_mul(term, pw[static_cast<std::size_t>(c)][static_cast<std::size_t>(lambda[c])]);
    }
    r = jet_add(r, term);
  }
  return r;
}

namespace {

// sum_{k=0..order} series_coeff(k) * (a - a0)^k, with a caller-supplied
// scalar coefficient sequence; shared by exp / reciprocal / pow.
Jet analytic_series(const Jet& a, std::span<const double> series_coeff) {
  Jet centered = a;
  centered.coeff_ref(0) = 0.0;
  Jet acc = Jet::constant(a.base_point(), a.order(), series_coeff[0]);
  Jet power = Jet::constant(a.base_point(), a.order(), 1.0);
  for (int k = 1; k <= a.order(); ++k) {
    power = jet_mul(power, centered);
    acc = jet_add(acc, jet_scale(power, series_coeff[static_cast<std::size_t>(k)]));
  }
  return acc;
}

}  // namespace

Jet jet_exp(const Jet& a) {
  const double s = std::exp(a.value());
  std::vector<double> coeff(static_cast<std::size_t>(a.order()) + 1);
  for (int k = 0; k <= a.order(); ++k) coeff[static_cast<std::size_t>(k)] = 1.0 / factorial_d(k);
  return jet_scale(analytic_series(a, coeff), s);
}

Jet jet_reciprocal(const Jet& a) {
  const double v = a.value();
  if (v == 0.0) throw std::domain_error("jet_reciprocal: value is zero");
  std::vector<double> coeff(static_cast<std::size_t>(a.order()) + 1);
  double c = 1.0 / v;
  for (int k = 0; k <= a.order(); ++k) {
    coeff[static_cast<std::size_t>(k)] = c;
    c *= -1.0 / v;
  }
  return analytic_series(a, coeff);
}

Jet jet_pow(const Jet& a, double mu) {
  const double v = a.value();
  if (v <= 0.0) throw std::domain_error("jet_pow: value must be positive");
  std::vector<double> coeff(static_cast<std::size_t>(a.order()) + 1);
  for (int k = 0; k <= a.order(); ++k) {
    coeff[static_cast<std::size_t>(k)] =
        falling_factorial(mu, k) * std::pow(v, mu - k) / factorial_d(k);
  }
  return analytic_series(a, coeff);
}

struct Expr::Node {
  Kind kind;
  double a = 0.0;  // constant value / exponent / affine scale
  double b = 0.0;  // affine offset
  int index = 0;
  std::vector<Expr> children;
};

Expr Expr::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->a = c;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("Expr::variable: negative index");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->children = {std::move(a), std::move(b)};
  return Expr(std::move(n));
}

Expr Expr::mul(Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->children = {std::move(a), std::move(b)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr arg, double mu) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->a = mu;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::exp(Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::reciprocal(Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Reciprocal;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::affine(double a, double b, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Affine;
  n->a = a;
  n->b = b;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->a; }
int Expr::variable_index() const { return node_->index; }
double Expr::exponent() const { return node_->a; }
double Expr::affine_a() const { return node_->a; }
double Expr::affine_b() const { return node_->b; }
const Expr& Expr::child(int i) const { return node_->children[static_cast<std::size_t>(i)]; }
int Expr::child_count() const { return static_cast<int>(node_->children.size()); }

int Expr::min_dim() const {
  switch (node_->kind) {
    case Kind::Constant: return 0;
    case Kind::Variable: return node_->index + 1;
    default: {
      int m = 0;
      for (const Expr& c : node_->children) m = std::max(m, c.min_dim());
      return m;
    }
  }
}

double Expr::eval(std::span<const double> x) const {
  switch (node_->kind) {
    case Kind::Constant: return node_->a;
    case Kind::Variable: {
      if (node_->index >= static_cast<int>(x.size())) {
        throw std::invalid_argument("Expr::eval: variable index outside point");
      }
      return x[static_cast<std::size_t>(node_->index)];
    }
    case Kind::Add: return child(0).eval(x) + child(1).eval(x);
    case Kind::Mul: return child(0).eval(x) * child(1).eval(x);
    case Kind::Power: {
      const double v = child(0).eval(x);
      if (v <= 0.0) throw std::domain_error("Expr::eval: power of nonpositive value");
      return std::pow(v, node_->a);
    }
    case Kind::Exp: return std::exp(child(0).eval(x));
    case Kind::Reciprocal: {
      const double v = child(0).eval(x);
      if (v == 0.0) throw std::domain_error("Expr::eval: reciprocal of zero");
      return 1.0 / v;
    }
    case Kind::Affine: return node_->a * child(0).eval(x) + node_->b;
  }
  throw std::logic_error("Expr::eval: unknown node kind");
}

Jet Expr::jet(std::span<const double> x, int order) const {
  switch (node_->kind) {
    case Kind::Constant:
      return Jet::constant(std::vector<double>(x.begin(), x.end()), order, node_->a);
    case Kind::Variable: {
      if (node_->index >= static_cast<int>(x.size())) {
        throw std::invalid_argument("Expr::jet: variable index outside point");
      }
      return Jet::variable(std::vector<double>(x.begin(), x.end()), order, node_->index);
    }
    case Kind::Add: return jet_add(child(0).jet(x, order), child(1).jet(x, order));
    case Kind::Mul: return jet_mul(child(0).jet(x, order), child(1).jet(x, order));
    case Kind::Power: return jet_pow(child(0).jet(x, order), node_->a);
    case Kind::Exp: return jet_exp(child(0).jet(x, order));
    case Kind::Reciprocal: return jet_reciprocal(child(0).jet(x, order));
    case Kind::Affine: return jet_shift(jet_scale(child(0).jet(x, order), node_->a), node_->b);
  }
  throw std::logic_error("Expr::jet: unknown node kind");
}

Jet jet_eval_expr(const Expr& e, std::span<const double> x, int order) {
  return e.jet(x, order);
}

}  // namespace mildlab
