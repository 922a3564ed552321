#include "mildlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mildlab/grids.hpp"

namespace mildlab {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double BoundedMonomial::exponent_magnitude() const {
  double m = 1.0;
  for (double mu : exponents) m = std::max(m, std::abs(mu));
  return m;
}

double BoundedMonomial::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("BoundedMonomial::value: dimension mismatch");
  }
  double v = coefficient;
  for (int i = 0; i < dim(); ++i) {
    const double mu = exponents[static_cast<std::size_t>(i)];
    if (mu == 0.0) continue;
    const double xi = x[static_cast<std::size_t>(i)];
    const bool integral = mu >= 0.0 && mu == std::floor(mu);
    if (xi <= 0.0 && !integral) {
      throw std::domain_error("BoundedMonomial::value: nonpositive coordinate with real exponent");
    }
    v *= std::pow(xi, mu);
  }
  return v;
}

Jet BoundedMonomial::jet(std::span<const double> x, int order) const {
  return jet_scale(jet_monomial(exponents, x, order), coefficient);
}

double bm_exact_derivative(const BoundedMonomial& b, const MultiIndex& nu,
                           std::span<const double> x) {
  if (nu.dim() != b.dim()) {
    throw std::invalid_argument("bm_exact_derivative: dimension mismatch");
  }
  return b.jet(x, nu.total()).derivative(nu);
}

double bm_derivative_bound(const BoundedMonomial& b, const MultiIndex& nu,
                           std::span<const double> x) {
  if (nu.dim() != b.dim()) {
    throw std::invalid_argument("bm_derivative_bound: dimension mismatch");
  }
  double xpow = 1.0;
  for (int i = 0; i < nu.dim(); ++i) {
    for (int k = 0; k < nu[i]; ++k) xpow /= x[static_cast<std::size_t>(i)];
  }
  return xpow * std::abs(b.value(x)) *
         std::pow(b.exponent_magnitude(), nu.total()) * factorial_d(nu.total());
}

int PreparedFunction::dim() const {
  if (monomials.empty()) throw std::logic_error("PreparedFunction: no monomials");
  return monomials[0].dim();
}

double PreparedFunction::value(std::span<const double> x) const {
  std::vector<double> b(monomials.size());
  for (std::size_t i = 0; i < monomials.size(); ++i) b[i] = monomials[i].value(x);
  return b[static_cast<std::size_t>(lead)] * unit.expr.eval(b);
}

PreparedFunction constant_prepared(int dim, double value) {
  PreparedFunction f;
  f.monomials.push_back(BoundedMonomial{
      value, std::vector<double>(static_cast<std::size_t>(dim), 0.0), std::abs(value)});
  f.lead = 0;
  f.unit = Unit{Expr::constant(1.0), MildParams{1.0, 1.0, 0.0, kUnboundedOrder}};
  f.c1_bound = std::abs(value);
  return f;
}

PreparedFunction monomial_prepared(double coefficient, std::vector<double> exponents,
                                   double range_bound, double c1_bound) {
  PreparedFunction f;
  f.monomials.push_back(BoundedMonomial{coefficient, std::move(exponents), range_bound});
  f.lead = 0;
  f.unit = Unit{Expr::constant(1.0), MildParams{1.0, 1.0, 0.0, kUnboundedOrder}};
  f.c1_bound = c1_bound;
  return f;
}

Jet prepared_jet(const PreparedFunction& f, std::span<const double> x, int order) {
  if (f.monomials.empty()) throw std::invalid_argument("prepared_jet: no monomials");
  if (f.lead < 0 || f.lead >= static_cast<int>(f.monomials.size())) {
    throw std::invalid_argument("prepared_jet: lead index out of range");
  }
  const int n = static_cast<int>(f.monomials.size());
  std::vector<Jet> bjets;
  std::vector<double> bvals(static_cast<std::size_t>(n));
  bjets.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bjets.push_back(f.monomials[static_cast<std::size_t>(i)].jet(x, order));
    bvals[static_cast<std::size_t>(i)] = bjets.back().value();
    if (!std::isfinite(bvals[static_cast<std::size_t>(i)])) {
      throw std::range_error("prepared_jet: monomial value left double range");
    }
  }
  if (f.unit.expr.min_dim() > n) {
    throw std::invalid_argument("prepared_jet: unit reads more variables than monomials");
  }
  const double fv = f.unit.expr.eval(bvals);
  if (std::abs(fv) < 1e-6) {
    throw std::domain_error("prepared_jet: unit magnitude below 1e-6 at monomial values");
  }
  const Jet unit_jet = f.unit.expr.jet(bvals, order);
  const Jet composed = jet_compose(unit_jet, bjets);
  return jet_mul(bjets[static_cast<std::size_t>(f.lead)], composed);
}

std::pair<double, double> prepared_bound_constants(const PreparedFunction& f) {
  const int n = static_cast<int>(f.monomials.size());
  double Ab = 1.0;
  double Bb = 0.0;
  for (const BoundedMonomial& b : f.monomials) {
    Ab = std::max(Ab, b.exponent_magnitude());
    Bb = std::max(Bb, b.range_bound);
  }
  const double AF = f.unit.mild.A;
  const double BF = f.unit.mild.B;
  const double A = Ab * (n * AF * Bb + 1.0);
  const double Af = 2.0 * std::max(A, f.monomials[static_cast<std::size_t>(f.lead)].exponent_magnitude());
  const double Bf = BF;
  return {Af, Bf};
}

double prepared_derivative_bound(const PreparedFunction& f, const MultiIndex& nu,
                                 std::span<const double> x) {
  const auto [Af, Bf] = prepared_bound_constants(f);
  double xpow = 1.0;
  for (int i = 0; i < nu.dim(); ++i) {
    for (int k = 0; k < nu[i]; ++k) xpow /= x[static_cast<std::size_t>(i)];
  }
  const double lead = std::abs(f.monomials[static_cast<std::size_t>(f.lead)].value(x));
  return xpow * lead * Bf * std::pow(Af, nu.total()) * factorial_d(nu.total());
}

int Wall::arity() const {
  if (is_constant()) return 0;
  return std::get<PreparedFunction>(f).dim();
}

double Wall::value(std::span<const double> prefix) const {
  if (is_constant()) return std::get<double>(f);
  const PreparedFunction& p = std::get<PreparedFunction>(f);
  if (static_cast<int>(prefix.size()) < p.dim()) {
    throw std::invalid_argument("Wall::value: prefix shorter than wall arity");
  }
  return p.value(prefix.subspan(0, static_cast<std::size_t>(p.dim())));
}

std::pair<double, double> Cell::wall_values(std::span<const double> x, int i) const {
  const auto& [lo, hi] = walls[static_cast<std::size_t>(i)];
  return {lo.value(x), hi.value(x)};
}

bool Cell::contains(std::span<const double> x, double margin) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (int i = 0; i < dim; ++i) {
    const auto [lo, hi] = wall_values(x, i);
    const double xi = x[static_cast<std::size_t>(i)];
    if (!(xi > lo + margin && xi < hi - margin)) return false;
  }
  return true;
}

Cell unit_cube_cell(int dim) {
  Cell c;
  c.dim = dim;
  for (int i = 0; i < dim; ++i) {
    c.walls.push_back({Wall{0.0}, Wall{1.0}});
  }
  return c;
}

CellValidation validate_cell(const Cell& cell, int grid_density) {
  CellValidation v;
  if (cell.dim < 1 || static_cast<int>(cell.walls.size()) != cell.dim) {
    v.message = "wall count does not match dimension";
    return v;
  }
  for (int i = 0; i < cell.dim; ++i) {
    const auto& [lo, hi] = cell.walls[static_cast<std::size_t>(i)];
    if (lo.arity() > i || hi.arity() > i) {
      v.message = "wall " + std::to_string(i) + " reads coordinates at or after its own axis";
      return v;
    }
  }
  v.min_gap = 1.0;
  v.min_wall = 1.0;
  v.max_wall = 0.0;
  const auto grid = tensor_grid(cell.dim, grid_density);
  for (const auto& x : grid) {
    // Walls only read the prefix, so sampling the full box exercises every
    // admissible prefix combination.
    for (int i = 0; i < cell.dim; ++i) {
      const auto [lo, hi] = cell.wall_values(x, i);
      v.min_gap = std::min(v.min_gap, hi - lo);
      v.min_wall = std::min({v.min_wall, lo, hi});
      v.max_wall = std::max({v.max_wall, lo, hi});
    }
  }
  if (v.min_gap <= 0.0) {
    v.message = "degenerate cell: walls touch or cross on the sampled grid";
    return v;
  }
  if (v.min_wall < 0.0 || v.max_wall > 1.0) {
    v.message = "walls leave [0, 1]";
    return v;
  }
  v.pass = true;
  v.message = "ok";
  return v;
}

C1Report c1_norm_check(const PreparedFunction& f, const Cell& cell,
                       const std::vector<std::vector<double>>& grid,
                       double declared_bound) {
  if (declared_bound <= 0.0) {
    throw std::invalid_argument("c1_norm_check: declared bound must be positive");
  }
  C1Report rep;
  int used = 0;
  for (const auto& x : grid) {
    if (!cell.contains(x, 0.0)) continue;
    ++used;
    for (std::size_t c = 0; c < f.monomials.size(); ++c) {
      const Jet j = f.monomials[c].jet(x, 1);
      for (int rank = 0; rank < j.layout()->size(); ++rank) {
        const double norm = std::abs(j.coeff(rank));  // |d^nu| / nu!, |nu| <= 1
        if (norm > rep.max_norm) {
          rep.max_norm = norm;
          rep.worst_point = x;
          rep.worst_component = static_cast<int>(c);
        }
      }
    }
  }
  if (used == 0) throw std::invalid_argument("c1_norm_check: no grid point inside the cell");
  rep.pass = rep.max_norm <= declared_bound * (1.0 + 1e-9);
  return rep;
}

}  // namespace mildlab
