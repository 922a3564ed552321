#include "mildlab/expr_sampling.hpp"

namespace mildlab {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

int uniform_int(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

Expr leaf(std::mt19937_64& rng, int dim) {
  if (uniform01(rng) < 0.5) {
    return Expr::constant(uniform(rng, 0.2, 2.0));
  }
  return Expr::variable(uniform_int(rng, dim));
}

Expr node(std::mt19937_64& rng, int dim, int depth) {
  if (depth <= 0) return leaf(rng, dim);
  switch (uniform_int(rng, 8)) {
    case 0:
    case 1:
      return leaf(rng, dim);
    case 2:
      return Expr::add(node(rng, dim, depth - 1), node(rng, dim, depth - 1));
    case 3:
      return Expr::mul(node(rng, dim, depth - 1), node(rng, dim, depth - 1));
    case 4:
      // Positive base; modest exponent range keeps magnitudes sane.
      return Expr::power(node(rng, dim, depth - 1), uniform(rng, -1.5, 2.5));
    case 5:
      return Expr::exp(Expr::affine(uniform(rng, -1.0, 1.0), uniform(rng, -0.5, 0.5),
                                    node(rng, dim, depth - 1)));
    case 6:
      return Expr::reciprocal(node(rng, dim, depth - 1));
    default:
      return Expr::affine(uniform(rng, 0.1, 2.0), uniform(rng, 0.0, 1.0),
                          node(rng, dim, depth - 1));
  }
}

}  // namespace

Expr sample_positive_expr(std::mt19937_64& rng, int dim, int max_depth) {
  return node(rng, dim, max_depth);
}

ComposedSample sample_composition(std::mt19937_64& rng, int dim,
                                  int inner_count, int max_depth) {
  ComposedSample sample;
  sample.outer = sample_positive_expr(rng, inner_count, max_depth);
  for (int c = 0; c < inner_count; ++c) {
    sample.inner.push_back(sample_positive_expr(rng, dim, max_depth));
  }
  return sample;
}

std::vector<std::vector<double>> sample_points(std::mt19937_64& rng, int dim,
                                               int count, double margin) {
  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (double& v : x) v = uniform(rng, margin, 1.0 - margin);
    points.push_back(std::move(x));
  }
  return points;
}

}  // namespace mildlab
