#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mildlab/jets.hpp"

namespace mildlab {

/// Random expression tree in `dim` variables, depth <= max_depth.  Every
/// node maps positive arguments to positive values (constants are positive,
/// affine images have non-negative coefficients, exponents are applied to
/// positive bases), so the tree is smooth and positive on all of (0,1)^dim
/// and safe to feed into another sampled tree.
///
/// Randomness is drawn through a portable 53-bit uniform from the engine,
/// so a fixed seed reproduces the same trees on every platform.
Expr sample_positive_expr(std::mt19937_64& rng, int dim, int max_depth);

/// Outer function in `inner_count` variables plus that many inner
/// components in `dim` variables, for composition round-trips.
struct ComposedSample {
  Expr outer;
  std::vector<Expr> inner;
};

ComposedSample sample_composition(std::mt19937_64& rng, int dim,
                                  int inner_count, int max_depth);

/// Interior sample points avoiding the boundary: coordinates in
/// [margin, 1 - margin].
std::vector<std::vector<double>> sample_points(std::mt19937_64& rng, int dim,
                                               int count, double margin = 0.2);

}  // namespace mildlab
