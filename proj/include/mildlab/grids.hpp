#pragma once

#include <vector>

namespace mildlab {

/// density strictly interior points of (0, 1) clustered toward 0:
/// x_k = ((k+1) / (density+1))^2.  The derivative bounds under scrutiny
/// degenerate like x^{-nu}, so resolution concentrates where they are
/// hardest to satisfy.
std::vector<double> boundary_refined_axis(int density);

/// Tensor product of boundary_refined_axis over dim axes, row-major with
/// the last axis fastest.  Throws when density < 4.
std::vector<std::vector<double>> tensor_grid(int dim, int density);

/// Default per-axis density: 16 for dim <= 2, 8 for dim >= 3.
int default_grid_density(int dim);

}  // namespace mildlab
