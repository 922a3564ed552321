#include "mildlab/grids.hpp"

#include <stdexcept>

namespace mildlab {

std::vector<double> boundary_refined_axis(int density) {
  if (density < 4) throw std::invalid_argument("boundary_refined_axis: density must be >= 4");
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(density));
  for (int k = 0; k < density; ++k) {
    const double s = static_cast<double>(k + 1) / (density + 1);
    axis.push_back(s * s);
  }
  return axis;
}

std::vector<std::vector<double>> tensor_grid(int dim, int density) {
  if (dim < 1) throw std::invalid_argument("tensor_grid: dim must be >= 1");
  const std::vector<double> axis = boundary_refined_axis(density);
  std::vector<std::vector<double>> points;
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) count *= axis.size();
  points.reserve(count);
  std::vector<int> odo(static_cast<std::size_t>(dim), 0);
  while (true) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = axis[static_cast<std::size_t>(odo[static_cast<std::size_t>(i)])];
    points.push_back(std::move(p));
    int i = dim - 1;
    while (i >= 0 && ++odo[static_cast<std::size_t>(i)] == static_cast<int>(axis.size())) {
      odo[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return points;
}

int default_grid_density(int dim) { return dim <= 2 ? 16 : 8; }

}  // namespace mildlab
