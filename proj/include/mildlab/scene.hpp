#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "mildlab/geometry.hpp"

namespace mildlab {

/// Scene validation failure; `invariant` names the violated rule so the CLI
/// can emit it machine-readably.
class SceneError : public std::runtime_error {
 public:
  SceneError(std::string invariant, const std::string& message)
      : std::runtime_error(message), invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

/// Scalar that may depend on the family parameter: coeff * t_1^{t_power}.
struct ScalarOfT {
  double coeff = 1.0;
  double t_power = 0.0;

  bool depends_on_t() const { return t_power != 0.0; }
  double at(std::span<const double> t) const;
};

/// One monomial of a prepared function, before the fiber is frozen.
struct MonomialSpec {
  ScalarOfT coeff;
  std::vector<double> exponents;
  double range_bound = 1.0;
};

/// A prepared function over the family: monomial tuple, lead index, unit
/// expression with its declared certificate, and an optional declared C^1
/// bound on the monomial map.
struct PreparedSpec {
  std::string name;
  std::vector<MonomialSpec> monomials;
  int lead = 0;
  Unit unit;
  double c1_bound = 0.0;
};

/// Wall before the fiber is frozen: a (possibly t-dependent) constant or a
/// prepared function of the preceding coordinates.
using WallSpec = std::variant<ScalarOfT, PreparedSpec>;

struct CellSpec {
  std::string name;
  std::vector<std::pair<WallSpec, WallSpec>> walls;
};

/// Parsed scene file: a family of cells and prepared functions over a
/// common ambient dimension, swept over the listed fibers.
struct Scene {
  int dim = 0;
  std::vector<std::vector<double>> t_grid;  // empty = single trivial fiber
  std::vector<CellSpec> cells;
  std::vector<PreparedSpec> functions;
};

/// Exact decimal parsing for exponent strings ("1.5", "-3", "0.1"); the
/// value is formed as an integer ratio before the single rounding to double.
double parse_decimal_exact(const std::string& text);

Scene parse_scene(const nlohmann::json& j);
Scene load_scene(const std::string& path);

Expr expr_from_json(const nlohmann::json& j);
nlohmann::json expr_to_json(const Expr& e);

/// Freeze one fiber of the family.
PreparedFunction instantiate_function(const PreparedSpec& spec,
                                      std::span<const double> t, int dim);
Cell instantiate_cell(const CellSpec& spec, std::span<const double> t, int dim);

/// Fibers to sweep: the scene's t_grid, or a single empty fiber when the
/// scene declares none.
std::vector<FamilyFiber> scene_fibers(const Scene& scene);

}  // namespace mildlab
