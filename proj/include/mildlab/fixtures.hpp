#pragma once

#include <string>
#include <vector>

#include "mildlab/scene.hpp"
#include "mildlab/substitution.hpp"

namespace mildlab {

/// Bundled scenes, also shipped as JSON files under fixtures/.  The
/// programmatic builders are the source of truth; a test pins the JSON
/// files against them.

/// Two-dimensional cell {x1^{3/2} < x2 < 1} carrying f = x1^3 / x2
/// (declared C^1 bound 3, range bound 1).
Scene power_cell_scene();

/// One-dimensional family: f = t / x on the cell (t, 1), t in
/// {0.1, 0.01, 0.001}.  The monomial map's C^1 norm grows like 1/t, so no
/// uniform bound is declared.
Scene hyperbola_scene();

/// Same family on the half cell (sqrt(t), 1), where |f'| <= 1 holds
/// t-uniformly (declared C^1 bound 1).
Scene hyperbola_split_scene();

/// Jets of f o P_r o phi_naive on (0,1)^2, where phi_naive is the affine
/// cell chart (x1, x1^{3/2} + (1 - x1^{3/2}) x2) of the power cell and P_r
/// the coordinatewise power map applied to its image.  The wall-respecting
/// substitution exists precisely because this composition is not
/// r-uniformly mild.
JetProvider naive_composition_provider(int r, int order);

/// Largest exponent magnitude over the function's monomials (the rate the
/// derivative bounds grow with).
double monomial_rate(const PreparedFunction& f);

struct HyperbolaDemoReport {
  std::vector<double> t;                 // sweep order (descending)
  std::vector<double> fitted_A0;        // per-fiber fit of f o phi^1
  std::vector<double> growth_factors;   // A0[i+1] / A0[i]
  double min_growth = 0.0;
  double growth_threshold = 0.0;
  bool growth_pass = false;
  AssembledConstants constants;          // single t-independent set
  std::vector<MainTheoremReport> uniform_reports;  // split cell, kappa = 1
  bool uniform_pass = false;
  std::string note;
};

/// Two-sided demonstration on the hyperbola family: the affine
/// reparametrization's fitted smooth-certificate constant blows up as
/// t -> 0, while one assembled constant set certifies f o phi^inf on the
/// split cells across every fiber.  A_cell / B_cell are the frozen wall
/// substitution constants.
HyperbolaDemoReport run_hyperbola_demo(int grid_density, int test_order,
                                       double growth_threshold, double A_cell,
                                       double B_cell);

/// fixtures/golden.json access: flat {key: number} objects.
nlohmann::json load_golden_file(const std::string& path);
double golden_number(const nlohmann::json& golden, const std::string& key);

}  // namespace mildlab
