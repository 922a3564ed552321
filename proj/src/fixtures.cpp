#include "mildlab/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "mildlab/grids.hpp"

namespace mildlab {

namespace {

PreparedSpec trivial_unit_spec(std::string name, ScalarOfT coeff,
                               std::vector<double> exponents, double range_bound,
                               double c1_bound) {
  PreparedSpec spec;
  spec.name = std::move(name);
  MonomialSpec m;
  m.coeff = coeff;
  m.exponents = std::move(exponents);
  m.range_bound = range_bound;
  spec.monomials.push_back(std::move(m));
  spec.lead = 0;
  spec.unit.expr = Expr::constant(1.0);
  spec.unit.mild = MildParams{};
  spec.c1_bound = c1_bound;
  return spec;
}

}  // namespace

Scene power_cell_scene() {
  Scene scene;
  scene.dim = 2;

  CellSpec cell;
  cell.name = "power-cell";
  cell.walls.emplace_back(ScalarOfT{0.0, 0.0}, ScalarOfT{1.0, 0.0});
  cell.walls.emplace_back(
      trivial_unit_spec("lower-wall", ScalarOfT{1.0, 0.0}, {1.5}, 1.0, 1.5),
      ScalarOfT{1.0, 0.0});
  scene.cells.push_back(std::move(cell));

  scene.functions.push_back(
      trivial_unit_spec("cusp-quotient", ScalarOfT{1.0, 0.0}, {3.0, -1.0}, 1.0, 3.0));
  return scene;
}

Scene hyperbola_scene() {
  Scene scene;
  scene.dim = 1;
  scene.t_grid = {{0.1}, {0.01}, {0.001}};

  CellSpec cell;
  cell.name = "hyperbola-cell";
  cell.walls.emplace_back(ScalarOfT{1.0, 1.0}, ScalarOfT{1.0, 0.0});
  scene.cells.push_back(std::move(cell));

  // No uniform C^1 bound exists for t/x on (t, 1); leave it undeclared.
  scene.functions.push_back(
      trivial_unit_spec("hyperbola-graph", ScalarOfT{1.0, 1.0}, {-1.0}, 1.0, 0.0));
  return scene;
}

Scene hyperbola_split_scene() {
  Scene scene;
  scene.dim = 1;
  scene.t_grid = {{0.1}, {0.01}, {0.001}};

  CellSpec cell;
  cell.name = "hyperbola-split-cell";
  cell.walls.emplace_back(ScalarOfT{1.0, 0.5}, ScalarOfT{1.0, 0.0});
  scene.cells.push_back(std::move(cell));

  // On (sqrt(t), 1) the derivative t/x^2 is at most 1, uniformly in t.
  scene.functions.push_back(
      trivial_unit_spec("hyperbola-graph", ScalarOfT{1.0, 1.0}, {-1.0}, 1.0, 1.0));
  return scene;
}

JetProvider naive_composition_provider(int r, int order) {
  if (r < 1) throw std::invalid_argument("naive_composition_provider: r must be >= 1");
  const Scene scene = power_cell_scene();
  const PreparedFunction f = instantiate_function(scene.functions.front(), {}, 2);
  // Wrong-order composition: the power map is applied to the image of the
  // naive cell map phi(x) = (x1, x1^{3/2} + (1 - x1^{3/2}) x2) rather than
  // to its arguments, so the half-integer exponent never gets smoothed and
  // the fitted rate grows with r.
  return [f, r, order](std::span<const double> x) {
    const std::vector<double> half{1.5, 0.0};
    const std::vector<double> pure{0.0, 1.0};
    const std::vector<double> both{1.5, 1.0};
    const Jet a = jet_monomial(half, x, order);   // x1^{3/2}
    const Jet b = jet_monomial(pure, x, order);   // x2
    const Jet c = jet_monomial(both, x, order);   // x1^{3/2} x2
    const Jet phi1 = jet_monomial(std::vector<double>{1.0, 0.0}, x, order);
    const Jet phi2 = a + b - c;
    std::vector<Jet> inner;
    inner.push_back(jet_pow(phi1, static_cast<double>(r)));
    inner.push_back(jet_pow(phi2, static_cast<double>(r)));
    std::vector<double> vals{inner[0].value(), inner[1].value()};
    const Jet outer = prepared_jet(f, vals, order);
    return jet_compose(outer, inner);
  };
}

double monomial_rate(const PreparedFunction& f) {
  double rate = 1.0;
  for (const BoundedMonomial& m : f.monomials) {
    rate = std::max(rate, m.exponent_magnitude());
  }
  return rate;
}

HyperbolaDemoReport run_hyperbola_demo(int grid_density, int test_order,
                                       double growth_threshold, double A_cell,
                                       double B_cell) {
  const Scene raw = hyperbola_scene();
  const Scene split = hyperbola_split_scene();
  const std::vector<std::vector<double>> grid = tensor_grid(1, grid_density);

  HyperbolaDemoReport report;
  report.growth_threshold = growth_threshold;

  for (const std::vector<double>& t : raw.t_grid) {
    report.t.push_back(t[0]);

    const Cell raw_cell = instantiate_cell(raw.cells.front(), t, raw.dim);
    const PreparedFunction raw_f = instantiate_function(raw.functions.front(), t, raw.dim);
    const MainTheoremReport smooth =
        verify_main_crpara(raw_f, raw_cell, 1, grid, 1.0);
    report.fitted_A0.push_back(smooth.certificate.fitted_A_star);

    const Cell split_cell = instantiate_cell(split.cells.front(), t, split.dim);
    const PreparedFunction split_f =
        instantiate_function(split.functions.front(), t, split.dim);
    const AssembledConstants constants = assemble_mildpara_constants(
        1.0, split.dim, monomial_rate(split_f), split_f.c1_bound, A_cell, B_cell);
    report.constants = constants;
    report.uniform_reports.push_back(verify_main_mildpara(
        split_f, split_cell, 1.0, grid, test_order, constants));
  }

  report.growth_pass = report.t.size() >= 2;
  report.min_growth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < report.fitted_A0.size(); ++i) {
    const double factor = report.fitted_A0[i + 1] / report.fitted_A0[i];
    report.growth_factors.push_back(factor);
    report.min_growth = std::min(report.min_growth, factor);
    report.growth_pass = report.growth_pass && factor >= growth_threshold;
  }
  report.uniform_pass = !report.uniform_reports.empty();
  for (const MainTheoremReport& r : report.uniform_reports) {
    report.uniform_pass = report.uniform_pass && r.certificate.pass;
  }
  report.note =
      "affine reparametrization constant grows as t -> 0; one assembled "
      "constant set certifies every fiber on the split cell";
  return report;
}

nlohmann::json load_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("golden-file", "cannot open golden file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SceneError("golden-json", std::string("golden file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SceneError("golden-json", "golden file must be a JSON object");
  return j;
}

double golden_number(const nlohmann::json& golden, const std::string& key) {
  if (!golden.contains(key) || !golden.at(key).is_number()) {
    throw SceneError("golden-key", "golden file is missing numeric key '" + key + "'");
  }
  return golden.at(key).get<double>();
}

}  // namespace mildlab
