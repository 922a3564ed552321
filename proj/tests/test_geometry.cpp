#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mildlab/fixtures.hpp"
#include "mildlab/geometry.hpp"
#include "mildlab/grids.hpp"
#include "mildlab/scene.hpp"

using namespace mildlab;

namespace {

MultiIndex MI(std::vector<int> e) { return MultiIndex(std::move(e)); }

PreparedFunction power_cell_function() {
  const Scene scene = power_cell_scene();
  return instantiate_function(scene.functions.at(0), {}, scene.dim);
}

Cell power_cell() {
  const Scene scene = power_cell_scene();
  return instantiate_cell(scene.cells.at(0), {}, scene.dim);
}

}  // namespace

TEST_CASE("bounded monomial values and exact derivatives") {
  BoundedMonomial b;
  b.coefficient = 2.0;
  b.exponents = {1.5, -1.0};
  b.range_bound = 4.0;
  CHECK(b.dim() == 2);
  CHECK(b.exponent_magnitude() == 1.5);

  const std::vector<double> x{0.25, 0.5};
  CHECK(b.value(x) == doctest::Approx(2.0 * 0.125 / 0.5).epsilon(1e-15));

  // d/dx1: 2 * 1.5 * x1^{0.5} / x2.
  CHECK(bm_exact_derivative(b, MI({1, 0}), x) ==
        doctest::Approx(2.0 * 1.5 * 0.5 / 0.5).epsilon(1e-14));
  // d/dx2: -2 * x1^{1.5} / x2^2.
  CHECK(bm_exact_derivative(b, MI({0, 1}), x) ==
        doctest::Approx(-2.0 * 0.125 / 0.25).epsilon(1e-14));

  // The jet agrees with the exact formula on every stored derivative.
  const Jet jet = b.jet(x, 4);
  for (const auto& [nu, d] : jet.derivative_table()) {
    CHECK(d == doctest::Approx(bm_exact_derivative(b, nu, x)).epsilon(1e-12));
  }

  // Magnitude floors at 1 so small exponents still yield a usable rate.
  BoundedMonomial small;
  small.exponents = {0.25};
  CHECK(small.exponent_magnitude() == 1.0);
}

TEST_CASE("bounded monomial bound dominates the exact derivative") {
  BoundedMonomial b;
  b.coefficient = 1.0;
  b.exponents = {-1.0};
  b.range_bound = 100.0;
  // Concentrated indices with mu = -1 make the bound tight: equality.
  const std::vector<double> x{0.3};
  for (int k = 1; k <= 5; ++k) {
    const double exact = std::abs(bm_exact_derivative(b, MI({k}), x));
    const double bound = bm_derivative_bound(b, MI({k}), x);
    CHECK(exact <= bound * (1.0 + 1e-12));
    CHECK(exact == doctest::Approx(bound).epsilon(1e-12));
  }

  // Mixed exponents on a grid: strict domination everywhere, |nu| <= 6.
  BoundedMonomial m;
  m.coefficient = -0.7;
  m.exponents = {1.5, -2.0, 0.5};
  m.range_bound = 10.0;
  for (const std::vector<double>& p : tensor_grid(3, 4)) {
    for (const MultiIndex& nu : enumerate_multiindices(3, 6, 1)) {
      const double exact = std::abs(bm_exact_derivative(m, nu, p));
      const double bound = bm_derivative_bound(m, nu, p);
      CHECK(exact <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("prepared function wiring") {
  const PreparedFunction f = power_cell_function();
  CHECK(f.dim() == 2);
  CHECK(f.c1_bound == 3.0);
  CHECK(monomial_rate(f) == 3.0);

  const std::vector<double> x{0.8, 0.9};
  CHECK(f.value(x) == doctest::Approx(std::pow(0.8, 3.0) / 0.9).epsilon(1e-14));

  // The jet of the full product equals lead-jet times the unit composed
  // with the monomial jets.
  const Jet jet = prepared_jet(f, x, 4);
  std::vector<Jet> bm_jets;
  std::vector<double> vals;
  for (const BoundedMonomial& b : f.monomials) {
    bm_jets.push_back(b.jet(x, 4));
    vals.push_back(bm_jets.back().value());
  }
  const Jet unit_jet = f.unit.expr.jet(vals, 4);
  const Jet manual = jet_mul(bm_jets[static_cast<std::size_t>(f.lead)],
                             jet_compose(unit_jet, bm_jets));
  for (int rank = 0; rank < jet.layout()->size(); ++rank) {
    CHECK(jet.coeff(rank) == doctest::Approx(manual.coeff(rank)).epsilon(1e-12));
  }
}

TEST_CASE("prepared builders") {
  const PreparedFunction c = constant_prepared(2, 3.25);
  CHECK(c.value(std::vector<double>{0.5, 0.5}) == 3.25);
  CHECK(prepared_jet(c, std::vector<double>{0.5, 0.5}, 3).derivative(MI({1, 0})) == 0.0);

  const PreparedFunction m = monomial_prepared(2.0, {1.5}, 2.0, 1.5);
  CHECK(m.c1_bound == 1.5);
  CHECK(m.value(std::vector<double>{0.25}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("prepared bound dominates prepared jets on the cell") {
  const PreparedFunction f = power_cell_function();
  const Cell cell = power_cell();
  const auto [A_f, B_f] = prepared_bound_constants(f);
  CHECK(A_f >= 2.0 * monomial_rate(f));
  CHECK(B_f >= 1.0);

  int checked = 0;
  for (const std::vector<double>& x : tensor_grid(2, 8)) {
    if (!cell.contains(x)) continue;
    const Jet jet = prepared_jet(f, x, 5);
    for (const auto& [nu, d] : jet.derivative_table()) {
      if (nu.is_zero()) continue;
      CHECK(std::abs(d) <=
            prepared_derivative_bound(f, nu, x) * (1.0 + 1e-12));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("walls and cells") {
  const Cell cube = unit_cube_cell(2);
  CHECK(cube.dim == 2);
  CHECK(cube.contains(std::vector<double>{0.5, 0.5}));
  CHECK_FALSE(cube.contains(std::vector<double>{0.5, 1.5}));
  const auto [lo, hi] = cube.wall_values(std::vector<double>{0.5, 0.5}, 1);
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);

  const Cell cell = power_cell();
  CHECK(cell.dim == 2);
  // Lower wall of x2 is x1^{3/2}.
  const auto [wl, wh] = cell.wall_values(std::vector<double>{0.25, 0.9}, 1);
  CHECK(wl == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(wh == 1.0);
  CHECK(cell.contains(std::vector<double>{0.25, 0.5}));
  CHECK_FALSE(cell.contains(std::vector<double>{0.25, 0.1}));
  // Margin shrinks the admissible band.
  CHECK_FALSE(cell.contains(std::vector<double>{0.25, 0.13}, 0.1));

  const Wall& lower = cell.walls[1].first;
  CHECK_FALSE(lower.is_constant());
  CHECK(lower.arity() == 1);
  CHECK(lower.value(std::vector<double>{0.25}) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("cell validation") {
  CHECK(validate_cell(power_cell(), 8).pass);
  const CellValidation ok = validate_cell(unit_cube_cell(3), 4);
  CHECK(ok.pass);
  CHECK(ok.min_gap == 1.0);

  // Inverted walls must fail with a message.
  Cell bad = unit_cube_cell(1);
  bad.walls[0] = {Wall{0.75}, Wall{0.25}};
  const CellValidation cv = validate_cell(bad, 8);
  CHECK_FALSE(cv.pass);
  CHECK_FALSE(cv.message.empty());

  // Walls escaping [0, 1] must fail.
  Cell escape = unit_cube_cell(1);
  escape.walls[0] = {Wall{0.0}, Wall{1.5}};
  CHECK_FALSE(validate_cell(escape, 8).pass);
}

TEST_CASE("C^1 norm check") {
  const Cell cell = power_cell();
  const PreparedFunction f = power_cell_function();
  const auto grid = tensor_grid(2, 16);

  const C1Report ok = c1_norm_check(f, cell, grid, f.c1_bound);
  CHECK(ok.pass);
  CHECK(ok.max_norm <= 3.0);
  CHECK(ok.max_norm > 1.0);

  // x^{1/2} has unbounded slope near 0: any fixed declared bound fails on
  // a boundary-refined grid.
  const PreparedFunction root = monomial_prepared(1.0, {0.5}, 1.0, 1.0);
  const C1Report fail = c1_norm_check(root, unit_cube_cell(1),
                                      tensor_grid(1, 16), 1.0);
  CHECK_FALSE(fail.pass);
  CHECK(fail.max_norm > 1.0);
  CHECK_FALSE(fail.worst_point.empty());
}
