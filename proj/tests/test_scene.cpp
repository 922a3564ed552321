#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mildlab/fixtures.hpp"
#include "mildlab/scene.hpp"

using namespace mildlab;
using nlohmann::json;

namespace {

/// Parses `j` and asserts it is rejected with the named invariant.
void expect_invariant(const json& j, const std::string& name) {
  try {
    (void)parse_scene(j);
    FAIL_CHECK("expected rejection with invariant '" << name << "'");
  } catch (const SceneError& e) {
    CHECK(e.invariant() == name);
  }
}

json minimal_scene() {
  return json{{"dim", 1}};
}

json scene_with_function(json fn) {
  json j = minimal_scene();
  j["functions"] = json::array({std::move(fn)});
  return j;
}

json valid_function() {
  return json{{"monomials", json::array({json{{"exponents", json::array({"1"})}}})}};
}

/// Structural + numeric agreement of two scenes at every fiber.
void check_scene_equal(const Scene& a, const Scene& b,
                       const std::vector<std::vector<double>>& probes) {
  REQUIRE(a.dim == b.dim);
  REQUIRE(a.t_grid == b.t_grid);
  REQUIRE(a.cells.size() == b.cells.size());
  REQUIRE(a.functions.size() == b.functions.size());
  for (const FamilyFiber& fiber : scene_fibers(a)) {
    for (std::size_t c = 0; c < a.cells.size(); ++c) {
      const Cell ca = instantiate_cell(a.cells[c], fiber.t, a.dim);
      const Cell cb = instantiate_cell(b.cells[c], fiber.t, b.dim);
      REQUIRE(ca.dim == cb.dim);
      for (const std::vector<double>& p : probes) {
        for (int i = 0; i < ca.dim; ++i) {
          const auto [la, ha] = ca.wall_values(p, i);
          const auto [lb, hb] = cb.wall_values(p, i);
          CHECK(la == lb);
          CHECK(ha == hb);
        }
      }
    }
    for (std::size_t k = 0; k < a.functions.size(); ++k) {
      const PreparedFunction fa = instantiate_function(a.functions[k], fiber.t, a.dim);
      const PreparedFunction fb = instantiate_function(b.functions[k], fiber.t, b.dim);
      REQUIRE(fa.monomials.size() == fb.monomials.size());
      CHECK(fa.lead == fb.lead);
      CHECK(fa.c1_bound == fb.c1_bound);
      CHECK(fa.unit.mild.A == fb.unit.mild.A);
      CHECK(fa.unit.mild.B == fb.unit.mild.B);
      CHECK(fa.unit.mild.C == fb.unit.mild.C);
      for (std::size_t m = 0; m < fa.monomials.size(); ++m) {
        CHECK(fa.monomials[m].coefficient == fb.monomials[m].coefficient);
        CHECK(fa.monomials[m].exponents == fb.monomials[m].exponents);
        CHECK(fa.monomials[m].range_bound == fb.monomials[m].range_bound);
      }
      for (const std::vector<double>& p : probes) {
        CHECK(fa.value(p) == fb.value(p));
      }
    }
  }
}

}  // namespace

TEST_CASE("exact decimal parsing") {
  CHECK(parse_decimal_exact("1.5") == 1.5);
  CHECK(parse_decimal_exact("-3") == -3.0);
  CHECK(parse_decimal_exact("0.1") == 0.1);
  CHECK(parse_decimal_exact("2") == 2.0);
  CHECK(parse_decimal_exact("-0.25") == -0.25);
  CHECK_THROWS_AS((void)parse_decimal_exact("1.5e3"), SceneError);
  CHECK_THROWS_AS((void)parse_decimal_exact("3/2"), SceneError);
  CHECK_THROWS_AS((void)parse_decimal_exact(""), SceneError);
  CHECK_THROWS_AS((void)parse_decimal_exact("."), SceneError);
}

TEST_CASE("scalar of t") {
  const ScalarOfT plain{2.5, 0.0};
  CHECK_FALSE(plain.depends_on_t());
  CHECK(plain.at(std::vector<double>{}) == 2.5);
  CHECK(plain.at(std::vector<double>{0.1}) == 2.5);

  const ScalarOfT scaled{2.0, 1.5};
  CHECK(scaled.depends_on_t());
  CHECK(scaled.at(std::vector<double>{0.25}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("shipped scene files match the programmatic builders") {
  check_scene_equal(load_scene("fixtures/power_cell.json"), power_cell_scene(),
                    {{0.3, 0.5}, {0.7, 0.8}, {0.9, 0.95}});
  check_scene_equal(load_scene("fixtures/hyperbola.json"), hyperbola_scene(),
                    {{0.3}, {0.5}, {0.9}});
  check_scene_equal(load_scene("fixtures/hyperbola_split.json"),
                    hyperbola_split_scene(), {{0.3}, {0.5}, {0.9}});
}

TEST_CASE("power cell scene semantics") {
  const Scene scene = power_cell_scene();
  REQUIRE(scene.dim == 2);
  CHECK(scene.t_grid.empty());
  const Cell cell = instantiate_cell(scene.cells.at(0), {}, scene.dim);
  const auto [lo, hi] = cell.wall_values(std::vector<double>{0.25, 0.5}, 1);
  CHECK(lo == doctest::Approx(std::pow(0.25, 1.5)).epsilon(1e-15));
  CHECK(hi == 1.0);
  const PreparedFunction f = instantiate_function(scene.functions.at(0), {}, scene.dim);
  CHECK(f.value(std::vector<double>{0.5, 0.25}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("hyperbola family instantiation uses the fiber") {
  const Scene scene = hyperbola_scene();
  REQUIRE_FALSE(scene.t_grid.empty());
  for (const FamilyFiber& fiber : scene_fibers(scene)) {
    REQUIRE(fiber.t.size() == 1);
    const double t = fiber.t[0];
    const PreparedFunction f =
        instantiate_function(scene.functions.at(0), fiber.t, scene.dim);
    CHECK(f.value(std::vector<double>{0.5}) == doctest::Approx(t / 0.5).epsilon(1e-14));
    const Cell cell = instantiate_cell(scene.cells.at(0), fiber.t, scene.dim);
    const auto [lo, hi] = cell.wall_values(std::vector<double>{0.5}, 0);
    CHECK(lo == t);
    CHECK(hi == 1.0);
  }

  // The split variant moves the lower wall to sqrt(t) and declares a
  // t-uniform C^1 bound.
  const Scene split = hyperbola_split_scene();
  CHECK(split.t_grid == scene.t_grid);
  for (const FamilyFiber& fiber : scene_fibers(split)) {
    const Cell cell = instantiate_cell(split.cells.at(0), fiber.t, split.dim);
    const auto [lo, hi] = cell.wall_values(std::vector<double>{0.5}, 0);
    CHECK(lo == doctest::Approx(std::sqrt(fiber.t[0])).epsilon(1e-15));
    CHECK(hi == 1.0);
    const PreparedFunction f =
        instantiate_function(split.functions.at(0), fiber.t, split.dim);
    CHECK(f.c1_bound == 1.0);
  }
}

TEST_CASE("expression JSON round trip") {
  const json src = json{
      {"op", "mul"},
      {"args", json::array({
          json{{"op", "exp"},
               {"arg", json{{"op", "affine"}, {"a", 2.0}, {"b", -0.5},
                            {"arg", json{{"op", "var"}, {"index", 0}}}}}},
          json{{"op", "recip"},
               {"arg", json{{"op", "add"},
                            {"args", json::array({json{{"op", "var"}, {"index", 1}},
                                                  json{{"op", "const"}, {"value", 2.0}}})}}}},
          json{{"op", "pow"},
               {"arg", json{{"op", "var"}, {"index", 1}}},
               {"exponent", "0.5"}}})}};
  const Expr e = expr_from_json(src);
  CHECK(e.min_dim() == 2);
  const Expr back = expr_from_json(expr_to_json(e));
  const std::vector<double> at{0.7, 0.9};
  const double expect = std::exp(2.0 * 0.7 - 0.5) / (0.9 + 2.0) * std::sqrt(0.9);
  CHECK(e.eval(at) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(back.eval(at) == e.eval(at));

  // Plain numbers are constants.
  CHECK(expr_from_json(json(3.5)).constant_value() == 3.5);
}

TEST_CASE("scene rejection invariants") {
  expect_invariant(json::array(), "scene-json");
  expect_invariant(json::object(), "dim-positive");
  expect_invariant(json{{"dim", 0}}, "dim-positive");
  expect_invariant(json{{"dim", "two"}}, "dim-positive");

  expect_invariant(json{{"dim", 1}, {"t_grid", "x"}}, "t-grid-shape");
  expect_invariant(json{{"dim", 1}, {"t_grid", json::array({json::array({1.0}),
                                                            json::array({1.0, 2.0})})}},
                   "t-grid-shape");
  expect_invariant(json{{"dim", 1}, {"t_grid", json::array({"a"})}}, "t-grid-shape");
  expect_invariant(json{{"dim", 1}, {"t_grid", json::array({0.0})}}, "t-grid-positive");

  expect_invariant(json{{"dim", 1}, {"cells", "x"}}, "walls-count");
  expect_invariant(json{{"dim", 1}, {"cells", json::array({json::object()})}},
                   "walls-count");
  expect_invariant(
      json{{"dim", 2},
           {"cells", json::array({json{{"walls",
                                        json::array({json{{"lower", 0.0}, {"upper", 1.0}}})}}})}},
      "walls-count");
  expect_invariant(
      json{{"dim", 1},
           {"cells", json::array({json{{"walls", json::array({json{{"lower", 0.0}}})}}})}},
      "walls-count");

  expect_invariant(json{{"dim", 1}, {"functions", "x"}}, "monomial-parse");
  expect_invariant(scene_with_function(json::object()), "monomial-parse");
  expect_invariant(scene_with_function(json{{"monomials", json::array()}}),
                   "monomial-parse");
  expect_invariant(scene_with_function(json{{"monomials", json::array({1.0})}}),
                   "monomial-parse");
  expect_invariant(
      scene_with_function(json{{"monomials", json::array({json{{"exponents", "x"}}})}}),
      "monomial-parse");

  expect_invariant(
      scene_with_function(
          json{{"monomials", json::array({json{{"exponents", json::array({"1", "1"})}}})}}),
      "monomial-exponents-dim");

  {
    json fn = valid_function();
    fn["monomials"][0]["range_bound"] = 0.0;
    expect_invariant(scene_with_function(fn), "range-bound-positive");
  }
  {
    json fn = valid_function();
    fn["lead"] = 3;
    expect_invariant(scene_with_function(fn), "lead-range");
    fn["lead"] = "first";
    expect_invariant(scene_with_function(fn), "lead-range");
  }
  {
    json fn = valid_function();
    fn["unit"] = json{{"op", "var"}, {"index", 4}};
    expect_invariant(scene_with_function(fn), "unit-arity");
  }
  {
    json fn = valid_function();
    fn["unit_mild"] = "fast";
    expect_invariant(scene_with_function(fn), "unit-mild-positive");
    fn["unit_mild"] = json{{"A", 0.0}, {"B", 1.0}, {"C", 0.0}};
    expect_invariant(scene_with_function(fn), "unit-mild-positive");
  }
  {
    json fn = valid_function();
    fn["c1_bound"] = -1.0;
    expect_invariant(scene_with_function(fn), "c1-bound");
  }
  {
    // A prepared wall at position 0 has no preceding coordinates to read.
    json wall_fn = valid_function();
    expect_invariant(
        json{{"dim", 1},
             {"cells", json::array({json{{"walls",
                                          json::array({json{{"lower", wall_fn},
                                                            {"upper", 1.0}}})}}})}},
        "wall-arity");
  }
  expect_invariant(
      json{{"dim", 1},
           {"cells", json::array({json{{"walls", json::array({json{{"lower", true},
                                                                   {"upper", 1.0}}})}}})}},
      "scalar-parse");
  {
    json fn = valid_function();
    fn["monomials"][0]["exponents"] = json::array({"1.5e3"});
    expect_invariant(scene_with_function(fn), "exponent-parse");
    fn["monomials"][0]["exponents"] = json::array({true});
    expect_invariant(scene_with_function(fn), "exponent-parse");
  }
  {
    json fn = valid_function();
    fn["unit"] = json{{"op", "integrate"}};
    expect_invariant(scene_with_function(fn), "expr-parse");
    fn["unit"] = "x";
    expect_invariant(scene_with_function(fn), "expr-parse");
  }
}

TEST_CASE("scene file errors") {
  try {
    (void)load_scene("fixtures/__missing__.json");
    FAIL_CHECK("expected scene-file");
  } catch (const SceneError& e) {
    CHECK(e.invariant() == "scene-file");
  }
  // A present but syntactically broken file reports scene-json.
  {
    const std::string path = "/tmp/mildlab_broken_scene.json";
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      REQUIRE(f != nullptr);
      std::fputs("{not json", f);
      std::fclose(f);
    }
    try {
      (void)load_scene(path);
      FAIL_CHECK("expected scene-json");
    } catch (const SceneError& e) {
      CHECK(e.invariant() == "scene-json");
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("instantiation validates monomial dimension") {
  PreparedSpec spec;
  MonomialSpec m;
  m.exponents = {1.0, 2.0};
  spec.monomials.push_back(m);
  try {
    (void)instantiate_function(spec, {}, 1);
    FAIL_CHECK("expected monomial-exponents-dim");
  } catch (const SceneError& e) {
    CHECK(e.invariant() == "monomial-exponents-dim");
  }
}

TEST_CASE("scene fibers") {
  const Scene plain = power_cell_scene();
  const auto fibers = scene_fibers(plain);
  REQUIRE(fibers.size() == 1);
  CHECK(fibers[0].t.empty());

  const Scene fam = hyperbola_scene();
  const auto sweep = scene_fibers(fam);
  REQUIRE(sweep.size() == fam.t_grid.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    CHECK(sweep[i].t == fam.t_grid[i]);
    CHECK_FALSE(sweep[i].description.empty());
  }
}
