#include <cmath>
#include <vector>

#include "doctest.h"
#include "mildlab/fixtures.hpp"
#include "mildlab/grids.hpp"
#include "mildlab/mildness.hpp"
#include "mildlab/scene.hpp"
#include "mildlab/substitution.hpp"

using namespace mildlab;

namespace {

/// Fits the raw growth rate of a provider's jets over a grid.  The unit
/// scale (B = 1, C = 0) matches the convention of the substitution-map
/// verifiers, so rates are directly comparable across providers.
double fitted_rate(const JetProvider& provider, int dim, int density, int order) {
  const auto grid = tensor_grid(dim, density);
  const VerificationReport probe =
      verify_certificate(provider, MildParams{1.0, 1.0, 0.0, order}, grid, order);
  return probe.fitted_A_star;
}

}  // namespace

TEST_CASE("monomial rate") {
  const Scene scene = power_cell_scene();
  const PreparedFunction f = instantiate_function(scene.functions.at(0), {}, scene.dim);
  CHECK(monomial_rate(f) == 3.0);
  CHECK(monomial_rate(monomial_prepared(1.0, {0.25, -1.5}, 1.0)) == 1.5);
  // The rate floors at 1 like the per-monomial magnitude.
  CHECK(monomial_rate(monomial_prepared(1.0, {0.25}, 1.0)) == 1.0);
}

TEST_CASE("affine reparametrization is not r-uniformly mild") {
  // The power substitution on the image of the affine chart: its fitted
  // rate must grow with the power, while the wall-respecting construction
  // holds one rate for the whole sweep.  The blow-up concentrates near
  // the low walls, so the probe needs the same grid density the demos use.
  const nlohmann::json golden = load_golden_file("fixtures/golden.json");
  const int density =
      static_cast<int>(golden_number(golden, "crpara_grid_density"));
  const double fit1 = fitted_rate(naive_composition_provider(1, 1), 2, density, 1);
  const double fit4 = fitted_rate(naive_composition_provider(4, 4), 2, density, 4);
  const double ratio = fit4 / fit1;
  CHECK(ratio >= golden_number(golden, "negative_growth_required"));
  CHECK(ratio == doctest::Approx(golden_number(
                                     golden, "observed_negative_growth_r4_d32"))
                     .epsilon(1e-4));
  // At power 1 the substitution is the identity, so the naive composition
  // coincides with the wall-respecting one on the same grid: the fit must
  // match the frozen rate of the wall-respecting sweep.
  CHECK(fit1 == doctest::Approx(golden_number(
                                    golden, "observed_crpara_fitted_r1_d32"))
                    .epsilon(1e-6));
  const Scene scene = power_cell_scene();
  const Cell cell = instantiate_cell(scene.cells.at(0), {}, scene.dim);
  const PreparedFunction f =
      instantiate_function(scene.functions.at(0), {}, scene.dim);
  const JetProvider smooth = composed_jet_provider(f, PhiR{cell, 1}, 1);
  const double fit1_smooth = fitted_rate(smooth, 2, 8, 1);
  CHECK(fitted_rate(naive_composition_provider(1, 1), 2, 8, 1) ==
        doctest::Approx(fit1_smooth).epsilon(1e-12));
}

TEST_CASE("hyperbola demonstration") {
  const HyperbolaDemoReport rep = run_hyperbola_demo(32, 8, 3.0, 1.575, 1.0);
  REQUIRE(rep.t.size() == 3);
  CHECK(rep.t[0] > rep.t[1]);
  CHECK(rep.t[1] > rep.t[2]);
  REQUIRE(rep.fitted_A0.size() == 3);
  CHECK(rep.fitted_A0[1] > rep.fitted_A0[0]);
  CHECK(rep.fitted_A0[2] > rep.fitted_A0[1]);
  REQUIRE(rep.growth_factors.size() == 2);
  CHECK(rep.min_growth >= 3.0);
  CHECK(rep.growth_pass);
  CHECK(rep.growth_threshold == 3.0);

  // One assembled constant set certifies every fiber of the split family.
  REQUIRE(rep.uniform_reports.size() == 3);
  for (const MainTheoremReport& fiber : rep.uniform_reports) {
    CHECK(fiber.certificate.pass);
  }
  CHECK(rep.uniform_pass);
  CHECK(rep.constants.A > 0.0);
  CHECK(rep.constants.C == 2.0);
}

TEST_CASE("golden file access") {
  const nlohmann::json golden = load_golden_file("fixtures/golden.json");
  CHECK(golden_number(golden, "crpara_declared_A") == 2.75);
  CHECK(golden_number(golden, "chart_A") > 0.0);
  CHECK(golden_number(golden, "weak_mildness_A") == 1.58);

  try {
    (void)golden_number(golden, "__absent__");
    FAIL_CHECK("expected golden-key");
  } catch (const SceneError& e) {
    CHECK(e.invariant() == "golden-key");
  }
  try {
    (void)load_golden_file("fixtures/__missing__.json");
    FAIL_CHECK("expected golden-file");
  } catch (const SceneError& e) {
    CHECK(e.invariant() == "golden-file");
  }
}
