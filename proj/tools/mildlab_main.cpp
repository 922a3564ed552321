// mildlab: verification toolkit for mild parametrizations of definable
// cells — chain-rule cross-checks, derivative-bound sweeps, subdivision
// charts, and rational-point counting.
//
// Exit codes: 0 all requested verifications pass, 1 a verification failed,
// 2 input error (machine-readable error JSON on stdout naming the violated
// invariant).  Reports are deterministic: fixed seeds, pinned float
// formatting, atomic writes.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "mildlab/charts.hpp"
#include "mildlab/diophantine.hpp"
#include "mildlab/fixtures.hpp"
#include "mildlab/geometry.hpp"
#include "mildlab/grids.hpp"
#include "mildlab/harness.hpp"
#include "mildlab/mildness.hpp"
#include "mildlab/report.hpp"
#include "mildlab/scene.hpp"
#include "mildlab/substitution.hpp"

namespace {

using namespace mildlab;

// ---------------------------------------------------------------------------
// Run configuration shared by the scene-driven subcommands.

struct RunConfig {
  std::string scene_path;
  std::string command;
  std::vector<int> r_sweep;
  double kappa = 1.0;
  int order = 1;
  int grid_density = 16;
  std::string output;       // empty = stdout
  std::string format = "json";
};

/// First violated invariant, as (invariant, message); nullopt when valid.
std::optional<std::pair<std::string, std::string>> config_violation(
    const RunConfig& c) {
  for (int r : c.r_sweep) {
    if (r < 1) {
      return std::make_pair(std::string("r-sweep-positive"),
                            "every r in the sweep must be >= 1, got " +
                                std::to_string(r));
    }
  }
  if (c.order < 1) {
    return std::make_pair(std::string("order-positive"),
                          "order must be >= 1, got " + std::to_string(c.order));
  }
  if (c.grid_density < 4) {
    return std::make_pair(
        std::string("grid-density-min"),
        "grid density must be >= 4, got " + std::to_string(c.grid_density));
  }
  if (!(c.kappa > 0.0)) {
    return std::make_pair(std::string("kappa-positive"),
                          "kappa must be > 0");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Report emission.

int fail_input(const std::string& invariant, const std::string& message) {
  std::cout << error_json(invariant, message);
  return 2;
}

void emit(const std::string& output, const std::string& content) {
  if (output.empty()) {
    std::cout << content;
  } else {
    write_atomic(output, content);
  }
}

std::string jbool(bool b) { return b ? "true" : "false"; }
std::string jint(long long v) { return std::to_string(v); }

std::string jnum_array(const std::vector<double>& v) {
  std::vector<std::string> frags;
  frags.reserve(v.size());
  for (double x : v) frags.push_back(format_double_json(x));
  return json_array(frags);
}

std::string to_json(const AssembledConstants& c) {
  return json_object({
      {"A_tilde", format_double_json(c.A_tilde)},
      {"A", format_double_json(c.A)},
      {"B", format_double_json(c.B)},
      {"C", format_double_json(c.C)},
  });
}

// ---------------------------------------------------------------------------
// Seeded sweep subcommands.

struct FaaOpts {
  int pairs = 100;
  int dim_max = 3;
  int order_max = 6;
  std::uint64_t seed = 20260815ull;
  std::string output;
};

int cmd_verify_faa(const FaaOpts& o) {
  if (o.pairs < 1) return fail_input("pairs-positive", "pairs must be >= 1");
  if (o.dim_max < 1) return fail_input("dim-max-positive", "dim max must be >= 1");
  if (o.order_max < 1) return fail_input("order-positive", "order max must be >= 1");
  const FaaCheckReport r = run_faa_check(o.pairs, o.dim_max, o.order_max, o.seed);
  emit(o.output, json_object({
                     {"command", json_string("verify-faa")},
                     {"pairs", jint(r.pairs)},
                     {"derivatives_compared", jint(r.derivatives_compared)},
                     {"max_rel_err", format_double_json(r.max_rel_err)},
                     {"tolerance", format_double_json(r.tolerance)},
                     {"pass", jbool(r.pass)},
                 }) +
                     "\n");
  return r.pass ? 0 : 1;
}

struct LemmaAbOpts {
  int m = 3;
  int nu_max = 5;
  int draws = 100;
  std::uint64_t seed = 7ull;
  std::string output;
};

int cmd_verify_lemma_ab(const LemmaAbOpts& o) {
  if (o.m < 1) return fail_input("dim-max-positive", "m must be >= 1");
  if (o.nu_max < 1) return fail_input("order-positive", "nu max must be >= 1");
  if (o.draws < 1) return fail_input("draws-positive", "draws must be >= 1");
  const LemmaAbCheckReport r = run_lemma_ab_check(o.draws, o.m, o.nu_max, o.seed);
  emit(o.output, json_object({
                     {"command", json_string("verify-lemma-ab")},
                     {"draws", jint(r.draws)},
                     {"cases", jint(r.cases)},
                     {"max_rel_dev", format_double_json(r.max_rel_dev)},
                     {"tolerance", format_double_json(r.tolerance)},
                     {"spot_values_ok", jbool(r.spot_values_ok)},
                     {"pass", jbool(r.pass)},
                 }) +
                     "\n");
  return r.pass ? 0 : 1;
}

struct MildComposeOpts {
  int fixtures = 50;
  int order = 5;
  int samples = 8;
  std::uint64_t seed = 99ull;
  std::string output;
};

int cmd_mild_compose(const MildComposeOpts& o) {
  if (o.fixtures < 1) return fail_input("fixtures-positive", "fixtures must be >= 1");
  if (o.order < 1) return fail_input("order-positive", "order must be >= 1");
  if (o.samples < 1) return fail_input("samples-positive", "samples must be >= 1");
  const MildComposeCheckReport r =
      run_mild_compose_check(o.fixtures, o.order, o.samples, o.seed);
  emit(o.output, json_object({
                     {"command", json_string("mild-compose")},
                     {"fixtures", jint(r.fixtures)},
                     {"sum_failures", jint(r.sum_failures)},
                     {"product_failures", jint(r.product_failures)},
                     {"compose_failures", jint(r.compose_failures)},
                     {"pass", jbool(r.pass)},
                 }) +
                     "\n");
  return r.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-lemmas: wall-substitution derivative-bound sweeps on a scene.

struct VerifyLemmasOpts {
  std::string scene_path = "fixtures/power_cell.json";
  std::string golden_path = "fixtures/golden.json";
  std::vector<int> r_sweep{1, 2, 3};
  double kappa = 1.0;
  int order = 4;
  int inf_order = 6;
  int mild_order = 8;
  int grid_density = 16;
  std::string output;
};

int cmd_verify_lemmas(const VerifyLemmasOpts& o) {
  RunConfig cfg;
  cfg.scene_path = o.scene_path;
  cfg.command = "verify-lemmas";
  cfg.r_sweep = o.r_sweep;
  cfg.kappa = o.kappa;
  cfg.order = std::min({o.order, o.inf_order, o.mild_order});
  cfg.grid_density = o.grid_density;
  cfg.output = o.output;
  if (const auto v = config_violation(cfg)) return fail_input(v->first, v->second);

  const Scene scene = load_scene(o.scene_path);
  if (scene.cells.empty() || scene.functions.empty()) {
    return fail_input("scene-nonempty",
                      "verify-lemmas needs at least one cell and one function");
  }
  const nlohmann::json golden = load_golden_file(o.golden_path);
  const DeclaredConstants weak_decl{golden_number(golden, "weak_mildness_A"), 1.0};
  const DeclaredConstants fxr_decl{golden_number(golden, "factor_xr_A"), 1.0};
  const DeclaredConstants winf_decl{golden_number(golden, "weak_inf_A"), 1.0};
  const DeclaredConstants fexp_decl{golden_number(golden, "factor_exp_A"), 1.0};
  const double crpara_A = golden_number(golden, "crpara_declared_A");
  const double recursion_tol = golden_number(golden, "wall_recursion_tol");
  const double a_cell = golden_number(golden, "mildpara_A_cell");
  const double b_cell = golden_number(golden, "mildpara_B_cell");

  const std::vector<std::vector<double>> grid =
      tensor_grid(scene.dim, o.grid_density);
  bool all_pass = true;
  std::vector<std::string> fiber_frags;

  for (const FamilyFiber& fiber : scene_fibers(scene)) {
    const Cell cell = instantiate_cell(scene.cells[0], fiber.t, scene.dim);
    const PreparedFunction f =
        instantiate_function(scene.functions[0], fiber.t, scene.dim);
    const CellValidation cv = validate_cell(cell, o.grid_density);
    if (!cv.pass) return fail_input("cell-valid", cv.message);
    if (!(f.c1_bound > 0.0)) {
      return fail_input("c1-bound-declared",
                        "the flat-kernel constants need a declared C^1 bound "
                        "on the monomial map; scene function '" +
                            scene.functions[0].name + "' declares none");
    }

    std::vector<std::string> weak_frags, fxr_frags, rec_frags, crpara_frags;
    for (int r : o.r_sweep) {
      const PhiR map{cell, r};
      const LemmaReport weak = verify_weak_mildness(map, grid, o.order, weak_decl);
      all_pass = all_pass && weak.pass;
      weak_frags.push_back(to_json(weak));
      for (int axis = 0; axis < scene.dim; ++axis) {
        const LemmaReport fxr = verify_factor_xr(map, axis, grid, o.order, fxr_decl);
        all_pass = all_pass && fxr.pass;
        fxr_frags.push_back(to_json(fxr));
      }
      double gap = 0.0;
      for (const std::vector<double>& x : grid) {
        gap = std::max(gap, wall_recursion_gap(map, x, o.order));
      }
      const bool rec_pass = gap <= recursion_tol;
      all_pass = all_pass && rec_pass;
      rec_frags.push_back(json_object({
          {"r", jint(r)},
          {"max_gap", format_double_json(gap)},
          {"tolerance", format_double_json(recursion_tol)},
          {"pass", jbool(rec_pass)},
      }));
      const MainTheoremReport main = verify_main_crpara(f, cell, r, grid, crpara_A);
      all_pass = all_pass && main.certificate.pass;
      crpara_frags.push_back(to_json(main));
    }

    const PhiInf imap{cell, o.kappa};
    const LemmaReport winf =
        verify_weak_mildness_inf(imap, grid, o.inf_order, winf_decl);
    all_pass = all_pass && winf.pass;
    std::vector<std::string> fexp_frags;
    for (int axis = 0; axis < scene.dim; ++axis) {
      const LemmaReport fexp =
          verify_factor_exp(imap, axis, grid, o.inf_order, fexp_decl);
      all_pass = all_pass && fexp.pass;
      fexp_frags.push_back(to_json(fexp));
    }
    const AssembledConstants constants = assemble_mildpara_constants(
        o.kappa, scene.dim, monomial_rate(f), f.c1_bound, a_cell, b_cell);
    const MainTheoremReport mildpara =
        verify_main_mildpara(f, cell, o.kappa, grid, o.mild_order, constants);
    all_pass = all_pass && mildpara.certificate.pass;

    fiber_frags.push_back(json_object({
        {"t", jnum_array(fiber.t)},
        {"weak_mildness", json_array(weak_frags)},
        {"factor_xr", json_array(fxr_frags)},
        {"wall_recursion", json_array(rec_frags)},
        {"smooth_substitution", json_array(crpara_frags)},
        {"weak_mildness_flat", to_json(winf)},
        {"factor_exp", json_array(fexp_frags)},
        {"assembled_constants", to_json(constants)},
        {"flat_substitution", to_json(mildpara)},
    }));
  }

  emit(o.output, json_object({
                     {"command", json_string("verify-lemmas")},
                     {"scene", json_string(o.scene_path)},
                     {"kappa", format_double_json(o.kappa)},
                     {"grid_density", jint(o.grid_density)},
                     {"fibers", json_array(fiber_frags)},
                     {"pass", jbool(all_pass)},
                 }) +
                     "\n");
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// build-charts: unit-norm chart subdivision over a scene cell.

struct BuildChartsOpts {
  std::string scene_path = "fixtures/power_cell.json";
  std::string golden_path = "fixtures/golden.json";
  std::vector<int> r_sweep{3};
  double A = 0.0;  // 0 = use the golden chart constant
  std::string norm = "crnorm";
  int grid_density = 16;  // cell validation only
  std::string output;
};

int cmd_build_charts(const BuildChartsOpts& o) {
  RunConfig cfg;
  cfg.scene_path = o.scene_path;
  cfg.command = "build-charts";
  cfg.r_sweep = o.r_sweep;
  cfg.grid_density = o.grid_density;
  cfg.output = o.output;
  cfg.format = "csv";
  if (const auto v = config_violation(cfg)) return fail_input(v->first, v->second);

  NormMode mode;
  try {
    mode = norm_mode_from_name(o.norm);
  } catch (const std::invalid_argument& e) {
    return fail_input("norm-mode", e.what());
  }

  const Scene scene = load_scene(o.scene_path);
  if (scene.cells.empty() || scene.functions.empty()) {
    return fail_input("scene-nonempty",
                      "build-charts needs at least one cell and one function");
  }
  const FamilyFiber fiber = scene_fibers(scene).front();
  const Cell cell = instantiate_cell(scene.cells[0], fiber.t, scene.dim);
  const PreparedFunction f =
      instantiate_function(scene.functions[0], fiber.t, scene.dim);
  const CellValidation cv = validate_cell(cell, o.grid_density);
  if (!cv.pass) return fail_input("cell-valid", cv.message);

  double A = o.A;
  if (A == 0.0) {
    A = golden_number(load_golden_file(o.golden_path), "chart_A");
  }
  if (!(A > 0.0)) return fail_input("chart-rate-positive", "A must be > 0");

  bool all_pass = true;
  std::vector<ChartSet> sets;
  sets.reserve(o.r_sweep.size());
  for (int r : o.r_sweep) {
    const JetProvider provider = composed_jet_provider(f, PhiR{cell, r}, r);
    sets.push_back(make_charts(provider, scene.dim, A, r, mode));
    all_pass = all_pass && sets.back().pass;
  }
  emit(o.output, charts_csv(sets));
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// count-points: rational point counts against the log-power cover bound.

struct CountPointsOpts {
  std::string fixture = "parabola";
  int height = 0;  // 0 = use the default sweep
  bool sweep = false;
  int dim = 2;  // ambient dimension of the square fixture
  std::string output;
};

int cmd_count_points(const CountPointsOpts& o) {
  if (o.height != 0 && o.sweep) {
    return fail_input("cli-args", "--height and --sweep are mutually exclusive");
  }
  std::vector<int> heights;
  if (o.height != 0) {
    heights = {o.height};
  } else {
    heights = {10, 31, 100};
  }
  for (int h : heights) {
    if (h < 3) {
      return fail_input("height-min",
                        "heights must be >= 3 (the degree bound needs "
                        "log H > 1), got " +
                            std::to_string(h));
    }
  }

  MembershipPredicate X;
  int m = 1;
  int n = 2;
  if (o.fixture == "parabola") {
    X = parabola_fixture();
  } else if (o.fixture == "square") {
    if (o.dim < 2) {
      return fail_input("ambient-dim-min",
                        "the square fixture needs ambient dimension >= 2");
    }
    n = o.dim;
    X = square_fixture(n);
    for (int h : heights) {
      if (h > 30) {
        return fail_input("enumeration-size",
                          "the square fixture enumerates the full Farey "
                          "product; heights above 30 are refused");
      }
    }
  } else {
    return fail_input("fixture-known",
                      "unknown fixture '" + o.fixture +
                          "' (choices: parabola, square)");
  }

  const CountTable table = count_vs_bound(X, heights, m, n);
  emit(o.output, count_csv(table));
  return table.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// demo-counterexample: hyperbola-family blow-up plus the uniform certificate.

struct DemoOpts {
  int grid_density = 32;
  int order = 8;
  double growth_threshold = 3.0;
  double A_cell = 1.575;
  double B_cell = 1.0;
  std::string output;
};

int cmd_demo(const DemoOpts& o) {
  RunConfig cfg;
  cfg.command = "demo-counterexample";
  cfg.r_sweep = {1};
  cfg.order = o.order;
  cfg.grid_density = o.grid_density;
  cfg.output = o.output;
  if (const auto v = config_violation(cfg)) return fail_input(v->first, v->second);
  if (!(o.growth_threshold > 0.0)) {
    return fail_input("growth-threshold-positive", "growth threshold must be > 0");
  }
  if (!(o.A_cell > 0.0 && o.B_cell > 0.0)) {
    return fail_input("cell-constants-positive",
                      "wall substitution constants must be > 0");
  }

  const HyperbolaDemoReport r = run_hyperbola_demo(
      o.grid_density, o.order, o.growth_threshold, o.A_cell, o.B_cell);
  std::vector<std::string> uniform_frags;
  uniform_frags.reserve(r.uniform_reports.size());
  for (const MainTheoremReport& rep : r.uniform_reports) {
    uniform_frags.push_back(to_json(rep));
  }
  const bool pass = r.growth_pass && r.uniform_pass;
  emit(o.output, json_object({
                     {"command", json_string("demo-counterexample")},
                     {"t", jnum_array(r.t)},
                     {"fitted_A0", jnum_array(r.fitted_A0)},
                     {"growth_factors", jnum_array(r.growth_factors)},
                     {"min_growth", format_double_json(r.min_growth)},
                     {"growth_threshold", format_double_json(r.growth_threshold)},
                     {"growth_pass", jbool(r.growth_pass)},
                     {"assembled_constants", to_json(r.constants)},
                     {"uniform", json_array(uniform_frags)},
                     {"uniform_pass", jbool(r.uniform_pass)},
                     {"note", json_string(r.note)},
                     {"pass", jbool(pass)},
                 }) +
                     "\n");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mildlab: numeric verification of mild parametrizations — derivative "
      "growth certificates, wall substitutions, unit-norm charts, and "
      "rational point counts."};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 pass, 1 verification failure, 2 input error (error JSON "
      "on stdout names the violated invariant).\n"
      "Reports use 17 significant digits in JSON and 9 in CSV; identical "
      "configuration yields byte-identical output.  --output writes via a "
      "temp file and rename.\n"
      "MILDLAB_THREADS caps worker threads.  Height bounds use the natural "
      "logarithm.");

  FaaOpts faa;
  auto* c_faa = app.add_subcommand(
      "verify-faa",
      "Cross-check truncated-series composition against the combinatorial "
      "chain rule on random smooth compositions");
  c_faa->add_option("--pairs", faa.pairs, "Random composition pairs")
      ->capture_default_str();
  c_faa->add_option("--dim-max", faa.dim_max, "Maximum variable count")
      ->capture_default_str();
  c_faa->add_option("--order-max", faa.order_max, "Maximum derivative order")
      ->capture_default_str();
  c_faa->add_option("--seed", faa.seed, "RNG seed")->capture_default_str();
  c_faa->add_option("--output", faa.output, "Write the JSON report here");

  LemmaAbOpts lab;
  auto* c_lab = app.add_subcommand(
      "verify-lemma-ab",
      "Check the closed-form composition bound aggregate against full "
      "partition enumeration");
  c_lab->add_option("-m,--m", lab.m, "Maximum dimension swept")
      ->capture_default_str();
  c_lab->add_option("--nu-max", lab.nu_max, "Maximum |nu| drawn")
      ->capture_default_str();
  c_lab->add_option("--draws", lab.draws, "Random parameter draws")
      ->capture_default_str();
  c_lab->add_option("--seed", lab.seed, "RNG seed")->capture_default_str();
  c_lab->add_option("--output", lab.output, "Write the JSON report here");

  MildComposeOpts mc;
  auto* c_mc = app.add_subcommand(
      "mild-compose",
      "Fit certificates for random expression fixtures and verify the sum / "
      "product / composition parameter rules on the combined jets");
  c_mc->add_option("--fixtures", mc.fixtures, "Random fixtures")
      ->capture_default_str();
  c_mc->add_option("--order", mc.order, "Jet order verified")
      ->capture_default_str();
  c_mc->add_option("--samples", mc.samples, "Sample points per fixture")
      ->capture_default_str();
  c_mc->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();
  c_mc->add_option("--output", mc.output, "Write the JSON report here");

  VerifyLemmasOpts vl;
  auto* c_vl = app.add_subcommand(
      "verify-lemmas",
      "Run the wall-substitution derivative-bound sweeps on a scene: weak "
      "mildness, vanishing-factor bounds, the wall recursion identity, and "
      "both substitution certificates, against the frozen constants");
  c_vl->add_option("--scene", vl.scene_path, "Scene JSON file")
      ->capture_default_str();
  c_vl->add_option("--golden", vl.golden_path, "Frozen constants file")
      ->capture_default_str();
  c_vl->add_option("--r-sweep", vl.r_sweep, "Smoothness orders r to sweep")
      ->delimiter(',')
      ->capture_default_str();
  c_vl->add_option("--kappa", vl.kappa, "Flat kernel exponent")
      ->capture_default_str();
  c_vl->add_option("--order", vl.order, "Derivative order of the r-sweeps")
      ->capture_default_str();
  c_vl->add_option("--inf-order", vl.inf_order,
                   "Derivative order of the flat-kernel sweeps")
      ->capture_default_str();
  c_vl->add_option("--mild-order", vl.mild_order,
                   "Test order of the flat substitution certificate")
      ->capture_default_str();
  c_vl->add_option("--grid-density", vl.grid_density,
                   "Boundary-refined grid density per axis")
      ->capture_default_str();
  c_vl->add_option("--output", vl.output, "Write the JSON report here");

  BuildChartsOpts bc;
  auto* c_bc = app.add_subcommand(
      "build-charts",
      "Subdivide the substituted map into unit-norm charts and check the "
      "count law");
  c_bc->add_option("--scene", bc.scene_path, "Scene JSON file")
      ->capture_default_str();
  c_bc->add_option("--golden", bc.golden_path,
                   "Frozen constants file (supplies A when --A is omitted)")
      ->capture_default_str();
  c_bc->add_option("-r,--r", bc.r_sweep, "Smoothness orders r")
      ->delimiter(',')
      ->capture_default_str();
  c_bc->add_option("--A", bc.A,
                   "Declared certificate rate (0 = golden chart constant)")
      ->capture_default_str();
  c_bc->add_option("--norm", bc.norm, "Normalization: crnorm or supnorm")
      ->capture_default_str();
  c_bc->add_option("--grid-density", bc.grid_density,
                   "Cell validation grid density")
      ->capture_default_str();
  c_bc->add_option("--output", bc.output, "Write the CSV table here");

  CountPointsOpts cp;
  auto* c_cp = app.add_subcommand(
      "count-points",
      "Enumerate rational points of bounded height on a fixture and cover "
      "them by low-degree hypersurfaces (CSV: H,points,degree_d,cover_size,"
      "logH_pow_c2)");
  c_cp->add_option("--fixture", cp.fixture, "parabola or square")
      ->capture_default_str();
  c_cp->add_option("--height", cp.height,
                   "Single height H (omit for the sweep 10,31,100)");
  c_cp->add_flag("--sweep", cp.sweep, "Sweep heights 10,31,100 (the default)");
  c_cp->add_option("--dim", cp.dim, "Ambient dimension of the square fixture")
      ->capture_default_str();
  c_cp->add_option("--output", cp.output, "Write the CSV table here");

  DemoOpts dm;
  auto* c_dm = app.add_subcommand(
      "demo-counterexample",
      "Show the hyperbola family's affine charts blowing up as t -> 0 while "
      "one assembled constant set certifies the flat substitution on the "
      "split cells, t-uniformly");
  c_dm->add_option("--grid-density", dm.grid_density,
                   "Boundary-refined grid density per axis")
      ->capture_default_str();
  c_dm->add_option("--order", dm.order, "Certificate test order")
      ->capture_default_str();
  c_dm->add_option("--growth-threshold", dm.growth_threshold,
                   "Required per-decade growth of the fitted affine rate")
      ->capture_default_str();
  c_dm->add_option("--A-cell", dm.A_cell, "Frozen wall substitution rate")
      ->capture_default_str();
  c_dm->add_option("--B-cell", dm.B_cell, "Frozen wall substitution range bound")
      ->capture_default_str();
  c_dm->add_option("--output", dm.output, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cout << error_json("cli-args", e.what());
    return 2;
  }

  try {
    if (c_faa->parsed()) return cmd_verify_faa(faa);
    if (c_lab->parsed()) return cmd_verify_lemma_ab(lab);
    if (c_mc->parsed()) return cmd_mild_compose(mc);
    if (c_vl->parsed()) return cmd_verify_lemmas(vl);
    if (c_bc->parsed()) return cmd_build_charts(bc);
    if (c_cp->parsed()) return cmd_count_points(cp);
    if (c_dm->parsed()) return cmd_demo(dm);
  } catch (const SceneError& e) {
    return fail_input(e.invariant(), e.what());
  } catch (const std::exception& e) {
    return fail_input("internal-error", e.what());
  }
  std::cout << error_json("cli-args", "no subcommand given");
  return 2;
}
