#include "mildlab/scene.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "mildlab/multiindex.hpp"

namespace mildlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& invariant, const std::string& message) {
  throw SceneError(invariant, message);
}

double finite_number(const json& j, const std::string& invariant,
                     const std::string& what) {
  if (!j.is_number()) fail(invariant, what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(invariant, what + " must be finite");
  return v;
}

/// Exponents arrive as decimal strings to keep them exact; plain numbers
/// are accepted as a convenience.
double exponent_value(const json& j, const std::string& what) {
  if (j.is_string()) return parse_decimal_exact(j.get<std::string>());
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail("exponent-parse", what + " must be finite");
    return v;
  }
  fail("exponent-parse", what + " must be a decimal string or number");
}

ScalarOfT parse_scalar(const json& j, const std::string& what) {
  ScalarOfT s;
  if (j.is_number()) {
    s.coeff = finite_number(j, "scalar-parse", what);
    return s;
  }
  if (j.is_string()) {
    s.coeff = parse_decimal_exact(j.get<std::string>());
    return s;
  }
  if (j.is_object()) {
    if (j.contains("coeff")) s.coeff = finite_number(j.at("coeff"), "scalar-parse", what + ".coeff");
    if (j.contains("coeff_of_t")) {
      s.t_power = finite_number(j.at("coeff_of_t"), "scalar-parse", what + ".coeff_of_t");
    }
    return s;
  }
  fail("scalar-parse", what + " must be a number, decimal string, or {coeff, coeff_of_t}");
}

MildParams parse_mild(const json& j, const std::string& what) {
  if (!j.is_object()) fail("unit-mild-positive", what + " must be an object {A, B, C}");
  MildParams p;
  p.A = finite_number(j.value("A", json(1.0)), "unit-mild-positive", what + ".A");
  p.B = finite_number(j.value("B", json(1.0)), "unit-mild-positive", what + ".B");
  p.C = finite_number(j.value("C", json(0.0)), "unit-mild-positive", what + ".C");
  if (j.contains("order")) {
    if (!j.at("order").is_number_integer()) fail("unit-mild-positive", what + ".order must be an integer");
    p.order = j.at("order").get<int>();
  }
  if (!(p.A > 0.0) || !(p.B > 0.0) || !(p.C >= 0.0)) {
    fail("unit-mild-positive", what + " must satisfy A > 0, B > 0, C >= 0");
  }
  return p;
}

MonomialSpec parse_monomial(const json& j, int expected_dim, const std::string& what) {
  if (!j.is_object()) fail("monomial-parse", what + " must be an object");
  MonomialSpec m;
  if (j.contains("coeff")) m.coeff.coeff = finite_number(j.at("coeff"), "monomial-parse", what + ".coeff");
  if (j.contains("coeff_of_t")) {
    m.coeff.t_power = finite_number(j.at("coeff_of_t"), "monomial-parse", what + ".coeff_of_t");
  }
  if (!j.contains("exponents") || !j.at("exponents").is_array()) {
    fail("monomial-parse", what + ".exponents must be an array");
  }
  for (const json& e : j.at("exponents")) {
    m.exponents.push_back(exponent_value(e, what + ".exponents"));
  }
  if (expected_dim >= 0 && static_cast<int>(m.exponents.size()) != expected_dim) {
    char buf[128];
    std::snprintf(buf, sizeof buf, " has %zu exponents, expected %d",
                  m.exponents.size(), expected_dim);
    fail("monomial-exponents-dim", what + buf);
  }
  m.range_bound = finite_number(j.value("range_bound", json(1.0)), "range-bound-positive",
                                what + ".range_bound");
  if (!(m.range_bound > 0.0)) fail("range-bound-positive", what + ".range_bound must be positive");
  return m;
}

PreparedSpec parse_prepared(const json& j, int expected_dim, const std::string& what) {
  if (!j.is_object() || !j.contains("monomials") || !j.at("monomials").is_array() ||
      j.at("monomials").empty()) {
    fail("monomial-parse", what + " must declare a non-empty monomials array");
  }
  PreparedSpec spec;
  spec.name = j.value("name", std::string());
  int dim = expected_dim;
  std::size_t k = 0;
  for (const json& mj : j.at("monomials")) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ".monomials[%zu]", k++);
    MonomialSpec m = parse_monomial(mj, dim, what + buf);
    if (dim < 0) dim = static_cast<int>(m.exponents.size());
    spec.monomials.push_back(std::move(m));
  }
  if (j.contains("lead")) {
    if (!j.at("lead").is_number_integer()) fail("lead-range", what + ".lead must be an integer");
    spec.lead = j.at("lead").get<int>();
  }
  if (spec.lead < 0 || spec.lead >= static_cast<int>(spec.monomials.size())) {
    fail("lead-range", what + ".lead is outside the monomial list");
  }
  if (j.contains("unit")) {
    spec.unit.expr = expr_from_json(j.at("unit"));
  } else {
    spec.unit.expr = Expr::constant(1.0);
  }
  const int n = static_cast<int>(spec.monomials.size());
  if (spec.unit.expr.min_dim() > n) {
    fail("unit-arity", what + ".unit reads more components than the monomial tuple provides");
  }
  spec.unit.mild = j.contains("unit_mild") ? parse_mild(j.at("unit_mild"), what + ".unit_mild")
                                           : MildParams{};
  if (j.contains("c1_bound")) {
    spec.c1_bound = finite_number(j.at("c1_bound"), "c1-bound", what + ".c1_bound");
    if (spec.c1_bound < 0.0) fail("c1-bound", what + ".c1_bound must be >= 0");
  }
  return spec;
}

WallSpec parse_wall(const json& j, int position, const std::string& what) {
  if (j.is_object() && j.contains("monomials")) {
    PreparedSpec spec = parse_prepared(j, -1, what);
    const int arity = static_cast<int>(spec.monomials.front().exponents.size());
    if (arity > position) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    " reads %d coordinates but only %d precede this wall", arity,
                    position);
      fail("wall-arity", what + buf);
    }
    return spec;
  }
  return parse_scalar(j, what);
}

std::string fiber_label(std::span<const double> t) {
  std::string out = "t=(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t[i]);
    if (i) out += ",";
    out += buf;
  }
  return out + ")";
}

}  // namespace

double ScalarOfT::at(std::span<const double> t) const {
  if (t_power == 0.0) return coeff;
  if (t.empty()) {
    throw SceneError("t-grid-shape",
                     "a t-dependent coefficient needs a non-empty family fiber");
  }
  return coeff * std::pow(t[0], t_power);
}

double parse_decimal_exact(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt numerator = 0;
  BigInt denominator = 1;
  bool any_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    numerator = numerator * 10 + (text[i] - '0');
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      numerator = numerator * 10 + (text[i] - '0');
      denominator *= 10;
      any_digit = true;
    }
  }
  if (!any_digit || i != text.size()) {
    throw SceneError("exponent-parse", "'" + text + "' is not a plain decimal");
  }
  if (negative) numerator = -numerator;
  return BigRat(numerator, denominator).convert_to<double>();
}

Expr expr_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) {
    fail("expr-parse", "expression nodes are objects with an 'op' field");
  }
  const std::string op = j.at("op").get<std::string>();
  const auto arg = [&](const char* key) -> Expr {
    if (!j.contains(key)) fail("expr-parse", "'" + op + "' node needs '" + key + "'");
    return expr_from_json(j.at(key));
  };
  if (op == "const") {
    return Expr::constant(finite_number(j.value("value", json(0.0)), "expr-parse", "const.value"));
  }
  if (op == "var") {
    if (!j.contains("index") || !j.at("index").is_number_integer() ||
        j.at("index").get<int>() < 0) {
      fail("expr-parse", "'var' node needs a non-negative integer 'index'");
    }
    return Expr::variable(j.at("index").get<int>());
  }
  if (op == "add" || op == "mul") {
    if (!j.contains("args") || !j.at("args").is_array() || j.at("args").empty()) {
      fail("expr-parse", "'" + op + "' node needs a non-empty 'args' array");
    }
    Expr acc = expr_from_json(j.at("args").at(0));
    for (std::size_t i = 1; i < j.at("args").size(); ++i) {
      Expr next = expr_from_json(j.at("args").at(i));
      acc = op == "add" ? Expr::add(acc, next) : Expr::mul(acc, next);
    }
    return acc;
  }
  if (op == "pow") {
    if (!j.contains("exponent")) fail("expr-parse", "'pow' node needs 'exponent'");
    return Expr::power(arg("arg"), exponent_value(j.at("exponent"), "pow.exponent"));
  }
  if (op == "exp") return Expr::exp(arg("arg"));
  if (op == "recip") return Expr::reciprocal(arg("arg"));
  if (op == "affine") {
    const double a = finite_number(j.value("a", json(1.0)), "expr-parse", "affine.a");
    const double b = finite_number(j.value("b", json(0.0)), "expr-parse", "affine.b");
    return Expr::affine(a, b, arg("arg"));
  }
  fail("expr-parse", "unknown expression op '" + op + "'");
}

nlohmann::json expr_to_json(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return json{{"op", "const"}, {"value", e.constant_value()}};
    case Expr::Kind::Variable:
      return json{{"op", "var"}, {"index", e.variable_index()}};
    case Expr::Kind::Add:
    case Expr::Kind::Mul: {
      json args = json::array();
      for (int i = 0; i < e.child_count(); ++i) args.push_back(expr_to_json(e.child(i)));
      return json{{"op", e.kind() == Expr::Kind::Add ? "add" : "mul"}, {"args", args}};
    }
    case Expr::Kind::Power:
      return json{{"op", "pow"}, {"arg", expr_to_json(e.child(0))}, {"exponent", e.exponent()}};
    case Expr::Kind::Exp:
      return json{{"op", "exp"}, {"arg", expr_to_json(e.child(0))}};
    case Expr::Kind::Reciprocal:
      return json{{"op", "recip"}, {"arg", expr_to_json(e.child(0))}};
    case Expr::Kind::Affine:
      return json{{"op", "affine"},
                  {"a", e.affine_a()},
                  {"b", e.affine_b()},
                  {"arg", expr_to_json(e.child(0))}};
  }
  fail("expr-parse", "expression node has an unknown kind");
}

Scene parse_scene(const nlohmann::json& j) {
  if (!j.is_object()) fail("scene-json", "scene root must be a JSON object");
  Scene scene;
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) {
    fail("dim-positive", "scene needs an integer 'dim'");
  }
  scene.dim = j.at("dim").get<int>();
  if (scene.dim < 1) fail("dim-positive", "scene dim must be >= 1");

  if (j.contains("t_grid")) {
    if (!j.at("t_grid").is_array()) fail("t-grid-shape", "t_grid must be an array of fibers");
    std::size_t width = 0;
    for (const json& fj : j.at("t_grid")) {
      std::vector<double> fiber;
      if (fj.is_number()) {
        fiber.push_back(finite_number(fj, "t-grid-shape", "t_grid entry"));
      } else if (fj.is_array()) {
        for (const json& v : fj) fiber.push_back(finite_number(v, "t-grid-shape", "t_grid entry"));
      } else {
        fail("t-grid-shape", "t_grid entries must be numbers or arrays of numbers");
      }
      if (scene.t_grid.empty()) {
        width = fiber.size();
      } else if (fiber.size() != width) {
        fail("t-grid-shape", "all t_grid fibers must have the same length");
      }
      for (double v : fiber) {
        if (!(v > 0.0)) fail("t-grid-positive", "family parameters must be positive");
      }
      scene.t_grid.push_back(std::move(fiber));
    }
  }

  if (j.contains("cells")) {
    if (!j.at("cells").is_array()) fail("walls-count", "'cells' must be an array");
    std::size_t ci = 0;
    for (const json& cj : j.at("cells")) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "cells[%zu]", ci++);
      const std::string where(buf);
      if (!cj.is_object() || !cj.contains("walls") || !cj.at("walls").is_array()) {
        fail("walls-count", where + " must declare a 'walls' array");
      }
      CellSpec cell;
      cell.name = cj.value("name", where);
      if (static_cast<int>(cj.at("walls").size()) != scene.dim) {
        char msg[96];
        std::snprintf(msg, sizeof msg, " declares %zu walls, expected %d",
                      cj.at("walls").size(), scene.dim);
        fail("walls-count", where + msg);
      }
      int wi = 0;
      for (const json& wj : cj.at("walls")) {
        char wbuf[48];
        std::snprintf(wbuf, sizeof wbuf, "%s.walls[%d]", where.c_str(), wi);
        if (!wj.is_object() || !wj.contains("lower") || !wj.contains("upper")) {
          fail("walls-count", std::string(wbuf) + " must have 'lower' and 'upper'");
        }
        cell.walls.emplace_back(parse_wall(wj.at("lower"), wi, std::string(wbuf) + ".lower"),
                                parse_wall(wj.at("upper"), wi, std::string(wbuf) + ".upper"));
        ++wi;
      }
      scene.cells.push_back(std::move(cell));
    }
  }

  if (j.contains("functions")) {
    if (!j.at("functions").is_array()) fail("monomial-parse", "'functions' must be an array");
    std::size_t fi = 0;
    for (const json& fj : j.at("functions")) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "functions[%zu]", fi++);
      PreparedSpec spec = parse_prepared(fj, scene.dim, buf);
      if (spec.name.empty()) spec.name = buf;
      scene.functions.push_back(std::move(spec));
    }
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("scene-file", "cannot open scene file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SceneError("scene-json", std::string("scene file is not valid JSON: ") + e.what());
  }
  return parse_scene(j);
}

PreparedFunction instantiate_function(const PreparedSpec& spec,
                                      std::span<const double> t, int dim) {
  PreparedFunction f;
  for (const MonomialSpec& m : spec.monomials) {
    if (dim >= 0 && static_cast<int>(m.exponents.size()) != dim) {
      fail("monomial-exponents-dim", "monomial dimension does not match the ambient dimension");
    }
    BoundedMonomial b;
    b.coefficient = m.coeff.at(t);
    b.exponents = m.exponents;
    b.range_bound = m.range_bound;
    f.monomials.push_back(std::move(b));
  }
  f.lead = spec.lead;
  f.unit = spec.unit;
  f.c1_bound = spec.c1_bound;
  return f;
}

Cell instantiate_cell(const CellSpec& spec, std::span<const double> t, int dim) {
  Cell cell;
  cell.dim = dim;
  cell.fiber.t.assign(t.begin(), t.end());
  cell.fiber.description = spec.name + " " + fiber_label(t);
  for (const auto& [lower, upper] : spec.walls) {
    const auto freeze = [&](const WallSpec& w) -> Wall {
      if (std::holds_alternative<ScalarOfT>(w)) {
        return Wall{std::get<ScalarOfT>(w).at(t)};
      }
      const PreparedSpec& ps = std::get<PreparedSpec>(w);
      return Wall{instantiate_function(ps, t, -1)};
    };
    cell.walls.emplace_back(freeze(lower), freeze(upper));
  }
  return cell;
}

std::vector<FamilyFiber> scene_fibers(const Scene& scene) {
  std::vector<FamilyFiber> fibers;
  if (scene.t_grid.empty()) {
    fibers.push_back(FamilyFiber{{}, "t=()"});
    return fibers;
  }
  for (const std::vector<double>& t : scene.t_grid) {
    fibers.push_back(FamilyFiber{t, fiber_label(t)});
  }
  return fibers;
}

}  // namespace mildlab
