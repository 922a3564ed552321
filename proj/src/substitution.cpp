#include "mildlab/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "mildlab/parallel.hpp"

namespace mildlab {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_interior(std::span<const double> x, const char* who) {
  for (double v : x) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument(std::string(who) + ": point must lie in (0,1)^m");
    }
  }
}

double wall_scalar(const Wall& w, std::span<const double> prefix) {
  return w.value(prefix);
}

/// Jet of a wall composed with the already-built substitution components.
/// `built` are the jets of phi_1..phi_{i-1} in the x variables; `vals` their
/// values.  Constant and arity-0 walls become constant jets.
Jet wall_jet(const Wall& w, const std::vector<Jet>& built,
             const std::vector<double>& vals, std::span<const double> x,
             int order) {
  const int arity = w.arity();
  if (w.is_constant() || arity == 0) {
    return Jet::constant(std::vector<double>(x.begin(), x.end()), order,
                         wall_scalar(w, vals));
  }
  if (arity > static_cast<int>(built.size())) {
    throw std::invalid_argument("wall_jet: wall reads coordinates that are not built yet");
  }
  const PreparedFunction& fn = std::get<PreparedFunction>(w.f);
  const std::span<const double> prefix(vals.data(), static_cast<std::size_t>(arity));
  const Jet outer = prepared_jet(fn, prefix, order);
  const std::vector<Jet> inner(built.begin(), built.begin() + arity);
  return jet_compose(outer, inner);
}

/// Jet of exp(1 - x_i^{-kappa}) as a function of all m variables.
Jet kernel_axis_jet(int m, int axis, double kappa, std::span<const double> x,
                    int order) {
  std::vector<double> mu(static_cast<std::size_t>(m), 0.0);
  mu[static_cast<std::size_t>(axis)] = -kappa;
  const Jet p = jet_monomial(mu, x, order);
  return jet_exp(jet_shift(jet_scale(p, -1.0), 1.0));
}

/// Jet of x_axis^r as a function of all m variables.
Jet power_axis_jet(int m, int axis, int r, std::span<const double> x,
                   int order) {
  std::vector<double> mu(static_cast<std::size_t>(m), 0.0);
  mu[static_cast<std::size_t>(axis)] = static_cast<double>(r);
  return jet_monomial(mu, x, order);
}

template <typename AxisJet>
std::vector<Jet> sequential_phi_jet(const Cell& cell, std::span<const double> x,
                                    int order, AxisJet&& axis_jet) {
  const int m = cell.dim;
  if (static_cast<int>(x.size()) != m) {
    throw std::invalid_argument("phi_jet: point dimension does not match the cell");
  }
  require_interior(x, "phi_jet");
  std::vector<Jet> built;
  std::vector<double> vals;
  built.reserve(static_cast<std::size_t>(m));
  vals.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Jet a = wall_jet(cell.walls[static_cast<std::size_t>(i)].first, built,
                           vals, x, order);
    const Jet b = wall_jet(cell.walls[static_cast<std::size_t>(i)].second, built,
                           vals, x, order);
    const Jet comp = a + (b - a) * axis_jet(i);
    vals.push_back(comp.value());
    built.push_back(comp);
  }
  return built;
}

template <typename AxisValue>
std::vector<double> sequential_phi_value(const Cell& cell,
                                         std::span<const double> x,
                                         AxisValue&& axis_value) {
  const int m = cell.dim;
  if (static_cast<int>(x.size()) != m) {
    throw std::invalid_argument("phi_value: point dimension does not match the cell");
  }
  require_interior(x, "phi_value");
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double a = wall_scalar(cell.walls[static_cast<std::size_t>(i)].first, vals);
    const double b = wall_scalar(cell.walls[static_cast<std::size_t>(i)].second, vals);
    vals.push_back(a + (b - a) * axis_value(i));
  }
  return vals;
}

double kernel_value(double x, double kappa) {
  return std::exp(1.0 - std::pow(x, -kappa));
}

void require_kappa(double kappa, const char* who) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": kappa must be positive");
  }
}

void require_r(int r, const char* who) {
  if (r < 1) throw std::invalid_argument(std::string(who) + ": r must be >= 1");
}

double checked_pow_ratio(double value, int inv_degree) {
  return value > 0.0 ? std::pow(value, 1.0 / inv_degree) : 0.0;
}

/// True when every Taylor coefficient of every jet is a finite double.
/// Near the cube boundary the substitution values become so small that
/// fractional-power wall derivatives overflow; such points cannot be
/// measured in double precision and are excluded (and counted) instead of
/// silently poisoning the sweep with NaNs.
bool jets_in_double_range(const std::vector<Jet>& jets) {
  for (const Jet& jet : jets) {
    for (double c : jet.coeffs()) {
      if (!std::isfinite(c)) return false;
    }
  }
  return true;
}

struct SweepSample {
  double fitted = 0.0;
  int fitted_rank = -1;
  int fitted_comp = -1;
  double declared_ratio = 0.0;
  int declared_rank = -1;
  int declared_comp = -1;
  bool skipped = false;
};

/// Shared driver for the four lemma sweeps.  `weighted(jet values, x,
/// component, rank, degree)` returns the quantity that the bound says is at
/// most B * (rate * scale)^degree, or a negative value to skip the entry.
template <typename Weighted>
LemmaReport run_sweep(const Cell& cell, const std::vector<std::vector<double>>& grid,
                      int order, double scale,
                      const std::optional<DeclaredConstants>& declared,
                      double exclusion_floor,
                      const std::function<std::vector<Jet>(std::span<const double>)>& jets_at,
                      Weighted&& weighted) {
  if (grid.empty()) throw std::invalid_argument("lemma sweep: empty grid");
  if (order < 1) throw std::invalid_argument("lemma sweep: order must be >= 1");

  std::vector<SweepSample> results(grid.size());
  parallel_for(grid.size(), [&](std::size_t s) {
    const std::vector<double>& x = grid[s];
    SweepSample res;
    for (double v : x) {
      if (v < exclusion_floor) {
        res.skipped = true;
        results[s] = res;
        return;
      }
    }
    std::vector<Jet> jets;
    try {
      jets = jets_at(x);
    } catch (const std::range_error&) {
      res.skipped = true;
      results[s] = res;
      return;
    }
    if (!jets_in_double_range(jets)) {
      res.skipped = true;
      results[s] = res;
      return;
    }
    const JetLayout& layout = *jets.front().layout();
    for (int comp = 0; comp < cell.dim; ++comp) {
      for (int rank = 0; rank < layout.size(); ++rank) {
        const int deg = layout.index(rank).total();
        if (deg < 1 || deg > order) continue;
        const double w = weighted(jets, x, comp, rank, deg);
        if (w < 0.0) continue;
        if (!std::isfinite(w)) {
          res = SweepSample{};
          res.skipped = true;
          results[s] = res;
          return;
        }
        const double fit = checked_pow_ratio(w, deg) / scale;
        if (fit > res.fitted) {
          res.fitted = fit;
          res.fitted_rank = rank;
          res.fitted_comp = comp;
        }
        if (declared) {
          const double ratio = w / (declared->B * std::pow(declared->A * scale, deg));
          if (ratio > res.declared_ratio) {
            res.declared_ratio = ratio;
            res.declared_rank = rank;
            res.declared_comp = comp;
          }
        }
      }
    }
    results[s] = res;
  });

  LemmaReport report;
  report.order = order;
  std::size_t best = grid.size();
  int excluded = 0;
  for (std::size_t s = 0; s < results.size(); ++s) {
    if (results[s].skipped) {
      ++excluded;
      continue;
    }
    report.fitted_A = std::max(report.fitted_A, results[s].fitted);
    const double key = declared ? results[s].declared_ratio : results[s].fitted;
    const double best_key =
        best == grid.size() ? -1.0
                            : (declared ? results[best].declared_ratio : results[best].fitted);
    if (key > best_key) best = s;
  }
  report.excluded_points = excluded;
  if (best == grid.size()) {
    throw std::invalid_argument(
        "lemma sweep: every grid point was excluded (below the exclusion floor "
        "or outside double range)");
  }
  const SweepSample& b = results[best];
  const std::vector<Jet> jets = jets_at(grid[best]);
  const JetLayout& layout = *jets.front().layout();
  const int rank = declared ? b.declared_rank : b.fitted_rank;
  report.worst_nu = rank >= 0 ? layout.index(rank) : MultiIndex::zeros(cell.dim);
  report.worst_point = grid[best];
  report.fitted_B = 1.0;
  if (declared) {
    report.worst_ratio = b.declared_ratio;
    report.pass = report.worst_ratio <= 1.0 + 1e-9;
  } else {
    report.worst_ratio = report.fitted_A > 0.0 ? 1.0 : 0.0;
    report.pass = true;
  }
  return report;
}

double monomial_weight(std::span<const double> x, const MultiIndex& nu,
                       double exponent_scale) {
  double w = 1.0;
  for (int i = 0; i < nu.dim(); ++i) {
    if (nu[i] != 0) w *= std::pow(x[static_cast<std::size_t>(i)], exponent_scale * nu[i]);
  }
  return w;
}

/// Samples that survived the double-range filter, with their jets cached so
/// the certificate run does not recompute the composition.
struct FiniteSampleSet {
  std::vector<std::vector<double>> samples;
  JetProvider provider;
  int excluded = 0;
};

FiniteSampleSet filter_finite_samples(const JetProvider& provider,
                                      const std::vector<std::vector<double>>& samples) {
  auto cache = std::make_shared<std::map<std::vector<double>, Jet>>();
  FiniteSampleSet out;
  for (const std::vector<double>& x : samples) {
    Jet jet;
    try {
      jet = provider(x);
    } catch (const std::range_error&) {
      ++out.excluded;
      continue;
    }
    if (!jets_in_double_range({jet})) {
      ++out.excluded;
      continue;
    }
    cache->emplace(x, std::move(jet));
    out.samples.push_back(x);
  }
  out.provider = [cache, provider](std::span<const double> x) {
    const auto it = cache->find(std::vector<double>(x.begin(), x.end()));
    return it != cache->end() ? it->second : provider(x);
  };
  return out;
}

}  // namespace

double kernel_mild_rate(double kappa) {
  require_kappa(kappa, "kernel_mild_rate");
  if (kappa >= 1.0) return 6.0 * kappa;
  return 3.0 * std::pow(2.0 / kappa, 1.0 / kappa);
}

double kernel_inner_rate(double kappa) {
  require_kappa(kappa, "kernel_inner_rate");
  return kappa >= 1.0 ? kappa : 1.0;
}

double kernel_safe_floor(double kappa) {
  require_kappa(kappa, "kernel_safe_floor");
  return std::pow(577.0, -1.0 / kappa);
}

std::vector<double> phi_value(const PowerMap& map, std::span<const double> x) {
  require_r(map.r, "phi_value");
  if (static_cast<int>(x.size()) != map.dim) {
    throw std::invalid_argument("phi_value: point dimension does not match the map");
  }
  require_interior(x, "phi_value");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::pow(x[i], map.r);
  return out;
}

std::vector<double> phi_value(const PhiR& map, std::span<const double> x) {
  require_r(map.r, "phi_value");
  return sequential_phi_value(map.cell, x, [&](int i) {
    return std::pow(x[static_cast<std::size_t>(i)], map.r);
  });
}

std::vector<double> phi_value(const PhiInf& map, std::span<const double> x) {
  require_kappa(map.kappa, "phi_value");
  return sequential_phi_value(map.cell, x, [&](int i) {
    return kernel_value(x[static_cast<std::size_t>(i)], map.kappa);
  });
}

std::vector<Jet> phi_jet(const PowerMap& map, std::span<const double> x, int order) {
  require_r(map.r, "phi_jet");
  if (static_cast<int>(x.size()) != map.dim) {
    throw std::invalid_argument("phi_jet: point dimension does not match the map");
  }
  require_interior(x, "phi_jet");
  std::vector<Jet> out;
  out.reserve(x.size());
  for (int i = 0; i < map.dim; ++i) {
    out.push_back(power_axis_jet(map.dim, i, map.r, x, order));
  }
  return out;
}

std::vector<Jet> phi_jet(const PhiR& map, std::span<const double> x, int order) {
  require_r(map.r, "phi_jet");
  return sequential_phi_jet(map.cell, x, order, [&](int i) {
    return power_axis_jet(map.cell.dim, i, map.r, x, order);
  });
}

std::vector<Jet> phi_jet(const PhiInf& map, std::span<const double> x, int order) {
  require_kappa(map.kappa, "phi_jet");
  return sequential_phi_jet(map.cell, x, order, [&](int i) {
    return kernel_axis_jet(map.cell.dim, i, map.kappa, x, order);
  });
}

double wall_recursion_gap(const PhiR& map, std::span<const double> x, int order) {
  require_r(map.r, "wall_recursion_gap");
  const int m = map.cell.dim;
  const std::vector<Jet> jets = phi_jet(map, x, order);
  const Jet& last = jets.back();
  const int axis = m - 1;

  // Independent reconstruction of the last component's derivatives through
  // the partition-sum composition formula plus the separated-variable
  // product rule.
  std::vector<double> prefix_vals;
  std::vector<std::map<MultiIndex, double>> prefix_tables;
  for (int c = 0; c < m - 1; ++c) {
    prefix_vals.push_back(jets[static_cast<std::size_t>(c)].value());
    prefix_tables.push_back(jets[static_cast<std::size_t>(c)].derivative_table());
  }

  const auto composed_table = [&](const Wall& w) {
    std::map<MultiIndex, double> table;
    const std::vector<MultiIndex> all = enumerate_multiindices(m, order);
    if (w.is_constant() || w.arity() == 0) {
      for (const MultiIndex& nu : all) {
        table[nu] = nu.is_zero() ? wall_scalar(w, prefix_vals) : 0.0;
      }
      return table;
    }
    const PreparedFunction& fn = std::get<PreparedFunction>(w.f);
    const int arity = w.arity();
    const std::span<const double> prefix(prefix_vals.data(),
                                         static_cast<std::size_t>(arity));
    const std::map<MultiIndex, double> outer =
        prepared_jet(fn, prefix, order).derivative_table();
    const std::vector<std::map<MultiIndex, double>> inner(
        prefix_tables.begin(), prefix_tables.begin() + arity);
    for (const MultiIndex& nu : all) {
      table[nu] = faa_di_bruno(outer, inner, nu);
    }
    return table;
  };

  const std::map<MultiIndex, double> alpha =
      composed_table(map.cell.walls[static_cast<std::size_t>(axis)].first);
  const std::map<MultiIndex, double> beta =
      composed_table(map.cell.walls[static_cast<std::size_t>(axis)].second);

  double gap = 0.0;
  const double xm = x[static_cast<std::size_t>(axis)];
  for (const MultiIndex& nu : enumerate_multiindices(m, order)) {
    std::vector<int> reduced = nu.entries();
    const int nm = reduced[static_cast<std::size_t>(axis)];
    reduced[static_cast<std::size_t>(axis)] = 0;
    const MultiIndex nu_prefix(reduced);
    const double power_part =
        falling_factorial(static_cast<double>(map.r), nm) * std::pow(xm, map.r - nm);
    const double expected = alpha.at(nu) + (beta.at(nu_prefix) - alpha.at(nu_prefix)) *
                                               power_part;
    const double actual = last.derivative(nu);
    const double denom = std::max({1.0, std::abs(expected), std::abs(actual)});
    gap = std::max(gap, std::abs(expected - actual) / denom);
  }
  return gap;
}

LemmaReport verify_weak_mildness(const PhiR& map,
                                 const std::vector<std::vector<double>>& grid,
                                 int order,
                                 std::optional<DeclaredConstants> declared) {
  require_r(map.r, "verify_weak_mildness");
  const auto jets_at = [&](std::span<const double> x) { return phi_jet(map, x, order); };
  LemmaReport report = run_sweep(
      map.cell, grid, order, static_cast<double>(map.r), declared, 0.0, jets_at,
      [&](const std::vector<Jet>& jets, std::span<const double> x, int comp,
          int rank, int deg) {
        const Jet& jet = jets[static_cast<std::size_t>(comp)];
        const double value = std::abs(jet.value());
        if (value == 0.0) return -1.0;
        const double d = std::abs(jet.coeff(rank)) * jet.layout()->factorial(rank);
        return d / value * monomial_weight(x, jet.layout()->index(rank), 1.0) /
               factorial_d(deg);
      });
  report.lemma = "weak-mildness";
  report.r_or_kappa = static_cast<double>(map.r);
  report.note = "ratio |d^nu phi_l / phi_l| vs x^-nu B (A r)^|nu| |nu|!";
  return report;
}

LemmaReport verify_factor_xr(const PhiR& map, int axis_I,
                             const std::vector<std::vector<double>>& grid,
                             int order,
                             std::optional<DeclaredConstants> declared) {
  require_r(map.r, "verify_factor_xr");
  if (axis_I < 0 || axis_I >= map.cell.dim) {
    throw std::invalid_argument("verify_factor_xr: axis out of range");
  }
  const auto jets_at = [&](std::span<const double> x) { return phi_jet(map, x, order); };
  LemmaReport report = run_sweep(
      map.cell, grid, order, static_cast<double>(map.r), declared, 0.0, jets_at,
      [&](const std::vector<Jet>& jets, std::span<const double> x, int comp,
          int rank, int deg) {
        const Jet& jet = jets[static_cast<std::size_t>(comp)];
        const MultiIndex& nu = jet.layout()->index(rank);
        if (nu[axis_I] == 0) return -1.0;
        const double d = std::abs(jet.coeff(rank)) * jet.layout()->factorial(rank);
        const double decay = std::pow(x[static_cast<std::size_t>(axis_I)], map.r);
        return d / decay * monomial_weight(x, nu, 1.0) / factorial_d(deg);
      });
  report.lemma = "factor-xr";
  report.r_or_kappa = static_cast<double>(map.r);
  report.note = "axis " + std::to_string(axis_I) +
                ": |d^nu phi_l| vs x_I^r x^-nu B (A r)^|nu| |nu|!";
  return report;
}

LemmaReport verify_weak_mildness_inf(const PhiInf& map,
                                     const std::vector<std::vector<double>>& grid,
                                     int order,
                                     std::optional<DeclaredConstants> declared) {
  require_kappa(map.kappa, "verify_weak_mildness_inf");
  const double c = kernel_inner_rate(map.kappa);
  const double floor = kernel_safe_floor(map.kappa);
  const auto jets_at = [&](std::span<const double> x) { return phi_jet(map, x, order); };
  LemmaReport report = run_sweep(
      map.cell, grid, order, c, declared, floor, jets_at,
      [&](const std::vector<Jet>& jets, std::span<const double> x, int comp,
          int rank, int deg) {
        const Jet& jet = jets[static_cast<std::size_t>(comp)];
        const double value = std::abs(jet.value());
        if (value == 0.0) return -1.0;
        const double d = std::abs(jet.coeff(rank)) * jet.layout()->factorial(rank);
        return d / value *
               monomial_weight(x, jet.layout()->index(rank), map.kappa + 1.0) /
               factorial_d(deg);
      });
  report.lemma = "weak-mildness-inf";
  report.r_or_kappa = map.kappa;
  report.note = "ratio |d^nu phi_l / phi_l| vs x^-(kappa+1)nu B (cA)^|nu| |nu|!";
  return report;
}

LemmaReport verify_factor_exp(const PhiInf& map, int axis_I,
                              const std::vector<std::vector<double>>& grid,
                              int order,
                              std::optional<DeclaredConstants> declared) {
  require_kappa(map.kappa, "verify_factor_exp");
  if (axis_I < 0 || axis_I >= map.cell.dim) {
    throw std::invalid_argument("verify_factor_exp: axis out of range");
  }
  const double c = kernel_inner_rate(map.kappa);
  const double floor = kernel_safe_floor(map.kappa);
  const auto jets_at = [&](std::span<const double> x) { return phi_jet(map, x, order); };
  LemmaReport report = run_sweep(
      map.cell, grid, order, c, declared, floor, jets_at,
      [&](const std::vector<Jet>& jets, std::span<const double> x, int comp,
          int rank, int deg) {
        const Jet& jet = jets[static_cast<std::size_t>(comp)];
        const MultiIndex& nu = jet.layout()->index(rank);
        if (nu[axis_I] == 0) return -1.0;
        const double d = std::abs(jet.coeff(rank)) * jet.layout()->factorial(rank);
        const double decay = kernel_value(x[static_cast<std::size_t>(axis_I)], map.kappa);
        return d / decay * monomial_weight(x, nu, map.kappa + 1.0) / factorial_d(deg);
      });
  report.lemma = "factor-exp";
  report.r_or_kappa = map.kappa;
  report.note = "axis " + std::to_string(axis_I) +
                ": |d^nu phi_l| vs e^(1-1/x_I^kappa) x^-(kappa+1)nu B (cA)^|nu| |nu|!";
  return report;
}

KernelBoundSample exp_kernel_bound(double kappa, int n, double x) {
  require_kappa(kappa, "exp_kernel_bound");
  if (n < 0) throw std::invalid_argument("exp_kernel_bound: n must be >= 0");
  if (!(x > 0.0 && x < 1.0)) {
    throw std::invalid_argument("exp_kernel_bound: x must lie in (0,1)");
  }
  const std::vector<double> mu{-kappa};
  const std::vector<double> xs{x};
  const Jet kernel = jet_exp(jet_shift(jet_scale(jet_monomial(mu, xs, n), -1.0), 1.0));
  KernelBoundSample sample;
  sample.exact = kernel.derivative(MultiIndex::axis(1, 0, n));
  sample.bound = std::pow(x, -(kappa + 1.0) * n) * kernel_value(x, kappa) *
                 std::pow(2.0 * kernel_inner_rate(kappa), n) * factorial_d(n);
  sample.pass = std::abs(sample.exact) <= sample.bound * (1.0 + 1e-9);
  return sample;
}

SupBoundReport sup_bound_check(double kappa, int n) {
  require_kappa(kappa, "sup_bound_check");
  if (n < 0) throw std::invalid_argument("sup_bound_check: n must be >= 0");
  const auto h = [&](double x) {
    return kernel_value(x, kappa) * std::pow(x, -(kappa + 1.0) * n);
  };
  // Golden-section maximization; the objective rises from 0 and falls back
  // toward the right endpoint, so ties on the flat underflow plateau resolve
  // toward the interior maximum.
  double lo = 1e-12, hi = 1.0 - 1e-12;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double hc = h(c), hd = h(d);
  while (hi - lo > 1e-12) {
    if (hc > hd) {
      hi = d;
      d = c;
      hd = hc;
      c = hi - inv_phi * (hi - lo);
      hc = h(c);
    } else {
      lo = c;
      c = d;
      hc = hd;
      d = lo + inv_phi * (hi - lo);
      hd = h(d);
    }
  }
  SupBoundReport report;
  report.argmax = 0.5 * (lo + hi);
  report.lhs_sup = h(report.argmax);
  report.rhs = n == 0 ? std::exp(1.0)
                      : std::exp(1.0) * std::pow((kappa + 1.0) * n / (std::exp(1.0) * kappa),
                                                 (kappa + 1.0) * n / kappa);
  report.pass = report.lhs_sup <= report.rhs * (1.0 + 1e-9);
  return report;
}

MainTheoremReport verify_main_crpara(const PreparedFunction& f, const Cell& cell,
                                     int r,
                                     const std::vector<std::vector<double>>& grid,
                                     double declared_A) {
  require_r(r, "verify_main_crpara");
  if (!(declared_A > 0.0)) {
    throw std::invalid_argument("verify_main_crpara: declared A must be positive");
  }
  const PhiR map{cell, r};
  const FiniteSampleSet kept =
      filter_finite_samples(composed_jet_provider(f, map, r), grid);
  if (kept.samples.empty()) {
    throw std::invalid_argument(
        "verify_main_crpara: every grid point fell outside double range");
  }
  const MildParams params{declared_A * r, 1.0, 0.0, r};
  MainTheoremReport report;
  report.r_or_kappa = static_cast<double>(r);
  report.order = r;
  report.certificate = verify_certificate(kept.provider, params, kept.samples, r);
  report.fitted_A_per_r = report.certificate.fitted_A_star / r;
  report.excluded_points = kept.excluded;
  report.note = "f o phi^r against (A r, 1, 0) up to order r";
  if (kept.excluded > 0) {
    report.note += "; excluded " + std::to_string(kept.excluded) +
                   " points outside double range";
  }
  return report;
}

AssembledConstants assemble_mildpara_constants(double kappa, int dim,
                                               double monomial_rate,
                                               double c1_bound,
                                               double A_cell, double B_cell) {
  require_kappa(kappa, "assemble_mildpara_constants");
  if (dim < 1) throw std::invalid_argument("assemble_mildpara_constants: dim must be >= 1");
  if (!(monomial_rate > 0.0 && c1_bound > 0.0 && A_cell > 0.0 && B_cell > 0.0)) {
    throw std::invalid_argument("assemble_mildpara_constants: rates and bounds must be positive");
  }
  AssembledConstants out;
  const double coupling = dim * monomial_rate * B_cell + 1.0;
  out.A_tilde = A_cell * coupling;
  out.A = kappa >= 1.0
              ? 4.0 * kappa * out.A_tilde
              : std::pow((kappa + 1.0) / kappa, (kappa + 1.0) / kappa) * out.A_tilde;
  out.B = std::exp(1.0) * dim * monomial_rate * c1_bound * B_cell / coupling;
  out.C = 1.0 + 1.0 / kappa;
  return out;
}

MainTheoremReport verify_main_mildpara(const PreparedFunction& f, const Cell& cell,
                                       double kappa,
                                       const std::vector<std::vector<double>>& grid,
                                       int test_order,
                                       const AssembledConstants& constants) {
  require_kappa(kappa, "verify_main_mildpara");
  if (test_order < 1) {
    throw std::invalid_argument("verify_main_mildpara: test order must be >= 1");
  }
  const double floor = kernel_safe_floor(kappa);
  std::vector<std::vector<double>> kept;
  kept.reserve(grid.size());
  for (const std::vector<double>& x : grid) {
    bool safe = true;
    for (double v : x) {
      if (v < floor) {
        safe = false;
        break;
      }
    }
    if (safe) kept.push_back(x);
  }
  if (kept.empty()) {
    throw std::invalid_argument("verify_main_mildpara: every grid point fell below the kernel underflow floor");
  }
  const PhiInf map{cell, kappa};
  const FiniteSampleSet finite =
      filter_finite_samples(composed_jet_provider(f, map, test_order), kept);
  if (finite.samples.empty()) {
    throw std::invalid_argument(
        "verify_main_mildpara: every grid point fell outside double range");
  }
  // Certificates put B inside the rate when the range lies in (0,1):
  // B <= B^|nu| for B >= 1, so (A, B, C) folds into (A max(1,B), 1, C).
  const MildParams params{constants.A * std::max(1.0, constants.B), 1.0, constants.C,
                          kUnboundedOrder};
  MainTheoremReport report;
  report.r_or_kappa = kappa;
  report.order = test_order;
  report.certificate =
      verify_certificate(finite.provider, params, finite.samples, test_order);
  report.fitted_A_per_r = report.certificate.fitted_A_star;
  report.excluded_points =
      static_cast<int>(grid.size() - kept.size()) + finite.excluded;
  report.note = "f o phi^inf against (A max(1,B), 1, 1 + 1/kappa)";
  if (report.excluded_points > 0) {
    report.note += "; excluded " + std::to_string(report.excluded_points) +
                   " points below the kernel underflow floor or outside double range";
  }
  return report;
}

JetProvider composed_jet_provider(const PreparedFunction& f, const PhiR& map,
                                  int order) {
  require_r(map.r, "composed_jet_provider");
  return [f, map, order](std::span<const double> x) {
    const std::vector<Jet> inner = phi_jet(map, x, order);
    if (!jets_in_double_range(inner)) {
      throw std::range_error("composed_jet_provider: substitution jets left double range");
    }
    std::vector<double> vals(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) vals[i] = inner[i].value();
    const Jet outer = prepared_jet(f, vals, order);
    return jet_compose(outer, inner);
  };
}

JetProvider composed_jet_provider(const PreparedFunction& f, const PhiInf& map,
                                  int order) {
  require_kappa(map.kappa, "composed_jet_provider");
  return [f, map, order](std::span<const double> x) {
    const std::vector<Jet> inner = phi_jet(map, x, order);
    if (!jets_in_double_range(inner)) {
      throw std::range_error("composed_jet_provider: substitution jets left double range");
    }
    std::vector<double> vals(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) vals[i] = inner[i].value();
    const Jet outer = prepared_jet(f, vals, order);
    return jet_compose(outer, inner);
  };
}

}  // namespace mildlab
