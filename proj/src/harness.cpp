#include "mildlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "mildlab/expr_sampling.hpp"
#include "mildlab/jets.hpp"
#include "mildlab/mildness.hpp"
#include "mildlab/multiindex.hpp"

namespace mildlab {

namespace {

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// |a - b| relative to the larger magnitude, floored at 1 so that exact
/// zeros (which occur for symmetric cancellations) compare absolutely.
double mixed_rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Random multi-index with 1 <= |nu| <= nu_max.
MultiIndex random_multiindex(std::mt19937_64& rng, int dim, int nu_max) {
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  const int total = uniform_int(rng, 1, nu_max);
  for (int i = 0; i < total; ++i) {
    e[static_cast<std::size_t>(uniform_int(rng, 0, dim - 1))] += 1;
  }
  return MultiIndex(std::move(e));
}

/// Fits a certificate (fitted A*, sampled range bound, C = 0) for a jet
/// family over the given samples.
MildParams fit_params(const JetProvider& provider,
                      const std::vector<std::vector<double>>& samples,
                      int order) {
  double B = 0.0;
  for (const std::vector<double>& x : samples) {
    B = std::max(B, std::abs(provider(x).value()));
  }
  if (B <= 0.0) B = 1.0;
  const MildParams probe{1.0, B, 0.0, order};
  const VerificationReport fit = verify_certificate(provider, probe, samples, order);
  const double A = std::max(fit.fitted_A_star, 1e-9);
  return MildParams{A, B, 0.0, order};
}

}  // namespace

FaaCheckReport run_faa_check(int pairs, int dim_max, int order_max,
                             std::uint64_t seed) {
  FaaCheckReport report;
  report.pairs = pairs;
  std::mt19937_64 rng(seed);
  for (int p = 0; p < pairs; ++p) {
    const int dim = uniform_int(rng, 1, dim_max);
    const int inner_count = uniform_int(rng, 1, 3);
    const int order = uniform_int(rng, 1, order_max);
    const ComposedSample cs = sample_composition(rng, dim, inner_count, 3);
    const std::vector<std::vector<double>> pts = sample_points(rng, dim, 3);
    for (const std::vector<double>& x : pts) {
      std::vector<Jet> inner;
      std::vector<double> vals;
      std::vector<std::map<MultiIndex, double>> inner_tables;
      inner.reserve(cs.inner.size());
      for (const Expr& g : cs.inner) {
        inner.push_back(g.jet(x, order));
        vals.push_back(inner.back().value());
        inner_tables.push_back(inner.back().derivative_table());
      }
      const Jet outer = cs.outer.jet(vals, order);
      const Jet composed = jet_compose(outer, inner);
      const std::map<MultiIndex, double> outer_table = outer.derivative_table();
      for (const auto& [nu, actual] : composed.derivative_table()) {
        if (nu.is_zero()) continue;
        const double expected = faa_di_bruno(outer_table, inner_tables, nu);
        report.max_rel_err =
            std::max(report.max_rel_err, mixed_rel_err(actual, expected));
        ++report.derivatives_compared;
      }
    }
  }
  report.pass = report.max_rel_err <= report.tolerance;
  return report;
}

LemmaAbCheckReport run_lemma_ab_check(int draws, int dim_max, int nu_max,
                                      std::uint64_t seed) {
  LemmaAbCheckReport report;
  report.draws = draws;
  std::mt19937_64 rng(seed);
  for (int d = 0; d < draws; ++d) {
    const int dim = uniform_int(rng, 1, dim_max);
    const MultiIndex nu = random_multiindex(rng, dim, nu_max);
    const double A1 = uniform_in(rng, 0.1, 5.0);
    const double B1 = uniform_in(rng, 0.1, 5.0);
    const double A2 = uniform_in(rng, 0.1, 5.0);
    const double B2 = uniform_in(rng, 0.1, 5.0);
    const double closed = lemma_ab_closed_form(A1, B1, A2, B2, dim, nu);
    const double brute = lemma_ab_brute_force(A1, B1, A2, B2, dim, nu);
    report.max_rel_dev =
        std::max(report.max_rel_dev, std::abs(brute - closed) / closed);
    ++report.cases;
  }
  // Pinned spot values: dim 1, |nu| = 2, unit parameters -> 4;
  // dim 2, nu = (1,1), unit parameters -> 12 by both routes.
  const MultiIndex nu1(std::vector<int>{2});
  const MultiIndex nu2(std::vector<int>{1, 1});
  const double m1 = lemma_ab_closed_form(1, 1, 1, 1, 1, nu1);
  const double m2c = lemma_ab_closed_form(1, 1, 1, 1, 2, nu2);
  const double m2b = lemma_ab_brute_force(1, 1, 1, 1, 2, nu2);
  report.spot_values_ok = std::abs(m1 - 4.0) <= 1e-12 &&
                          std::abs(m2c - 12.0) <= 1e-12 &&
                          std::abs(m2b - 12.0) <= 1e-9;
  report.pass = report.spot_values_ok && report.max_rel_dev <= report.tolerance;
  return report;
}

MildComposeCheckReport run_mild_compose_check(int fixtures, int order,
                                              int samples, std::uint64_t seed) {
  MildComposeCheckReport report;
  report.fixtures = fixtures;
  std::mt19937_64 rng(seed);
  for (int f = 0; f < fixtures; ++f) {
    const int dim = uniform_int(rng, 1, 2);
    const std::vector<std::vector<double>> pts = sample_points(rng, dim, samples);

    // Sum and product rules on two sampled functions of the same variables.
    const Expr u = sample_positive_expr(rng, dim, 3);
    const Expr v = sample_positive_expr(rng, dim, 3);
    const JetProvider up = [&](std::span<const double> x) { return u.jet(x, order); };
    const JetProvider vp = [&](std::span<const double> x) { return v.jet(x, order); };
    const MildParams pu = fit_params(up, pts, order);
    const MildParams pv = fit_params(vp, pts, order);
    const JetProvider sum_p = [&](std::span<const double> x) {
      return jet_add(u.jet(x, order), v.jet(x, order));
    };
    const JetProvider prod_p = [&](std::span<const double> x) {
      return jet_mul(u.jet(x, order), v.jet(x, order));
    };
    if (!verify_certificate(sum_p, mild_sum(pu, pv), pts, order).pass) {
      ++report.sum_failures;
    }
    if (!verify_certificate(prod_p, mild_product(pu, pv), pts, order).pass) {
      ++report.product_failures;
    }

    // Composition rule on a sampled outer/inner pair.  The inner components
    // share one certificate (the envelope of their fits), matching the
    // one-certificate-per-map shape of the composition rule.
    const int inner_count = uniform_int(rng, 1, 2);
    const ComposedSample cs = sample_composition(rng, dim, inner_count, 3);
    MildParams pg{1e-9, 0.0, 0.0, order};
    for (const Expr& g : cs.inner) {
      const JetProvider gp = [&](std::span<const double> x) { return g.jet(x, order); };
      const MildParams fit = fit_params(gp, pts, order);
      pg.A = std::max(pg.A, fit.A);
      pg.B = std::max(pg.B, fit.B);
    }
    std::vector<std::vector<double>> images;
    images.reserve(pts.size());
    for (const std::vector<double>& x : pts) {
      std::vector<double> y;
      y.reserve(cs.inner.size());
      for (const Expr& g : cs.inner) y.push_back(g.jet(x, 0).value());
      images.push_back(std::move(y));
    }
    const JetProvider fp = [&](std::span<const double> y) {
      return cs.outer.jet(y, order);
    };
    const MildParams pf = fit_params(fp, images, order);
    const JetProvider comp_p = [&](std::span<const double> x) {
      std::vector<Jet> inner;
      std::vector<double> vals;
      for (const Expr& g : cs.inner) {
        inner.push_back(g.jet(x, order));
        vals.push_back(inner.back().value());
      }
      return jet_compose(cs.outer.jet(vals, order), inner);
    };
    if (!verify_certificate(comp_p, mild_compose(pf, pg, inner_count), pts, order)
             .pass) {
      ++report.compose_failures;
    }
  }
  report.pass = report.sum_failures == 0 && report.product_failures == 0 &&
                report.compose_failures == 0;
  return report;
}

}  // namespace mildlab
