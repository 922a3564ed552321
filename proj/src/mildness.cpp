#include "mildlab/mildness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mildlab/parallel.hpp"

namespace mildlab {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_positive(const MildParams& p, const char* who) {
  if (!(p.A > 0.0) || !(p.B > 0.0) || !(p.C >= 0.0)) {
    throw std::invalid_argument(std::string(who) + ": parameters must satisfy A, B > 0 and C >= 0");
  }
}

}  // namespace

double MildParams::bound(int degree) const {
  return B * std::pow(A, degree) * std::pow(factorial_d(degree), 1.0 + C);
}

MildParams mild_sum(const MildParams& f, const MildParams& g) {
  require_positive(f, "mild_sum");
  require_positive(g, "mild_sum");
  MildParams u{std::max(f.A, g.A), std::max(f.B, g.B), std::max(f.C, g.C),
               std::min(f.order, g.order)};
  return {u.A, 2.0 * u.B, u.C, u.order};
}

MildParams mild_product(const MildParams& f, const MildParams& g) {
  require_positive(f, "mild_product");
  require_positive(g, "mild_product");
  MildParams u{std::max(f.A, g.A), std::max(f.B, g.B), std::max(f.C, g.C),
               std::min(f.order, g.order)};
  return {2.0 * u.A, u.B * u.B, u.C, u.order};
}

MildParams mild_compose(const MildParams& f, const MildParams& g,
                        int inner_dim) {
  require_positive(f, "mild_compose");
  require_positive(g, "mild_compose");
  if (inner_dim < 1) throw std::invalid_argument("mild_compose: inner_dim must be >= 1");
  const double C = std::max(f.C, g.C);
  const double A = g.A * std::pow(inner_dim * g.B * f.A + 1.0, 1.0 + C);
  return {A, f.B, C, std::min(f.order, g.order)};
}

double lemma_ab_closed_form(double A1, double B1, double A2, double B2,
                            int dim, const MultiIndex& nu) {
  if (!(A1 > 0.0 && B1 > 0.0 && A2 > 0.0 && B2 > 0.0)) {
    throw std::invalid_argument("lemma_ab_closed_form: constants must be positive");
  }
  if (dim < 1) throw std::invalid_argument("lemma_ab_closed_form: dim must be >= 1");
  if (nu.total() < 1) {
    throw std::invalid_argument("lemma_ab_closed_form: |nu| must be >= 1 (the |nu| = 0 aggregate is an empty sum)");
  }
  const double denom = dim * A1 * B2 + 1.0;
  return dim * A1 * B1 * B2 / denom *
         std::pow(A2 * denom, nu.total()) * factorial_d(nu.total());
}

double lemma_ab_brute_force(double A1, double B1, double A2, double B2,
                            int dim, const MultiIndex& nu) {
  if (!(A1 > 0.0 && B1 > 0.0 && A2 > 0.0 && B2 > 0.0)) {
    throw std::invalid_argument("lemma_ab_brute_force: constants must be positive");
  }
  if (dim < 1) throw std::invalid_argument("lemma_ab_brute_force: dim must be >= 1");
  if (nu.total() < 1) {
    throw std::invalid_argument("lemma_ab_brute_force: |nu| must be >= 1");
  }
  double sum = 0.0;
  for (const MultiIndex& lambda : enumerate_multiindices(dim, nu.total(), 1)) {
    const WeightedPartitions& wp = weighted_partitions(nu, lambda);
    if (wp.terms.empty()) continue;
    double inner = 0.0;
    for (std::size_t ti = 0; ti < wp.terms.size(); ++ti) {
      const PartitionTerm& t = wp.terms[ti];
      double prod = 1.0;
      for (int j = 0; j < t.s; ++j) {
        const int lt = t.l[static_cast<std::size_t>(j)].total();
        const int kt = t.k[static_cast<std::size_t>(j)].total();
        prod *= std::pow(B2 * std::pow(A2, lt) * factorial_d(lt), kt);
      }
      inner += wp.weight[ti] * prod;
    }
    sum += B1 * std::pow(A1, lambda.total()) * factorial_d(lambda.total()) * inner;
  }
  return sum;
}

VerificationReport verify_certificate(const JetProvider& source,
                                      const MildParams& params,
                                      const std::vector<std::vector<double>>& samples,
                                      int order) {
  require_positive(params, "verify_certificate");
  if (samples.empty()) throw std::invalid_argument("verify_certificate: empty sample set");
  if (order < 0) throw std::invalid_argument("verify_certificate: negative order");
  if (order > params.order) {
    throw std::invalid_argument("verify_certificate: order exceeds certificate order");
  }

  struct SampleResult {
    double worst_ratio = 0.0;
    int worst_rank = 0;
    double fitted = 0.0;
  };
  std::vector<SampleResult> results(samples.size());

  parallel_for(samples.size(), [&](std::size_t s) {
    const Jet jet = source(samples[s]);
    if (jet.order() < order) {
      throw std::invalid_argument("verify_certificate: provider returned a lower-order jet");
    }
    SampleResult res;
    const auto& layout = *jet.layout();
    for (int rank = 0; rank < layout.size(); ++rank) {
      const int deg = layout.index(rank).total();
      if (deg > order) continue;
      const double d = std::abs(jet.coeff(rank)) * layout.factorial(rank);
      const double ratio = d / params.bound(deg);
      if (ratio > res.worst_ratio) {
        res.worst_ratio = ratio;
        res.worst_rank = rank;
      }
      if (deg >= 1) {
        const double a = std::pow(
            d / (params.B * std::pow(factorial_d(deg), 1.0 + params.C)),
            1.0 / deg);
        res.fitted = std::max(res.fitted, a);
      }
    }
    results[s] = res;
  });

  VerificationReport report;
  report.params = params;
  report.order = order;
  report.sample_count = static_cast<int>(samples.size());
  std::size_t worst_sample = 0;
  for (std::size_t s = 0; s < results.size(); ++s) {
    if (results[s].worst_ratio > report.worst_ratio) {
      report.worst_ratio = results[s].worst_ratio;
      worst_sample = s;
    }
    report.fitted_A_star = std::max(report.fitted_A_star, results[s].fitted);
  }
  const Jet worst_jet = source(samples[worst_sample]);
  report.worst_nu = worst_jet.layout()->index(results[worst_sample].worst_rank);
  report.worst_point = samples[worst_sample];
  report.pass = report.worst_ratio <= 1.0 + 1e-9;
  report.note = "verified at " + std::to_string(samples.size()) + " samples";
  return report;
}

}  // namespace mildlab
