#pragma once

#include <cstdint>

namespace mildlab {

/// Seeded, self-contained verification sweeps shared by the CLI and the
/// regression suite.  Each run is deterministic for a fixed seed.

/// Truncated-series composition against the combinatorial chain rule on
/// random smooth compositions: every derivative of jet_compose output is
/// compared with an independent faa_di_bruno evaluation of the same data.
struct FaaCheckReport {
  int pairs = 0;
  int derivatives_compared = 0;
  double max_rel_err = 0.0;
  double tolerance = 1e-10;
  bool pass = false;
};

FaaCheckReport run_faa_check(int pairs, int dim_max, int order_max,
                             std::uint64_t seed);

/// Closed-form composition-bound aggregate against full partition
/// enumeration, on random positive parameter draws plus pinned spot values.
struct LemmaAbCheckReport {
  int draws = 0;
  int cases = 0;
  double max_rel_dev = 0.0;
  double tolerance = 1e-9;
  bool spot_values_ok = false;
  bool pass = false;
};

LemmaAbCheckReport run_lemma_ab_check(int draws, int dim_max, int nu_max,
                                      std::uint64_t seed);

/// Parameter-calculus soundness: on random expression fixtures, fit
/// certificates for the components, combine them with the sum / product /
/// composition rules, and require the combined certificate to pass on the
/// combined jets at the same samples.
struct MildComposeCheckReport {
  int fixtures = 0;
  int sum_failures = 0;
  int product_failures = 0;
  int compose_failures = 0;
  bool pass = false;
};

MildComposeCheckReport run_mild_compose_check(int fixtures, int order,
                                              int samples, std::uint64_t seed);

}  // namespace mildlab
