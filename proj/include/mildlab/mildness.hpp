#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mildlab/jets.hpp"
#include "mildlab/multiindex.hpp"

namespace mildlab {

/// Sentinel for certificates valid at every derivative order.
inline constexpr int kUnboundedOrder = std::numeric_limits<int>::max();

/// Derivative growth certificate: |f^(nu)(x)| <= B * A^|nu| * |nu|!^(1+C)
/// for all |nu| <= order.
struct MildParams {
  double A = 1.0;
  double B = 1.0;
  double C = 0.0;
  int order = kUnboundedOrder;

  double bound(int degree) const;  // B * A^degree * degree!^(1+C)
};

/// Parameters of f + g from certificates of f and g, after unifying to the
/// common envelope (max A, max B, max C, min order).
MildParams mild_sum(const MildParams& f, const MildParams& g);

/// Parameters of f * g, same unification.
MildParams mild_product(const MildParams& f, const MildParams& g);

/// Parameters of f o g where g has inner_dim components, each certified by
/// g, mapping into the domain of f.  Only C and order are unified; the
/// growth rate becomes A_g * (inner_dim * B_g * A_f + 1)^(1+C).
MildParams mild_compose(const MildParams& f, const MildParams& g,
                        int inner_dim);

/// Closed form of the composition bound aggregate
///   sum_{1<=|lambda|<=|nu|} B1 A1^|lambda| |lambda|! *
///     sum_s sum_{p_s(nu,lambda)} nu! prod_j (B2 A2^|l_j| |l_j|!)^|k_j| /
///                                          (k_j! (l_j!)^|k_j|)
/// over lambda in N^dim:
///   dim*A1*B1*B2 / (dim*A1*B2 + 1) * (A2*(dim*A1*B2 + 1))^|nu| * |nu|!.
/// The |nu| = 0 aggregate is an empty sum; callers must keep |nu| >= 1.
double lemma_ab_closed_form(double A1, double B1, double A2, double B2,
                            int dim, const MultiIndex& nu);

/// Same aggregate by full enumeration over lambda and the partition sets.
double lemma_ab_brute_force(double A1, double B1, double A2, double B2,
                            int dim, const MultiIndex& nu);

/// Outcome of checking a certificate against sampled jets.
struct VerificationReport {
  MildParams params;
  int order = 0;
  int sample_count = 0;
  double worst_ratio = 0.0;          // max |f^(nu)| / bound(|nu|)
  MultiIndex worst_nu;
  std::vector<double> worst_point;
  double fitted_A_star = 0.0;        // max over |nu|>=1 of
                                     // (|f^(nu)| / (B |nu|!^(1+C)))^(1/|nu|)
  bool pass = false;
  std::string note;
};

using JetProvider = std::function<Jet(std::span<const double>)>;

/// Evaluates jets at every sample up to `order` and checks the declared
/// certificate with relative tolerance 1e-9.  Throws on an empty sample set.
VerificationReport verify_certificate(const JetProvider& source,
                                      const MildParams& params,
                                      const std::vector<std::vector<double>>& samples,
                                      int order);

}  // namespace mildlab
