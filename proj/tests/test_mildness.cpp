#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mildlab/jets.hpp"
#include "mildlab/mildness.hpp"

using namespace mildlab;

namespace {
MultiIndex MI(std::vector<int> e) { return MultiIndex(std::move(e)); }
}  // namespace

TEST_CASE("certificate bound values") {
  const MildParams p{2.0, 3.0, 0.0, kUnboundedOrder};
  CHECK(p.bound(0) == 3.0);
  CHECK(p.bound(1) == 6.0);
  CHECK(p.bound(3) == doctest::Approx(3.0 * 8.0 * 6.0).epsilon(1e-15));
  const MildParams q{1.0, 1.0, 1.0, kUnboundedOrder};
  CHECK(q.bound(3) == doctest::Approx(36.0).epsilon(1e-15));  // (3!)^2
}

TEST_CASE("parameter calculus combinators") {
  const MildParams f{2.0, 3.0, 0.0, 8};
  const MildParams g{1.0, 5.0, 1.0, 6};

  // Sum: unified envelope with doubled range bound.
  const MildParams s = mild_sum(f, g);
  CHECK(s.A == 2.0);
  CHECK(s.B == 10.0);
  CHECK(s.C == 1.0);
  CHECK(s.order == 6);

  // Product: doubled rate, squared range bound.
  const MildParams p = mild_product(f, g);
  CHECK(p.A == 4.0);
  CHECK(p.B == 25.0);
  CHECK(p.C == 1.0);
  CHECK(p.order == 6);

  // Composition: A_g (m B_g A_f + 1)^{1+C} with the outer range bound.
  const MildParams outer{3.0, 5.0, 1.0, 8};
  const MildParams inner{1.0, 4.0, 0.0, 8};
  const MildParams c = mild_compose(outer, inner, 1);
  CHECK(c.A == doctest::Approx(169.0).epsilon(1e-15));  // (12 + 1)^2
  CHECK(c.B == 5.0);
  CHECK(c.C == 1.0);
  CHECK(c.order == 8);

  const MildParams c2 = mild_compose(outer, inner, 2);
  CHECK(c2.A == doctest::Approx(1.0 * std::pow(2.0 * 4.0 * 3.0 + 1.0, 2.0)).epsilon(1e-15));
}

TEST_CASE("composition bound aggregate: closed form vs enumeration") {
  // Unit parameters: dim 1, nu = (2) gives 4; dim 2, nu = (1,1) gives 12.
  CHECK(lemma_ab_closed_form(1, 1, 1, 1, 1, MI({2})) ==
        doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lemma_ab_brute_force(1, 1, 1, 1, 1, MI({2})) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(lemma_ab_closed_form(1, 1, 1, 1, 2, MI({1, 1})) ==
        doctest::Approx(12.0).epsilon(1e-15));
  CHECK(lemma_ab_brute_force(1, 1, 1, 1, 2, MI({1, 1})) ==
        doctest::Approx(12.0).epsilon(1e-12));

  // Deterministic parameter grid across dimensions and degrees.
  const double params[][4] = {
      {0.5, 1.0, 2.0, 0.3}, {1.5, 0.7, 0.9, 2.0}, {3.0, 2.0, 0.4, 1.1}};
  for (int dim = 1; dim <= 3; ++dim) {
    for (const auto& q : params) {
      for (const MultiIndex& nu : enumerate_multiindices(dim, dim == 3 ? 4 : 5, 1)) {
        const double closed = lemma_ab_closed_form(q[0], q[1], q[2], q[3], dim, nu);
        const double brute = lemma_ab_brute_force(q[0], q[1], q[2], q[3], dim, nu);
        CHECK(std::abs(brute - closed) <= 1e-9 * closed);
      }
    }
  }
}

TEST_CASE("certificate verification on analytic families") {
  // f(x) = 1/(1 - x/2): |f^(n)| = n! 2 (1/2)^{n+1} * ... at x = 0 exactly
  // n! / 2^n, so (A = 1/2, B = 1, C = 0) is tight at the origin.
  const JetProvider f = [](std::span<const double> x) {
    const Jet t = Jet::variable({x[0]}, 6, 0);
    return jet_reciprocal(jet_shift(jet_scale(t, -0.5), 1.0));
  };
  const std::vector<std::vector<double>> at_zero{{0.0}};
  const VerificationReport tight =
      verify_certificate(f, MildParams{0.5, 1.0, 0.0, 6}, at_zero, 6);
  CHECK(tight.pass);
  CHECK(tight.fitted_A_star == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tight.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));

  // An undersized rate must fail, and the report must say where.
  const VerificationReport under =
      verify_certificate(f, MildParams{0.25, 1.0, 0.0, 6}, at_zero, 6);
  CHECK_FALSE(under.pass);
  CHECK(under.worst_ratio > 1.0);
  CHECK(under.worst_nu.total() >= 1);
  CHECK(under.sample_count == 1);

  // Growing the sample set can only increase the fitted rate.  The value
  // bound (nu = 0) is enforced too: B = 1 fails at x = 0.9 where the value
  // is 1/0.55, no matter how generous the rate.
  const std::vector<std::vector<double>> wider{{0.0}, {0.5}, {0.9}};
  const VerificationReport wide =
      verify_certificate(f, MildParams{10.0, 1.0, 0.0, 6}, wider, 6);
  CHECK(wide.fitted_A_star >= tight.fitted_A_star);
  CHECK_FALSE(wide.pass);
  CHECK(wide.worst_nu.total() == 0);
  const VerificationReport wide_ok =
      verify_certificate(f, MildParams{10.0, 2.0, 0.0, 6}, wider, 6);
  CHECK(wide_ok.pass);

  CHECK_THROWS_AS((void)verify_certificate(f, MildParams{1, 1, 0, 6}, {}, 6),
                  std::invalid_argument);
}

TEST_CASE("gevrey slack relaxes the certificate") {
  // f(x) = 1/(1 - x/2) at 0 has derivatives n!/2^n.  At rate 0.4 the
  // ratios 1.25^n outgrow the slack B = 1.3 under C = 0, but the extra
  // factorial of C = 1 absorbs them: same data, opposite verdicts.
  const JetProvider f = [](std::span<const double> x) {
    const Jet t = Jet::variable({x[0]}, 6, 0);
    return jet_reciprocal(jet_shift(jet_scale(t, -0.5), 1.0));
  };
  const std::vector<std::vector<double>> at_zero{{0.0}};
  const VerificationReport c0 =
      verify_certificate(f, MildParams{0.4, 1.3, 0.0, 6}, at_zero, 6);
  const VerificationReport c1 =
      verify_certificate(f, MildParams{0.4, 1.3, 1.0, 6}, at_zero, 6);
  CHECK_FALSE(c0.pass);
  CHECK(c1.pass);
  // The fitted rate itself relaxes once an order >= 2 term was binding.
  CHECK(c1.fitted_A_star < c0.fitted_A_star);
}
