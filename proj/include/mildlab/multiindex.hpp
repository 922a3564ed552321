#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace mildlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Multi-index nu in N^m.  Immutable after construction; entries are >= 0.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex zeros(int dim);
  /// Unit vector scaled by k: k * e_i.
  static MultiIndex axis(int dim, int i, int k = 1);

  int dim() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return e_; }

  /// Degree |nu| = nu_1 + ... + nu_m.
  int total() const;
  bool is_zero() const { return total() == 0; }

  /// nu! = nu_1! * ... * nu_m! as an exact integer.
  BigInt factorial() const;

  MultiIndex plus(const MultiIndex& o) const;
  /// Componentwise difference; requires o <= *this componentwise.
  MultiIndex minus(const MultiIndex& o) const;
  MultiIndex scaled(int c) const;
  bool leq(const MultiIndex& o) const;  // componentwise <=

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }
  /// Total order used for map keys: graded first, lexicographic within a grade.
  bool operator<(const MultiIndex& o) const;

  std::string str() const;  // "(a,b,c)" for diagnostics

 private:
  std::vector<int> e_;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& v) const;
};

/// Strict graded lexicographic precedence:  a < b iff |a| < |b|, or the
/// degrees tie and a comes lexicographically before b.
bool lex_precedes(const MultiIndex& a, const MultiIndex& b);

/// All nu in N^dim with min_total <= |nu| <= max_total, in graded-lex order.
std::vector<MultiIndex> enumerate_multiindices(int dim, int max_total,
                                               int min_total = 0);

/// One term of the composition-derivative partition set p_s(nu, lambda):
/// a chain l_1 < ... < l_s (strict graded-lex) with attached multiplicities
/// k_1, ..., k_s, |k_j| >= 1, such that sum k_j = lambda and
/// sum |k_j| * l_j = nu.
struct PartitionTerm {
  int s = 0;
  std::vector<MultiIndex> k;  // dim = dim(lambda)
  std::vector<MultiIndex> l;  // dim = dim(nu)

  bool operator==(const PartitionTerm& o) const {
    return s == o.s && k == o.k && l == o.l;
  }
};

/// Enumerates p_s(nu, lambda) for every admissible s, in canonical order:
/// ascending s, then lexicographic on the concatenated (l, k) entry sequence.
/// Requires |lambda| >= 1; returns an empty list when no term exists
/// (in particular whenever |lambda| > |nu|).
std::vector<PartitionTerm> enumerate_partitions(const MultiIndex& nu,
                                                const MultiIndex& lambda);

/// Partition list with each term's exact combinatorial weight
/// nu! / (k_1! * ... * k_s! * (l_1!)^{|k_1|} * ... * (l_s!)^{|k_s|})
/// evaluated in rational arithmetic and converted to double once.
struct WeightedPartitions {
  std::vector<PartitionTerm> terms;
  std::vector<double> weight;
};

/// Cached enumerate_partitions + weights; thread safe.  The returned
/// reference stays valid for the lifetime of the process.
const WeightedPartitions& weighted_partitions(const MultiIndex& nu,
                                              const MultiIndex& lambda);

/// Derivative of a composition f(g_1(x), ..., g_d(x)) at one point.
///
/// outer_derivs maps lambda in N^d (0 <= |lambda| <= |nu|) to
/// f^(lambda)(g(x)); inner_derivs[c] maps l in N^e (1 <= |l| <= |nu|) to
/// g_c^(l)(x).  Combinatorial coefficients are exact rationals converted to
/// double at the final multiply.  Throws std::out_of_range when a required
/// derivative entry is missing.
double faa_di_bruno(
    const std::map<MultiIndex, double>& outer_derivs,
    const std::vector<std::map<MultiIndex, double>>& inner_derivs,
    const MultiIndex& nu);

}  // namespace mildlab
