#pragma once

// Test-local oracles.  Everything here is implemented from the definitions
// with plain loops and exact arithmetic, independently of the library code
// it is used to check.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline int total(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

inline Int int_factorial(int n) {
  Int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int vec_factorial(const std::vector<int>& v) {
  Int r = 1;
  for (int x : v) r *= int_factorial(x);
  return r;
}

/// Every vector in N^dim with lo <= total <= cap, by plain odometer, sorted
/// ascending (std::vector's lexicographic order; any fixed total order
/// works because terms are canonicalized before comparison).
inline std::vector<std::vector<int>> degree_box(int dim, int lo, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  while (true) {
    const int t = total(cur);
    if (t >= lo && t <= cap) out.push_back(cur);
    int i = 0;
    while (i < dim) {
      if (++cur[static_cast<std::size_t>(i)] <= cap) break;
      cur[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == dim) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// One partition term in canonical form: the (l, k) pairs sorted by l.
struct Term {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> parts;

  bool operator==(const Term& o) const { return parts == o.parts; }
  bool operator<(const Term& o) const { return parts < o.parts; }
};

/// Exact weight nu! / prod_j (k_j! * (l_j!)^{|k_j|}).
inline Rat term_weight(const std::vector<int>& nu, const Term& t) {
  Int denom = 1;
  for (const auto& [l, k] : t.parts) {
    denom *= vec_factorial(k);
    const Int lf = vec_factorial(l);
    for (int p = 0; p < total(k); ++p) denom *= lf;
  }
  return Rat(vec_factorial(nu), denom);
}

namespace detail {

inline void partitions_rec(
    const std::vector<std::vector<int>>& candidates, std::size_t pos,
    std::vector<int> nu_rem, std::vector<int> lam_rem, Term& cur,
    std::vector<Term>& out) {
  if (pos == candidates.size()) {
    if (total(nu_rem) == 0 && total(lam_rem) == 0) out.push_back(cur);
    return;
  }
  // Skip this candidate l entirely.
  partitions_rec(candidates, pos + 1, nu_rem, lam_rem, cur, out);
  // Or attach it with some multiplicity vector 1 <= |k|, k <= lam_rem.
  const std::vector<int>& l = candidates[pos];
  const int d = static_cast<int>(lam_rem.size());
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  while (true) {
    int i = 0;
    while (i < d) {
      if (++k[static_cast<std::size_t>(i)] <= lam_rem[static_cast<std::size_t>(i)]) break;
      k[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == d) break;
    const int kt = total(k);
    std::vector<int> nu_next = nu_rem;
    bool ok = true;
    for (std::size_t j = 0; j < nu_next.size(); ++j) {
      nu_next[j] -= kt * l[j];
      if (nu_next[j] < 0) ok = false;
    }
    if (!ok) continue;
    std::vector<int> lam_next = lam_rem;
    for (std::size_t j = 0; j < lam_next.size(); ++j) {
      lam_next[j] -= k[static_cast<std::size_t>(j)];
    }
    cur.parts.emplace_back(l, k);
    partitions_rec(candidates, pos + 1, std::move(nu_next), std::move(lam_next),
                   cur, out);
    cur.parts.pop_back();
  }
}

}  // namespace detail

/// All partitions of (nu, lambda): sets of pairs (l_j, k_j) with distinct
/// l_j, |k_j| >= 1, sum_j k_j = lambda, and sum_j |k_j| * l_j = nu.  The
/// candidate l's range over the full degree box 1 <= |l| <= |nu| — no
/// componentwise pruning against nu — so missing terms in the tested
/// enumeration cannot hide behind a shared shortcut.
inline std::vector<Term> partitions(const std::vector<int>& nu,
                                    const std::vector<int>& lambda) {
  std::vector<Term> out;
  if (total(nu) < 1) return out;
  const std::vector<std::vector<int>> candidates =
      degree_box(static_cast<int>(nu.size()), 1, total(nu));
  Term cur;
  detail::partitions_rec(candidates, 0, nu, lambda, cur, out);
  for (Term& t : out) std::sort(t.parts.begin(), t.parts.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// |{q in graph(y = x^2) : q in (0,1)^2, height(q) <= H}| by a plain double
/// loop over reduced abscissas, with the ordinate reduced by explicit gcd.
inline long long parabola_point_count(int H) {
  auto gcd = [](long long a, long long b) {
    while (b != 0) {
      const long long t = a % b;
      a = b;
      b = t;
    }
    return a;
  };
  long long count = 0;
  for (long long b = 2; b <= H; ++b) {
    for (long long a = 1; a < b; ++a) {
      if (gcd(a, b) != 1) continue;
      const long long num = a * a;
      const long long den = b * b;
      const long long g = gcd(num, den);
      const long long h2 = std::max(num / g, den / g);
      const long long height = std::max(std::max(a, b), h2);
      if (height <= H) ++count;
    }
  }
  return count;
}

}  // namespace oracle
