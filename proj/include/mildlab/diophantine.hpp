#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mildlab/multiindex.hpp"

namespace mildlab {

using Rational = boost::multiprecision::cpp_rational;

/// Point with exact rational coordinates, each strictly inside (0,1).
struct RationalPoint {
  std::vector<Rational> coords;

  bool operator==(const RationalPoint& o) const { return coords == o.coords; }
};

/// max over coordinates a/b (lowest terms) of max(|a|, |b|).
BigInt height(const RationalPoint& q);

/// All fractions a/b with 0 < a < b <= max_denominator and gcd(a, b) = 1,
/// in ascending order.
std::vector<Rational> farey_interior(int max_denominator);

/// Exactly decidable membership test over rational points.  Predicates that
/// are not exactly decidable must say so; enumeration refuses them rather
/// than inventing points through floating-point tests.
struct MembershipPredicate {
  std::string name;
  int ambient_dim = 0;
  bool exactly_decidable = true;
  std::function<bool(std::span<const Rational>)> contains;
};

/// Built-in fixtures: "square" (all of (0,1)^n) and "parabola"
/// (the graph y = x^2 in (0,1)^2).
MembershipPredicate square_fixture(int n);
MembershipPredicate parabola_fixture();

/// Complete list of X(Q, H): the full Farey product filtered through the
/// predicate, in lexicographic order of the per-axis Farey sequences.
std::vector<RationalPoint> enumerate_points(const MembershipPredicate& X,
                                            int H, int n);

/// floor(log(H)^{m/(n-m)}) with the natural log; requires n > m >= 1 and
/// H > e (i.e. H >= 3).
int degree_bound(int H, int m, int n);

/// 2 m n / (n - m); requires n > m >= 1.
double c2_exponent(int m, int n);

/// Polynomials of degree <= degree in n variables, stored as exact
/// coefficient vectors over the graded-lex monomial list.
struct HypersurfaceCover {
  int degree = 0;
  int ambient_dim = 0;
  std::vector<MultiIndex> monomials;                // shared basis
  std::vector<std::vector<Rational>> hypersurfaces; // coefficient vectors
  std::vector<int> assignment;                      // point index -> surface
};

/// Exact evaluation of a coefficient vector at a point.
Rational evaluate_polynomial(const std::vector<MultiIndex>& monomials,
                             const std::vector<Rational>& coeffs,
                             const RationalPoint& q);

/// Covers the points by degree-<= d hypersurfaces: first tries a single
/// exact fit through every point; otherwise chunks greedily into groups of
/// D - 1 points (D = binomial(n + d, n)), each of which admits a nonzero
/// vanishing polynomial by dimension count.  Every assignment is verified
/// as an exact zero.
HypersurfaceCover hypersurface_cover(const std::vector<RationalPoint>& points,
                                     int d, int n);

struct CountRow {
  int H = 0;
  long long points = 0;
  int degree_d = 0;
  long long cover_size = 0;
  double log_h_pow_c2 = 0.0;
  bool pass = false;
};

struct CountTable {
  std::string fixture;
  int m = 0;
  int n = 0;
  double c1 = 0.0;   // frozen from the smallest H in the sweep
  double c2 = 0.0;
  std::vector<CountRow> rows;
  bool pass = false;
};

/// Sweeps H over `heights` (sorted ascending internally): enumerates points,
/// builds covers at degree_bound(H, m, n), and checks cover size against
/// c1 * log(H)^{c2} with c1 fitted at the smallest H.
CountTable count_vs_bound(const MembershipPredicate& X,
                          std::vector<int> heights, int m, int n);

}  // namespace mildlab
