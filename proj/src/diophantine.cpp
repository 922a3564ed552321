#include "mildlab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mildlab/parallel.hpp"

namespace mildlab {

namespace {

BigInt binomial(int n, int k) {
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

/// Nonzero kernel vector of the (rows x cols) rational matrix, requiring
/// rows < cols or a genuine rank deficiency.  Returns empty when the matrix
/// has full column rank.
std::vector<Rational> kernel_vector(std::vector<std::vector<Rational>> M,
                                    int cols) {
  const int rows = static_cast<int>(M.size());
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r) {
      if (M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(M[static_cast<std::size_t>(row)], M[static_cast<std::size_t>(pivot)]);
    const Rational lead = M[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    for (int c = col; c < cols; ++c) {
      M[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] /= lead;
    }
    for (int r = 0; r < rows; ++r) {
      if (r == row) continue;
      const Rational factor = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (int c = col; c < cols; ++c) {
        M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            factor * M[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
      }
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }

  // Locate a free column; express it in terms of the pivots.
  std::vector<int> pivot_row_of_col(static_cast<std::size_t>(cols), -1);
  for (int r = 0; r < static_cast<int>(pivot_col_of_row.size()); ++r) {
    pivot_row_of_col[static_cast<std::size_t>(pivot_col_of_row[static_cast<std::size_t>(r)])] = r;
  }
  int free_col = -1;
  for (int c = 0; c < cols; ++c) {
    if (pivot_row_of_col[static_cast<std::size_t>(c)] < 0) {
      free_col = c;
      break;
    }
  }
  if (free_col < 0) return {};
  std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
  v[static_cast<std::size_t>(free_col)] = 1;
  for (int c = 0; c < cols; ++c) {
    const int r = pivot_row_of_col[static_cast<std::size_t>(c)];
    if (r >= 0) {
      v[static_cast<std::size_t>(c)] =
          -M[static_cast<std::size_t>(r)][static_cast<std::size_t>(free_col)];
    }
  }
  return v;
}

std::vector<std::vector<Rational>> evaluation_matrix(
    const std::vector<MultiIndex>& monomials,
    const std::vector<RationalPoint>& points, std::size_t begin,
    std::size_t end) {
  std::vector<std::vector<Rational>> M;
  M.reserve(end - begin);
  for (std::size_t p = begin; p < end; ++p) {
    std::vector<Rational> row;
    row.reserve(monomials.size());
    for (const MultiIndex& mu : monomials) {
      Rational value = 1;
      for (int i = 0; i < mu.dim(); ++i) {
        for (int k = 0; k < mu[i]; ++k) value *= points[p].coords[static_cast<std::size_t>(i)];
      }
      row.push_back(std::move(value));
    }
    M.push_back(std::move(row));
  }
  return M;
}

}  // namespace

BigInt height(const RationalPoint& q) {
  if (q.coords.empty()) throw std::invalid_argument("height: empty point");
  BigInt h = 0;
  for (const Rational& c : q.coords) {
    const BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(c));
    const BigInt den = boost::multiprecision::abs(boost::multiprecision::denominator(c));
    h = std::max({h, num, den});
  }
  return h;
}

std::vector<Rational> farey_interior(int max_denominator) {
  if (max_denominator < 1) {
    throw std::invalid_argument("farey_interior: max_denominator must be >= 1");
  }
  std::vector<Rational> out;
  for (int b = 2; b <= max_denominator; ++b) {
    for (int a = 1; a < b; ++a) {
      if (std::gcd(a, b) == 1) out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MembershipPredicate square_fixture(int n) {
  if (n < 1) throw std::invalid_argument("square_fixture: n must be >= 1");
  MembershipPredicate pred;
  pred.name = "square";
  pred.ambient_dim = n;
  pred.contains = [](std::span<const Rational>) { return true; };
  return pred;
}

MembershipPredicate parabola_fixture() {
  MembershipPredicate pred;
  pred.name = "parabola";
  pred.ambient_dim = 2;
  pred.contains = [](std::span<const Rational> q) { return q[1] == q[0] * q[0]; };
  return pred;
}

std::vector<RationalPoint> enumerate_points(const MembershipPredicate& X,
                                            int H, int n) {
  if (n < 1) throw std::invalid_argument("enumerate_points: n must be >= 1");
  if (H < 1) throw std::invalid_argument("enumerate_points: H must be >= 1");
  if (X.ambient_dim != n) {
    throw std::invalid_argument("enumerate_points: predicate dimension mismatch");
  }
  if (!X.exactly_decidable) {
    throw std::invalid_argument(
        "enumerate_points: predicate '" + X.name +
        "' is not exactly decidable; refusing floating-point membership");
  }
  const std::vector<Rational> axis = farey_interior(H);
  if (axis.empty()) return {};

  // Parallel over the leading coordinate; each worker walks the remaining
  // axes with an odometer, keeping per-slice output in enumeration order.
  std::vector<std::vector<RationalPoint>> slices(axis.size());
  parallel_for(axis.size(), [&](std::size_t first) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    idx[0] = first;
    std::vector<Rational> coords(static_cast<std::size_t>(n));
    bool done = false;
    while (!done) {
      for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)] = axis[idx[static_cast<std::size_t>(i)]];
      if (X.contains(coords)) {
        slices[first].push_back(RationalPoint{coords});
      }
      done = true;
      for (int i = n - 1; i >= 1; --i) {
        if (++idx[static_cast<std::size_t>(i)] < axis.size()) {
          done = false;
          break;
        }
        idx[static_cast<std::size_t>(i)] = 0;
      }
      if (n == 1) done = true;
    }
  });

  std::vector<RationalPoint> out;
  for (std::vector<RationalPoint>& slice : slices) {
    out.insert(out.end(), std::make_move_iterator(slice.begin()),
               std::make_move_iterator(slice.end()));
  }
  return out;
}

int degree_bound(int H, int m, int n) {
  if (m < 1 || n <= m) throw std::invalid_argument("degree_bound: need n > m >= 1");
  if (H <= 2) {
    throw std::invalid_argument("degree_bound: H must exceed e (H >= 3)");
  }
  const double v = std::pow(std::log(static_cast<double>(H)),
                            static_cast<double>(m) / (n - m));
  return static_cast<int>(std::floor(v));
}

double c2_exponent(int m, int n) {
  if (m < 1 || n <= m) throw std::invalid_argument("c2_exponent: need n > m >= 1");
  return 2.0 * m * n / (n - m);
}

Rational evaluate_polynomial(const std::vector<MultiIndex>& monomials,
                             const std::vector<Rational>& coeffs,
                             const RationalPoint& q) {
  if (monomials.size() != coeffs.size()) {
    throw std::invalid_argument("evaluate_polynomial: basis/coefficient size mismatch");
  }
  Rational sum = 0;
  for (std::size_t j = 0; j < monomials.size(); ++j) {
    if (coeffs[j] == 0) continue;
    Rational term = coeffs[j];
    const MultiIndex& mu = monomials[j];
    for (int i = 0; i < mu.dim(); ++i) {
      for (int k = 0; k < mu[i]; ++k) term *= q.coords[static_cast<std::size_t>(i)];
    }
    sum += term;
  }
  return sum;
}

HypersurfaceCover hypersurface_cover(const std::vector<RationalPoint>& points,
                                     int d, int n) {
  if (d < 1) throw std::invalid_argument("hypersurface_cover: degree must be >= 1");
  if (n < 1) throw std::invalid_argument("hypersurface_cover: n must be >= 1");
  HypersurfaceCover cover;
  cover.degree = d;
  cover.ambient_dim = n;
  cover.monomials = enumerate_multiindices(n, d);
  const std::size_t D = cover.monomials.size();
  if (BigInt(static_cast<long long>(D)) != binomial(n + d, n)) {
    throw std::logic_error("hypersurface_cover: monomial basis size mismatch");
  }
  if (points.empty()) return cover;
  for (const RationalPoint& q : points) {
    if (static_cast<int>(q.coords.size()) != n) {
      throw std::invalid_argument("hypersurface_cover: point dimension mismatch");
    }
  }

  const auto verify_chunk = [&](std::size_t begin, std::size_t end,
                                const std::vector<Rational>& poly) {
    bool nonzero = false;
    for (const Rational& c : poly) nonzero = nonzero || c != 0;
    if (!nonzero) throw std::logic_error("hypersurface_cover: zero polynomial produced");
    for (std::size_t p = begin; p < end; ++p) {
      if (evaluate_polynomial(cover.monomials, poly, points[p]) != 0) {
        throw std::logic_error("hypersurface_cover: assigned point is not an exact zero");
      }
    }
  };

  cover.assignment.assign(points.size(), -1);

  // A single hypersurface may already carry every point; prefer it.
  if (std::vector<Rational> all_fit =
          kernel_vector(evaluation_matrix(cover.monomials, points, 0, points.size()),
                        static_cast<int>(D));
      !all_fit.empty()) {
    verify_chunk(0, points.size(), all_fit);
    cover.hypersurfaces.push_back(std::move(all_fit));
    std::fill(cover.assignment.begin(), cover.assignment.end(), 0);
    return cover;
  }

  // Greedy chunks of D - 1 points; the evaluation system is underdetermined
  // so a nonzero kernel vector always exists.
  const std::size_t chunk = D - 1;
  for (std::size_t begin = 0; begin < points.size(); begin += chunk) {
    const std::size_t end = std::min(points.size(), begin + chunk);
    std::vector<Rational> poly = kernel_vector(
        evaluation_matrix(cover.monomials, points, begin, end), static_cast<int>(D));
    if (poly.empty()) {
      throw std::logic_error("hypersurface_cover: underdetermined system had no kernel");
    }
    verify_chunk(begin, end, poly);
    const int index = static_cast<int>(cover.hypersurfaces.size());
    cover.hypersurfaces.push_back(std::move(poly));
    for (std::size_t p = begin; p < end; ++p) cover.assignment[p] = index;
  }
  return cover;
}

CountTable count_vs_bound(const MembershipPredicate& X,
                          std::vector<int> heights, int m, int n) {
  if (heights.empty()) throw std::invalid_argument("count_vs_bound: empty height sweep");
  std::sort(heights.begin(), heights.end());
  CountTable table;
  table.fixture = X.name;
  table.m = m;
  table.n = n;
  table.c2 = c2_exponent(m, n);
  table.pass = true;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const int H = heights[i];
    CountRow row;
    row.H = H;
    const std::vector<RationalPoint> points = enumerate_points(X, H, n);
    row.points = static_cast<long long>(points.size());
    row.degree_d = degree_bound(H, m, n);
    const HypersurfaceCover cover = hypersurface_cover(points, row.degree_d, n);
    row.cover_size = static_cast<long long>(cover.hypersurfaces.size());
    row.log_h_pow_c2 = std::pow(std::log(static_cast<double>(H)), table.c2);
    if (i == 0) {
      table.c1 = row.cover_size == 0
                     ? 1.0
                     : static_cast<double>(row.cover_size) / row.log_h_pow_c2;
    }
    row.pass = static_cast<double>(row.cover_size) <=
               table.c1 * row.log_h_pow_c2 * (1.0 + 1e-9);
    table.pass = table.pass && row.pass;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace mildlab
