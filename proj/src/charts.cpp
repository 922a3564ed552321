#include "mildlab/charts.hpp"

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

}  // namespace

const char* norm_mode_name(NormMode mode) {
  return mode == NormMode::CrNorm ? "crnorm" : "supnorm";
}

NormMode norm_mode_from_name(const std::string& name) {
  if (name == "crnorm") return NormMode::CrNorm;
  if (name == "supnorm") return NormMode::SupNorm;
  throw std::invalid_argument("norm mode must be 'crnorm' or 'supnorm', got '" + name + "'");
}

int subdivision_factor(double A, int r, NormMode mode) {
  if (!(A > 0.0)) throw std::invalid_argument("subdivision_factor: A must be positive");
  if (r < 1) throw std::invalid_argument("subdivision_factor: r must be >= 1");
  double target = A * r;
  if (mode == NormMode::SupNorm) {
    target *= std::pow(factorial_d(r), 1.0 / r);
  }
  const int N = static_cast<int>(std::ceil(target - 1e-9));
  return N < 1 ? 1 : N;
}

ChartSet make_charts(const JetProvider& provider, int dim, double A, int r,
                     NormMode mode, int samples_per_axis) {
  if (dim < 1) throw std::invalid_argument("make_charts: dim must be >= 1");
  if (samples_per_axis < 1) {
    throw std::invalid_argument("make_charts: samples_per_axis must be >= 1");
  }
  ChartSet set;
  set.r = r;
  set.mode = mode;
  set.N = subdivision_factor(A, r, mode);
  set.count = 1;
  for (int i = 0; i < dim; ++i) {
    set.count *= set.N;
    if (set.count > 10'000'000LL) {
      throw std::invalid_argument("make_charts: subdivision produces more than 1e7 charts");
    }
  }

  set.charts.resize(static_cast<std::size_t>(set.count));
  const double inv_n = 1.0 / set.N;
  parallel_for(static_cast<std::size_t>(set.count), [&](std::size_t flat) {
    // Decode the row-major cube index.
    std::vector<int> cube(static_cast<std::size_t>(dim), 0);
    long long rest = static_cast<long long>(flat);
    for (int i = dim - 1; i >= 0; --i) {
      cube[static_cast<std::size_t>(i)] = static_cast<int>(rest % set.N);
      rest /= set.N;
    }
    Chart chart;
    chart.cube = cube;

    std::vector<int> s(static_cast<std::size_t>(dim), 0);
    std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
    bool done = false;
    while (!done) {
      for (int i = 0; i < dim; ++i) {
        const double u = (s[static_cast<std::size_t>(i)] + 1.0) / (samples_per_axis + 1.0);
        x[static_cast<std::size_t>(i)] = (cube[static_cast<std::size_t>(i)] + u) * inv_n;
      }
      const Jet jet = provider(x);
      const JetLayout& layout = *jet.layout();
      for (int rank = 0; rank < layout.size(); ++rank) {
        const int deg = layout.index(rank).total();
        if (deg > r) continue;
        double norm = std::abs(jet.coeff(rank)) * layout.factorial(rank) *
                      std::pow(inv_n, deg);
        if (mode == NormMode::CrNorm) norm /= factorial_d(deg);
        if (norm > chart.worst_norm) chart.worst_norm = norm;
      }
      // Odometer over the sample grid, last axis fastest.
      done = true;
      for (int i = dim - 1; i >= 0; --i) {
        if (++s[static_cast<std::size_t>(i)] < samples_per_axis) {
          done = false;
          break;
        }
        s[static_cast<std::size_t>(i)] = 0;
      }
    }
    chart.pass = chart.worst_norm <= 1.0 + 1e-9;
    set.charts[flat] = chart;
  });

  set.pass = true;
  for (const Chart& chart : set.charts) {
    set.worst_norm = std::max(set.worst_norm, chart.worst_norm);
    set.pass = set.pass && chart.pass;
  }
  return set;
}

}  // namespace mildlab
