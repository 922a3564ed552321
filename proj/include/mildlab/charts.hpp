#pragma once

#include <string>
#include <vector>

#include "mildlab/mildness.hpp"

namespace mildlab {

/// Which norm the charts are normalized against:
///   CrNorm:  max_{|nu|<=r} |g^(nu)| / |nu|!  <= 1
///   SupNorm: max_{|nu|<=r} |g^(nu)|          <= 1
enum class NormMode { CrNorm, SupNorm };

const char* norm_mode_name(NormMode mode);
NormMode norm_mode_from_name(const std::string& name);

/// Uniform subdivisions per axis needed so the rescaled map satisfies the
/// norm law, given |f^(nu)| <= (A r)^|nu| |nu|! up to order r:
///   CrNorm:  N = ceil(A r)          -> |g^(nu)|/|nu|! <= (A r / N)^|nu| <= 1
///   SupNorm: N = ceil(A r (r!)^{1/r}) -> |g^(nu)| <= (r!)^{-|nu|/r} |nu|! <= 1
/// The ceiling is taken with a 1e-9 slack so exact products do not round up.
int subdivision_factor(double A, int r, NormMode mode);

/// One cube of the subdivision with its sampled norm.
struct Chart {
  std::vector<int> cube;     // integer corner; the cube is (cube + (0,1)^m)/N
  double worst_norm = 0.0;
  bool pass = false;
};

struct ChartSet {
  int r = 0;
  NormMode mode = NormMode::CrNorm;
  int N = 0;
  long long count = 0;       // N^m
  double worst_norm = 0.0;   // max over charts
  bool pass = false;
  std::vector<Chart> charts; // row-major cube order
};

/// Subdivides (0,1)^m into N^m cubes and checks every chart's norm on a
/// small interior sample grid.  The provider must emit jets of order >= r
/// at interior points of (0,1)^m.
ChartSet make_charts(const JetProvider& provider, int dim, double A, int r,
                     NormMode mode, int samples_per_axis = 3);

}  // namespace mildlab
