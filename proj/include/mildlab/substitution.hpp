#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mildlab/geometry.hpp"
#include "mildlab/jets.hpp"
#include "mildlab/mildness.hpp"

namespace mildlab {

/// x -> (x_1^r, ..., x_m^r) on (0,1)^m.
struct PowerMap {
  int dim = 0;
  int r = 1;
};

/// Composition of per-axis wall substitutions
///   x_i -> alpha_i(prev) + (beta_i(prev) - alpha_i(prev)) * x_i^r,
/// where prev are the already-substituted coordinates.  Maps (0,1)^m onto
/// the cell; reduces to PowerMap on the unit cube.
struct PhiR {
  Cell cell;
  int r = 1;
};

/// Same shape with the flat kernel exp(1 - x_i^{-kappa}) in place of x_i^r.
struct PhiInf {
  Cell cell;
  double kappa = 1.0;
};

/// Growth rate of the kernel's global derivative certificate
/// (exp(1 - 1/x^kappa) is (c, e, 1/kappa)-mild): 6*kappa for kappa >= 1,
/// 3 * (2/kappa)^{1/kappa} below.
double kernel_mild_rate(double kappa);

/// Rate constant of the x^{-(kappa+1) nu}-weighted kernel derivative bound:
/// kappa for kappa >= 1, 1 below.
double kernel_inner_rate(double kappa);

/// Coordinates below this threshold underflow exp(1 - 1/x^kappa) to zero in
/// double precision; verification sweeps exclude them and report the count.
double kernel_safe_floor(double kappa);

std::vector<double> phi_value(const PowerMap& map, std::span<const double> x);
std::vector<double> phi_value(const PhiR& map, std::span<const double> x);
std::vector<double> phi_value(const PhiInf& map, std::span<const double> x);

/// Component jets of the substitution at x in (0,1)^m.
std::vector<Jet> phi_jet(const PowerMap& map, std::span<const double> x, int order);
std::vector<Jet> phi_jet(const PhiR& map, std::span<const double> x, int order);
std::vector<Jet> phi_jet(const PhiInf& map, std::span<const double> x, int order);

/// Largest relative gap, over |nu| <= order, between the last component's
/// jet and the wall recursion
///   d^nu phi_m = d^nu (alpha_m o phi') +
///                d^{nu'} ((beta_m - alpha_m) o phi') * r...(r-nu_m+1) x_m^{r-nu_m},
/// where nu' drops the last axis.  Cross-checks the sequential construction.
double wall_recursion_gap(const PhiR& map, std::span<const double> x, int order);

/// Report of one lemma-style sweep.
struct LemmaReport {
  std::string lemma;
  std::string fixture;
  double r_or_kappa = 0.0;
  int order = 0;
  double fitted_A = 0.0;
  double fitted_B = 1.0;
  double worst_ratio = 0.0;   // against the declared constants, when given
  std::vector<double> worst_point;
  MultiIndex worst_nu;
  int excluded_points = 0;
  bool pass = false;
  std::string note;
};

/// Declared (A, B) pair for pass/fail sweeps; when absent the sweep only
/// fits constants and passes by construction.
struct DeclaredConstants {
  double A = 0.0;
  double B = 1.0;
};

/// |d^nu phi_l(x) / phi_l(x)| <= x^{-nu} B (A r)^|nu| |nu|! over the grid.
LemmaReport verify_weak_mildness(const PhiR& map,
                                 const std::vector<std::vector<double>>& grid,
                                 int order,
                                 std::optional<DeclaredConstants> declared = {});

/// For nu with nu_I != 0:
/// |d^nu phi_l(x)| <= x_I^r x^{-nu} B (A r)^|nu| |nu|!.
LemmaReport verify_factor_xr(const PhiR& map, int axis_I,
                             const std::vector<std::vector<double>>& grid,
                             int order,
                             std::optional<DeclaredConstants> declared = {});

/// |d^nu phi_l(x) / phi_l(x)| <= x^{-(kappa+1) nu} B (c A)^|nu| |nu|! with
/// c = kernel_inner_rate(kappa).
LemmaReport verify_weak_mildness_inf(const PhiInf& map,
                                     const std::vector<std::vector<double>>& grid,
                                     int order,
                                     std::optional<DeclaredConstants> declared = {});

/// For nu with nu_I != 0: the same bound with the extra decay factor
/// exp(1 - 1/x_I^kappa) on the right-hand side, without the 1/phi_l.
LemmaReport verify_factor_exp(const PhiInf& map, int axis_I,
                              const std::vector<std::vector<double>>& grid,
                              int order,
                              std::optional<DeclaredConstants> declared = {});

/// Exact n-th kernel derivative vs. the closed bound
/// x^{-(kappa+1) n} exp(1 - 1/x^kappa) (2 c)^n n!.
struct KernelBoundSample {
  double exact = 0.0;
  double bound = 0.0;
  bool pass = false;
};
KernelBoundSample exp_kernel_bound(double kappa, int n, double x);

/// Golden-section maximization of exp(1 - 1/x^kappa) x^{-(kappa+1) n} over
/// (0, 1), against e * ((kappa+1) n / (e kappa))^{(kappa+1) n / kappa}
/// (with 0^0 = 1).  x located to 1e-10.
struct SupBoundReport {
  double lhs_sup = 0.0;
  double argmax = 0.0;
  double rhs = 0.0;
  bool pass = false;
};
SupBoundReport sup_bound_check(double kappa, int n);

/// Composition f o phi^r checked as (A r, 1, 0)-mild up to order r.
struct MainTheoremReport {
  double r_or_kappa = 0.0;
  int order = 0;
  VerificationReport certificate;
  double fitted_A_per_r = 0.0;  // fitted A* / r (crpara) or fitted A* (mildpara)
  int excluded_points = 0;
  std::string note;
};

MainTheoremReport verify_main_crpara(const PreparedFunction& f, const Cell& cell,
                                     int r,
                                     const std::vector<std::vector<double>>& grid,
                                     double declared_A);

/// Constants assembled from the flat-kernel proof chain: the aggregate
/// rate Atilde = A_cell * (m * M_b * B_cell + 1) enters as
///   A = 4 kappa Atilde                      (kappa >= 1)
///   A = ((kappa+1)/kappa)^{(kappa+1)/kappa} Atilde   (kappa <= 1).
struct AssembledConstants {
  double A_tilde = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};
AssembledConstants assemble_mildpara_constants(double kappa, int dim,
                                               double monomial_rate,
                                               double c1_bound,
                                               double A_cell, double B_cell);

/// Composition f o phi^inf checked as (A, 1, 1 + 1/kappa)-mild up to the
/// test order, with A assembled from the fitted cell constants.
MainTheoremReport verify_main_mildpara(const PreparedFunction& f, const Cell& cell,
                                       double kappa,
                                       const std::vector<std::vector<double>>& grid,
                                       int test_order,
                                       const AssembledConstants& constants);

/// Jet provider for f o phi, emitting jets of the given order (shared by
/// charts and certificates).
JetProvider composed_jet_provider(const PreparedFunction& f, const PhiR& map,
                                  int order);
JetProvider composed_jet_provider(const PreparedFunction& f, const PhiInf& map,
                                  int order);

}  // namespace mildlab
