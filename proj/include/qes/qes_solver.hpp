#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qes/params.hpp"
#include "qes/recursion.hpp"

namespace qes {

enum class Branch { PositiveEnergy, NegativeEnergy };

enum class SolverVariant { ClosedFormN1, QuadraticN2, CubicN3, GeneralScan };

std::string_view to_string(Branch branch) noexcept;
std::string_view to_string(SolverVariant variant) noexcept;

/// A solved (n, E, a) triple: alpha_n = alpha_{n+1} = 0 and
/// E^2 - m^2 = 2a (n + gamma + l + 1/2). F has polynomial degree n - 1 and
/// G degree n.
struct QesLevel {
  int n;
  Params params;
  Gamma gamma;
  double energy;
  double field_param;
  CoefficientTable coefficients;  // alpha_0..alpha_{n+2}
  Branch branch;
  bool zero_field;  // |E| = m exactly, a = 0
  SolverVariant variant;

  /// max(|alpha_n|, |alpha_{n+1}|) / max_k |alpha_k|, each alpha_k taken
  /// times a^{-k/2} so the comparison happens at the magnetic length.
  double termination_residual() const;
  /// Relative residual of E^2 - m^2 = 2a(n + gamma + l + 1/2).
  double field_relation_residual() const;
  /// Both termination conditions hold at the 1e-10 relative threshold.
  bool terminates() const;
};

/// Energy range and resolution for solve_general.
struct ScanConfig {
  double e_max = 20.0;       // in units of m, scanned on both branches
  int samples = 4000;        // per branch
  double dedup_tol = 1e-8;   // in units of m
};

/// Relative zero threshold used for coefficient termination checks.
inline constexpr double kTerminationTolerance = 1e-10;

/// Relative size of |A| / ((2G+1)(2G+3)) below which the n = 2 quadratic is
/// treated as sitting at the critical coupling.
inline constexpr double kCriticalBand = 1e-3;

/// a = (E^2 - m^2) / (2 (n + gamma + l + 1/2)). Throws SubMassEnergy if |E| < m.
double field_from_energy(int n, const Params& params, Gamma gamma, double energy);

/// Builds and checks a level at energy E for termination index n.
QesLevel make_level(int n, const Params& params, double energy, SolverVariant variant);

/// K(E) = alpha_n(E, a(E)) with alpha_0 = 1 and a(E) from the field relation.
/// Defined for every real E (a may be negative off the physical region).
double termination_function(int n, const Params& params, double energy);

std::vector<QesLevel> solve_n1(const Params& params);

/// Coefficients of A E^2 + B E + C = 0 for n = 2.
struct Quadratic {
  double a, b, c;
};
Quadratic n2_quadratic(const Params& params);

std::vector<QesLevel> solve_n2(const Params& params);
std::vector<QesLevel> solve_n3(const Params& params);
std::vector<QesLevel> solve_general(int n, const Params& params, const ScanConfig& scan = {});

/// Dispatches to the closed forms for n <= 3 and to the scan otherwise.
std::vector<QesLevel> solve(int n, const Params& params, const ScanConfig& scan = {});

/// Coupling where the E^2 coefficient of the n = 2 quadratic vanishes.
double critical_zalpha_n2(int l);

/// Small- and large-coupling approximations of the QES energies (units of m
/// given by params.m()). The large-|E| forms return nullopt where the square
/// root argument is not positive.
namespace approx {
double n2_low_positive(const Params& params);
double n2_low_negative(const Params& params);
std::optional<double> n2_high(const Params& params);
double n3_low_positive(const Params& params);
double n3_low_negative(const Params& params);
std::optional<double> n3_high(const Params& params);
/// Argument 1 - (...) under the inverse square root of the n = 3 high-energy form.
double n3_high_bracket(const Params& params);
}  // namespace approx

}  // namespace qes
