#pragma once

#include <span>
#include <vector>

#include "qes/params.hpp"
#include "qes/qes_solver.hpp"

namespace qes {

/// Radii and tolerances for the shooting check. Radii are absolute; use
/// for_field() to get the defaults scaled by 1/sqrt(a): r_min 1e-4, r_match
/// 1.5, tail window [6, 11], r_max 12.
struct ShootingConfig {
  double r_min;
  double r_max;
  double r_match;
  double tail_start;  // tail-fit window on the inward leg
  double tail_end;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int samples = 1500;  // observation points per integration leg

  static ShootingConfig for_field(double field_param);
  /// Throws InvalidParams unless r_min < r_match < r_max and the tail
  /// window is ordered and starts at or beyond r_match.
  void validate() const;
};

struct Trajectory {
  std::vector<double> r;
  std::vector<double> F;
  std::vector<double> G;
};

/// Integrates the coupled first-order radial system outward from r_min to
/// r_end (default r_match), starting from the two-term series
/// F ~ r^gamma (alpha_0 + alpha_1 r), G ~ r^gamma (beta_0 + beta_1 r) with
/// alpha_0 = 1. Throws IntegrationFailure on step-size breakdown.
Trajectory integrate_radial(const Params& params, double energy, double field_param,
                            const ShootingConfig& config, double r_end = 0.0);

struct VerificationReport {
  int n;  // 0 for a raw (E, a) candidate
  Params params;
  double energy;
  double field_param;
  /// |F_out G_in - G_out F_in| / (|y_out| |y_in|) at r_match.
  double matching_residual;
  /// Fitted c in |y| ~ r^p exp(c2/r + c3/r^2 - c r^2) over the tail window;
  /// a/2 for a bound state.
  double tail_exponent;
  double tail_relative_error;
  int nodes_f;  // sign changes of the integrated F
  bool passed;
};

inline constexpr double kMatchingTolerance = 1e-6;
inline constexpr double kTailTolerance = 0.05;

/// Outward and inward integrations matched at r_match; passes iff the
/// matching residual is <= 1e-6 and the tail exponent is within 5% of a/2.
VerificationReport verify(const QesLevel& level);
VerificationReport verify(const QesLevel& level, const ShootingConfig& config);

/// Same check for an arbitrary (E, a) pair (a > 0).
VerificationReport verify_candidate(const Params& params, double energy, double field_param);
VerificationReport verify_candidate(const Params& params, double energy, double field_param,
                                    const ShootingConfig& config, int n = 0);

struct ScanCandidate {
  double e_lo;
  double e_hi;
  double energy;       // bracket midpoint
  double field_param;  // a at the midpoint
};

/// Brute-force sign-change brackets of alpha_n(E, a(E)) over a grid of
/// energies; grid points with |E| < m are skipped. A grid point with
/// |K| <= tolerance * max_k |alpha_k| is reported as a zero-width bracket.
/// Uses only the raw recursions, no root polishing.
std::vector<ScanCandidate> grid_scan_oracle(const Params& params, int n,
                                            std::span<const double> energies,
                                            double tolerance = 0.0);

}  // namespace qes
