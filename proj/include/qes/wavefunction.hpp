#pragma once

#include <vector>

#include "qes/qes_solver.hpp"

namespace qes {

/// Radial pair (F, G) with F = sqrt(r) f and G = sqrt(r) g.
struct RadialValue {
  double F;
  double G;
};

/// Closed-form profile r^gamma exp(-a r^2/2) P(r) built from a terminated
/// level: P_F has degree n - 1 and P_G degree n.
class SeriesProfile {
 public:
  explicit SeriesProfile(const QesLevel& level);

  RadialValue value(double r) const;
  RadialValue derivative(double r) const;

  const std::vector<double>& f_polynomial() const noexcept { return f_poly_; }
  const std::vector<double>& g_polynomial() const noexcept { return g_poly_; }
  double gamma() const noexcept { return gamma_; }
  double field_param() const noexcept { return field_; }

 private:
  std::vector<double> f_poly_;
  std::vector<double> g_poly_;
  double gamma_;
  double field_;
};

/// Throws InvalidParams for r <= 0.
RadialValue evaluate(const QesLevel& level, double r);

/// Pointwise residuals of the coupled first-order radial equations, each
/// divided by the sum of the magnitudes of its terms.
RadialValue ode_residual(const QesLevel& level, double r);

struct GridConfig {
  int points = 2000;
  double r_min_scale = 1e-4;  // r_min = r_min_scale / sqrt(a)
  double r_max_scale = 12.0;  // r_max = r_max_scale / sqrt(a)
};

struct RadialProfile {
  QesLevel level;
  std::vector<double> r;
  std::vector<double> F;
  std::vector<double> G;
  double norm;  // integral of (|f|^2 + |g|^2) r dr
};

/// Samples F, G on a log-spaced grid and integrates the norm by the
/// trapezoid rule in ln r. Requires a > 0.
RadialProfile make_profile(const QesLevel& level, const GridConfig& grid = {});

/// Norm over (0, r_max]. The log grid starts at the configured r_min with
/// the configured spacing, so grids for different r_max are nested. The
/// piece below r_min is added from the leading r^{2 gamma} behavior.
double profile_norm(const QesLevel& level, double r_max, const GridConfig& grid = {});

struct NodeCount {
  int f;
  int g;
};

/// Distinct positive real zeros of the polynomial parts of F and G.
NodeCount count_nodes(const QesLevel& level);

struct NodeRatios {
  double alpha1_over_alpha2;
  double alpha0_over_alpha2;
};

/// Exact ratios from the table of an n = 3 level. Throws
/// DegenerateLeadingCoefficient if alpha_2 vanishes.
NodeRatios node_ratios_n3(const QesLevel& level);

/// The E ~ m limits of the same ratios: -E Z alpha / a and
/// -(2 gamma + 1) G' / (2 E Z alpha (G' + 1)) times the first.
NodeRatios node_ratio_limits_n3(const QesLevel& level);

}  // namespace qes
