#include "qes/wavefunction.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qes/errors.hpp"
#include "qes/polynomial.hpp"

namespace qes {

SeriesProfile::SeriesProfile(const QesLevel& level)
    : f_poly_(level.coefficients.alphas.begin(), level.coefficients.alphas.begin() + level.n),
      g_poly_(level.coefficients.betas.begin(), level.coefficients.betas.begin() + level.n + 1),
      gamma_(level.gamma.value),
      field_(level.field_param) {}

RadialValue SeriesProfile::value(double r) const {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidParams, "radius must be positive");
  const double envelope = std::pow(r, gamma_) * std::exp(-0.5 * field_ * r * r);
  return {envelope * poly::evaluate(f_poly_, r), envelope * poly::evaluate(g_poly_, r)};
}

RadialValue SeriesProfile::derivative(double r) const {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidParams, "radius must be positive");
  const double envelope = std::pow(r, gamma_) * std::exp(-0.5 * field_ * r * r);
  const double log_slope = gamma_ / r - field_ * r;
  const auto df = poly::derivative(f_poly_);
  const auto dg = poly::derivative(g_poly_);
  return {envelope * (log_slope * poly::evaluate(f_poly_, r) + poly::evaluate(df, r)),
          envelope * (log_slope * poly::evaluate(g_poly_, r) + poly::evaluate(dg, r))};
}

RadialValue evaluate(const QesLevel& level, double r) { return SeriesProfile(level).value(r); }

RadialValue ode_residual(const QesLevel& level, double r) {
  const SeriesProfile profile(level);
  const auto [F, G] = profile.value(r);
  const auto [dF, dG] = profile.derivative(r);
  const double z = level.params.z_alpha();
  const double m = level.params.m();
  const double e = level.energy;
  const double centrifugal = level.params.j() / r + level.field_param * r;

  const double f_terms[3] = {dF, -centrifugal * F, (e + m + z / r) * G};
  const double g_terms[3] = {dG, centrifugal * G, -(e - m + z / r) * F};
  auto relative = [](const double (&t)[3]) {
    const double scale = std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]);
    return scale > 0.0 ? std::abs(t[0] + t[1] + t[2]) / scale : 0.0;
  };
  return {relative(f_terms), relative(g_terms)};
}

namespace {

void require_field(const QesLevel& level) {
  if (!(level.field_param > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "radial profile needs a > 0");
  }
}

}  // namespace

double profile_norm(const QesLevel& level, double r_max, const GridConfig& grid) {
  require_field(level);
  if (grid.points < 2) throw Error(ErrorKind::InvalidParams, "grid needs at least 2 points");
  const SeriesProfile profile(level);
  const double unit = 1.0 / std::sqrt(level.field_param);
  const double r_min = grid.r_min_scale * unit;
  const double h = std::log(grid.r_max_scale / grid.r_min_scale) / (grid.points - 1);

  // Trapezoid in t = ln r: integrand (F^2 + G^2) r.
  auto weight = [&](double r) {
    const auto [F, G] = profile.value(r);
    return (F * F + G * G) * r;
  };
  const int last = static_cast<int>(std::floor(std::log(r_max / r_min) / h + 1e-12));
  double sum = 0.5 * weight(r_min);
  for (int k = 1; k < last; ++k) sum += weight(r_min * std::exp(k * h));
  if (last > 0) sum += 0.5 * weight(r_min * std::exp(last * h));
  sum *= h;

  const double a0 = profile.f_polynomial().front();
  const double b0 = profile.g_polynomial().front();
  const double two_g1 = 2 * profile.gamma() + 1;
  return sum + (a0 * a0 + b0 * b0) * std::pow(r_min, two_g1) / two_g1;
}

RadialProfile make_profile(const QesLevel& level, const GridConfig& grid) {
  require_field(level);
  const SeriesProfile profile(level);
  const double unit = 1.0 / std::sqrt(level.field_param);
  const double r_min = grid.r_min_scale * unit;
  const double r_max = grid.r_max_scale * unit;
  RadialProfile out{level, {}, {}, {}, 0.0};
  out.r.reserve(grid.points);
  out.F.reserve(grid.points);
  out.G.reserve(grid.points);
  const double h = std::log(r_max / r_min) / (grid.points - 1);
  for (int k = 0; k < grid.points; ++k) {
    const double r = r_min * std::exp(k * h);
    const auto [F, G] = profile.value(r);
    out.r.push_back(r);
    out.F.push_back(F);
    out.G.push_back(G);
  }
  out.norm = profile_norm(level, r_max, grid);
  return out;
}

NodeCount count_nodes(const QesLevel& level) {
  const SeriesProfile profile(level);
  const double inf = std::numeric_limits<double>::infinity();
  return {poly::sturm_count(profile.f_polynomial(), 0.0, inf),
          poly::sturm_count(profile.g_polynomial(), 0.0, inf)};
}

NodeRatios node_ratios_n3(const QesLevel& level) {
  if (level.n != 3) throw Error(ErrorKind::InvalidParams, "node ratios need an n = 3 level");
  const auto& a = level.coefficients.alphas;
  if (std::abs(a[2]) <= 1e-14 * level.coefficients.alpha_scale()) {
    throw Error(ErrorKind::DegenerateLeadingCoefficient, "alpha_2 vanishes for this level");
  }
  return {a[1] / a[2], a[0] / a[2]};
}

NodeRatios node_ratio_limits_n3(const QesLevel& level) {
  if (level.n != 3) throw Error(ErrorKind::InvalidParams, "node ratios need an n = 3 level");
  const double z = level.params.z_alpha();
  const double e = level.energy;
  const double big = shifted_gamma(level.params, level.gamma);
  const double r01 = -e * z / level.field_param;
  const double r02 = -(2 * level.gamma.value + 1) * big / (2 * e * z * (big + 1)) * r01;
  return {r01, r02};
}

}  // namespace qes
