#include "qes/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "qes/errors.hpp"

namespace qes {

CoulombField::CoulombField(double z_alpha, double m) : z_alpha_(z_alpha), m_(m) {
  if (!(z_alpha > 0.0 && z_alpha <= 0.5)) {
    throw Error(ErrorKind::InvalidParams,
                "Z alpha must satisfy 0 < Z alpha <= 1/2, got " + std::to_string(z_alpha));
  }
  if (!(m > 0.0)) throw Error(ErrorKind::InvalidParams, "mass must be positive");
}

double magnetic_length(double field_param) {
  if (!(field_param > 0.0)) throw Error(ErrorKind::InvalidParams, "magnetic length needs a > 0");
  return 1.0 / std::sqrt(2.0 * field_param);
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::ZeroField: return "zero_field";
    case Regime::WeakField: return "weak_field";
    case Regime::NonRelativistic: return "nonrelativistic";
  }
  return "unknown";
}

void check_range_rule(int n_r, int l) {
  const int lowest = l < 0 ? 1 : 0;
  if (n_r < lowest) {
    throw Error(ErrorKind::InvalidParams, "n_r = " + std::to_string(n_r) + " is below " +
                                              std::to_string(lowest) + " for l = " +
                                              std::to_string(l));
  }
}

namespace {

double coulomb_gamma(const CoulombField& field, int l) {
  const double j = std::abs(l + 0.5);
  const double z = field.z_alpha();
  return std::sqrt((j - z) * (j + z));
}

}  // namespace

double coulomb_factor(const CoulombField& field, int n_r, int l) {
  check_range_rule(n_r, l);
  const double k = n_r + coulomb_gamma(field, l);
  return k / std::hypot(k, field.z_alpha());
}

double coulomb_spectrum(const CoulombField& field, int n_r, int l) {
  return field.m() * coulomb_factor(field, n_r, l);
}

double ground_state_energy(const CoulombField& field) {
  const double two_z = 2.0 * field.z_alpha();
  return field.m() * std::sqrt((1.0 - two_z) * (1.0 + two_z));
}

double weak_field_spectrum(const CoulombField& field, int n_r, int l, double field_param) {
  if (l == 0) {
    throw Error(ErrorKind::FormulaDomain, "the weak-field formula holds only for l != 0");
  }
  if (!(field_param >= 0.0)) throw Error(ErrorKind::InvalidParams, "field parameter a must be >= 0");
  const double m = field.m();
  return (m + field_param * (l + 0.5) / m) * coulomb_factor(field, n_r, l);
}

bool weak_field_valid(const CoulombField& field, double field_param) {
  return field_param <= 1e-2 * field.critical_field_param();
}

double nonrel_spectrum(const CoulombField& field, int n_r, int l, double field_param) {
  check_range_rule(n_r, l);
  const double z = field.z_alpha();
  const double m = field.m();
  const double k = n_r + std::abs(l + 0.5);
  return -z * z * m / (2.0 * k * k) + field_param * (l + 0.5) / m;
}

SemiclassicalLevel make_semiclassical_level(const CoulombField& field, int n_r, int l,
                                            double field_param, Regime regime) {
  double energy = 0.0;
  switch (regime) {
    case Regime::ZeroField:
      energy = coulomb_spectrum(field, n_r, l);
      field_param = 0.0;
      break;
    case Regime::WeakField:
      energy = weak_field_spectrum(field, n_r, l, field_param);
      break;
    case Regime::NonRelativistic:
      energy = field.m() + nonrel_spectrum(field, n_r, l, field_param);
      break;
  }
  return {n_r, l, energy, field_param, regime};
}

double action_integrand(const CoulombField& field, int l, double energy, double field_param,
                        double r, bool drop_confining) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidParams, "radius must be positive");
  const double z = field.z_alpha();
  const double m = field.m();
  const double j = l + 0.5;
  double q = energy * energy - m * m - 2.0 * field_param * j + 2.0 * energy * z / r +
             (z * z - j * j) / (r * r);
  if (!drop_confining) q -= field_param * field_param * r * r;
  return q;
}

TurningPoints turning_points(const CoulombField& field, int l, double energy, double field_param) {
  // In u = 1/r: -C u^2 + 2 B u + A = 0.
  const double z = field.z_alpha();
  const double m = field.m();
  const double j = l + 0.5;
  const double A = energy * energy - m * m - 2.0 * field_param * j;
  const double B = energy * z;
  const double C = (j - z) * (j + z);
  const double disc = B * B + A * C;
  if (!(A < 0.0 && B > 0.0 && C > 0.0 && disc > 0.0)) {
    throw Error(ErrorKind::FormulaDomain, "Q has no pair of positive turning points");
  }
  const double root = std::sqrt(disc);
  const double u_big = (B + root) / C;
  const double u_small = -A / (C * u_big);  // product of roots is -A / C
  return {1.0 / u_big, 1.0 / u_small};
}

double quantization_integral(const CoulombField& field, int l, double energy, double field_param) {
  const TurningPoints tp = turning_points(field, l, energy, field_param);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [&](double r) {
    return std::sqrt(std::max(0.0, action_integrand(field, l, energy, field_param, r)));
  };
  return integrator.integrate(integrand, tp.inner, tp.outer);
}

}  // namespace qes
