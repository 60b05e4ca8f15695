#pragma once

#include <string_view>

namespace qes {

/// Coulomb coupling for the zero- and weak-field formulas. Unlike Params this
/// accepts the endpoint Z alpha = 1/2, where the ground state reaches E = 0.
class CoulombField {
 public:
  /// Throws InvalidParams unless 0 < z_alpha <= 1/2 and m > 0.
  explicit CoulombField(double z_alpha, double m = 1.0);

  double z_alpha() const noexcept { return z_alpha_; }
  double m() const noexcept { return m_; }

  /// a_B = 1 / (Z alpha m).
  double bohr_radius() const noexcept { return 1.0 / (z_alpha_ * m_); }
  /// a_cr = (Z alpha)^2 m^2 / 2, i.e. eB_cr = (Z alpha m)^2.
  double critical_field_param() const noexcept { return 0.5 * z_alpha_ * z_alpha_ * m_ * m_; }

 private:
  double z_alpha_;
  double m_;
};

/// l_B = 1 / sqrt(eB) = 1 / sqrt(2a).
double magnetic_length(double field_param);

enum class Regime { ZeroField, WeakField, NonRelativistic };
std::string_view to_string(Regime regime) noexcept;

struct SemiclassicalLevel {
  int n_r;
  int l;
  double energy;
  double field_param;
  Regime regime;
};

/// n_r >= 0 for l >= 0 and n_r >= 1 for l < 0; throws InvalidParams otherwise.
void check_range_rule(int n_r, int l);

/// (n_r + gamma) / sqrt((n_r + gamma)^2 + (Z alpha)^2), the factor shared by
/// the zero- and weak-field spectra.
double coulomb_factor(const CoulombField& field, int n_r, int l);

/// E = m [1 + (Z alpha)^2 / (n_r + gamma)^2]^{-1/2}.
double coulomb_spectrum(const CoulombField& field, int n_r, int l);

/// E_0 = m sqrt(1 - (2 Z alpha)^2), the n_r = l = 0 level.
double ground_state_energy(const CoulombField& field);

/// E = (m + a (l + 1/2) / m) times the Coulomb factor. Throws FormulaDomain
/// for l = 0 and InvalidParams for a < 0.
double weak_field_spectrum(const CoulombField& field, int n_r, int l, double field_param);

/// True when a <= 1e-2 a_cr, the working meaning of a << a_cr.
bool weak_field_valid(const CoulombField& field, double field_param);

/// E - m = -(Z alpha)^2 m / (2 (n_r + |l + 1/2|)^2) + a (l + 1/2) / m.
double nonrel_spectrum(const CoulombField& field, int n_r, int l, double field_param);

SemiclassicalLevel make_semiclassical_level(const CoulombField& field, int n_r, int l,
                                            double field_param, Regime regime);

/// Q(r) = E^2 - m^2 - 2a(l + 1/2) + 2 E Z alpha / r + ((Z alpha)^2 - (l + 1/2)^2) / r^2
///        - a^2 r^2.
/// With drop_confining the a^2 r^2 term is omitted.
double action_integrand(const CoulombField& field, int l, double energy, double field_param,
                        double r, bool drop_confining = true);

struct TurningPoints {
  double inner;
  double outer;
};

/// Positive roots of Q without the confining term. Throws FormulaDomain
/// unless there are two (needs E^2 < m^2 + 2a(l + 1/2), E > 0 and
/// (l + 1/2)^2 > (Z alpha)^2).
TurningPoints turning_points(const CoulombField& field, int l, double energy, double field_param);

/// Integral of sqrt(Q) between the turning points (tanh-sinh quadrature),
/// with the confining term dropped. Equals pi n_r at a semiclassical level.
double quantization_integral(const CoulombField& field, int l, double energy, double field_param);

}  // namespace qes
