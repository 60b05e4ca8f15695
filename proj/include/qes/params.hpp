#pragma once

namespace qes {

/// Physical configuration of the planar Dirac problem: coupling Z*alpha,
/// angular integer l of the spinor ansatz (f e^{il phi}, g e^{i(l+1) phi})
/// and electron mass m, in units hbar = c = 1.
///
/// The alternative ansatz with components (e^{i(l-1) phi}, e^{il phi}) is
/// covered by the substitution l -> l - 1.
class Params {
 public:
  /// Throws Error(InvalidParams) unless 0 < z_alpha < 1/2 and m > 0.
  Params(double z_alpha, int l, double m = 1.0);

  double z_alpha() const noexcept { return z_alpha_; }
  int l() const noexcept { return l_; }
  double m() const noexcept { return m_; }

  /// Conserved total angular momentum j = l + 1/2.
  double j() const noexcept { return l_ + 0.5; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  double z_alpha_;
  int l_;
  double m_;
};

/// Indicial exponent gamma = sqrt((l+1/2)^2 - (Z alpha)^2) of F, G at r -> 0.
struct Gamma {
  double value;
};

Gamma compute_gamma(const Params& params);

/// Gamma' = gamma + l + 1/2, evaluated without cancellation for l < 0.
double shifted_gamma(const Params& params, Gamma gamma);

/// gamma - (l + 1/2), evaluated without cancellation for l >= 0.
double gamma_minus_j(const Params& params, Gamma gamma);

}  // namespace qes
