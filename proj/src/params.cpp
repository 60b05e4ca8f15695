#include "qes/params.hpp"

#include <cmath>
#include <string>

#include "qes/errors.hpp"

namespace qes {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegenerateRecursion: return "DegenerateRecursion";
    case ErrorKind::SubMassEnergy: return "SubMassEnergy";
    case ErrorKind::CriticalCoupling: return "CriticalCoupling";
    case ErrorKind::NoCritical: return "NoCritical";
    case ErrorKind::ScanConfig: return "ScanConfig";
    case ErrorKind::FormulaDomain: return "FormulaDomain";
    case ErrorKind::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

Params::Params(double z_alpha, int l, double m) : z_alpha_(z_alpha), l_(l), m_(m) {
  // Above Z alpha = 1/2 the l = 0, -1 solutions oscillate as r -> 0.
  if (!(z_alpha > 0.0 && z_alpha < 0.5)) {
    throw Error(ErrorKind::InvalidParams,
                "Z alpha must satisfy 0 < Z alpha < 1/2, got " + std::to_string(z_alpha));
  }
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorKind::InvalidParams, "mass must be positive, got " + std::to_string(m));
  }
}

Gamma compute_gamma(const Params& params) {
  const double j = params.j();
  const double z = params.z_alpha();
  if (z >= std::abs(j)) {
    throw Error(ErrorKind::InvalidParams, "Z alpha must stay below |l + 1/2|");
  }
  // (|j| - z)(|j| + z) keeps full precision when z is close to |j|.
  const double g = std::sqrt((std::abs(j) - z) * (std::abs(j) + z));
  if (!(g > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "gamma must be positive");
  }
  return Gamma{g};
}

double shifted_gamma(const Params& params, Gamma gamma) {
  const double j = params.j();
  if (j > 0.0) return gamma.value + j;
  const double z = params.z_alpha();
  return -z * z / (gamma.value - j);
}

double gamma_minus_j(const Params& params, Gamma gamma) {
  const double j = params.j();
  if (j < 0.0) return gamma.value - j;
  const double z = params.z_alpha();
  return -z * z / (gamma.value + j);
}

}  // namespace qes
