#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qes {

/// Failure categories raised by the solver library.
enum class ErrorKind {
  InvalidParams,
  DegenerateRecursion,
  SubMassEnergy,
  CriticalCoupling,
  NoCritical,
  ScanConfig,
  FormulaDomain,
  DegenerateLeadingCoefficient,
  IntegrationFailure,
  NonConvergence,
  Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the n = 2 quadratic loses its E^2 term.
class CriticalCouplingError : public Error {
 public:
  CriticalCouplingError(double z_alpha, double critical_z_alpha, const std::string& message)
      : Error(ErrorKind::CriticalCoupling, message),
        z_alpha_(z_alpha),
        critical_z_alpha_(critical_z_alpha) {}

  double z_alpha() const noexcept { return z_alpha_; }
  double critical_z_alpha() const noexcept { return critical_z_alpha_; }

 private:
  double z_alpha_;
  double critical_z_alpha_;
};

}  // namespace qes
