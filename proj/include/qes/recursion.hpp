#pragma once

#include <cstddef>
#include <vector>

#include "qes/params.hpp"

namespace qes {

/// Series coefficients of
///   F(r) = r^gamma exp(-a r^2 / 2) sum_k alpha_k r^k,
///   G(r) = r^gamma exp(-a r^2 / 2) sum_k beta_k  r^k
/// for a candidate energy E and field parameter a = eB/2.
struct CoefficientTable {
  std::vector<double> alphas;
  std::vector<double> betas;
  Gamma gamma;
  Params params;
  double energy;
  double field_param;

  std::size_t size() const noexcept { return alphas.size(); }

  /// max_k |alpha_k|, the scale for relative "zero" tests.
  double alpha_scale() const noexcept;
  double beta_scale() const noexcept;
};

/// beta_0 for alpha_0 = 1, from the r^{-1} balance of the G equation. The
/// equivalent form -(gamma - l - 1/2)/(Z alpha) from the F equation is
/// evaluated as well and must agree to 1e-12 relative.
double beta0_from_alpha0(const Params& params, Gamma gamma);

/// alpha_1 for alpha_0 = 1.
double alpha1(const Params& params, Gamma gamma, double energy);

/// beta_n (n >= 1) from alpha_n and alpha_{n-1}.
double beta_n(int n, double alpha_n, double alpha_prev, double energy, const Params& params,
              Gamma gamma);

/// Coefficients (lead, middle, trailing) of the three-term relation
///   lead * alpha_n + middle * alpha_{n-1} + trailing * alpha_{n-2} = 0.
struct RecursionTerms {
  double lead;
  double middle;
  double trailing;
};

RecursionTerms recursion_terms(int n, double energy, double field_param, const Params& params,
                               Gamma gamma);

/// alpha_n (n >= 2) from the three-term relation. Throws
/// Error(DegenerateRecursion) if the leading coefficient vanishes.
double alpha_n_recursion(int n, double alpha_prev, double alpha_prev2, double energy,
                         double field_param, const Params& params, Gamma gamma);

/// Builds alpha_0..alpha_N and beta_0..beta_N. Requires N >= 2 and a >= 0.
CoefficientTable build_table(const Params& params, double energy, double field_param, int N,
                             double alpha0 = 1.0);

}  // namespace qes
