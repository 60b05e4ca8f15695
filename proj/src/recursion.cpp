#include "qes/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qes/errors.hpp"

namespace qes {

namespace {

double max_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

double CoefficientTable::alpha_scale() const noexcept { return max_abs(alphas); }
double CoefficientTable::beta_scale() const noexcept { return max_abs(betas); }

double beta0_from_alpha0(const Params& params, Gamma gamma) {
  const double z = params.z_alpha();
  const double big_gamma = shifted_gamma(params, gamma);
  if (big_gamma == 0.0) {
    throw Error(ErrorKind::Internal, "gamma + l + 1/2 vanished for nonzero Z alpha");
  }
  const double from_g_equation = z / big_gamma;
  const double from_f_equation = -gamma_minus_j(params, gamma) / z;
  const double scale = std::max(std::abs(from_g_equation), std::abs(from_f_equation));
  if (std::abs(from_g_equation - from_f_equation) > 1e-12 * scale) {
    throw Error(ErrorKind::Internal, "the two forms of beta_0 disagree");
  }
  return from_g_equation;
}

double alpha1(const Params& params, Gamma gamma, double energy) {
  const double z = params.z_alpha();
  const double m = params.m();
  const double big_gamma = shifted_gamma(params, gamma);
  const double bracket = big_gamma * (energy - m) + (big_gamma + 1.0) * (energy + m);
  return -z * bracket / ((2.0 * gamma.value + 1.0) * big_gamma);
}

double beta_n(int n, double alpha_n, double alpha_prev, double energy, const Params& params,
              Gamma gamma) {
  if (n < 1) throw Error(ErrorKind::Internal, "beta_n needs n >= 1");
  // gamma + l + 1/2 >= -1/2, so the denominator is positive for n >= 1.
  const double denom = n + shifted_gamma(params, gamma);
  if (!(denom > 0.0)) throw Error(ErrorKind::Internal, "non-positive beta_n denominator");
  return (params.z_alpha() * alpha_n + (energy - params.m()) * alpha_prev) / denom;
}

RecursionTerms recursion_terms(int n, double energy, double field_param, const Params& params,
                               Gamma gamma) {
  const double z = params.z_alpha();
  const double m = params.m();
  const double big_gamma = shifted_gamma(params, gamma);
  const double lower = n - 1 + big_gamma;  // n + gamma + l - 1/2
  const double upper = n + big_gamma;      // n + gamma + l + 1/2
  const double mass_shell = (energy - m) * (energy + m);
  return RecursionTerms{
      lower * (static_cast<double>(n) * n + 2.0 * n * gamma.value),
      z * (lower * (energy - m) + upper * (energy + m)),
      upper * (mass_shell - 2.0 * field_param * lower),
  };
}

double alpha_n_recursion(int n, double alpha_prev, double alpha_prev2, double energy,
                         double field_param, const Params& params, Gamma gamma) {
  if (n < 2) throw Error(ErrorKind::Internal, "alpha_n recursion needs n >= 2");
  const RecursionTerms t = recursion_terms(n, energy, field_param, params, gamma);
  if (t.lead == 0.0 || !std::isfinite(t.lead)) {
    throw Error(ErrorKind::DegenerateRecursion,
                "leading coefficient of the alpha recursion vanishes at n = " + std::to_string(n));
  }
  return -(t.middle * alpha_prev + t.trailing * alpha_prev2) / t.lead;
}

CoefficientTable build_table(const Params& params, double energy, double field_param, int N,
                             double alpha0) {
  if (N < 2) throw Error(ErrorKind::Internal, "coefficient table needs N >= 2");
  if (!(field_param >= 0.0)) {
    throw Error(ErrorKind::InvalidParams, "field parameter a must be non-negative");
  }
  const Gamma gamma = compute_gamma(params);
  CoefficientTable table{{}, {}, gamma, params, energy, field_param};
  table.alphas.reserve(N + 1);
  table.betas.reserve(N + 1);

  table.alphas.push_back(alpha0);
  table.alphas.push_back(alpha1(params, gamma, energy) * alpha0);
  for (int n = 2; n <= N; ++n) {
    table.alphas.push_back(alpha_n_recursion(n, table.alphas[n - 1], table.alphas[n - 2], energy,
                                             field_param, params, gamma));
  }
  table.betas.push_back(beta0_from_alpha0(params, gamma) * alpha0);
  for (int n = 1; n <= N; ++n) {
    table.betas.push_back(
        beta_n(n, table.alphas[n], table.alphas[n - 1], energy, params, gamma));
  }
  return table;
}

}  // namespace qes
