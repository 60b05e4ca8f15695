#pragma once

#include <span>
#include <vector>

namespace qes::poly {

// Polynomials are stored as ascending coefficient vectors: c[0] + c[1] x + ...

double evaluate(std::span<const double> coeffs, double x) noexcept;

std::vector<double> derivative(std::span<const double> coeffs);

/// Drops trailing coefficients whose magnitude is <= rel_tol * max |c_k|.
std::vector<double> trimmed(std::span<const double> coeffs, double rel_tol = 0.0);

/// Monic polynomial prod_k (x - roots[k]).
std::vector<double> from_roots(std::span<const double> roots);

/// Number of distinct real roots in the half-open interval (lo, hi] by a
/// Sturm sequence. hi may be +infinity.
int sturm_count(std::span<const double> coeffs, double lo, double hi);

/// Distinct real roots in (lo, hi], ascending. Isolation by Sturm counts,
/// refinement by bisection to |interval| <= x_tol * max(1, |x|).
std::vector<double> real_roots(std::span<const double> coeffs, double lo, double hi,
                               double x_tol = 1e-15);

/// Cauchy bound: every root satisfies |x| < bound.
double root_bound(std::span<const double> coeffs);

}  // namespace qes::poly
