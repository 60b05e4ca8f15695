#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace qes {

enum class Coulomb { Attractive, Repulsive };
std::string_view to_string(Coulomb sign) noexcept;

/// Nonrelativistic planar electron in Coulomb + uniform magnetic field with
/// the wavefunction x^{|l|} exp(-x^2/2) Q_s(x), x = r / l_B.
struct BetheProblem {
  int l;
  int s;  // degree of Q
  Coulomb sign;
  double z_alpha = 0.1;  // |Z| alpha; only scales omega_L and E
  double m = 1.0;

  /// gamma = |l| + 1/2 (not the Dirac exponent).
  double gamma() const noexcept;
  /// Throws InvalidParams unless s >= 1, z_alpha > 0 and m > 0.
  void validate() const;
};

struct BetheSolution {
  BetheProblem problem;
  std::vector<double> zeros;          // ascending
  std::vector<double> q_coefficients; // monic Q, ascending powers
  double b;                           // |Z| alpha sqrt(2m / omega_L)
  double omega_l;                     // eB / 2m
  double energy;                      // omega_L (2 + s + l + |l|)
  double bethe_residual;              // max_k |R_k|
  double b_identity_residual;         // |sum x - 2 gamma sum 1/x| / b
};

/// R_k = 2 gamma / x_k - x_k - 2 sum_{j != k} 1 / (x_j - x_k).
std::vector<double> bethe_equations(const std::vector<double>& zeros, double gamma);

/// Builds a solution record from a zero set: b from sum x_k with the branch
/// sign, omega_L = 2 m (Z alpha)^2 / b^2 and the energy. Throws
/// InvalidParams if the zero count differs from s.
BetheSolution make_solution(const BetheProblem& problem, std::vector<double> zeros);

struct BetheOptions {
  int starts = 50;
  std::uint64_t seed = 0;
  int max_iterations = 200;
  double tolerance = 1e-13;  // on max_k |R_k|
  double dedup_tol = 1e-8;
};

struct BetheSearch {
  std::vector<BetheSolution> solutions;  // sorted by b, then zeros
  int converged = 0;      // starts that reached the tolerance
  int failed = 0;         // starts that did not converge or hit a collision
  int wrong_sign = 0;     // converged but sum x_k = 0 or of the other branch
  int duplicates = 0;
};

/// Multi-start damped Newton on the Bethe equations. Starts cycle through
/// sign patterns (k positive zeros, s - k negative) with seeded jitter. Only
/// real zero sets are searched. An empty result is not an error.
BetheSearch solve_bethe(const BetheProblem& problem, const BetheOptions& options = {});

/// Explicit s = 1 and s = 2 solutions. Throws InvalidParams for other s.
BetheSolution closed_form(const BetheProblem& problem);

/// E = omega_L (n + 1 + l + |l|). Throws InvalidParams for n < 0.
double spectrum_shift(int n, int l, double omega_l);

/// psi(x) = x^{|l|} exp(-x^2/2) prod (x - x_k).
class BetheWavefunction {
 public:
  explicit BetheWavefunction(const BetheSolution& solution);
  double operator()(double x) const;
  /// Distinct zeros on x > 0.
  int nodes() const noexcept { return nodes_; }

 private:
  std::vector<double> zeros_;
  int power_;
  int nodes_;
};

BetheWavefunction assemble_wavefunction(const BetheSolution& solution);

/// max over a uniform grid on [lo, hi] of |HQ - sQ| divided by the sum of
/// the term magnitudes, with H = -d^2 - (2 gamma / x - x) d -+ b / x
/// (upper sign attractive).
double factorization_residual(const BetheSolution& solution, double lo = 0.1, double hi = 5.0,
                              int points = 400);

}  // namespace qes
