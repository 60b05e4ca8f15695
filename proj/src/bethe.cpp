#include "qes/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "qes/errors.hpp"
#include "qes/polynomial.hpp"

namespace qes {

std::string_view to_string(Coulomb sign) noexcept {
  return sign == Coulomb::Attractive ? "attractive" : "repulsive";
}

double BetheProblem::gamma() const noexcept { return std::abs(l) + 0.5; }

void BetheProblem::validate() const {
  if (s < 1) throw Error(ErrorKind::InvalidParams, "polynomial degree s must be >= 1");
  if (!(z_alpha > 0.0)) throw Error(ErrorKind::InvalidParams, "Z alpha must be positive");
  if (!(m > 0.0)) throw Error(ErrorKind::InvalidParams, "mass must be positive");
}

std::vector<double> bethe_equations(const std::vector<double>& zeros, double gamma) {
  const std::size_t s = zeros.size();
  std::vector<double> r(s);
  for (std::size_t k = 0; k < s; ++k) {
    double v = 2.0 * gamma / zeros[k] - zeros[k];
    for (std::size_t j = 0; j < s; ++j) {
      if (j != k) v -= 2.0 / (zeros[j] - zeros[k]);
    }
    r[k] = v;
  }
  return r;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

double branch_sign(Coulomb sign) { return sign == Coulomb::Attractive ? 1.0 : -1.0; }

// Uniform on [0, 1) from the raw 64-bit stream, identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct NewtonOutcome {
  std::vector<double> zeros;
  bool converged;
};

NewtonOutcome newton(std::vector<double> x, double gamma, const BetheOptions& options) {
  const int s = static_cast<int>(x.size());
  std::vector<double> r = bethe_equations(x, gamma);
  double norm = max_abs(r);
  for (int it = 0; it < options.max_iterations && norm > options.tolerance; ++it) {
    Eigen::MatrixXd jac(s, s);
    Eigen::VectorXd rhs(s);
    for (int k = 0; k < s; ++k) {
      double diag = -2.0 * gamma / (x[k] * x[k]) - 1.0;
      for (int j = 0; j < s; ++j) {
        if (j == k) continue;
        const double d = x[j] - x[k];
        const double w = 2.0 / (d * d);
        jac(k, j) = w;
        diag -= w;
      }
      jac(k, k) = diag;
      rhs(k) = -r[k];
    }
    const Eigen::VectorXd step = jac.partialPivLu().solve(rhs);
    if (!step.allFinite()) return {x, false};

    // Backtrack until the residual drops and no zero crosses the origin.
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h, lambda *= 0.5) {
      std::vector<double> trial(x);
      bool ok = true;
      for (int k = 0; k < s; ++k) {
        trial[k] += lambda * step(k);
        if (trial[k] == 0.0 || (trial[k] > 0) != (x[k] > 0)) ok = false;
      }
      if (!ok) continue;
      std::vector<double> tr = bethe_equations(trial, gamma);
      const double tn = max_abs(tr);
      if (std::isfinite(tn) && tn < norm) {
        x = std::move(trial);
        r = std::move(tr);
        norm = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {x, norm <= options.tolerance};
}

// Seeds for a sign pattern: positive zeros spread outward from sqrt(2 gamma),
// negative zeros mirrored, each pushed by a relative jitter.
std::vector<double> seed(int positive, int negative, double gamma, double jitter,
                         std::mt19937_64& rng) {
  std::vector<double> x;
  const double base = std::sqrt(2.0 * gamma + 1.0);
  for (int i = 0; i < positive; ++i) {
    const double spread = 1.0 + 0.8 * i;
    x.push_back(base * spread * (1.0 + jitter * (2.0 * unit_uniform(rng) - 1.0)));
  }
  for (int i = 0; i < negative; ++i) {
    const double spread = 1.0 + 0.8 * i;
    x.push_back(-base * spread * (1.0 + jitter * (2.0 * unit_uniform(rng) - 1.0)));
  }
  return x;
}

bool same_zeros(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) return false;
  }
  return true;
}

}  // namespace

BetheSolution make_solution(const BetheProblem& problem, std::vector<double> zeros) {
  problem.validate();
  if (static_cast<int>(zeros.size()) != problem.s) {
    throw Error(ErrorKind::InvalidParams, "expected " + std::to_string(problem.s) + " zeros");
  }
  std::sort(zeros.begin(), zeros.end());
  const double gamma = problem.gamma();
  double sum = 0.0, inv = 0.0;
  for (double x : zeros) {
    sum += x;
    inv += 1.0 / x;
  }
  const double sign = branch_sign(problem.sign);
  const double b = sign * sum;
  const double b_alt = sign * 2.0 * gamma * inv;
  const double omega = 2.0 * problem.m * problem.z_alpha * problem.z_alpha / (b * b);
  BetheSolution out{problem,
                    zeros,
                    poly::from_roots(zeros),
                    b,
                    omega,
                    spectrum_shift(problem.s + 1, problem.l, omega),
                    max_abs(bethe_equations(zeros, gamma)),
                    std::abs(b - b_alt) / std::abs(b)};
  return out;
}

BetheSearch solve_bethe(const BetheProblem& problem, const BetheOptions& options) {
  problem.validate();
  if (options.starts < 1) throw Error(ErrorKind::InvalidParams, "need at least one Newton start");
  const double gamma = problem.gamma();
  std::mt19937_64 rng(options.seed);
  BetheSearch out;
  const int patterns = problem.s + 1;
  for (int start = 0; start < options.starts; ++start) {
    const int positive = start % patterns;
    const double jitter = start < patterns ? 0.0 : 0.5;
    const NewtonOutcome res =
        newton(seed(positive, problem.s - positive, gamma, jitter, rng), gamma, options);
    if (!res.converged) {
      ++out.failed;
      continue;
    }
    ++out.converged;
    double sum = 0.0;
    for (double x : res.zeros) sum += x;
    if (!(branch_sign(problem.sign) * sum > 0.0) ||
        std::abs(sum) <= 1e-12 * max_abs(res.zeros)) {
      ++out.wrong_sign;
      continue;
    }
    BetheSolution sol = make_solution(problem, res.zeros);
    const bool seen = std::any_of(out.solutions.begin(), out.solutions.end(), [&](const auto& o) {
      return same_zeros(o.zeros, sol.zeros, options.dedup_tol);
    });
    if (seen) {
      ++out.duplicates;
      continue;
    }
    out.solutions.push_back(std::move(sol));
  }
  std::sort(out.solutions.begin(), out.solutions.end(), [](const auto& a, const auto& b) {
    if (a.b != b.b) return a.b < b.b;
    return a.zeros < b.zeros;
  });
  return out;
}

BetheSolution closed_form(const BetheProblem& problem) {
  problem.validate();
  const double sign = branch_sign(problem.sign);
  const double k = 2.0 * std::abs(problem.l) + 1.0;
  if (problem.s == 1) return make_solution(problem, {sign * std::sqrt(k)});
  if (problem.s == 2) {
    const double outer = (1.0 + std::sqrt(4.0 * std::abs(problem.l) + 3.0)) / std::sqrt(2.0);
    return make_solution(problem, {sign * k / outer, sign * outer});
  }
  throw Error(ErrorKind::InvalidParams, "closed forms exist only for s = 1 and s = 2");
}

double spectrum_shift(int n, int l, double omega_l) {
  if (n < 0) throw Error(ErrorKind::InvalidParams, "n must be >= 0");
  return omega_l * (n + 1 + l + std::abs(l));
}

BetheWavefunction::BetheWavefunction(const BetheSolution& solution)
    : zeros_(solution.zeros), power_(std::abs(solution.problem.l)), nodes_(0) {
  double last = 0.0;
  for (double x : zeros_) {
    if (x > 0.0 && (nodes_ == 0 || x != last)) ++nodes_;
    if (x > 0.0) last = x;
  }
}

double BetheWavefunction::operator()(double x) const {
  double p = 1.0;
  for (double z : zeros_) p *= x - z;
  return std::pow(x, power_) * std::exp(-0.5 * x * x) * p;
}

BetheWavefunction assemble_wavefunction(const BetheSolution& solution) {
  return BetheWavefunction(solution);
}

double factorization_residual(const BetheSolution& solution, double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) {
    throw Error(ErrorKind::InvalidParams, "factorization grid needs 0 < lo < hi and 2+ points");
  }
  const auto& q = solution.q_coefficients;
  const auto dq = poly::derivative(q);
  const auto d2q = poly::derivative(dq);
  const double gamma = solution.problem.gamma();
  const double coulomb = -branch_sign(solution.problem.sign) * solution.b;
  const double eps = solution.problem.s;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double Q = poly::evaluate(q, x);
    const double terms[4] = {-poly::evaluate(d2q, x), -(2.0 * gamma / x - x) * poly::evaluate(dq, x),
                             coulomb / x * Q, -eps * Q};
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
      sum += t;
      scale += std::abs(t);
    }
    if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
  }
  return worst;
}

}  // namespace qes
