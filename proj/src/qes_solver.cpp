#include "qes/qes_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "qes/errors.hpp"
#include "qes/polynomial.hpp"

namespace qes {

std::string_view to_string(Branch branch) noexcept {
  return branch == Branch::PositiveEnergy ? "positive" : "negative";
}

std::string_view to_string(SolverVariant variant) noexcept {
  switch (variant) {
    case SolverVariant::ClosedFormN1: return "closed_form_n1";
    case SolverVariant::QuadraticN2: return "quadratic_n2";
    case SolverVariant::CubicN3: return "cubic_n3";
    case SolverVariant::GeneralScan: return "general_scan";
  }
  return "unknown";
}

double QesLevel::termination_residual() const {
  // alpha_k r^k measured at the magnetic length 1/sqrt(a), where the
  // polynomial actually lives. Raw coefficients can fall off geometrically
  // and make a nonzero alpha_n look negligible.
  const double length = field_param > 0.0 ? 1.0 / std::sqrt(field_param) : 1.0;
  double scale = 0.0, power = 1.0;
  std::vector<double> scaled;
  for (double a : coefficients.alphas) {
    scaled.push_back(a * power);
    scale = std::max(scale, std::abs(a * power));
    power *= length;
  }
  return std::max(std::abs(scaled.at(n)), std::abs(scaled.at(n + 1))) / std::max(scale, 1e-300);
}

double QesLevel::field_relation_residual() const {
  const double m = params.m();
  const double lhs = (energy - m) * (energy + m);
  const double rhs = 2.0 * field_param * (n + shifted_gamma(params, gamma));
  const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
  return std::abs(lhs - rhs) / scale;
}

bool QesLevel::terminates() const {
  return termination_residual() <= kTerminationTolerance &&
         field_relation_residual() <= kTerminationTolerance;
}

double field_from_energy(int n, const Params& params, Gamma gamma, double energy) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "termination index n must be >= 1");
  const double m = params.m();
  if (std::abs(energy) < m) {
    throw Error(ErrorKind::SubMassEnergy,
                "|E| < m lies outside the polynomial ansatz (E = " + std::to_string(energy) + ")");
  }
  return (energy - m) * (energy + m) / (2.0 * (n + shifted_gamma(params, gamma)));
}

double termination_function(int n, const Params& params, double energy) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "termination index n must be >= 1");
  const Gamma gamma = compute_gamma(params);
  const double m = params.m();
  const double field = (energy - m) * (energy + m) / (2.0 * (n + shifted_gamma(params, gamma)));
  double prev2 = 1.0;
  double prev = alpha1(params, gamma, energy);
  if (n == 1) return prev;
  for (int k = 2; k <= n; ++k) {
    const double next = alpha_n_recursion(k, prev, prev2, energy, field, params, gamma);
    prev2 = prev;
    prev = next;
  }
  return prev;
}

QesLevel make_level(int n, const Params& params, double energy, SolverVariant variant) {
  const Gamma gamma = compute_gamma(params);
  const double field = field_from_energy(n, params, gamma, energy);
  return QesLevel{
      n,
      params,
      gamma,
      energy,
      field,
      build_table(params, energy, field, n + 2),
      energy > 0.0 ? Branch::PositiveEnergy : Branch::NegativeEnergy,
      field == 0.0,
      variant,
  };
}

namespace {

// A few secant steps on K; keeps the input unless |K| strictly improves.
double polish_root(int n, const Params& params, double energy) {
  double best = energy;
  double f_best = std::abs(termination_function(n, params, energy));
  double x0 = energy;
  double x1 = energy * (1.0 + 1e-9);
  double f0 = termination_function(n, params, x0);
  double f1 = termination_function(n, params, x1);
  for (int iter = 0; iter < 8 && f1 != f0; ++iter) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2)) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = termination_function(n, params, x1);
    if (std::abs(f1) < f_best) {
      f_best = std::abs(f1);
      best = x1;
    }
    if (f1 == 0.0) break;
  }
  return best;
}

std::vector<QesLevel> admissible_levels(int n, const Params& params,
                                        const std::vector<double>& energies,
                                        SolverVariant variant) {
  std::vector<QesLevel> levels;
  for (double e : energies) {
    if (!std::isfinite(e) || std::abs(e) < params.m()) continue;
    QesLevel level = make_level(n, params, e, variant);
    if (level.terminates()) levels.push_back(std::move(level));
  }
  std::sort(levels.begin(), levels.end(),
            [](const QesLevel& a, const QesLevel& b) { return a.energy < b.energy; });
  return levels;
}

double quadratic_a(const Params& params) {
  const Gamma gamma = compute_gamma(params);
  const double big = shifted_gamma(params, gamma);
  const double z2 = params.z_alpha() * params.z_alpha();
  return (2 * big + 1) * (2 * big + 3) - (2 * gamma.value + 1) * big / z2;
}

}  // namespace

std::vector<QesLevel> solve_n1(const Params& params) {
  if (params.l() >= 0) return {};
  const Gamma gamma = compute_gamma(params);
  // gamma + l + 1 = Gamma' + 1/2
  const double energy = -params.m() / (2.0 * (shifted_gamma(params, gamma) + 0.5));
  if (energy > -params.m()) return {};
  QesLevel level = make_level(1, params, energy, SolverVariant::ClosedFormN1);
  if (!level.terminates()) {
    throw Error(ErrorKind::Internal, "closed-form n = 1 level does not terminate");
  }
  return {std::move(level)};
}

Quadratic n2_quadratic(const Params& params) {
  const Gamma gamma = compute_gamma(params);
  const double big = shifted_gamma(params, gamma);
  const double m = params.m();
  const double z2 = params.z_alpha() * params.z_alpha();
  const double x = (2 * gamma.value + 1) * big / z2;
  return Quadratic{(2 * big + 1) * (2 * big + 3) - x, 4 * m * (big + 1), m * m * (1 + x)};
}

std::vector<QesLevel> solve_n2(const Params& params) {
  const Gamma gamma = compute_gamma(params);
  const double big = shifted_gamma(params, gamma);
  const Quadratic q = n2_quadratic(params);
  if (std::abs(q.a) <= kCriticalBand * (2 * big + 1) * (2 * big + 3)) {
    const double critical =
        params.l() >= 0 ? critical_zalpha_n2(params.l()) : std::numeric_limits<double>::quiet_NaN();
    throw CriticalCouplingError(
        params.z_alpha(), critical,
        "n = 2 quadratic loses its E^2 term near the critical coupling Z alpha = " +
            std::to_string(critical) + " (1/" + std::to_string(1.0 / critical) + ") for l = " +
            std::to_string(params.l()));
  }
  const double disc = q.b * q.b - 4 * q.a * q.c;
  if (disc < 0) return {};
  const double root = -0.5 * (q.b + std::copysign(std::sqrt(disc), q.b));
  std::vector<double> energies{root / q.a};
  if (root != 0.0 && disc > 0) energies.push_back(q.c / root);
  for (double& e : energies) e = polish_root(2, params, e);
  return admissible_levels(2, params, energies, SolverVariant::QuadraticN2);
}

std::vector<QesLevel> solve_n3(const Params& params) {
  const double m = params.m();
  // K_3(E) is a cubic in E once a(E) is substituted; recover its monomial
  // coefficients from four Chebyshev samples on [-2m, 2m].
  std::array<double, 4> xs{};
  std::array<double, 4> ys{};
  for (int j = 0; j < 4; ++j) {
    xs[j] = 2.0 * m * std::cos((2 * j + 1) * std::numbers::pi / 8.0);
    ys[j] = termination_function(3, params, xs[j]);
  }
  // Newton divided differences, then expand to ascending monomials.
  std::array<double, 4> dd = ys;
  for (int k = 1; k < 4; ++k) {
    for (int j = 3; j >= k; --j) dd[j] = (dd[j] - dd[j - 1]) / (xs[j] - xs[j - k]);
  }
  std::vector<double> coeffs{dd[3]};
  for (int k = 2; k >= 0; --k) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= xs[k] * coeffs[i];
    }
    next[0] += dd[k];
    coeffs = std::move(next);
  }
  const double probe = 0.3 * m;
  const double expected = termination_function(3, params, probe);
  const double scale = std::max({std::abs(ys[0]), std::abs(ys[1]), std::abs(ys[2]), std::abs(ys[3])});
  if (std::abs(poly::evaluate(coeffs, probe) - expected) > 1e-9 * scale) {
    throw Error(ErrorKind::Internal, "n = 3 termination function is not a cubic in E");
  }
  std::vector<double> energies = poly::real_roots(coeffs, -std::numeric_limits<double>::infinity(), -m);
  for (double e : poly::real_roots(coeffs, std::nextafter(m, 0.0), std::numeric_limits<double>::infinity())) {
    energies.push_back(e);
  }
  for (double& e : energies) e = polish_root(3, params, e);
  return admissible_levels(3, params, energies, SolverVariant::CubicN3);
}

std::vector<QesLevel> solve_general(int n, const Params& params, const ScanConfig& scan) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "termination index n must be >= 1");
  if (!(scan.e_max > 1.0) || scan.samples < 2 || !(scan.dedup_tol > 0.0)) {
    throw Error(ErrorKind::ScanConfig,
                "scan needs e_max > 1, at least 2 samples and positive tolerances");
  }
  const double m = params.m();
  compute_gamma(params);  // rejects Z alpha >= |l + 1/2| before scanning
  auto k_of = [&](double e) { return termination_function(n, params, e); };

  std::vector<double> roots;
  for (const double sign : {1.0, -1.0}) {
    const double span = (scan.e_max - 1.0) * m;
    double e_prev = sign * m;
    double k_prev = k_of(e_prev);
    if (k_prev == 0.0) roots.push_back(e_prev);
    for (int i = 1; i < scan.samples; ++i) {
      const double e = sign * (m + span * i / (scan.samples - 1));
      const double k = k_of(e);
      if (k == 0.0) {
        roots.push_back(e);
      } else if (k_prev != 0.0 && (k < 0) != (k_prev < 0)) {
        double lo = std::min(e_prev, e), hi = std::max(e_prev, e);
        double f_lo = k_of(lo), f_hi = k_of(hi);
        std::uintmax_t max_iter = 200;
        // Bracket width only: |K| itself can be tiny far from the root.
        auto tol = [](double a, double b) {
          return std::abs(b - a) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(0.5 * (a + b));
        };
        const auto bracket = boost::math::tools::toms748_solve(k_of, lo, hi, f_lo, f_hi, tol, max_iter);
        roots.push_back(0.5 * (bracket.first + bracket.second));
      }
      e_prev = e;
      k_prev = k;
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > scan.dedup_tol * m) unique.push_back(r);
  }

  std::vector<QesLevel> levels;
  for (double e : unique) {
    QesLevel level = make_level(n, params, e, SolverVariant::GeneralScan);
    if (!level.terminates()) {
      throw Error(ErrorKind::Internal,
                  "scan root at E = " + std::to_string(e) + " fails the termination check");
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

std::vector<QesLevel> solve(int n, const Params& params, const ScanConfig& scan) {
  switch (n) {
    case 1: return solve_n1(params);
    case 2: return solve_n2(params);
    case 3: return solve_n3(params);
    default: return solve_general(n, params, scan);
  }
}

double critical_zalpha_n2(int l) {
  if (l < 0) throw Error(ErrorKind::InvalidParams, "critical coupling is defined for l >= 0");
  auto f = [l](double z) { return quadratic_a(Params(z, l)); };
  constexpr int kGrid = 2000;
  constexpr double kLo = 1e-4;
  constexpr double kHi = 0.5 - 1e-9;
  double z_prev = kLo;
  double f_prev = f(z_prev);
  for (int i = 1; i <= kGrid; ++i) {
    const double z = kLo + (kHi - kLo) * i / kGrid;
    const double fz = f(z);
    if ((fz < 0) != (f_prev < 0)) {
      double lo = z_prev, hi = z;
      while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0) == (f_prev < 0)) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    z_prev = z;
    f_prev = fz;
  }
  throw Error(ErrorKind::NoCritical,
              "no critical coupling for n = 2 in (0, 1/2) at l = " + std::to_string(l));
}

namespace approx {

namespace {
struct Shape {
  double z2, g, big;
};
Shape shape(const Params& p) {
  const Gamma gamma = compute_gamma(p);
  return {p.z_alpha() * p.z_alpha(), gamma.value, shifted_gamma(p, gamma)};
}
double inv_sqrt_or_nan(double x) {
  return x > 0 ? 1.0 / std::sqrt(x) : std::numeric_limits<double>::quiet_NaN();
}
}  // namespace

double n2_low_positive(const Params& p) {
  const auto [z2, g, G] = shape(p);
  return p.m() * (1 + 2 * z2 * (G + 1) * (G + 2) / ((2 * g + 1) * G));
}

double n2_low_negative(const Params& p) {
  const auto [z2, g, G] = shape(p);
  return -p.m() * (1 + 2 * z2 * (G + 1) / (2 * g + 1));
}

std::optional<double> n2_high(const Params& p) {
  const auto [z2, g, G] = shape(p);
  const double x = 1 - z2 * (2 * G + 1) * (2 * G + 3) / ((2 * g + 1) * G);
  if (!(x > 0)) return std::nullopt;
  return p.m() / std::sqrt(x);
}

double n3_low_positive(const Params& p) {
  const auto [z2, g, G] = shape(p);
  const double num = 2 * z2 * (G + 1) * (G + 2) * (G + 3);
  const double den = (2 * g + 1) * G * (G + 2) + 2 * (g + 1) * (G + 1) * (G + 1);
  return p.m() * inv_sqrt_or_nan(1 - num / den);
}

double n3_low_negative(const Params& p) {
  const auto [z2, g, G] = shape(p);
  const double num = 2 * z2 * (G + 1) * (G + 2) * (G + 3);
  const double den = (2 * g + 1) * (G + 2) * (G + 2) + 2 * (g + 1) * (G + 1) * (G + 3);
  return -p.m() * inv_sqrt_or_nan(1 - num / den);
}

double n3_high_bracket(const Params& p) {
  const auto [z2, g, G] = shape(p);
  const double num = 2 * z2 * (G + 0.5) * (G + 1.5) * (G + 2.5) * (G + 3);
  const double den =
      (2 * g + 1) * G * (G + 2.5) * (G + 2) + 2 * (g + 1) * (G + 0.5) * (G + 1) * (G + 3);
  return 1 - num / den;
}

std::optional<double> n3_high(const Params& p) {
  const double x = n3_high_bracket(p);
  if (!(x > 0)) return std::nullopt;
  return p.m() / std::sqrt(x);
}

}  // namespace approx

}  // namespace qes
