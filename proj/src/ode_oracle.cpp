#include "qes/ode_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "qes/errors.hpp"
#include "qes/recursion.hpp"

namespace qes {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

struct RadialSystem {
  double j, z, m, energy, field;

  void operator()(const State& y, State& dy, double r) const {
    const double k = j / r + field * r;
    dy[0] = k * y[0] - (energy + m + z / r) * y[1];
    dy[1] = (energy - m + z / r) * y[0] - k * y[1];
  }
};

RadialSystem make_system(const Params& p, double energy, double field) {
  return {p.j(), p.z_alpha(), p.m(), energy, field};
}

// Integrates y along the given monotone radii, recording every point.
Trajectory run(const RadialSystem& system, State y, const std::vector<double>& radii,
               const ShootingConfig& config) {
  Trajectory out;
  out.r.reserve(radii.size());
  out.F.reserve(radii.size());
  out.G.reserve(radii.size());
  auto observer = [&](const State& s, double r) {
    out.r.push_back(r);
    out.F.push_back(s[0]);
    out.G.push_back(s[1]);
  };
  auto stepper = odeint::make_controlled(config.abs_tol, config.rel_tol,
                                         odeint::runge_kutta_fehlberg78<State>());
  const double dt0 = (radii[1] - radii[0]) * 1e-3;
  try {
    odeint::integrate_times(stepper, system, y, radii.begin(), radii.end(), dt0, observer,
                            odeint::max_step_checker(200000));
  } catch (const std::exception& ex) {
    const double where = out.r.empty() ? radii.front() : out.r.back();
    throw Error(ErrorKind::IntegrationFailure,
                std::string("radial integration broke down near r = ") + std::to_string(where) +
                    " (E = " + std::to_string(system.energy) + ", a = " +
                    std::to_string(system.field) + "): " + ex.what() +
                    "; Z alpha close to 1/2 or r_min too small");
  }
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    if (!std::isfinite(out.F[i]) || !std::isfinite(out.G[i])) {
      throw Error(ErrorKind::IntegrationFailure,
                  "non-finite radial solution at r = " + std::to_string(out.r[i]));
    }
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> r(points);
  const double h = std::log(hi / lo) / (points - 1);
  for (int k = 0; k < points; ++k) r[k] = lo * std::exp(k * h);
  r.back() = hi;
  return r;
}

std::vector<double> linear_grid(double from, double to, int points) {
  std::vector<double> r(points);
  for (int k = 0; k < points; ++k) r[k] = from + (to - from) * k / (points - 1);
  r.back() = to;
  return r;
}

State series_start(const Params& params, double energy, double r) {
  const Gamma gamma = compute_gamma(params);
  const double a1 = alpha1(params, gamma, energy);
  const double b0 = beta0_from_alpha0(params, gamma);
  const double b1 = beta_n(1, a1, 1.0, energy, params, gamma);
  const double envelope = std::pow(r, gamma.value);
  return {envelope * (1.0 + a1 * r), envelope * (b0 + b1 * r)};
}

int sign_changes(const std::vector<double>& v) {
  int count = 0;
  int last = 0;
  for (double x : v) {
    const int s = (x > 0) - (x < 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

ShootingConfig ShootingConfig::for_field(double field_param) {
  if (!(field_param > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "shooting defaults need a > 0");
  }
  const double unit = 1.0 / std::sqrt(field_param);
  return ShootingConfig{1e-4 * unit, 12.0 * unit, 1.5 * unit, 6.0 * unit, 11.0 * unit};
}

void ShootingConfig::validate() const {
  if (!(r_min > 0.0 && r_min < r_match && r_match < r_max)) {
    throw Error(ErrorKind::InvalidParams, "shooting radii must satisfy 0 < r_min < r_match < r_max");
  }
  if (!(tail_start >= r_match && tail_start < tail_end && tail_end <= r_max)) {
    throw Error(ErrorKind::InvalidParams, "tail window must lie in [r_match, r_max]");
  }
  if (!(rel_tol > 0.0 && abs_tol > 0.0) || samples < 8) {
    throw Error(ErrorKind::InvalidParams, "tolerances must be positive and samples >= 8");
  }
}

Trajectory integrate_radial(const Params& params, double energy, double field_param,
                            const ShootingConfig& config, double r_end) {
  config.validate();
  if (r_end <= 0.0) r_end = config.r_match;
  if (!(r_end > config.r_min)) throw Error(ErrorKind::InvalidParams, "r_end must exceed r_min");
  State y = series_start(params, energy, config.r_min);
  const double scale = std::hypot(y[0], y[1]);
  y = {y[0] / scale, y[1] / scale};
  Trajectory t = run(make_system(params, energy, field_param), y,
                     log_grid(config.r_min, r_end, config.samples), config);
  for (double& f : t.F) f *= scale;
  for (double& g : t.G) g *= scale;
  return t;
}

VerificationReport verify_candidate(const Params& params, double energy, double field_param,
                                    const ShootingConfig& config, int n) {
  config.validate();
  const RadialSystem system = make_system(params, energy, field_param);

  const std::vector<double> radii = log_grid(config.r_min, config.r_match, config.samples);
  State y0 = series_start(params, energy, config.r_min);
  const double s0 = std::hypot(y0[0], y0[1]);
  const Trajectory outward = run(system, {y0[0] / s0, y0[1] / s0}, radii, config);

  // Inward from r_max, seeded on the decaying eigenvector of the local system.
  const double r = config.r_max;
  const double k = params.j() / r + field_param * r;
  const double p = energy + params.m() + params.z_alpha() / r;
  const double q = energy - params.m() + params.z_alpha() / r;
  const double lambda = -std::sqrt(std::max(k * k - p * q, 0.0));
  State seed = (std::abs(p) + std::abs(k - lambda) >= std::abs(k + lambda) + std::abs(q))
                   ? State{p, k - lambda}
                   : State{k + lambda, q};
  const double s1 = std::hypot(seed[0], seed[1]);
  seed = {seed[0] / s1, seed[1] / s1};
  const Trajectory inward =
      run(system, seed, linear_grid(config.r_max, config.r_match, config.samples), config);

  const double fo = outward.F.back(), go = outward.G.back();
  const double fi = inward.F.back(), gi = inward.G.back();
  const double residual = std::abs(fo * gi - go * fi) / (std::hypot(fo, go) * std::hypot(fi, gi));

  // Tail of the matched solution, i.e. the inward leg, far enough out that
  // the polynomial prefactor is a short series in 1/r:
  // ln|y| = c0 + c1 ln r + c2 / r + c3 / r^2 - c r^2. The outward leg cannot
  // be used there; roundoff feeds the growing solution long before.
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < inward.r.size(); ++i) {
    if (inward.r[i] >= config.tail_start && inward.r[i] <= config.tail_end) rows.push_back(i);
  }
  Eigen::MatrixXd design(rows.size(), 5);
  Eigen::VectorXd target(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double ri = inward.r[rows[i]];
    design(i, 0) = 1.0;
    design(i, 1) = std::log(ri);
    design(i, 2) = 1.0 / ri;
    design(i, 3) = 1.0 / (ri * ri);
    design(i, 4) = -ri * ri;
    target(i) = std::log(std::hypot(inward.F[rows[i]], inward.G[rows[i]]));
  }
  const Eigen::VectorXd fit = design.colPivHouseholderQr().solve(target);
  const double tail_exponent = fit(4);
  const double tail_error = std::abs(tail_exponent - 0.5 * field_param) / (0.5 * field_param);

  const int nodes = sign_changes(outward.F) + sign_changes(inward.F);

  return VerificationReport{
      n,
      params,
      energy,
      field_param,
      residual,
      tail_exponent,
      tail_error,
      nodes,
      residual <= kMatchingTolerance && tail_error <= kTailTolerance,
  };
}

VerificationReport verify_candidate(const Params& params, double energy, double field_param) {
  return verify_candidate(params, energy, field_param, ShootingConfig::for_field(field_param));
}

VerificationReport verify(const QesLevel& level, const ShootingConfig& config) {
  return verify_candidate(level.params, level.energy, level.field_param, config, level.n);
}

VerificationReport verify(const QesLevel& level) {
  return verify(level, ShootingConfig::for_field(level.field_param));
}

std::vector<ScanCandidate> grid_scan_oracle(const Params& params, int n,
                                            std::span<const double> energies, double tolerance) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "termination index n must be >= 1");
  const Gamma gamma = compute_gamma(params);
  const double m = params.m();
  // Written out directly from the field relation; no shared helpers with the solver.
  auto field_at = [&](double e) {
    return (e * e - m * m) / (2.0 * (n + gamma.value + params.l() + 0.5));
  };
  struct Sample {
    double e, k, scale;
  };
  auto sample = [&](double e) {
    const double a = field_at(e);
    std::vector<double> alphas{1.0, alpha1(params, gamma, e)};
    for (int i = 2; i <= n; ++i) {
      alphas.push_back(alpha_n_recursion(i, alphas[i - 1], alphas[i - 2], e, a, params, gamma));
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::abs(alphas[i]));
    return Sample{e, alphas[n], s};
  };

  std::vector<Sample> samples;
  for (double e : energies) {
    if (std::abs(e) >= m) samples.push_back(sample(e));
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.e < b.e; });

  std::vector<ScanCandidate> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (std::abs(s.k) <= tolerance * s.scale) {
      out.push_back({s.e, s.e, s.e, field_at(s.e)});
      continue;
    }
    if (i + 1 == samples.size()) break;
    const Sample& t = samples[i + 1];
    // Do not bracket across the forbidden band |E| < m.
    if ((s.e < 0) != (t.e < 0)) continue;
    if (std::abs(t.k) <= tolerance * t.scale) continue;
    if ((s.k < 0) != (t.k < 0)) {
      const double mid = 0.5 * (s.e + t.e);
      out.push_back({s.e, t.e, mid, field_at(mid)});
    }
  }
  return out;
}

}  // namespace qes
