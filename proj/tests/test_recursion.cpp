#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "qes/errors.hpp"
#include "qes/recursion.hpp"

using namespace qes;

namespace {

// Independent check: substitute the two series into the first-order system
// and collect powers of r. For k >= 0 (with alpha_{-1} = alpha_{-2} =
// beta_{-1} = 0):
//   F eq.: (gamma - j + k) alpha_k - 2a alpha_{k-2} + (E + m) beta_{k-1} + Z alpha beta_k = 0
//   G eq.: (gamma + j + k) beta_k - (E - m) alpha_{k-1} - Z alpha alpha_k = 0
struct PowerResiduals {
  double f;
  double g;
};

PowerResiduals power_residuals(const CoefficientTable& t, int k) {
  const double z = t.params.z_alpha();
  const double m = t.params.m();
  const double e = t.energy;
  const double a = t.field_param;
  const double g = t.gamma.value;
  const double j = t.params.j();
  auto alpha = [&](int i) { return i < 0 ? 0.0 : t.alphas[i]; };
  auto beta = [&](int i) { return i < 0 ? 0.0 : t.betas[i]; };
  const double f_terms[4] = {(g - j + k) * alpha(k), -2 * a * alpha(k - 2),
                             (e + m) * beta(k - 1), z * beta(k)};
  const double g_terms[3] = {(g + j + k) * beta(k), -(e - m) * alpha(k - 1), -z * alpha(k)};
  double fs = 0, fa = 0, gs = 0, ga = 0;
  for (double x : f_terms) fs += x, fa += std::abs(x);
  for (double x : g_terms) gs += x, ga += std::abs(x);
  return {fa > 0 ? std::abs(fs) / fa : 0.0, ga > 0 ? std::abs(gs) / ga : 0.0};
}

}  // namespace

TEST_CASE("gamma examples") {
  CHECK(compute_gamma(Params(0.3, -1)).value == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(compute_gamma(Params(0.4, 0)).value == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(compute_gamma(Params(1e-9, 2)).value == doctest::Approx(2.5).epsilon(1e-15));
  for (double z : {0.01, 0.2, 0.49}) {
    for (int l = -4; l <= 4; ++l) {
      const Params p(z, l);
      const double g = compute_gamma(p).value;
      CHECK(g > 0.0);
      CHECK(g <= std::abs(l + 0.5));
      CHECK(g * g + z * z == doctest::Approx(p.j() * p.j()).epsilon(1e-14));
    }
  }
}

TEST_CASE("params reject coupling outside (0, 1/2) and bad mass") {
  CHECK_THROWS_AS(Params(0.5, 0), Error);
  CHECK_THROWS_AS(Params(0.0, 0), Error);
  CHECK_THROWS_AS(Params(-0.1, 0), Error);
  CHECK_THROWS_AS(Params(0.2, 0, 0.0), Error);
  try {
    Params(0.7, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParams);
  }
}

TEST_CASE("beta_0 examples and dual form") {
  const Params p1(0.3, -1);
  CHECK(beta0_from_alpha0(p1, compute_gamma(p1)) == doctest::Approx(-3.0).epsilon(1e-14));
  const Params p2(0.3, 0);
  CHECK(beta0_from_alpha0(p2, compute_gamma(p2)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> zd(1e-3, 0.499);
  std::uniform_int_distribution<int> ld(-6, 6);
  for (int i = 0; i < 100; ++i) {
    const Params p(zd(rng), ld(rng));
    const Gamma g = compute_gamma(p);
    const double other = -(g.value - p.j()) / p.z_alpha();
    CHECK(beta0_from_alpha0(p, g) == doctest::Approx(other).epsilon(1e-11));
  }
}

TEST_CASE("alpha_1 and beta_1 examples") {
  const Params p(0.3, -1);
  const Gamma g = compute_gamma(p);
  CHECK(std::abs(alpha1(p, g, -1.25)) < 1e-15);
  CHECK(beta_n(1, 0.0, 1.0, -1.25, p, g) == doctest::Approx(-2.5).epsilon(1e-14));
  CHECK(beta_n(1, 0.0, 0.0, -1.25, p, g) == 0.0);
  CHECK(std::abs(alpha1(Params(1e-12, 1), compute_gamma(Params(1e-12, 1)), 2.0)) < 1e-10);
}

TEST_CASE("beta_1 closed form uses gamma - l, not gamma + l") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> zd(0.01, 0.49);
  std::uniform_real_distribution<double> ed(-4.0, 4.0);
  std::uniform_int_distribution<int> ld(-4, 4);
  int printed_form_matches = 0;
  for (int i = 0; i < 200; ++i) {
    const Params p(zd(rng), ld(rng));
    const Gamma g = compute_gamma(p);
    const double e = ed(rng);
    const double from_recursion = beta_n(1, alpha1(p, g, e), 1.0, e, p, g);
    const double corrected = (2 * (g.value - p.l()) * e - p.m()) / (2 * g.value + 1);
    const double printed = (2 * (g.value + p.l()) * e - p.m()) / (2 * g.value + 1);
    CHECK(from_recursion == doctest::Approx(corrected).epsilon(1e-12).scale(1.0));
    if (std::abs(from_recursion - printed) <= 1e-12 * std::max(1.0, std::abs(printed))) {
      ++printed_form_matches;
    }
  }
  // Only l = 0 makes the two forms coincide.
  CHECK(printed_form_matches < 200);
}

TEST_CASE("three-term relation residual for arbitrary (E, a)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> zd(0.01, 0.49);
  std::uniform_real_distribution<double> ed(-5.0, 5.0);
  std::uniform_real_distribution<double> ad(0.0, 3.0);
  std::uniform_int_distribution<int> ld(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const Params p(zd(rng), ld(rng));
    const Gamma g = compute_gamma(p);
    const double e = ed(rng), a = ad(rng);
    const CoefficientTable t = build_table(p, e, a, 12);
    for (int n = 2; n <= 12; ++n) {
      const RecursionTerms r = recursion_terms(n, e, a, p, g);
      const double terms[3] = {r.lead * t.alphas[n], r.middle * t.alphas[n - 1],
                               r.trailing * t.alphas[n - 2]};
      const double scale = std::abs(terms[0]) + std::abs(terms[1]) + std::abs(terms[2]);
      CHECK(std::abs(terms[0] + terms[1] + terms[2]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("series coefficients satisfy the power-by-power balance of the radial system") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> zd(0.01, 0.49);
  std::uniform_real_distribution<double> ed(-5.0, 5.0);
  std::uniform_real_distribution<double> ad(0.0, 3.0);
  std::uniform_int_distribution<int> ld(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const Params p(zd(rng), ld(rng));
    const CoefficientTable t = build_table(p, ed(rng), ad(rng), 10);
    for (int k = 0; k <= 10; ++k) {
      const PowerResiduals r = power_residuals(t, k);
      CHECK(r.f <= 1e-12);
      CHECK(r.g <= 1e-12);
    }
  }
}

TEST_CASE("n = 1 point terminates the table") {
  const Params p(0.3, -1);
  const Gamma g = compute_gamma(p);
  const RecursionTerms r = recursion_terms(2, -1.25, 0.3125, p, g);
  CHECK(std::abs(r.trailing) < 1e-14);
  const CoefficientTable t = build_table(p, -1.25, 0.3125, 8);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(t.alphas[k]) <= 1e-12);
  CHECK(std::abs(t.betas[1]) > 0.1);
  for (int k = 2; k <= 8; ++k) CHECK(std::abs(t.betas[k]) <= 1e-12);
}

TEST_CASE("table is linear in alpha_0") {
  const Params p(0.2, 1);
  const CoefficientTable t1 = build_table(p, 1.7, 0.4, 9);
  const CoefficientTable t3 = build_table(p, 1.7, 0.4, 9, -3.0);
  for (std::size_t k = 0; k < t1.size(); ++k) {
    CHECK(t3.alphas[k] == doctest::Approx(-3.0 * t1.alphas[k]).epsilon(1e-14));
    CHECK(t3.betas[k] == doctest::Approx(-3.0 * t1.betas[k]).epsilon(1e-14));
  }
}

TEST_CASE("zero coupling limit decouples alpha_n from alpha_{n-1}") {
  const Params p(1e-14, 2);
  const RecursionTerms r = recursion_terms(3, 1.3, 0.2, p, compute_gamma(p));
  CHECK(std::abs(r.middle) <= 1e-12 * std::abs(r.lead));
}

TEST_CASE("build_table preconditions") {
  const Params p(0.2, 0);
  CHECK_THROWS_AS(build_table(p, 1.5, 0.2, 1), Error);
  CHECK_THROWS_AS(build_table(p, 1.5, -0.1, 4), Error);
  CHECK_THROWS_AS(alpha_n_recursion(1, 1.0, 1.0, 1.5, 0.2, p, compute_gamma(p)), Error);
}
