#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "qes/polynomial.hpp"

using namespace qes;

TEST_CASE("evaluate and derivative") {
  const std::vector<double> c{1.0, -3.0, 0.0, 2.0};  // 1 - 3x + 2x^3
  CHECK(poly::evaluate(c, 2.0) == doctest::Approx(11.0));
  const auto d = poly::derivative(c);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == -3.0);
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 6.0);
  const auto dc = poly::derivative(std::vector<double>{4.0});
  CHECK((dc.empty() || dc == std::vector<double>{0.0}));
}

TEST_CASE("from_roots and trimmed") {
  const std::vector<double> roots{1.0, -2.0, 3.5};
  const auto c = poly::from_roots(roots);
  REQUIRE(c.size() == 4);
  CHECK(c[3] == 1.0);
  for (double r : roots) CHECK(std::abs(poly::evaluate(c, r)) < 1e-12);
  const auto t = poly::trimmed(std::vector<double>{1.0, 2.0, 1e-20}, 1e-12);
  CHECK(t.size() == 2);
}

TEST_CASE("sturm counts distinct roots") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto c = poly::from_roots(std::vector<double>{-1.0, 0.5, 2.0, 2.0});
  CHECK(poly::sturm_count(c, -inf, inf) == 3);
  CHECK(poly::sturm_count(c, 0.0, inf) == 2);
  CHECK(poly::sturm_count(c, 0.6, 2.5) == 1);
  // x^2 + 1 has none.
  CHECK(poly::sturm_count(std::vector<double>{1.0, 0.0, 1.0}, -inf, inf) == 0);
}

TEST_CASE("real_roots isolates clustered and repeated roots") {
  const std::vector<double> roots{-3.0, 1.0, 1.001, 4.0};
  const auto c = poly::from_roots(roots);
  const auto found = poly::real_roots(c, -10.0, 10.0);
  REQUIRE(found.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(found[i] == doctest::Approx(roots[i]).epsilon(1e-10));

  const auto dbl = poly::from_roots(std::vector<double>{0.3, 0.3, -1.0});
  const auto r2 = poly::real_roots(dbl, -5.0, 5.0);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(r2[1] == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("root bound contains every root") {
  const auto c = poly::from_roots(std::vector<double>{-7.0, 0.1, 5.0});
  const double b = poly::root_bound(c);
  CHECK(b > 7.0);
}
