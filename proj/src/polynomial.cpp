#include "qes/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qes/errors.hpp"

namespace qes::poly {

namespace {

using Poly = std::vector<double>;

double max_abs(std::span<const double> c) {
  double s = 0.0;
  for (double x : c) s = std::max(s, std::abs(x));
  return s;
}

// Remainder of a / b (both trimmed, b non-empty with nonzero lead).
Poly remainder(Poly a, const Poly& b) {
  const std::size_t db = b.size() - 1;
  const double lead = b.back();
  while (a.size() > db && !a.empty()) {
    const double q = a.back() / lead;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= q * b[i];
    a.pop_back();
  }
  return a;
}

// Members are scaled to unit max coefficient; positive factors leave the
// sign variations unchanged and make an absolute noise floor meaningful.
std::vector<Poly> sturm_sequence(std::span<const double> coeffs) {
  constexpr double kNoise = 1e-10;
  auto normalized = [](Poly p) {
    const double s = max_abs(p);
    for (double& x : p) x /= s;
    return p;
  };
  auto drop_noise = [&](Poly p) {
    while (!p.empty() && std::abs(p.back()) <= kNoise) p.pop_back();
    return p;
  };
  std::vector<Poly> seq;
  Poly p = trimmed(coeffs);
  if (p.empty()) return seq;
  seq.push_back(normalized(p));
  Poly d = trimmed(derivative(p));
  if (d.empty()) return seq;
  seq.push_back(normalized(d));
  while (seq.back().size() > 1) {
    Poly r = remainder(seq[seq.size() - 2], seq.back());
    for (double& x : r) x = -x;
    // Roundoff leaves tiny remainders where the exact one is zero.
    r = drop_noise(r);
    if (r.empty()) break;
    seq.push_back(normalized(std::move(r)));
  }
  return seq;
}

int sign_at(const Poly& p, double x) {
  double v;
  if (std::isinf(x)) {
    const bool odd = (p.size() - 1) % 2 == 1;
    v = (x < 0 && odd) ? -p.back() : p.back();
  } else {
    v = evaluate(p, x);
  }
  return (v > 0) - (v < 0);
}

int variations(const std::vector<Poly>& seq, double x) {
  int count = 0;
  int last = 0;
  for (const Poly& p : seq) {
    const int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

double evaluate(std::span<const double> coeffs, double x) noexcept {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(std::span<const double> coeffs) {
  std::vector<double> d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(static_cast<double>(k) * coeffs[k]);
  return d;
}

std::vector<double> trimmed(std::span<const double> coeffs, double rel_tol) {
  std::vector<double> c(coeffs.begin(), coeffs.end());
  const double cutoff = rel_tol * max_abs(coeffs);
  while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
  return c;
}

std::vector<double> from_roots(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

int sturm_count(std::span<const double> coeffs, double lo, double hi) {
  const auto seq = sturm_sequence(coeffs);
  if (seq.size() < 2) return 0;
  return variations(seq, lo) - variations(seq, hi);
}

double root_bound(std::span<const double> coeffs) {
  const Poly p = trimmed(coeffs);
  if (p.size() < 2) return 0.0;
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) m = std::max(m, std::abs(p[k] / p.back()));
  return 1.0 + m;
}

std::vector<double> real_roots(std::span<const double> coeffs, double lo, double hi,
                               double x_tol) {
  const Poly p = trimmed(coeffs);
  std::vector<double> roots;
  if (p.size() < 2) return roots;
  const auto seq = sturm_sequence(p);
  const double bound = root_bound(p);
  lo = std::max(lo, -bound);
  hi = std::min(hi, bound);
  if (!(lo < hi)) return roots;

  struct Interval {
    double lo, hi;
    int count;
  };
  std::vector<Interval> stack{{lo, hi, variations(seq, lo) - variations(seq, hi)}};
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.count <= 0) continue;
    const double width_tol = x_tol * std::max(1.0, std::max(std::abs(iv.lo), std::abs(iv.hi)));
    if (iv.count == 1) {
      // Bisect on the sign of p when it changes across the interval; fall
      // back to Sturm counts for roots of even multiplicity.
      double a = iv.lo, b = iv.hi;
      double fa = evaluate(p, a), fb = evaluate(p, b);
      if (fb == 0.0) {
        roots.push_back(b);
        continue;
      }
      const bool bracketed = (fa < 0) != (fb < 0) && fa != 0.0;
      while (b - a > width_tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (bracketed) {
          const double fm = evaluate(p, mid);
          if (fm == 0.0) {
            a = b = mid;
            break;
          }
          if ((fm < 0) == (fa < 0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        } else if (variations(seq, a) - variations(seq, mid) == 1) {
          b = mid;
        } else {
          a = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
      continue;
    }
    if (iv.hi - iv.lo <= width_tol) {
      // Cluster closer than the resolution; report it once.
      roots.push_back(0.5 * (iv.lo + iv.hi));
      continue;
    }
    const double mid = 0.5 * (iv.lo + iv.hi);
    const int left = variations(seq, iv.lo) - variations(seq, mid);
    stack.push_back({mid, iv.hi, iv.count - left});
    stack.push_back({iv.lo, mid, left});
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace qes::poly
