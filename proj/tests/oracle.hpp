#pragma once

// Test-only reference for the termination function. It eliminates beta_k
// from the power-by-power balance of the radial system directly, instead of
// going through the three-term alpha recursion the library uses:
//   alpha_k (k^2 + 2k gamma) = (gamma + j + k) [2a alpha_{k-2} - (E + m) beta_{k-1}]
//                              - Z alpha (E - m) alpha_{k-1}
//   beta_k = [Z alpha alpha_k + (E - m) alpha_{k-1}] / (gamma + j + k)

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

struct Series {
  std::vector<double> alpha;
  std::vector<double> beta;
};

inline Series series(double z, int l, double m, double e, double a, int count) {
  const double j = l + 0.5;
  const double g = std::sqrt(j * j - z * z);
  Series s;
  s.alpha.assign(count + 1, 0.0);
  s.beta.assign(count + 1, 0.0);
  s.alpha[0] = 1.0;
  s.beta[0] = z / (g + j);
  for (int k = 1; k <= count; ++k) {
    const double a2 = k >= 2 ? s.alpha[k - 2] : 0.0;
    s.alpha[k] = ((g + j + k) * (2 * a * a2 - (e + m) * s.beta[k - 1]) -
                  z * (e - m) * s.alpha[k - 1]) /
                 (k * k + 2 * k * g);
    s.beta[k] = (z * s.alpha[k] + (e - m) * s.alpha[k - 1]) / (g + j + k);
  }
  return s;
}

inline double field(double z, int l, double m, int n, double e) {
  const double j = l + 0.5;
  const double g = std::sqrt(j * j - z * z);
  return (e * e - m * m) / (2 * (n + g + j));
}

inline double termination(double z, int l, double m, int n, double e) {
  return series(z, l, m, e, field(z, l, m, n, e), n).alpha[n];
}

/// Roots of the termination function on |E| in [m, e_max m], by a fine
/// grid and plain bisection.
inline std::vector<double> roots(double z, int l, double m, int n, double e_max = 30.0,
                                 int samples = 20000) {
  std::vector<double> out;
  for (double sign : {-1.0, 1.0}) {
    double e0 = sign * m;
    double k0 = termination(z, l, m, n, e0);
    for (int i = 1; i <= samples; ++i) {
      const double e1 = sign * m * (1.0 + (e_max - 1.0) * i / samples);
      const double k1 = termination(z, l, m, n, e1);
      if ((k0 < 0) != (k1 < 0)) {
        double lo = e0, hi = e1, flo = k0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = termination(z, l, m, n, mid);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
      e0 = e1;
      k0 = k1;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
