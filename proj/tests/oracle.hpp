#ifndef MASSART_TESTS_ORACLE_HPP
#define MASSART_TESTS_ORACLE_HPP

// Test-only oracles, independent of the closed-form implementation path.

#include <cmath>
#include <cstdint>

namespace oracle {

// Left side of the exponential tail equation minus delta/2.
inline double eq1_lhs(double t, double eps, std::int64_t n, double delta) {
  const double expo = -static_cast<double>(n) * eps * eps /
                      (2.0 * (t + eps / 3.0) * (1.0 - t - eps / 3.0));
  return std::exp(expo) - delta / 2.0;
}

// Bisection root of the tail equation on eps in (0, 3(1-t)).  The lhs is
// decreasing in eps on this branch: positive near 0, negative near the
// upper end.  200 iterations pin the root far below 1e-9.
inline double bisect_epsilon(double t, std::int64_t n, double delta) {
  if (t >= 1.0) return 0.0;
  double lo = 1e-15;
  double hi = 3.0 * (1.0 - t) - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eq1_lhs(t, mid, n, delta) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Lower limit by solving z - t = eps(t) for t with the bisection eps;
// confirms the closed-form limits by an independent route.
inline double bisect_lower_limit(double z, std::int64_t n, double delta) {
  // g(t) = z - t - eps(t) is increasing in t toward z; the root lies in
  // [z - 1, z].  Restrict to [0, z] since eps >= 0 forces t <= z and the
  // raw limit for the tested cases stays inside [0, 1].
  double lo = 0.0;
  double hi = z;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = z - mid - bisect_epsilon(mid, n, delta);
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

#endif
