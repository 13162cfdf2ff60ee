#include <doctest.h>

#include <cmath>
#include <vector>

#include "interval.hpp"
#include "oracle.hpp"

using namespace massart;

namespace {

const std::vector<std::int64_t> kGridN = {5, 10, 50, 100, 1000};
const std::vector<double> kGridDelta = {0.2, 0.1, 0.05, 0.01};

}  // namespace

TEST_CASE("massart_c definition") {
  // ln(2/delta) = 9/2 inverts to c = 1.
  CHECK(massart_c(2.0 * std::exp(-4.5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(massart_c(0.05) == doctest::Approx(1.2198826380681756).epsilon(1e-14));
  CHECK(massart_c(0.5) == doctest::Approx(3.2460638420001677).epsilon(1e-14));
  CHECK_THROWS_AS(massart_c(0.0), Error);
  CHECK_THROWS_AS(massart_c(1.0), Error);
  CHECK_THROWS_AS(massart_c(-0.1), Error);
}

TEST_CASE("unit_interval mean-zero collapse") {
  const ConfidenceParams params(0.05);
  for (std::int64_t n : kGridN) {
    const auto [lo, hi] = unit_interval(UnitSummary(n, 0.0), params);
    const double nc = static_cast<double>(n) * params.c;
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(hi == doctest::Approx(6.0 / (4.0 + nc)).epsilon(1e-14));
  }
}

TEST_CASE("unit_interval symmetric about one half") {
  for (double delta : kGridDelta) {
    const ConfidenceParams params(delta);
    for (std::int64_t n : kGridN) {
      const auto [lo, hi] = unit_interval(UnitSummary(n, 0.5), params);
      const double nc = static_cast<double>(n) * params.c;
      const double hw = 3.0 / (4.0 + nc) * std::sqrt(1.0 + nc / 4.0);
      CHECK(hi - 0.5 == doctest::Approx(hw).epsilon(1e-13));
      CHECK(0.5 - lo == doctest::Approx(hw).epsilon(1e-13));
    }
  }
}

TEST_CASE("unit_interval frozen values and bisection cross-check") {
  const ConfidenceParams params(0.05);
  const auto [lo, hi] = unit_interval(UnitSummary(100, 0.3), params);
  // Extended-precision evaluation of the closed form.
  CHECK(lo == doctest::Approx(0.18667471849826427).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.43237467489348854).epsilon(1e-12));
  // Independent route: numerically solve z - t = eps(t).
  CHECK(std::abs(oracle::bisect_lower_limit(0.3, 100, 0.05) - lo) < 1e-9);
}

TEST_CASE("raw limits bracket the mean") {
  for (double delta : kGridDelta) {
    const ConfidenceParams params(delta);
    for (std::int64_t n : kGridN) {
      for (int i = 0; i <= 20; ++i) {
        const double z = i / 20.0;
        const auto [lo, hi] = unit_interval(UnitSummary(n, z), params);
        CHECK(lo <= z);
        CHECK(z <= hi);
      }
    }
  }
}

TEST_CASE("epsilon_root closed form") {
  const ConfidenceParams params(0.05);
  SUBCASE("endpoints") {
    for (std::int64_t n : kGridN) {
      const double alpha = 1.0 / (static_cast<double>(n) * params.c);
      CHECK(epsilon_root(0.0, n, params) ==
            doctest::Approx(3.0 * alpha / (1.0 + alpha)).epsilon(1e-14));
      CHECK(epsilon_root(1.0, n, params) ==
            doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  SUBCASE("matches the bisection root of the tail equation") {
    CHECK(std::abs(epsilon_root(0.3, 100, params) -
                   oracle::bisect_epsilon(0.3, 100, 0.05)) < 1e-10);
  }
  SUBCASE("nonnegative everywhere") {
    for (std::int64_t n : kGridN) {
      for (int i = 0; i <= 100; ++i) {
        CHECK(epsilon_root(i / 100.0, n, params) >= -1e-15);
      }
    }
  }
}

TEST_CASE("eq1_residual") {
  const ConfidenceParams params(0.05);
  SUBCASE("zero at the root across a t grid") {
    for (double t = 0.0; t < 0.999; t += 0.1) {
      const double eps = epsilon_root(t, 50, params);
      CHECK(std::abs(eq1_residual(t, eps, 50, params)) < 1e-12);
    }
  }
  SUBCASE("eps = 0 gives 1 - delta/2") {
    CHECK(eq1_residual(0.3, 0.0, 50, params) ==
          doctest::Approx(1.0 - 0.025).epsilon(1e-15));
  }
  SUBCASE("perturbing eps above the root goes negative") {
    for (double t = 0.0; t < 0.9; t += 0.1) {
      const double eps = epsilon_root(t, 50, params);
      CHECK(eq1_residual(t, eps + 0.01, 50, params) < 0.0);
    }
  }
  SUBCASE("degenerate denominator is a domain error") {
    CHECK_THROWS_AS(eq1_residual(1.0, 0.5, 50, params), Error);
  }
}

TEST_CASE("t_map") {
  SUBCASE("t(0) = 0") {
    for (double delta : kGridDelta) {
      const ConfidenceParams params(delta);
      CHECK(t_map(0.0, 20, params) == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  SUBCASE("equals the raw lower limit exactly") {
    const ConfidenceParams params(0.05);
    for (std::int64_t n : kGridN) {
      for (int i = 0; i <= 20; ++i) {
        const double z = i / 20.0;
        const auto [lo, hi] = unit_interval(UnitSummary(n, z), params);
        CHECK(std::abs(t_map(z, n, params) - lo) < 1e-12);
      }
    }
  }
  SUBCASE("fixed point z - t(z) = eps(t(z))") {
    const ConfidenceParams params(0.1);
    const double t = t_map(0.7, 200, params);
    CHECK(std::abs((0.7 - t) - epsilon_root(t, 200, params)) < 1e-10);
    CHECK(t <= 0.7 + 1e-15);
  }
}

TEST_CASE("upper/lower symmetry under z -> 1-z") {
  for (double delta : kGridDelta) {
    const ConfidenceParams params(delta);
    for (std::int64_t n : kGridN) {
      for (int i = 0; i <= 100; ++i) {
        const double z = i / 100.0;
        const auto [lo1, hi1] = unit_interval(UnitSummary(n, z), params);
        const auto [lo2, hi2] =
            unit_interval(UnitSummary(n, 1.0 - z), params);
        CHECK(std::abs(hi1 - (1.0 - lo2)) < 1e-12);
      }
    }
  }
}

TEST_CASE("width shrinks as n grows") {
  const ConfidenceParams params(0.05);
  double prev = 2.0;
  for (std::int64_t n : {10, 20, 50, 100, 1000}) {
    const auto [lo, hi] = unit_interval(UnitSummary(n, 0.3), params);
    CHECK(hi - lo < prev);
    prev = hi - lo;
  }
}

TEST_CASE("bounded_interval") {
  SUBCASE("unit support matches unit_interval") {
    const ConfidenceParams params(0.05);
    const UnitSummary summary(40, 0.3);
    const auto [lo, hi] = unit_interval(summary, params);
    const auto iv =
        bounded_interval(summary, params, Support(0.0, 1.0), false);
    CHECK(iv.lower == doctest::Approx(lo).epsilon(1e-15));
    CHECK(iv.upper == doctest::Approx(hi).epsilon(1e-15));
  }
  SUBCASE("all-ones on support (-1,1)") {
    const ConfidenceParams params(0.05);
    const double nc = 10.0 * params.c;
    const auto raw = bounded_interval(UnitSummary(10, 1.0), params,
                                      Support(-1.0, 1.0), false);
    CHECK(raw.upper == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(raw.lower ==
          doctest::Approx(1.0 - 2.0 * 6.0 / (4.0 + nc)).epsilon(1e-13));
    const auto clamped = bounded_interval(UnitSummary(10, 1.0), params,
                                          Support(-1.0, 1.0), true);
    CHECK(clamped.upper == 1.0);
    CHECK(!raw.clamped);
  }
  SUBCASE("affine equivariance over (2,6)") {
    std::vector<double> samples;
    for (int i = 0; i < 50; ++i) samples.push_back(i % 2 == 0 ? 2.0 : 6.0);
    const auto iv = bounded_interval(samples, 0.05, Support(2.0, 6.0), false);
    const auto [lo, hi] =
        unit_interval(UnitSummary(50, 0.5), ConfidenceParams(0.05));
    CHECK(iv.lower == doctest::Approx(4.0 * lo + 2.0).epsilon(1e-12));
    CHECK(iv.upper == doctest::Approx(4.0 * hi + 2.0).epsilon(1e-12));
  }
  SUBCASE("sample outside support names the index") {
    const std::vector<double> samples = {0.2, 0.4, 1.7, 0.1};
    try {
      bounded_interval(samples, 0.05, Support(0.0, 1.0), true);
      FAIL("expected a data error");
    } catch (const Error& e) {
      CHECK(e.status() == Status::DataError);
      CHECK(std::string(e.what()).find("sample 2") != std::string::npos);
    }
  }
  SUBCASE("degenerate support") {
    CHECK_THROWS_AS(Support(1.0, 1.0), Error);
    CHECK_THROWS_AS(Support(2.0, -2.0), Error);
  }
}

TEST_CASE("hoeffding baseline") {
  SUBCASE("half-width 1/2 when n = 2 ln(2/delta)") {
    const double delta = 0.1;
    const auto n = static_cast<std::int64_t>(
        std::llround(2.0 * std::log(2.0 / delta)));
    // n is rounded; check against the formula rather than (0,1) exactly.
    const auto [lo, hi] = hoeffding_interval(UnitSummary(n, 0.5), delta);
    const double hw =
        std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
    CHECK(hi - 0.5 == doctest::Approx(hw).epsilon(1e-14));
    CHECK(0.5 - lo == doctest::Approx(hw).epsilon(1e-14));
  }
  SUBCASE("frozen half-width at n=100 delta=0.05") {
    const auto [lo, hi] = hoeffding_interval(UnitSummary(100, 0.5), 0.05);
    CHECK(hi - 0.5 ==
          doctest::Approx(0.13581015157406195).epsilon(1e-13));
  }
  SUBCASE("Massart adapts near the edge, Hoeffding does not") {
    const ConfidenceParams params(0.05);
    for (double z : {0.0, 0.02, 0.05, 0.1}) {
      const auto [mlo, mhi] = unit_interval(UnitSummary(200, z), params);
      const auto [hlo, hhi] = hoeffding_interval(UnitSummary(200, z), 0.05);
      CHECK(mhi - z < hhi - z);
    }
  }
}

TEST_CASE("max_halfwidth") {
  SUBCASE("dominates the one-sided deviation at every mean") {
    for (double delta : {0.1, 0.05}) {
      const ConfidenceParams params(delta);
      for (std::int64_t n : {10, 100, 1000}) {
        const double bound = max_halfwidth(n, params);
        double grid_max = 0.0;
        for (int i = 0; i <= 1000; ++i) {
          const double z = i / 1000.0;
          const auto [lo, hi] = unit_interval(UnitSummary(n, z), params);
          CHECK(hi - z <= bound + 1e-12);
          CHECK(z - lo <= bound + 1e-12);
          grid_max = std::max({grid_max, hi - z, z - lo});
        }
        // The bound is tight: a fine grid gets within its resolution.
        CHECK(bound == doctest::Approx(grid_max).epsilon(1e-5));
        // The off-center kink term keeps the maximizer away from 1/2,
        // but only barely once n is large.
        const double nc = static_cast<double>(n) * params.c;
        const double at_half = 3.0 / (4.0 + nc) * std::sqrt(1.0 + nc / 4.0);
        CHECK(bound >= at_half);
        if (n >= 1000) CHECK(bound < at_half * 1.01);
      }
    }
  }
  SUBCASE("doubling n shrinks the value by about 1/sqrt(2)") {
    const ConfidenceParams params(0.05);
    const double r =
        max_halfwidth(20000, params) / max_halfwidth(10000, params);
    CHECK(r > 0.65);
    CHECK(r < 0.75);
  }
  SUBCASE("the sizing-rule n beats eps") {
    const double delta = 0.05, eps = 0.05;
    const auto n = static_cast<std::int64_t>(
        std::ceil(std::log(2.0 / delta) / (2.0 * eps * eps))) + 1;
    CHECK(max_halfwidth(n, ConfidenceParams(delta)) < eps);
  }
}

TEST_CASE("concavity of epsilon_root via second differences") {
  const double h = 1e-3;
  for (double delta : {0.2, 0.01}) {
    const ConfidenceParams params(delta);
    for (std::int64_t n : {5, 1000}) {
      for (double t = 0.01 + h; t < 0.99 - h; t += 0.01) {
        const double d2 = epsilon_root(t - h, n, params) -
                          2.0 * epsilon_root(t, n, params) +
                          epsilon_root(t + h, n, params);
        CHECK(d2 <= 1e-9);
      }
    }
  }
}

TEST_CASE("invalid summaries") {
  CHECK_THROWS_AS(UnitSummary(0, 0.5), Error);
  CHECK_THROWS_AS(UnitSummary(10, -0.1), Error);
  CHECK_THROWS_AS(UnitSummary(10, 1.1), Error);
}
