#include "interval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace massart {

double massart_c(double delta) {
  if (!(delta >= kDeltaMin && delta <= kDeltaMax)) {
    throw_domain("delta must lie in [1e-12, 1 - 1e-12], got " +
                 std::to_string(delta));
  }
  return 9.0 / (2.0 * std::log(2.0 / delta));
}

UnitSummary::UnitSummary(std::int64_t n_in, double mean_in)
    : n(n_in), mean(mean_in) {
  if (n < 1) throw_domain("sample count must be >= 1");
  if (!(mean >= 0.0 && mean <= 1.0)) {
    throw_domain("unit mean must lie in [0,1], got " + std::to_string(mean));
  }
}

Support::Support(double a_in, double b_in) : a(a_in), b(b_in) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw_domain("support requires finite a < b");
  }
}

std::pair<double, double> unit_interval(const UnitSummary& summary,
                                        const ConfidenceParams& params) {
  const double z = summary.mean;
  const double nc = static_cast<double>(summary.n) * params.c;
  const double k = 3.0 / (4.0 + nc);
  // Radicand is >= 1 analytically; rounding may dip below.
  const double root = std::sqrt(std::max(1.0, 1.0 + nc * z * (1.0 - z)));
  const double lower = z + k * (1.0 - 2.0 * z - root);
  const double upper = z + k * (1.0 - 2.0 * z + root);
  return {lower, upper};
}

UnitSummary summarize(std::span<const double> samples, const Support& support) {
  if (samples.empty()) throw_domain("need at least one sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    if (!(x >= support.a && x <= support.b)) {
      throw_data("sample " + std::to_string(i) + " = " + std::to_string(x) +
                 " outside support [" + std::to_string(support.a) + ", " +
                 std::to_string(support.b) + "]");
    }
    sum += support.to_unit(x);
  }
  const double mean =
      std::clamp(sum / static_cast<double>(samples.size()), 0.0, 1.0);
  return {static_cast<std::int64_t>(samples.size()), mean};
}

IntervalEstimate bounded_interval(const UnitSummary& summary,
                                  const ConfidenceParams& params,
                                  const Support& support, bool clamp) {
  auto [lz, uz] = unit_interval(summary, params);
  double lower = support.from_unit(lz);
  double upper = support.from_unit(uz);
  bool clamped = false;
  if (clamp) {
    const double cl = std::max(lower, support.a);
    const double cu = std::min(upper, support.b);
    clamped = (cl != lower) || (cu != upper);
    lower = cl;
    upper = cu;
  }
  return {lower, upper, clamped};
}

IntervalEstimate bounded_interval(std::span<const double> samples, double delta,
                                  const Support& support, bool clamp) {
  return bounded_interval(summarize(samples, support),
                          ConfidenceParams(delta), support, clamp);
}

double epsilon_root(double t, std::int64_t n, const ConfidenceParams& params) {
  if (!(t >= 0.0 && t <= 1.0)) throw_domain("t must lie in [0,1]");
  const double alpha = 1.0 / (static_cast<double>(n) * params.c);
  const double root =
      std::sqrt(alpha * alpha + 4.0 * alpha * t * (1.0 - t));
  return (3.0 * alpha * (1.0 - 2.0 * t) + 3.0 * root) / (2.0 * (1.0 + alpha));
}

double t_map(double z, std::int64_t n, const ConfidenceParams& params) {
  if (!(z >= 0.0 && z <= 1.0)) throw_domain("z must lie in [0,1]");
  const double beta = 4.0 / (static_cast<double>(n) * params.c);
  const double root = std::sqrt(beta * beta + 4.0 * beta * z * (1.0 - z));
  return z + (3.0 * beta * (1.0 - 2.0 * z) - 3.0 * root) / (4.0 * (1.0 + beta));
}

double eq1_residual(double t, double eps, std::int64_t n,
                    const ConfidenceParams& params) {
  const double lo = t + eps / 3.0;
  const double hi = 1.0 - t - eps / 3.0;
  if (!(lo > 0.0 && hi > 0.0)) {
    throw_domain("eq1 residual needs 0 < t + eps/3 < 1");
  }
  const double expo =
      -static_cast<double>(n) * eps * eps / (2.0 * lo * hi);
  return std::exp(expo) - params.delta / 2.0;
}

std::pair<double, double> hoeffding_interval(const UnitSummary& summary,
                                             double delta) {
  if (!(delta >= kDeltaMin && delta <= kDeltaMax)) {
    throw_domain("delta must lie in [1e-12, 1 - 1e-12]");
  }
  const double hw =
      std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(summary.n)));
  return {summary.mean - hw, summary.mean + hw};
}

namespace {

// max(U(z)-z, z-L(z)) = k * (sqrt(1 + nc z(1-z)) + |1-2z|)
double halfwidth_at(double z, double nc) {
  const double k = 3.0 / (4.0 + nc);
  const double root = std::sqrt(std::max(1.0, 1.0 + nc * z * (1.0 - z)));
  return k * (root + std::abs(1.0 - 2.0 * z));
}

}  // namespace

double max_halfwidth(std::int64_t n, const ConfidenceParams& params) {
  if (n < 1) throw_domain("sample count must be >= 1");
  const double nc = static_cast<double>(n) * params.c;
  const double step = 1e-4;
  double best_z = 0.0;
  double best = halfwidth_at(0.0, nc);
  for (double z = step; z <= 1.0 + step / 2; z += step) {
    const double zz = std::min(z, 1.0);
    const double f = halfwidth_at(zz, nc);
    if (f > best) {
      best = f;
      best_z = zz;
    }
  }
  // Golden-section refinement around the grid maximizer.
  double lo = std::max(0.0, best_z - step);
  double hi = std::min(1.0, best_z + step);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = halfwidth_at(x1, nc);
  double f2 = halfwidth_at(x2, nc);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = halfwidth_at(x2, nc);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = halfwidth_at(x1, nc);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace massart
