#ifndef MASSART_INTERVAL_HPP
#define MASSART_INTERVAL_HPP

#include <cstdint>
#include <span>
#include <utility>

#include "errors.hpp"

namespace massart {

// Keeps ln(2/delta) finite and well-conditioned.
inline constexpr double kDeltaMin = 1e-12;
inline constexpr double kDeltaMax = 1.0 - 1e-12;

// c = 9 / (2 ln(2/delta))
double massart_c(double delta);

struct ConfidenceParams {
  double delta;
  double c;

  explicit ConfidenceParams(double delta_in)
      : delta(delta_in), c(massart_c(delta_in)) {}
};

// Sample count and mean of observations on the unit scale.
struct UnitSummary {
  std::int64_t n;
  double mean;

  UnitSummary(std::int64_t n_in, double mean_in);
};

struct Support {
  double a;
  double b;

  Support(double a_in, double b_in);

  double width() const { return b - a; }
  double to_unit(double x) const { return (x - a) / (b - a); }
  double from_unit(double z) const { return a + (b - a) * z; }
};

struct IntervalEstimate {
  double lower;
  double upper;
  bool clamped;
};

// Closed-form confidence limits on the unit scale.  Raw values may fall
// outside [0,1]; L <= mean <= U always holds.
std::pair<double, double> unit_interval(const UnitSummary& summary,
                                        const ConfidenceParams& params);

// Unit summary mapped onto an arbitrary support; clamp clips the limits
// to [a,b] (never hurts coverage, the mean lies in [a,b] a.s.).
IntervalEstimate bounded_interval(const UnitSummary& summary,
                                  const ConfidenceParams& params,
                                  const Support& support, bool clamp);

// Samples are validated against the support; the summary is built by
// rescaling each observation to the unit scale.
UnitSummary summarize(std::span<const double> samples, const Support& support);

IntervalEstimate bounded_interval(std::span<const double> samples, double delta,
                                  const Support& support, bool clamp);

// Half-width function: the nonnegative root of
//   exp(-n eps^2 / (2 (t + eps/3)(1 - t - eps/3))) = delta/2
// in closed form, with alpha = 1/(n c).
double epsilon_root(double t, std::int64_t n, const ConfidenceParams& params);

// Lower-limit map: t(z) <= z and z - t(z) = epsilon_root(t(z)).
// t_map(mean) equals the raw lower limit of unit_interval.
double t_map(double z, std::int64_t n, const ConfidenceParams& params);

// exp(-n eps^2 / (2 (t + eps/3)(1 - t - eps/3))) - delta/2; test support.
double eq1_residual(double t, double eps, std::int64_t n,
                    const ConfidenceParams& params);

// Baseline two-sided Hoeffding band: mean +/- sqrt(ln(2/delta)/(2n)).
std::pair<double, double> hoeffding_interval(const UnitSummary& summary,
                                             double delta);

// sup over z in [0,1] of max(U(z)-z, z-L(z)); grid search at resolution
// 1e-4 followed by golden-section refinement to 1e-8.
double max_halfwidth(std::int64_t n, const ConfidenceParams& params);

}  // namespace massart

#endif
