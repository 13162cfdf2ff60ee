#ifndef MASSART_SIM_HPP
#define MASSART_SIM_HPP

#include <cstdint>
#include <map>

#include "distributions.hpp"
#include "plan.hpp"

namespace massart {

struct CoverageReport {
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  double empirical_coverage = 0.0;
  double std_error = 0.0;
  double nominal = 0.0;

  bool conservative() const {
    return empirical_coverage >= nominal - 3.0 * std_error;
  }
};

struct PlanReport {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double success_rate = 0.0;
  double std_error = 0.0;
  double nominal = 0.0;  // 1 - delta of the plan
  std::int64_t total_samples = 0;
  double mean_samples = 0.0;
  std::map<std::int64_t, std::int64_t> stage_histogram;
  std::int64_t nonterminated = 0;

  bool conservative() const {
    return success_rate >= nominal - 3.0 * std_error;
  }
};

// Per trial: n fresh draws, Theorem-style raw interval, strict hit test
// L < exact_mean < U.  Trial k uses substream (seed, k); results are
// identical for any worker-thread count.
CoverageReport coverage_experiment(const DistributionSpec& spec,
                                   std::int64_t n, double delta,
                                   std::int64_t trials, std::uint64_t seed,
                                   int threads = 0);

// Runs the plan once per trial on substream (seed, k); the success event
// follows the plan's goal variant against spec.exact_mean().
PlanReport plan_experiment(const DistributionSpec& spec,
                           const MultistagePlan& plan, std::int64_t trials,
                           std::uint64_t seed, int threads = 0);

// Goal event |est - truth| < eps (or the relative / mixed variant).
bool goal_event(const PrecisionGoal& goal, double estimate, double truth);

}  // namespace massart

#endif
