#ifndef MASSART_PLAN_HPP
#define MASSART_PLAN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "interval.hpp"

namespace massart {

struct PrecisionGoal {
  enum class Kind { Absolute, Relative, Mixed };

  Kind kind = Kind::Absolute;
  double eps_a = 0.0;  // Absolute / Mixed
  double eps_r = 0.0;  // Relative / Mixed

  static PrecisionGoal absolute(double eps) {
    return {Kind::Absolute, eps, 0.0};
  }
  static PrecisionGoal relative(double eps) {
    return {Kind::Relative, 0.0, eps};
  }
  static PrecisionGoal mixed(double eps_a, double eps_r) {
    return {Kind::Mixed, eps_a, eps_r};
  }
};

struct ConfidenceSchedule {
  enum class Kind { Finite, Tailed };

  Kind kind = Kind::Finite;
  // Finite: number of stages s.  Tailed: the threshold tau after which
  // the per-stage confidence decays as zeta*delta*2^(tau - stage).
  std::int64_t stages_or_tau = 1;
  double zeta = 0.0;
  // Required for Tailed; 0 means unset.
  std::int64_t max_stages = 0;

  static ConfidenceSchedule finite(std::int64_t s, double zeta) {
    return {Kind::Finite, s, zeta, 0};
  }
  static ConfidenceSchedule tailed(std::int64_t tau, double zeta,
                                   std::int64_t max_stages) {
    return {Kind::Tailed, tau, zeta, max_stages};
  }
};

// The side conditions s*zeta < 1 / (tau+1)*zeta < 1 hold with headroom.
double default_zeta(const ConfidenceSchedule& schedule);

struct MultistagePlan {
  std::vector<std::int64_t> sample_sizes;
  ConfidenceSchedule schedule;
  PrecisionGoal goal;
  double delta = 0.05;
  Support support{0.0, 1.0};
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool valid() const { return violations.empty(); }
};

// Per-stage error budget: flat zeta*delta for finite schedules, decaying
// geometrically past stage tau for tailed ones.
double stage_delta(const ConfidenceSchedule& schedule, double delta,
                   std::int64_t stage);

// Stopping predicates; strict inequalities throughout, evaluated on raw
// (unclamped) limits.
bool check_stop(const PrecisionGoal& goal, double estimate,
                const IntervalEstimate& interval);

// Least n with n > (b-a)^2/(2 eps^2) * ln(2/(zeta delta)), then verified
// against max_halfwidth at confidence 1 - zeta*delta and bumped if the
// check fails.  `adjusted` reports whether a bump happened.
std::int64_t min_final_sample_size(double eps, double zeta, double delta,
                                   const Support& support,
                                   bool* adjusted = nullptr);

// n_l = ceil(n1 * growth^(l-1)), ties bumped to keep strict increase.
std::vector<std::int64_t> build_schedule(std::int64_t n1, double growth,
                                         std::int64_t stages);

ValidationReport validate_plan(const MultistagePlan& plan);

struct StageRecord {
  std::int64_t stage;
  std::int64_t n;       // cumulative samples used
  double mean;          // on the original scale
  IntervalEstimate interval;  // raw limits at the per-stage confidence
  bool stopped;
};

enum class Outcome { Terminated, StageCapReached };

struct ExecutionTrace {
  std::vector<StageRecord> records;
  std::int64_t terminal_stage = 0;
  std::optional<double> estimate;  // empty when the stage cap was hit
  Outcome outcome = Outcome::Terminated;
};

// Pull-based sample stream: returns false when exhausted.
using SampleSource = std::function<bool(double&)>;

// Samples are cumulative across stages; the stage-l estimate uses the
// first n_l draws.  The plan must pass validate_plan first.
ExecutionTrace execute_plan(const MultistagePlan& plan,
                            const SampleSource& source);

// Stage count actually executable (finite s, or the tailed cap).
std::int64_t stage_cap(const MultistagePlan& plan);

// Sample size for a 1-based stage; extends a tailed prefix geometrically.
std::int64_t stage_sample_size(const MultistagePlan& plan, std::int64_t stage);

}  // namespace massart

#endif
