#include "plan.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <string>

namespace massart {

double default_zeta(const ConfidenceSchedule& schedule) {
  if (schedule.kind == ConfidenceSchedule::Kind::Finite) {
    return 1.0 / (2.0 * static_cast<double>(schedule.stages_or_tau));
  }
  return 1.0 / (2.0 * static_cast<double>(schedule.stages_or_tau + 1));
}

double stage_delta(const ConfidenceSchedule& schedule, double delta,
                   std::int64_t stage) {
  if (stage < 1) throw_domain("stage index must be >= 1");
  const double base = schedule.zeta * delta;
  if (schedule.kind == ConfidenceSchedule::Kind::Finite) {
    if (stage > schedule.stages_or_tau) {
      throw_domain("stage " + std::to_string(stage) +
                   " exceeds finite schedule of " +
                   std::to_string(schedule.stages_or_tau) + " stages");
    }
    return base;
  }
  const std::int64_t tau = schedule.stages_or_tau;
  if (stage <= tau) return base;
  return base * std::exp2(static_cast<double>(tau - stage));
}

namespace {

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

bool check_stop(const PrecisionGoal& goal, double estimate,
                const IntervalEstimate& interval) {
  const double L = interval.lower;
  const double U = interval.upper;
  const double th = estimate;
  switch (goal.kind) {
    case PrecisionGoal::Kind::Absolute:
      return U - goal.eps_a < th && th < L + goal.eps_a;
    case PrecisionGoal::Kind::Relative: {
      const double s = sgn(th);
      return (1.0 - s * goal.eps_r) * U < th && th < (1.0 + s * goal.eps_r) * L;
    }
    case PrecisionGoal::Kind::Mixed: {
      const double s = sgn(th);
      const double upper_margin = std::max(goal.eps_a, s * goal.eps_r * U);
      const double lower_margin = std::max(goal.eps_a, s * goal.eps_r * L);
      return U - upper_margin < th && th < L + lower_margin;
    }
  }
  throw_domain("unreachable goal kind");
}

std::int64_t min_final_sample_size(double eps, double zeta, double delta,
                                   const Support& support, bool* adjusted) {
  if (!(eps > 0.0)) throw_domain("precision eps must be positive");
  const double stage_d = zeta * delta;
  if (!(stage_d >= kDeltaMin && stage_d <= kDeltaMax)) {
    throw_domain("zeta*delta out of range");
  }
  const double w = support.width();
  const double threshold =
      w * w / (2.0 * eps * eps) * std::log(2.0 / stage_d);
  std::int64_t n = static_cast<std::int64_t>(std::floor(threshold)) + 1;
  if (n < 1) n = 1;
  // Certainty check: the worst-case half-width at this n must beat eps
  // on the original scale.
  const double eps_unit = eps / w;
  const ConfidenceParams params(stage_d);
  bool bumped = false;
  while (eps_unit < 1.0 && !(max_halfwidth(n, params) < eps_unit)) {
    ++n;
    bumped = true;
  }
  if (adjusted != nullptr) *adjusted = bumped;
  return n;
}

std::vector<std::int64_t> build_schedule(std::int64_t n1, double growth,
                                         std::int64_t stages) {
  if (n1 < 1) throw_domain("n1 must be >= 1");
  if (!(growth > 1.0)) throw_domain("growth must exceed 1");
  if (stages < 1) throw_domain("stage count must be >= 1");
  std::vector<std::int64_t> sizes;
  sizes.reserve(static_cast<std::size_t>(stages));
  for (std::int64_t l = 0; l < stages; ++l) {
    auto n = static_cast<std::int64_t>(
        std::ceil(static_cast<double>(n1) * std::pow(growth, l)));
    if (!sizes.empty() && n <= sizes.back()) n = sizes.back() + 1;
    sizes.push_back(n);
  }
  return sizes;
}

ValidationReport validate_plan(const MultistagePlan& plan) {
  ValidationReport report;
  auto violate = [&report](std::string msg) {
    report.violations.push_back(std::move(msg));
  };

  if (!(plan.delta >= kDeltaMin && plan.delta <= kDeltaMax)) {
    violate(fmt::format("delta = {} outside [1e-12, 1 - 1e-12]", plan.delta));
  }

  const auto& sched = plan.schedule;
  const bool finite = sched.kind == ConfidenceSchedule::Kind::Finite;
  if (sched.stages_or_tau < 1) {
    violate(finite ? "stage count s must be >= 1" : "tau must be >= 1");
  }
  if (!(sched.zeta > 0.0)) violate("zeta must be positive");
  if (finite) {
    const double sz = static_cast<double>(sched.stages_or_tau) * sched.zeta;
    if (!(sz < 1.0)) {
      violate(fmt::format("s*zeta = {} >= 1", sz));
    }
  } else {
    const double tz =
        static_cast<double>(sched.stages_or_tau + 1) * sched.zeta;
    if (!(tz < 1.0)) {
      violate(fmt::format("(tau+1)*zeta = {} >= 1", tz));
    }
    if (sched.max_stages <= 0) {
      violate("tailed schedules require a max_stages cap");
    } else if (sched.max_stages < sched.stages_or_tau + 1) {
      violate(fmt::format("max_stages = {} below tau + 1 = {}",
                          sched.max_stages, sched.stages_or_tau + 1));
    }
  }

  switch (plan.goal.kind) {
    case PrecisionGoal::Kind::Absolute:
      if (!(plan.goal.eps_a > 0.0)) violate("absolute eps must be positive");
      break;
    case PrecisionGoal::Kind::Relative:
      if (!(plan.goal.eps_r > 0.0)) violate("relative eps must be positive");
      if (plan.goal.eps_r >= 1.0) {
        violate("relative eps must be < 1 for a meaningful band");
      }
      break;
    case PrecisionGoal::Kind::Mixed:
      if (!(plan.goal.eps_a > 0.0 && plan.goal.eps_r > 0.0)) {
        violate("mixed precision requires positive eps_a and eps_r");
      }
      break;
  }

  if (plan.sample_sizes.empty()) {
    violate("sample size schedule is empty");
  } else {
    if (plan.sample_sizes.front() < 1) violate("sample sizes must be >= 1");
    for (std::size_t i = 1; i < plan.sample_sizes.size(); ++i) {
      if (plan.sample_sizes[i] <= plan.sample_sizes[i - 1]) {
        violate(fmt::format("sample sizes not strictly increasing at stage {}",
                            i + 1));
        break;
      }
    }
    if (finite && static_cast<std::int64_t>(plan.sample_sizes.size()) !=
                      sched.stages_or_tau) {
      violate(fmt::format("finite schedule declares {} stages but {} sizes",
                          sched.stages_or_tau, plan.sample_sizes.size()));
    }
  }

  // Final-stage certainty for finite absolute/mixed goals; mixed uses
  // eps_a since max(eps_a, .) >= eps_a.
  if (report.violations.empty() && finite &&
      plan.goal.kind != PrecisionGoal::Kind::Relative) {
    const double eps = plan.goal.eps_a;
    try {
      const std::int64_t need = min_final_sample_size(
          eps, sched.zeta, plan.delta, plan.support);
      if (plan.sample_sizes.back() < need) {
        violate(fmt::format(
            "final stage size {} below the certainty threshold {}",
            plan.sample_sizes.back(), need));
      }
    } catch (const Error& e) {
      violate(e.what());
    }
  }

  if (plan.goal.kind == PrecisionGoal::Kind::Relative) {
    report.warnings.push_back(
        "relative-precision stopping can never fire when the true mean is "
        "0; the plan terminates only via its stage cap in that case");
  }
  if (finite && plan.goal.kind == PrecisionGoal::Kind::Relative) {
    report.warnings.push_back(
        "finite relative plans carry no final-stage certainty; runs may "
        "end with outcome stage_cap_reached");
  }
  return report;
}

std::int64_t stage_cap(const MultistagePlan& plan) {
  if (plan.schedule.kind == ConfidenceSchedule::Kind::Finite) {
    return plan.schedule.stages_or_tau;
  }
  return plan.schedule.max_stages;
}

std::int64_t stage_sample_size(const MultistagePlan& plan,
                               std::int64_t stage) {
  if (stage < 1) throw_domain("stage index must be >= 1");
  const auto& sizes = plan.sample_sizes;
  if (stage <= static_cast<std::int64_t>(sizes.size())) {
    return sizes[static_cast<std::size_t>(stage - 1)];
  }
  if (plan.schedule.kind == ConfidenceSchedule::Kind::Finite) {
    throw_domain("stage exceeds the finite schedule");
  }
  // Extend the prefix by its trailing geometric ratio (x2 fallback).
  double growth = 2.0;
  if (sizes.size() >= 2) {
    growth = static_cast<double>(sizes.back()) /
             static_cast<double>(sizes[sizes.size() - 2]);
    if (!(growth > 1.0)) growth = 2.0;
  }
  double n = static_cast<double>(sizes.back());
  std::int64_t prev = sizes.back();
  for (std::int64_t l = static_cast<std::int64_t>(sizes.size()); l < stage;
       ++l) {
    n *= growth;
    auto next = static_cast<std::int64_t>(std::ceil(n));
    if (next <= prev) next = prev + 1;
    prev = next;
  }
  return prev;
}

ExecutionTrace execute_plan(const MultistagePlan& plan,
                            const SampleSource& source) {
  const auto report = validate_plan(plan);
  if (!report.valid()) {
    throw Error(Status::Validation,
                "plan failed validation: " + report.violations.front());
  }
  ExecutionTrace trace;
  const std::int64_t cap = stage_cap(plan);
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::int64_t stage = 1; stage <= cap; ++stage) {
    const std::int64_t target = stage_sample_size(plan, stage);
    while (count < target) {
      double x = 0.0;
      if (!source(x)) {
        throw Error(Status::StreamExhausted,
                    fmt::format("stream exhausted at stage {}: needed {} "
                                "samples, got {}",
                                stage, target, count));
      }
      if (!(x >= plan.support.a && x <= plan.support.b)) {
        throw_data(fmt::format("sample {} = {} outside support [{}, {}]",
                               count, x, plan.support.a, plan.support.b));
      }
      sum += x;
      ++count;
    }
    const double mean = sum / static_cast<double>(count);
    const double z =
        std::clamp(plan.support.to_unit(mean), 0.0, 1.0);
    const double dl = stage_delta(plan.schedule, plan.delta, stage);
    const IntervalEstimate interval = bounded_interval(
        UnitSummary(count, z), ConfidenceParams(dl), plan.support,
        /*clamp=*/false);
    const bool stopped = check_stop(plan.goal, mean, interval);
    trace.records.push_back({stage, count, mean, interval, stopped});
    if (stopped) {
      trace.terminal_stage = stage;
      trace.estimate = mean;
      trace.outcome = Outcome::Terminated;
      return trace;
    }
  }
  trace.terminal_stage = cap;
  trace.outcome = Outcome::StageCapReached;
  return trace;
}

}  // namespace massart
