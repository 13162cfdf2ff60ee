#include "massart/massart.h"

#include <cstring>
#include <new>
#include <string>

#include "distributions.hpp"
#include "interval.hpp"
#include "plan.hpp"
#include "serialize.hpp"
#include "sim.hpp"

struct mst_plan {
  massart::MultistagePlan plan;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
mst_status guarded(Fn&& fn) {
  try {
    fn();
    return MST_OK;
  } catch (const massart::Error& e) {
    g_last_error = e.what();
    return static_cast<mst_status>(e.status());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MST_ERR_DOMAIN;
  }
}

massart::PrecisionGoal parse_goal(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::string params =
      colon == std::string::npos ? std::string{} : text.substr(colon + 1);
  auto one = [&](const std::string& p) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(p, &pos);
      if (pos != p.size()) throw std::invalid_argument(p);
      return v;
    } catch (const std::exception&) {
      massart::throw_parse("bad goal parameter '" + p + "' in '" + text +
                           "'");
    }
  };
  if (name == "absolute") return massart::PrecisionGoal::absolute(one(params));
  if (name == "relative") return massart::PrecisionGoal::relative(one(params));
  if (name == "mixed") {
    const auto comma = params.find(',');
    if (comma == std::string::npos) {
      massart::throw_parse("mixed goal needs '<eps_a>,<eps_r>'");
    }
    return massart::PrecisionGoal::mixed(one(params.substr(0, comma)),
                                         one(params.substr(comma + 1)));
  }
  massart::throw_parse("unknown goal '" + name +
                       "'; grammar: absolute:<eps> | relative:<eps> | "
                       "mixed:<eps_a>,<eps_r>");
}

massart::ConfidenceSchedule parse_schedule(const std::string& text,
                                           double zeta,
                                           std::int64_t max_stages) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::int64_t count = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    count = std::stoll(text.substr(colon + 1));
  } catch (const std::exception&) {
    massart::throw_parse("bad schedule '" + text +
                         "'; grammar: finite:<s> | tailed:<tau>");
  }
  massart::ConfidenceSchedule sched;
  if (name == "finite") {
    sched = massart::ConfidenceSchedule::finite(count, zeta);
  } else if (name == "tailed") {
    sched = massart::ConfidenceSchedule::tailed(count, zeta, max_stages);
  } else {
    massart::throw_parse("unknown schedule '" + name +
                         "'; grammar: finite:<s> | tailed:<tau>");
  }
  if (sched.zeta <= 0.0) sched.zeta = massart::default_zeta(sched);
  return sched;
}

}  // namespace

extern "C" {

const char* mst_version(void) { return "1.0.0"; }

const char* mst_last_error(void) { return g_last_error.c_str(); }

void mst_string_free(char* s) { delete[] s; }

mst_status mst_massart_c(double delta, double* out) {
  return guarded([&] { *out = massart::massart_c(delta); });
}

mst_status mst_unit_interval(int64_t n, double unit_mean, double delta,
                             double* lower, double* upper) {
  return guarded([&] {
    const auto [lo, hi] = massart::unit_interval(
        massart::UnitSummary(n, unit_mean), massart::ConfidenceParams(delta));
    *lower = lo;
    *upper = hi;
  });
}

mst_status mst_bounded_interval(int64_t n, double unit_mean, double delta,
                                double a, double b, int clamp, double* lower,
                                double* upper, int* clamped) {
  return guarded([&] {
    const auto iv = massart::bounded_interval(
        massart::UnitSummary(n, unit_mean), massart::ConfidenceParams(delta),
        massart::Support(a, b), clamp != 0);
    *lower = iv.lower;
    *upper = iv.upper;
    if (clamped != nullptr) *clamped = iv.clamped ? 1 : 0;
  });
}

mst_status mst_bounded_interval_samples(const double* samples, int64_t count,
                                        double delta, double a, double b,
                                        int clamp, double* lower,
                                        double* upper, int* clamped,
                                        int64_t* bad_index) {
  if (bad_index != nullptr) *bad_index = -1;
  return guarded([&] {
    const massart::Support support(a, b);
    if (bad_index != nullptr) {
      for (int64_t i = 0; i < count; ++i) {
        if (!(samples[i] >= a && samples[i] <= b)) {
          *bad_index = i;
          break;
        }
      }
    }
    const auto iv = massart::bounded_interval(
        std::span<const double>(samples, static_cast<std::size_t>(count)),
        delta, support, clamp != 0);
    *lower = iv.lower;
    *upper = iv.upper;
    if (clamped != nullptr) *clamped = iv.clamped ? 1 : 0;
  });
}

mst_status mst_epsilon_root(double t, int64_t n, double delta, double* out) {
  return guarded([&] {
    *out = massart::epsilon_root(t, n, massart::ConfidenceParams(delta));
  });
}

mst_status mst_t_map(double z, int64_t n, double delta, double* out) {
  return guarded([&] {
    *out = massart::t_map(z, n, massart::ConfidenceParams(delta));
  });
}

mst_status mst_hoeffding_interval(int64_t n, double unit_mean, double delta,
                                  double* lower, double* upper) {
  return guarded([&] {
    const auto [lo, hi] = massart::hoeffding_interval(
        massart::UnitSummary(n, unit_mean), delta);
    *lower = lo;
    *upper = hi;
  });
}

mst_status mst_max_halfwidth(int64_t n, double delta, double* out) {
  return guarded([&] {
    *out = massart::max_halfwidth(n, massart::ConfidenceParams(delta));
  });
}

mst_status mst_min_final_sample_size(double eps, double zeta, double delta,
                                     double a, double b, int64_t* out,
                                     int* adjusted) {
  return guarded([&] {
    bool bumped = false;
    *out = massart::min_final_sample_size(eps, zeta, delta,
                                          massart::Support(a, b), &bumped);
    if (adjusted != nullptr) *adjusted = bumped ? 1 : 0;
  });
}

mst_status mst_stage_delta(const char* schedule, double zeta, double delta,
                           int64_t stage, double* out) {
  return guarded([&] {
    auto sched = parse_schedule(schedule, zeta, /*max_stages=*/0);
    *out = massart::stage_delta(sched, delta, stage);
  });
}

mst_status mst_check_stop(const char* goal, double estimate, double lower,
                          double upper, int* stop) {
  return guarded([&] {
    const auto g = parse_goal(goal);
    *stop = massart::check_stop(g, estimate,
                                massart::IntervalEstimate{lower, upper, false})
                ? 1
                : 0;
  });
}

mst_status mst_plan_create(const char* goal, const char* schedule,
                           double zeta, double delta, double a, double b,
                           int64_t n1, double growth, int64_t max_stages,
                           mst_plan** out) {
  *out = nullptr;
  return guarded([&] {
    massart::MultistagePlan plan;
    plan.support = massart::Support(a, b);
    plan.delta = delta;
    plan.goal = parse_goal(goal);
    plan.schedule = parse_schedule(schedule, zeta, max_stages);
    const std::int64_t stages =
        plan.schedule.kind == massart::ConfidenceSchedule::Kind::Finite
            ? plan.schedule.stages_or_tau
            : plan.schedule.stages_or_tau + 1;
    plan.sample_sizes = massart::build_schedule(n1, growth, stages);
    if (plan.schedule.kind == massart::ConfidenceSchedule::Kind::Finite &&
        plan.goal.kind != massart::PrecisionGoal::Kind::Relative) {
      const std::int64_t need = massart::min_final_sample_size(
          plan.goal.eps_a, plan.schedule.zeta, plan.delta, plan.support);
      auto& last = plan.sample_sizes.back();
      if (last < need) last = need;
      if (plan.sample_sizes.size() >= 2 &&
          last <= plan.sample_sizes[plan.sample_sizes.size() - 2]) {
        last = plan.sample_sizes[plan.sample_sizes.size() - 2] + 1;
      }
    }
    *out = new mst_plan{std::move(plan)};
  });
}

mst_status mst_plan_parse(const char* json, mst_plan** out) {
  *out = nullptr;
  return guarded([&] {
    massart::json doc;
    try {
      doc = massart::json::parse(json);
    } catch (const std::exception& e) {
      massart::throw_parse(std::string("invalid JSON: ") + e.what());
    }
    *out = new mst_plan{massart::plan_from_json(doc)};
  });
}

void mst_plan_free(mst_plan* plan) { delete plan; }

mst_status mst_plan_to_json(const mst_plan* plan, char** out) {
  return guarded(
      [&] { *out = dup_string(massart::plan_to_json(plan->plan).dump(2)); });
}

mst_status mst_plan_validate(const mst_plan* plan, char** report_json,
                             int* valid) {
  return guarded([&] {
    const auto report = massart::validate_plan(plan->plan);
    if (report_json != nullptr) {
      *report_json = dup_string(massart::validation_to_json(report).dump(2));
    }
    if (valid != nullptr) *valid = report.valid() ? 1 : 0;
  });
}

mst_status mst_plan_run_samples(const mst_plan* plan, const double* samples,
                                int64_t count, char** trace_json) {
  return guarded([&] {
    int64_t cursor = 0;
    const auto trace =
        massart::execute_plan(plan->plan, [&](double& x) {
          if (cursor >= count) return false;
          x = samples[cursor++];
          return true;
        });
    *trace_json = dup_string(massart::trace_to_json(trace).dump(2));
  });
}

mst_status mst_plan_run_dist(const mst_plan* plan, const char* dist,
                             uint64_t seed, char** trace_json) {
  return guarded([&] {
    const auto spec =
        massart::DistributionSpec::parse(dist, plan->plan.support);
    massart::SampleStream stream(seed, 0);
    const auto trace = massart::execute_plan(plan->plan, [&](double& x) {
      x = spec.draw(stream);
      return true;
    });
    *trace_json = dup_string(massart::trace_to_json(trace).dump(2));
  });
}

mst_status mst_sim_coverage(const char* dist, double a, double b, int64_t n,
                            double delta, int64_t trials, uint64_t seed,
                            int threads, char** report_json,
                            int* conservative) {
  return guarded([&] {
    const auto spec =
        massart::DistributionSpec::parse(dist, massart::Support(a, b));
    const auto report =
        massart::coverage_experiment(spec, n, delta, trials, seed, threads);
    *report_json = dup_string(massart::coverage_to_json(report).dump(2));
    if (conservative != nullptr) {
      *conservative = report.conservative() ? 1 : 0;
    }
  });
}

mst_status mst_sim_plan(const char* dist, const mst_plan* plan,
                        int64_t trials, uint64_t seed, int threads,
                        char** report_json, int* conservative) {
  return guarded([&] {
    const auto spec =
        massart::DistributionSpec::parse(dist, plan->plan.support);
    const auto report = massart::plan_experiment(spec, plan->plan, trials,
                                                 seed, threads);
    *report_json = dup_string(massart::plan_report_to_json(report).dump(2));
    if (conservative != nullptr) {
      *conservative = report.conservative() ? 1 : 0;
    }
  });
}

}  // extern "C"
