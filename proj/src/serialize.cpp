#include "serialize.hpp"

namespace massart {

namespace {

json goal_to_json(const PrecisionGoal& goal) {
  switch (goal.kind) {
    case PrecisionGoal::Kind::Absolute:
      return {{"type", "absolute"}, {"eps", goal.eps_a}};
    case PrecisionGoal::Kind::Relative:
      return {{"type", "relative"}, {"eps", goal.eps_r}};
    case PrecisionGoal::Kind::Mixed:
      return {{"type", "mixed"}, {"eps_a", goal.eps_a}, {"eps_r", goal.eps_r}};
  }
  throw_domain("unreachable goal kind");
}

json schedule_to_json(const ConfidenceSchedule& sched) {
  if (sched.kind == ConfidenceSchedule::Kind::Finite) {
    return {{"type", "finite"},
            {"s", sched.stages_or_tau},
            {"zeta", sched.zeta}};
  }
  return {{"type", "tailed"},
          {"tau", sched.stages_or_tau},
          {"zeta", sched.zeta},
          {"max_stages", sched.max_stages}};
}

PrecisionGoal goal_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "absolute") {
    return PrecisionGoal::absolute(j.at("eps").get<double>());
  }
  if (type == "relative") {
    return PrecisionGoal::relative(j.at("eps").get<double>());
  }
  if (type == "mixed") {
    return PrecisionGoal::mixed(j.at("eps_a").get<double>(),
                                j.at("eps_r").get<double>());
  }
  throw_parse("unknown goal type '" + type + "'");
}

ConfidenceSchedule schedule_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  const double zeta = j.at("zeta").get<double>();
  if (type == "finite") {
    return ConfidenceSchedule::finite(j.at("s").get<std::int64_t>(), zeta);
  }
  if (type == "tailed") {
    return ConfidenceSchedule::tailed(
        j.at("tau").get<std::int64_t>(), zeta,
        j.value("max_stages", std::int64_t{0}));
  }
  throw_parse("unknown schedule type '" + type + "'");
}

json interval_to_json(const IntervalEstimate& iv) {
  return {{"lower", iv.lower}, {"upper", iv.upper}, {"clamped", iv.clamped}};
}

}  // namespace

json plan_to_json(const MultistagePlan& plan) {
  return {{"support", {{"a", plan.support.a}, {"b", plan.support.b}}},
          {"delta", plan.delta},
          {"goal", goal_to_json(plan.goal)},
          {"schedule", schedule_to_json(plan.schedule)},
          {"sample_sizes", plan.sample_sizes}};
}

MultistagePlan plan_from_json(const json& doc) {
  try {
    const json* j = &doc;
    if (!doc.contains("support") && doc.contains("result")) {
      const json& result = doc.at("result");
      j = result.contains("plan") ? &result.at("plan") : &result;
    }
    MultistagePlan plan;
    plan.support = Support(j->at("support").at("a").get<double>(),
                           j->at("support").at("b").get<double>());
    plan.delta = j->at("delta").get<double>();
    plan.goal = goal_from_json(j->at("goal"));
    plan.schedule = schedule_from_json(j->at("schedule"));
    plan.sample_sizes =
        j->at("sample_sizes").get<std::vector<std::int64_t>>();
    return plan;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw_parse(std::string("malformed plan document: ") + e.what());
  }
}

json validation_to_json(const ValidationReport& report) {
  return {{"valid", report.valid()},
          {"violations", report.violations},
          {"warnings", report.warnings}};
}

json trace_to_json(const ExecutionTrace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"stage", r.stage},
                       {"n", r.n},
                       {"mean", r.mean},
                       {"interval", interval_to_json(r.interval)},
                       {"stopped", r.stopped}});
  }
  json j = {{"records", std::move(records)},
            {"terminal_stage", trace.terminal_stage},
            {"outcome", trace.outcome == Outcome::Terminated
                            ? "terminated"
                            : "stage_cap_reached"}};
  if (trace.estimate.has_value()) {
    j["estimate"] = *trace.estimate;
  } else {
    j["estimate"] = nullptr;
  }
  return j;
}

json coverage_to_json(const CoverageReport& report) {
  return {{"trials", report.trials},
          {"hits", report.hits},
          {"empirical_coverage", report.empirical_coverage},
          {"std_error", report.std_error},
          {"nominal", report.nominal},
          {"conservative", report.conservative()}};
}

json plan_report_to_json(const PlanReport& report) {
  json hist = json::object();
  for (const auto& [stage, count] : report.stage_histogram) {
    hist[std::to_string(stage)] = count;
  }
  return {{"trials", report.trials},
          {"successes", report.successes},
          {"success_rate", report.success_rate},
          {"std_error", report.std_error},
          {"nominal", report.nominal},
          {"total_samples", report.total_samples},
          {"mean_samples", report.mean_samples},
          {"stage_histogram", std::move(hist)},
          {"nonterminated", report.nonterminated},
          {"conservative", report.conservative()}};
}

}  // namespace massart
