#ifndef MASSART_SERIALIZE_HPP
#define MASSART_SERIALIZE_HPP

#include <json.hpp>

#include "plan.hpp"
#include "sim.hpp"

namespace massart {

using json = nlohmann::ordered_json;

json plan_to_json(const MultistagePlan& plan);

// Accepts either a bare plan object or a CLI output document wrapping
// one under result.plan / result.
MultistagePlan plan_from_json(const json& doc);

json validation_to_json(const ValidationReport& report);
json trace_to_json(const ExecutionTrace& trace);
json coverage_to_json(const CoverageReport& report);
json plan_report_to_json(const PlanReport& report);

}  // namespace massart

#endif
