// Command-line front end over the massart C API.  One self-describing
// JSON document per invocation on stdout; human-readable summary on
// stderr; machines should parse stdout only.
//
// Exit codes: 0 success, 2 data error, 3 validation failure, 4 stream
// exhaustion, 5 threshold failure, 64 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "massart/massart.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitValidation = 3;
constexpr int kExitStream = 4;
constexpr int kExitThreshold = 5;
constexpr int kExitUsage = 64;

int exit_code_for(mst_status status) {
  switch (status) {
    case MST_OK:
      return kExitOk;
    case MST_ERR_DATA:
      return kExitData;
    case MST_ERR_VALIDATION:
      return kExitValidation;
    case MST_ERR_STREAM:
      return kExitStream;
    case MST_ERR_DOMAIN:
    case MST_ERR_PARSE:
      return kExitUsage;
  }
  return kExitUsage;
}

[[noreturn]] void fail(mst_status status) {
  std::cerr << "error: " << mst_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(mst_status status) {
  if (status != MST_OK) fail(status);
}

struct PlanHandle {
  mst_plan* plan = nullptr;
  ~PlanHandle() { mst_plan_free(plan); }
};

std::string take_string(char* s) {
  std::string out(s);
  mst_string_free(s);
  return out;
}

// One real per line; '#' comments and blank lines are skipped.
std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open input file '" << path << "'\n";
    std::exit(kExitData);
  }
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(first, last - first + 1);
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      std::cerr << "error: malformed value '" << tok << "' at " << path << ":"
                << lineno << "\n";
      std::exit(kExitData);
    }
  }
  return values;
}

std::pair<double, double> parse_bounds(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    return {std::stod(text.substr(0, comma)),
            std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    std::cerr << "error: --bounds expects '<a>,<b>', got '" << text << "'\n";
    std::exit(kExitUsage);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RNG_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: RNG_SEED is not an integer\n";
      std::exit(kExitUsage);
    }
  }
  return 0;
}

void emit(const json& command, const json& result, const std::string& note) {
  json doc = {{"schema_version", "1"},
              {"command", command},
              {"result", result}};
  std::cout << doc.dump(2) << "\n";
  if (!note.empty()) std::cerr << note << "\n";
}

// --- ci ---

struct CiArgs {
  double delta = 0.0;
  std::string input;
  std::optional<std::int64_t> n;
  std::optional<double> mean;
  std::string bounds = "0,1";
  bool raw = false;
};

int run_ci(const CiArgs& args) {
  const auto [a, b] = parse_bounds(args.bounds);
  double lower = 0.0, upper = 0.0;
  int clamped = 0;
  std::int64_t n = 0;
  double mean = 0.0;
  if (!args.input.empty()) {
    const auto samples = read_samples(args.input);
    if (samples.empty()) {
      std::cerr << "error: input file holds no samples\n";
      std::exit(kExitData);
    }
    std::int64_t bad = -1;
    const mst_status st = mst_bounded_interval_samples(
        samples.data(), static_cast<std::int64_t>(samples.size()), args.delta,
        a, b, args.raw ? 0 : 1, &lower, &upper, &clamped, &bad);
    if (st == MST_ERR_DATA && bad >= 0) {
      std::cerr << "error: sample " << bad << " = " << samples[bad]
                << " outside bounds [" << a << ", " << b << "]\n";
      std::exit(kExitData);
    }
    check(st);
    n = static_cast<std::int64_t>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    mean = sum / static_cast<double>(n);
  } else {
    n = *args.n;
    mean = *args.mean;
    const double unit_mean = (mean - a) / (b - a);
    if (!(unit_mean >= 0.0 && unit_mean <= 1.0)) {
      std::cerr << "error: mean " << mean << " outside bounds [" << a << ", "
                << b << "]\n";
      std::exit(kExitData);
    }
    check(mst_bounded_interval(n, unit_mean, args.delta, a, b,
                               args.raw ? 0 : 1, &lower, &upper, &clamped));
  }
  const double unit_mean = (mean - a) / (b - a);
  double hlo = 0.0, hhi = 0.0;
  check(mst_hoeffding_interval(n, std::clamp(unit_mean, 0.0, 1.0), args.delta,
                               &hlo, &hhi));
  json command = {{"name", "ci"},      {"delta", args.delta},
                  {"bounds", {{"a", a}, {"b", b}}},
                  {"n", n},            {"mean", mean},
                  {"raw", args.raw}};
  if (!args.input.empty()) command["input"] = args.input;
  const json result = {
      {"interval",
       {{"lower", lower}, {"upper", upper}, {"clamped", clamped != 0}}},
      {"hoeffding",
       {{"lower", a + (b - a) * hlo}, {"upper", a + (b - a) * hhi}}}};
  std::ostringstream note;
  note << "ci: n=" << n << " mean=" << mean << " -> [" << lower << ", "
       << upper << "] at confidence " << 1.0 - args.delta;
  emit(command, result, note.str());
  return kExitOk;
}

// --- plan build ---

struct PlanBuildArgs {
  std::string goal;
  double delta = 0.0;
  std::string schedule;
  double zeta = -1.0;
  std::int64_t n1 = 100;
  double growth = 2.0;
  std::string bounds = "0,1";
  std::int64_t max_stages = 0;
};

int run_plan_build(const PlanBuildArgs& args) {
  const auto [a, b] = parse_bounds(args.bounds);
  PlanHandle handle;
  check(mst_plan_create(args.goal.c_str(), args.schedule.c_str(), args.zeta,
                        args.delta, a, b, args.n1, args.growth,
                        args.max_stages, &handle.plan));
  char* report_cstr = nullptr;
  int valid = 0;
  check(mst_plan_validate(handle.plan, &report_cstr, &valid));
  const json report = json::parse(take_string(report_cstr));
  char* plan_cstr = nullptr;
  check(mst_plan_to_json(handle.plan, &plan_cstr));
  const json plan = json::parse(take_string(plan_cstr));

  json command = {{"name", "plan build"},   {"goal", args.goal},
                  {"delta", args.delta},    {"schedule", args.schedule},
                  {"zeta", args.zeta},      {"n1", args.n1},
                  {"growth", args.growth},  {"bounds", {{"a", a}, {"b", b}}},
                  {"max_stages", args.max_stages}};
  const json result = {{"plan", plan}, {"validation", report}};
  if (valid == 0) {
    for (const auto& v : report.at("violations")) {
      std::cerr << "violation: " << v.get<std::string>() << "\n";
    }
    emit(command, result, "plan build: invalid plan");
    return kExitValidation;
  }
  for (const auto& w : report.at("warnings")) {
    std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
  emit(command, result, "plan build: ok");
  return kExitOk;
}

// --- plan run ---

struct PlanRunArgs {
  std::string plan_path;
  std::string input;
  std::string dist;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

PlanHandle load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open plan file '" << path << "'\n";
    std::exit(kExitData);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  PlanHandle handle;
  check(mst_plan_parse(buf.str().c_str(), &handle.plan));
  return handle;
}

int run_plan_run(const PlanRunArgs& args) {
  PlanHandle handle = load_plan(args.plan_path);
  char* trace_cstr = nullptr;
  json command = {{"name", "plan run"}, {"plan", args.plan_path}};
  if (!args.input.empty()) {
    const auto samples = read_samples(args.input);
    command["input"] = args.input;
    check(mst_plan_run_samples(handle.plan, samples.data(),
                               static_cast<std::int64_t>(samples.size()),
                               &trace_cstr));
  } else {
    const std::uint64_t seed = args.seed_set ? args.seed : default_seed();
    command["dist"] = args.dist;
    command["seed"] = seed;
    check(mst_plan_run_dist(handle.plan, args.dist.c_str(), seed,
                            &trace_cstr));
  }
  const json trace = json::parse(take_string(trace_cstr));
  std::ostringstream note;
  note << "plan run: outcome=" << trace.at("outcome").get<std::string>()
       << " terminal_stage=" << trace.at("terminal_stage");
  emit(command, trace, note.str());
  return kExitOk;
}

// --- simulate ---

struct SimCoverageArgs {
  std::string dist;
  std::int64_t n = 0;
  double delta = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string bounds = "0,1";
  int threads = 0;
};

int run_sim_coverage(const SimCoverageArgs& args) {
  const auto [a, b] = parse_bounds(args.bounds);
  const std::uint64_t seed = args.seed_set ? args.seed : default_seed();
  char* report_cstr = nullptr;
  int conservative = 0;
  check(mst_sim_coverage(args.dist.c_str(), a, b, args.n, args.delta,
                         args.trials, seed, args.threads, &report_cstr,
                         &conservative));
  const json report = json::parse(take_string(report_cstr));
  // Thread count is deliberately not echoed: output is identical for any
  // internal parallelism.
  const json command = {{"name", "simulate coverage"},
                        {"dist", args.dist},
                        {"bounds", {{"a", a}, {"b", b}}},
                        {"n", args.n},
                        {"delta", args.delta},
                        {"trials", args.trials},
                        {"seed", seed}};
  std::ostringstream note;
  note << "simulate coverage: " << report.at("empirical_coverage")
       << " vs nominal " << report.at("nominal");
  emit(command, report, note.str());
  return conservative != 0 ? kExitOk : kExitThreshold;
}

struct SimPlanArgs {
  std::string dist;
  std::string plan_path;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

int run_sim_plan(const SimPlanArgs& args) {
  PlanHandle handle = load_plan(args.plan_path);
  const std::uint64_t seed = args.seed_set ? args.seed : default_seed();
  char* report_cstr = nullptr;
  int conservative = 0;
  check(mst_sim_plan(args.dist.c_str(), handle.plan, args.trials, seed,
                     args.threads, &report_cstr, &conservative));
  const json report = json::parse(take_string(report_cstr));
  const json command = {{"name", "simulate plan"},
                        {"dist", args.dist},
                        {"plan", args.plan_path},
                        {"trials", args.trials},
                        {"seed", seed}};
  std::ostringstream note;
  note << "simulate plan: success_rate=" << report.at("success_rate")
       << " mean_samples=" << report.at("mean_samples");
  emit(command, report, note.str());
  return conservative != 0 ? kExitOk : kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Massart confidence intervals and multistage estimation"};
  app.require_subcommand(1);

  CiArgs ci;
  auto* ci_cmd = app.add_subcommand("ci", "Confidence interval for a mean");
  ci_cmd->add_option("--delta", ci.delta, "Confidence parameter")->required();
  auto* ci_input = ci_cmd->add_option("--input", ci.input,
                                      "Sample file, one value per line");
  auto* ci_n = ci_cmd->add_option("--n", ci.n, "Sample count");
  auto* ci_mean = ci_cmd->add_option("--mean", ci.mean, "Sample mean");
  ci_cmd->add_option("--bounds", ci.bounds, "Support as a,b (default 0,1)");
  ci_cmd->add_flag("--raw", ci.raw, "Report unclamped limits");
  ci_n->excludes(ci_input);
  ci_mean->excludes(ci_input);
  ci_n->needs(ci_mean);
  ci_mean->needs(ci_n);

  auto* plan_cmd = app.add_subcommand("plan", "Multistage sampling plans");
  plan_cmd->require_subcommand(1);

  PlanBuildArgs pb;
  auto* pb_cmd = plan_cmd->add_subcommand("build", "Build a validated plan");
  pb_cmd->add_option("--goal", pb.goal,
                     "absolute:<eps> | relative:<eps> | mixed:<ea>,<er>")
      ->required();
  pb_cmd->add_option("--delta", pb.delta, "Confidence parameter")->required();
  pb_cmd->add_option("--schedule", pb.schedule, "finite:<s> | tailed:<tau>")
      ->required();
  pb_cmd->add_option("--zeta", pb.zeta,
                     "Per-stage budget multiplier (default 1/(2s) or "
                     "1/(2(tau+1)))");
  pb_cmd->add_option("--n1", pb.n1, "First-stage sample size (default 100)");
  pb_cmd->add_option("--growth", pb.growth,
                     "Geometric growth factor (default 2)");
  pb_cmd->add_option("--bounds", pb.bounds, "Support as a,b (default 0,1)");
  pb_cmd->add_option("--max-stages", pb.max_stages,
                     "Stage cap (required for tailed schedules)");

  PlanRunArgs pr;
  auto* pr_cmd = plan_cmd->add_subcommand("run", "Execute a plan");
  pr_cmd->add_option("--plan", pr.plan_path, "Plan document")->required();
  auto* pr_input =
      pr_cmd->add_option("--input", pr.input, "Sample file used as stream");
  auto* pr_dist = pr_cmd->add_option("--dist", pr.dist,
                                     "Synthetic source distribution");
  auto* pr_seed = pr_cmd->add_option("--seed", pr.seed, "Stream seed");
  pr_dist->excludes(pr_input);
  pr_seed->excludes(pr_input);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo certification");
  sim_cmd->require_subcommand(1);

  SimCoverageArgs sc;
  auto* sc_cmd =
      sim_cmd->add_subcommand("coverage", "Interval coverage experiment");
  sc_cmd->add_option("--dist", sc.dist, "Distribution spec")->required();
  sc_cmd->add_option("--n", sc.n, "Samples per trial")->required();
  sc_cmd->add_option("--delta", sc.delta, "Confidence parameter")->required();
  sc_cmd->add_option("--trials", sc.trials, "Trial count")->required();
  auto* sc_seed = sc_cmd->add_option("--seed", sc.seed, "Master seed");
  sc_cmd->add_option("--bounds", sc.bounds, "Support as a,b (default 0,1)");
  sc_cmd->add_option("--threads", sc.threads, "Worker threads (0 = auto)");

  SimPlanArgs sp;
  auto* sp_cmd =
      sim_cmd->add_subcommand("plan", "Plan success experiment");
  sp_cmd->add_option("--dist", sp.dist, "Distribution spec")->required();
  sp_cmd->add_option("--plan", sp.plan_path, "Plan document")->required();
  sp_cmd->add_option("--trials", sp.trials, "Trial count")->required();
  auto* sp_seed = sp_cmd->add_option("--seed", sp.seed, "Master seed");
  sp_cmd->add_option("--threads", sp.threads, "Worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (ci_cmd->parsed()) {
    if (ci.input.empty() && (!ci.n.has_value() || !ci.mean.has_value())) {
      std::cerr << "error: ci needs --input or both --n and --mean\n"
                << ci_cmd->help();
      return kExitUsage;
    }
    return run_ci(ci);
  }
  if (pb_cmd->parsed()) return run_plan_build(pb);
  if (pr_cmd->parsed()) {
    if (pr.input.empty() && pr.dist.empty()) {
      std::cerr << "error: plan run needs --input or --dist\n"
                << pr_cmd->help();
      return kExitUsage;
    }
    pr.seed_set = pr_seed->count() > 0;
    return run_plan_run(pr);
  }
  if (sc_cmd->parsed()) {
    sc.seed_set = sc_seed->count() > 0;
    return run_sim_coverage(sc);
  }
  if (sp_cmd->parsed()) {
    sp.seed_set = sp_seed->count() > 0;
    return run_sim_plan(sp);
  }
  return kExitUsage;
}
