#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace massart {

namespace {

constexpr std::int64_t kBlock = 256;

int resolve_threads(int threads, std::int64_t trials) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  const auto blocks = (trials + kBlock - 1) / kBlock;
  return static_cast<int>(std::min<std::int64_t>(threads, blocks));
}

// Runs fn(trial) for every trial in blocks claimed off a shared counter.
// Per-block tallies are merged in block order afterwards, so the result
// does not depend on the thread count.
template <typename Tally, typename PerTrial>
std::vector<Tally> run_blocks(std::int64_t trials, int threads,
                              const PerTrial& fn) {
  const std::int64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<Tally> tallies(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t blk = next.fetch_add(1);
      if (blk >= blocks) return;
      const std::int64_t lo = blk * kBlock;
      const std::int64_t hi = std::min(trials, lo + kBlock);
      Tally& tally = tallies[static_cast<std::size_t>(blk)];
      for (std::int64_t trial = lo; trial < hi; ++trial) {
        fn(trial, tally);
      }
    }
  };
  const int workers = resolve_threads(threads, trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return tallies;
}

}  // namespace

bool goal_event(const PrecisionGoal& goal, double estimate, double truth) {
  const double err = std::abs(estimate - truth);
  switch (goal.kind) {
    case PrecisionGoal::Kind::Absolute:
      return err < goal.eps_a;
    case PrecisionGoal::Kind::Relative:
      return err < goal.eps_r * std::abs(truth);
    case PrecisionGoal::Kind::Mixed:
      return err < goal.eps_a || err < goal.eps_r * std::abs(truth);
  }
  throw_domain("unreachable goal kind");
}

CoverageReport coverage_experiment(const DistributionSpec& spec,
                                   std::int64_t n, double delta,
                                   std::int64_t trials, std::uint64_t seed,
                                   int threads) {
  if (trials < 1) throw_domain("trials must be >= 1");
  if (n < 1) throw_domain("sample size must be >= 1");
  const ConfidenceParams params(delta);
  const Support support = spec.support;
  const double mu = spec.exact_mean();

  struct Tally {
    std::int64_t hits = 0;
  };
  auto tallies = run_blocks<Tally>(
      trials, threads, [&](std::int64_t trial, Tally& tally) {
        SampleStream stream(seed, static_cast<std::uint64_t>(trial));
        double sum = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
          sum += support.to_unit(spec.draw(stream));
        }
        const double z =
            std::clamp(sum / static_cast<double>(n), 0.0, 1.0);
        const IntervalEstimate iv = bounded_interval(
            UnitSummary(n, z), params, support, /*clamp=*/false);
        if (iv.lower < mu && mu < iv.upper) ++tally.hits;
      });

  CoverageReport report;
  report.trials = trials;
  for (const auto& t : tallies) report.hits += t.hits;
  report.empirical_coverage =
      static_cast<double>(report.hits) / static_cast<double>(trials);
  report.std_error = std::sqrt(report.empirical_coverage *
                               (1.0 - report.empirical_coverage) /
                               static_cast<double>(trials));
  report.nominal = 1.0 - delta;
  return report;
}

PlanReport plan_experiment(const DistributionSpec& spec,
                           const MultistagePlan& plan, std::int64_t trials,
                           std::uint64_t seed, int threads) {
  if (trials < 1) throw_domain("trials must be >= 1");
  const auto validation = validate_plan(plan);
  if (!validation.valid()) {
    throw Error(Status::Validation,
                "plan failed validation: " + validation.violations.front());
  }
  const double truth = spec.exact_mean();

  struct Tally {
    std::int64_t successes = 0;
    std::int64_t total_samples = 0;
    std::map<std::int64_t, std::int64_t> stages;
    std::int64_t nonterminated = 0;
  };
  auto tallies = run_blocks<Tally>(
      trials, threads, [&](std::int64_t trial, Tally& tally) {
        SampleStream stream(seed, static_cast<std::uint64_t>(trial));
        const auto trace = execute_plan(plan, [&](double& x) {
          x = spec.draw(stream);
          return true;
        });
        const auto& last = trace.records.back();
        tally.total_samples += last.n;
        if (trace.outcome == Outcome::Terminated) {
          ++tally.stages[trace.terminal_stage];
          if (goal_event(plan.goal, *trace.estimate, truth)) {
            ++tally.successes;
          }
        } else {
          ++tally.nonterminated;
        }
      });

  PlanReport report;
  report.trials = trials;
  for (const auto& t : tallies) {
    report.successes += t.successes;
    report.total_samples += t.total_samples;
    report.nonterminated += t.nonterminated;
    for (const auto& [stage, count] : t.stages) {
      report.stage_histogram[stage] += count;
    }
  }
  report.success_rate =
      static_cast<double>(report.successes) / static_cast<double>(trials);
  report.std_error =
      std::sqrt(report.success_rate * (1.0 - report.success_rate) /
                static_cast<double>(trials));
  report.nominal = 1.0 - plan.delta;
  report.mean_samples = static_cast<double>(report.total_samples) /
                        static_cast<double>(trials);
  return report;
}

}  // namespace massart
