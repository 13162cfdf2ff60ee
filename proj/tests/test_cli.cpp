#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "interval.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(MASSART_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/massart_cli_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("ci from a summary") {
  const auto r = run("ci --n 100 --mean 0.3 --delta 0.05");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("schema_version") == "1");
  const auto& iv = doc.at("result").at("interval");
  CHECK(iv.at("lower").get<double>() ==
        doctest::Approx(0.18667471849826427).epsilon(1e-12));
  CHECK(iv.at("upper").get<double>() ==
        doctest::Approx(0.43237467489348854).epsilon(1e-12));
}

TEST_CASE("ci clamps the mean-zero lower limit") {
  const auto r = run("ci --n 10 --mean 0 --delta 0.05");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  const auto& iv = doc.at("result").at("interval");
  const double c = massart::massart_c(0.05);
  CHECK(iv.at("lower").get<double>() == 0.0);
  CHECK(iv.at("upper").get<double>() ==
        doctest::Approx(6.0 / (4.0 + 10.0 * c)).epsilon(1e-13));
}

TEST_CASE("ci numeric fidelity through print and re-parse") {
  const auto r = run("ci --n 137 --mean 0.2718281828459045 --delta 0.0771");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  const auto iv = massart::bounded_interval(
      massart::UnitSummary(137, 0.2718281828459045),
      massart::ConfidenceParams(0.0771), massart::Support(0.0, 1.0), true);
  CHECK(doc.at("result").at("interval").at("lower").get<double>() ==
        iv.lower);
  CHECK(doc.at("result").at("interval").at("upper").get<double>() ==
        iv.upper);
}

TEST_CASE("ci from a file on shifted bounds") {
  const auto path = temp_file("const4.txt",
                              "# all fours\n4\n4\n\n4\n4 # trailing\n");
  const auto r = run("ci --input " + path + " --delta 0.1 --bounds 2,6");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  const auto& iv = doc.at("result").at("interval");
  const double lo = iv.at("lower").get<double>();
  const double hi = iv.at("upper").get<double>();
  CHECK(hi - 4.0 == doctest::Approx(4.0 - lo).epsilon(1e-12));
}

TEST_CASE("ci error paths") {
  CHECK(run("ci --n 100 --mean 0.3").exit_code == 64);  // missing --delta
  const auto bad = temp_file("bad.txt", "0.5\nnot-a-number\n0.2\n");
  CHECK(run("ci --input " + bad + " --delta 0.05").exit_code == 2);
  const auto outside = temp_file("outside.txt", "0.5\n1.5\n");
  CHECK(run("ci --input " + outside + " --delta 0.05").exit_code == 2);
  CHECK(run("ci --n 10 --mean 7 --delta 0.05").exit_code == 2);
}

TEST_CASE("plan build, run, and the round trip") {
  const auto build = run(
      "plan build --goal absolute:0.05 --delta 0.05 --schedule finite:5 "
      "--zeta 0.1 --n1 100 --growth 2 --bounds 0,1");
  REQUIRE(build.exit_code == 0);
  const json doc = json::parse(build.out);
  const auto& sizes = doc.at("result").at("plan").at("sample_sizes");
  CHECK(sizes.back().get<long long>() >= 1199);

  const auto plan_path = temp_file("plan.json", build.out);
  const auto run1 =
      run("plan run --plan " + plan_path + " --dist bernoulli:0.3 --seed 42");
  REQUIRE(run1.exit_code == 0);
  const auto run2 =
      run("plan run --plan " + plan_path + " --dist bernoulli:0.3 --seed 42");
  CHECK(run1.out == run2.out);

  const json trace = json::parse(run1.out);
  CHECK(trace.at("result").at("outcome") == "terminated");

  // Zero-variance source: single deterministic path.
  const auto pm =
      run("plan run --plan " + plan_path + " --dist pointmass:0.5 --seed 1");
  REQUIRE(pm.exit_code == 0);
  const json pm_trace = json::parse(pm.out);
  CHECK(pm_trace.at("result").at("estimate").get<double>() == 0.5);

  // Re-serialized plan is semantically identical.
  const auto reserialized = temp_file(
      "plan2.json", doc.at("result").at("plan").dump(2));
  const auto run3 = run("plan run --plan " + reserialized +
                        " --dist bernoulli:0.3 --seed 42");
  REQUIRE(run3.exit_code == 0);
  CHECK(json::parse(run3.out).at("result") ==
        json::parse(run1.out).at("result"));
}

TEST_CASE("plan build validation failures exit 3") {
  CHECK(run("plan build --goal absolute:0.05 --delta 0.05 "
            "--schedule finite:5 --zeta 0.25")
            .exit_code == 3);
  CHECK(run("plan build --goal relative:0.1 --delta 0.05 "
            "--schedule tailed:4")
            .exit_code == 3);  // no --max-stages cap
}

TEST_CASE("plan run exhausts a short input stream with exit 4") {
  const auto build = run(
      "plan build --goal absolute:0.1 --delta 0.05 --schedule finite:3 "
      "--n1 50 --growth 2");
  REQUIRE(build.exit_code == 0);
  const auto plan_path = temp_file("plan3.json", build.out);
  const auto short_path = temp_file("short.txt", "0.5\n0.25\n0.75\n");
  CHECK(run("plan run --plan " + plan_path + " --input " + short_path)
            .exit_code == 4);
}

TEST_CASE("simulate coverage") {
  const auto r = run(
      "simulate coverage --dist pointmass:0.5 --n 10 --delta 0.05 "
      "--trials 1000 --seed 7");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("result").at("empirical_coverage") == 1.0);

  CHECK(run("simulate coverage --dist nope:1 --n 10 --delta 0.05 "
            "--trials 10 --seed 7")
            .exit_code == 64);
}

TEST_CASE("simulate output is identical across thread counts") {
  const std::string base =
      "simulate coverage --dist bernoulli:0.3 --n 50 --delta 0.05 "
      "--trials 4000 --seed 11 --threads ";
  const auto r1 = run(base + "1");
  const auto r4 = run(base + "4");
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out == r4.out);
}

TEST_CASE("RNG_SEED is the fallback seed") {
  const auto build = run(
      "plan build --goal absolute:0.1 --delta 0.05 --schedule finite:3 "
      "--n1 50 --growth 2");
  REQUIRE(build.exit_code == 0);
  const auto plan_path = temp_file("plan4.json", build.out);
  const std::string cmd = "RNG_SEED=99 " + std::string(MASSART_CLI_PATH) +
                          " plan run --plan " + plan_path +
                          " --dist bernoulli:0.4 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), got);
  }
  pclose(pipe);
  const auto explicit_seed = run("plan run --plan " + plan_path +
                                 " --dist bernoulli:0.4 --seed 99");
  CHECK(json::parse(out).at("result") ==
        json::parse(explicit_seed.out).at("result"));
}
