#include "distributions.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <sstream>
#include <vector>

namespace massart {

namespace {

std::vector<double> parse_params(const std::string& text, std::string* name) {
  const auto colon = text.find(':');
  *name = text.substr(0, colon);
  std::vector<double> params;
  if (colon == std::string::npos) return params;
  std::stringstream ss(text.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      params.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw_parse("bad distribution parameter '" + tok + "' in '" + text +
                  "'; expected family:param[,param...]");
    }
  }
  return params;
}

void expect_params(const std::string& text, std::size_t got,
                   std::size_t want) {
  if (got != want) {
    throw_parse("distribution '" + text + "' takes " + std::to_string(want) +
                " parameter(s), got " + std::to_string(got));
  }
}

double box_muller(SampleStream& stream) {
  double u1 = stream.next_unit();
  const double u2 = stream.next_unit();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang, with the standard shape < 1 boost.
double sample_gamma(SampleStream& stream, double shape) {
  if (shape < 1.0) {
    double u = stream.next_unit();
    if (u < 1e-300) u = 1e-300;
    return sample_gamma(stream, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = box_muller(stream);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = stream.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(SampleStream& stream, double alpha, double beta) {
  if (alpha <= 1.0 && beta <= 1.0) {
    // Johnk's algorithm.
    for (;;) {
      const double x = std::pow(stream.next_unit(), 1.0 / alpha);
      const double y = std::pow(stream.next_unit(), 1.0 / beta);
      if (x + y <= 1.0 && x + y > 0.0) return x / (x + y);
    }
  }
  const double g1 = sample_gamma(stream, alpha);
  const double g2 = sample_gamma(stream, beta);
  return g1 / (g1 + g2);
}

std::string fmt(double x) { return fmt::format("{}", x); }

}  // namespace

double DistributionSpec::exact_mean() const {
  switch (family) {
    case Family::Bernoulli:
      return support.from_unit(p);
    case Family::Beta:
      return support.from_unit(alpha / (alpha + beta));
    case Family::Uniform:
      return support.from_unit(0.5);
    case Family::PointMass:
      return v;
    case Family::TwoPoint:
      return (1.0 - p) * v0 + p * v1;
  }
  throw_domain("unreachable distribution family");
}

std::string DistributionSpec::to_string() const {
  switch (family) {
    case Family::Bernoulli:
      return "bernoulli:" + fmt(p);
    case Family::Beta:
      return "beta:" + fmt(alpha) + "," + fmt(beta);
    case Family::Uniform:
      return "uniform";
    case Family::PointMass:
      return "pointmass:" + fmt(v);
    case Family::TwoPoint:
      return "twopoint:" + fmt(v0) + "," + fmt(v1) + "," + fmt(p);
  }
  throw_domain("unreachable distribution family");
}

DistributionSpec DistributionSpec::parse(const std::string& text,
                                         const Support& support) {
  std::string name;
  const auto params = parse_params(text, &name);
  DistributionSpec spec;
  spec.support = support;
  if (name == "bernoulli") {
    expect_params(text, params.size(), 1);
    spec.family = Family::Bernoulli;
    spec.p = params[0];
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
      throw_parse("bernoulli probability must lie in [0,1]");
    }
  } else if (name == "beta") {
    expect_params(text, params.size(), 2);
    spec.family = Family::Beta;
    spec.alpha = params[0];
    spec.beta = params[1];
    if (!(spec.alpha > 0.0 && spec.beta > 0.0)) {
      throw_parse("beta shapes must be positive");
    }
  } else if (name == "uniform") {
    expect_params(text, params.size(), 0);
    spec.family = Family::Uniform;
  } else if (name == "pointmass") {
    expect_params(text, params.size(), 1);
    spec.family = Family::PointMass;
    spec.v = params[0];
    if (!(spec.v >= support.a && spec.v <= support.b)) {
      throw_parse("pointmass value outside support");
    }
  } else if (name == "twopoint") {
    expect_params(text, params.size(), 3);
    spec.family = Family::TwoPoint;
    spec.v0 = params[0];
    spec.v1 = params[1];
    spec.p = params[2];
    if (!(spec.v0 >= support.a && spec.v0 <= support.b &&
          spec.v1 >= support.a && spec.v1 <= support.b)) {
      throw_parse("twopoint values outside support");
    }
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
      throw_parse("twopoint probability must lie in [0,1]");
    }
  } else {
    throw_parse("unknown distribution '" + name +
                "'; grammar: bernoulli:<p> | beta:<a>,<b> | uniform | "
                "pointmass:<v> | twopoint:<v0>,<v1>,<p>");
  }
  return spec;
}

double DistributionSpec::draw(SampleStream& stream) const {
  switch (family) {
    case Family::Bernoulli:
      return support.from_unit(stream.next_unit() < p ? 1.0 : 0.0);
    case Family::Beta:
      return support.from_unit(sample_beta(stream, alpha, beta));
    case Family::Uniform:
      return support.from_unit(stream.next_unit());
    case Family::PointMass:
      return v;
    case Family::TwoPoint:
      return stream.next_unit() < p ? v1 : v0;
  }
  throw_domain("unreachable distribution family");
}

}  // namespace massart
