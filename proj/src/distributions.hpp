#ifndef MASSART_DISTRIBUTIONS_HPP
#define MASSART_DISTRIBUTIONS_HPP

#include <cstdint>
#include <string>

#include "interval.hpp"
#include "rng.hpp"

namespace massart {

// Spec strings: "bernoulli:<p>", "beta:<alpha>,<beta>", "uniform",
// "pointmass:<v>", "twopoint:<v0>,<v1>,<p>".  Bernoulli/Beta/Uniform draw
// on the unit scale and are mapped into the support; PointMass/TwoPoint
// values are on the original scale and must lie inside the support.
struct DistributionSpec {
  enum class Family { Bernoulli, Beta, Uniform, PointMass, TwoPoint };

  Family family;
  double p = 0.0;      // Bernoulli: success prob; TwoPoint: Pr{v1}
  double alpha = 0.0;  // Beta
  double beta = 0.0;   // Beta
  double v = 0.0;      // PointMass
  double v0 = 0.0;     // TwoPoint
  double v1 = 0.0;     // TwoPoint
  Support support{0.0, 1.0};

  double exact_mean() const;
  std::string to_string() const;

  static DistributionSpec parse(const std::string& text,
                                const Support& support);

  double draw(SampleStream& stream) const;
};

}  // namespace massart

#endif
