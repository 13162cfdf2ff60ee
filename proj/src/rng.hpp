#ifndef MASSART_RNG_HPP
#define MASSART_RNG_HPP

#include <cstdint>

namespace massart {

// Counter-style substream generator built on the splitmix64 mixing
// function.  Stream state is seeded by mixing (seed, stream_id), so the
// stream for trial k is the same no matter which worker thread runs it.
//
//   state_0 = mix(mix(seed) ^ mix(stream_id + 0x9E3779B97F4A7C15))
//   output_i = mix(state_0 + i * GAMMA)
//
// with GAMMA = 0x9E3779B97F4A7C15 and mix the splitmix64 finalizer.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(mix(mix(seed) ^ mix(stream_id + kGamma))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace massart

#endif
