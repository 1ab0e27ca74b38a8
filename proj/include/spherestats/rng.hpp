#pragma once

#include <cstdint>
#include <cmath>

// Counter-based random number generation. Every draw is a pure function of
// (seed, stream tag, counter), so ensembles are reproducible regardless of
// evaluation order and independence across streams is structural.
namespace spherestats::rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Combine a seed with a sub-stream identifier.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t id) {
  return mix64(seed ^ mix64(id + kGolden));
}

// Stream map used by the simulators:
//   signal coefficients:   key = derive(derive(derive(seed, 0), l), m)
//   channel-i noise:       key = derive(derive(derive(seed, i+1), l), m)
//   ensemble member i:     seed_i = derive(base_seed, i)
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t channel,
                                std::uint64_t l, std::uint64_t m) {
  return derive(derive(derive(seed, channel), l), m);
}

class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ + counter_++ * kGolden); }

  // uniform in (0,1)
  double next_unit() {
    const std::uint64_t u = next_u64() >> 11;
    return (static_cast<double>(u) + 0.5) * 0x1p-53;
  }

  // standard normal via Box-Muller; values come in cached pairs
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spherestats::rng
