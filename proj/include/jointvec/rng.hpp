#pragma once

#include <cmath>
#include <cstdint>

namespace jointvec {

// xoshiro256** stream seeded through splitmix64. We roll our own instead of
// using <random> distributions because their output is implementation
// defined, and every sampled sequence here must be reproducible byte for
// byte across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  // Independent stream derived from (seed, tag, salt). Used to keep the
  // corpus, relational, initialization and diagnostic streams decoupled so
  // that a joint run and a single-objective run draw identical sequences
  // on the side they share.
  static Rng substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t salt = 0) {
    std::uint64_t x = seed;
    x = mix(x + 0x9E3779B97F4A7C15ULL * (tag + 1));
    x = mix(x + 0x9E3779B97F4A7C15ULL * (salt + 1));
    return Rng(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, bound). Lemire's multiply-shift; bias is < 2^-64 per draw.
  std::uint64_t uniform_int(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  int uniform_index(int bound) { return static_cast<int>(uniform_int(static_cast<std::uint64_t>(bound))); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Box-Muller. The spare is cached per stream, so interleaving two streams
  // never changes what either of them produces.
  double gaussian(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

 private:
  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      s = mix(x);
    }
    has_spare_ = false;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Substream tags. Joint and single-objective training must derive the same
// streams for the sides they have in common.
namespace streams {
inline constexpr std::uint64_t kInitW = 1;
inline constexpr std::uint64_t kInitV = 2;
inline constexpr std::uint64_t kInitNlm = 3;
inline constexpr std::uint64_t kInitRelational = 4;
inline constexpr std::uint64_t kCorpus = 5;
inline constexpr std::uint64_t kRelational = 6;
inline constexpr std::uint64_t kDiagnostics = 7;
inline constexpr std::uint64_t kEval = 8;
}  // namespace streams

}  // namespace jointvec
