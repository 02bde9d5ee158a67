#pragma once

#include <cmath>
#include <cstdint>

namespace mms {

/// Purpose tags for RNG streams. Keeping them centralized guarantees that two
/// consumers never collide on the same (seed, stream) pair.
enum class RngStreamId : uint64_t {
  ParamInit = 1,
  DropPath = 2,
  ModalitySelect = 3,
  Shuffle = 4,
  SceneGen = 5,
  EventJitter = 6,
  Augment = 7,
  TransferInit = 8,
  Test = 100,
};

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based deterministic generator. Draw i of stream (seed, id, key) is
/// a pure function of (seed, id, key, i); independent streams never interact,
/// so data order, masks and init are reproducible regardless of which other
/// streams were consumed first.
class RngStream {
 public:
  RngStream(uint64_t seed, RngStreamId id, uint64_t key = 0)
      : base_(detail::splitmix64(detail::splitmix64(seed) ^
                                 detail::splitmix64(static_cast<uint64_t>(id) * 0x9e3779b97f4a7c15ull) ^
                                 detail::splitmix64(key * 0xd1342543de82ef95ull))) {}

  uint64_t next_u64() { return detail::splitmix64(base_ ^ (counter_++ * 0x2545f4914f6cdd1dull)); }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  float next_float() { return static_cast<float>(next_double()); }

  /// Uniform in [lo, hi).
  float uniform(float lo, float hi) { return lo + (hi - lo) * next_float(); }

  /// Uniform integer in [0, n). Multiply-shift; bias is below 2^-64.
  int64_t uniform_int(int64_t n) {
    return static_cast<int64_t>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Standard normal via Box-Muller (two draws per sample, no cached state).
  double normal() {
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Normal(0, sigma) truncated to +/- 2 sigma by rejection.
  float trunc_normal(float sigma) {
    double z = 0.0;
    do {
      z = normal();
    } while (z < -2.0 || z > 2.0);
    return static_cast<float>(z * sigma);
  }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t base_;
  uint64_t counter_ = 0;
};

}  // namespace mms
