#ifndef RANDPOL_RNG_HPP_
#define RANDPOL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace randpol {

// splitmix64 step; also used to derive child seeds
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. All distributions are implemented explicitly
// so that a given seed yields the same sequence on every platform (the
// standard library's distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), has_spare_(false), spare_(0.0) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // unbiased integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_below: n must be positive");
    std::uint64_t threshold = (-n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // standard normal via polar Box-Muller (caches the spare deviate)
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t state_;
  bool has_spare_;
  double spare_;
};

// Named sub-streams derived from the master seed. Adding environments or
// reordering construction does not perturb unrelated streams: every consumer
// gets seed = mix(master, fixed tag).
enum class SeedStream : std::uint64_t {
  kActorBasis = 1,
  kCriticBasis = 2,
  kActionSampling = 3,
  kMinibatchShuffle = 4,
  kParamInit = 5,
  kEvalEnv = 6,
  kEnvBase = 0x1000,  // env i uses kEnvBase + i
};

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
  std::uint64_t s = master_seed ^ (tag * 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, SeedStream stream) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(stream));
}

inline std::uint64_t env_seed(std::uint64_t master_seed, int env_index) {
  return derive_seed(master_seed,
                     static_cast<std::uint64_t>(SeedStream::kEnvBase) +
                         static_cast<std::uint64_t>(env_index));
}

}  // namespace randpol

#endif  // RANDPOL_RNG_HPP_
