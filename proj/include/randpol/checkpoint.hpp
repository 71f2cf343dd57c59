#ifndef RANDPOL_CHECKPOINT_HPP_
#define RANDPOL_CHECKPOINT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "randpol/config.hpp"
#include "randpol/normalize.hpp"
#include "randpol/policy.hpp"

namespace randpol {

// actor-critic pair built from a config; basis/init seeds derive from the
// config's master seed unless given explicitly
struct ActorCritic {
  std::unique_ptr<GaussianPolicy> policy;
  std::unique_ptr<ValueHead> critic;
};

ActorCritic build_models(const TrainConfig& cfg);
ActorCritic build_models(const TrainConfig& cfg, std::uint64_t actor_seed,
                         std::uint64_t critic_seed);

// Versioned binary checkpoint. Header: format version, structural config
// hash, full config text, basis seeds, layer dims and the frozen-weight
// distribution tag. Body: trainable parameters as little-endian 64-bit
// floats in row-major order, plus normalizer statistics. Frozen weights are
// not stored; they are regenerated from the seeds and guarded by stored
// checksums. The file ends with an integrity checksum, so truncation or
// corruption is a clean error.
struct LoadedCheckpoint {
  TrainConfig config;
  std::uint64_t actor_seed = 0;
  std::uint64_t critic_seed = 0;
  std::unique_ptr<GaussianPolicy> policy;
  std::unique_ptr<ValueHead> critic;
  std::unique_ptr<ObservationNormalizer> obs_norm;
  std::unique_ptr<RewardNormalizer> rew_norm;
};

void save_checkpoint(const std::string& path, const TrainConfig& cfg, std::uint64_t actor_seed,
                     std::uint64_t critic_seed, const GaussianPolicy& policy,
                     const ValueHead& critic, const ObservationNormalizer& obs_norm,
                     const RewardNormalizer& rew_norm);

// expect_structural_hash, when given, must match the stored hash (loading a
// checkpoint under an incompatible config is a hard error)
LoadedCheckpoint load_checkpoint(const std::string& path,
                                 std::optional<std::uint64_t> expect_structural_hash = {});

}  // namespace randpol

#endif  // RANDPOL_CHECKPOINT_HPP_
