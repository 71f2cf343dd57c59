#include "randpol/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "randpol/hashing.hpp"
#include "randpol/rng.hpp"

namespace randpol {

namespace {

constexpr char kMagic[4] = {'R', 'P', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

// little-endian byte writer over a growable buffer
class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    u64(bits);
  }
  void str(const std::string& s) {
    u64(s.size());
    buf_.append(s);
  }
  void vec(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string bytes) : buf_(std::move(bytes)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
    }
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
    }
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::string str() {
    std::uint64_t n = u64();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Eigen::VectorXd vec() {
    std::uint64_t n = u64();
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::uint64_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = f64();
    return v;
  }

 private:
  void need(std::uint64_t n) {
    if (pos_ + n > buf_.size()) {
      throw std::runtime_error("checkpoint: unexpected end of file");
    }
  }
  std::string buf_;
  std::size_t pos_ = 0;
};

void write_normalizer(Writer& w, const RunningMeanStd& stats) {
  w.u32(static_cast<std::uint32_t>(stats.dim()));
  w.f64(stats.count());
  w.vec(stats.mean());
  w.vec(stats.m2());
}

void read_normalizer(Reader& r, RunningMeanStd& stats) {
  const std::uint32_t dim = r.u32();
  if (static_cast<int>(dim) != stats.dim()) {
    throw std::runtime_error("checkpoint: normalizer dimension mismatch");
  }
  const double count = r.f64();
  Eigen::VectorXd mean = r.vec();
  Eigen::VectorXd m2 = r.vec();
  stats.restore(count, std::move(mean), std::move(m2));
}

}  // namespace

ActorCritic build_models(const TrainConfig& cfg) {
  return build_models(cfg, derive_seed(cfg.master_seed, SeedStream::kActorBasis),
                      derive_seed(cfg.master_seed, SeedStream::kCriticBasis));
}

ActorCritic build_models(const TrainConfig& cfg, std::uint64_t actor_seed,
                         std::uint64_t critic_seed) {
  ActorCritic out;
  const int obs_dim = cfg.actor_obs_dim();
  const int priv_dim = cfg.priv_obs_dim();
  const int act_dim = cfg.action_dim();

  if (cfg.algorithm == Algorithm::kRandpol) {
    auto actor_basis =
        std::make_shared<const RandomBasis>(actor_seed, obs_dim, cfg.basis_hidden, cfg.feature_dim);
    auto critic_basis = std::make_shared<const RandomBasis>(critic_seed, priv_dim,
                                                            cfg.basis_hidden, cfg.feature_dim);
    out.policy = std::make_unique<GaussianPolicy>(Approximator(actor_basis, act_dim),
                                                  cfg.log_std_init);
    out.critic = std::make_unique<ValueHead>(Approximator(critic_basis, 1));
  } else {
    std::vector<int> actor_dims, critic_dims;
    actor_dims.push_back(obs_dim);
    critic_dims.push_back(priv_dim);
    for (int d : cfg.dense_dims) {
      actor_dims.push_back(d);
      critic_dims.push_back(d);
    }
    actor_dims.push_back(act_dim);
    critic_dims.push_back(1);
    out.policy = std::make_unique<GaussianPolicy>(Approximator(DenseNet(actor_seed, actor_dims)),
                                                  cfg.log_std_init);
    out.critic = std::make_unique<ValueHead>(Approximator(DenseNet(critic_seed, critic_dims)));
  }
  return out;
}

void save_checkpoint(const std::string& path, const TrainConfig& cfg, std::uint64_t actor_seed,
                     std::uint64_t critic_seed, const GaussianPolicy& policy,
                     const ValueHead& critic, const ObservationNormalizer& obs_norm,
                     const RewardNormalizer& rew_norm) {
  Writer w;
  w.u8(kMagic[0]);
  w.u8(kMagic[1]);
  w.u8(kMagic[2]);
  w.u8(kMagic[3]);
  w.u32(kVersion);
  w.u64(cfg.structural_hash());
  w.str(cfg.to_text());
  w.u8(cfg.algorithm == Algorithm::kRandpol ? 0 : 1);
  w.u8(cfg.env == EnvKind::kVelocityTrack ? 0 : 1);

  w.u64(actor_seed);
  w.u64(critic_seed);
  if (cfg.algorithm == Algorithm::kRandpol) {
    const RandomBasis* ab = policy.mean_fn().basis();
    const RandomBasis* cb = critic.fn().basis();
    w.u32(static_cast<std::uint32_t>(ab->input_dim()));
    w.u32(static_cast<std::uint32_t>(cb->input_dim()));
    w.u32(static_cast<std::uint32_t>(ab->hidden_widths().size()));
    for (int h : ab->hidden_widths()) w.u32(static_cast<std::uint32_t>(h));
    w.u32(static_cast<std::uint32_t>(ab->feature_dim()));
    w.str(RandomBasis::kDistributionTag);
    w.u64(ab->checksum());
    w.u64(cb->checksum());
  } else {
    const DenseNet& an = policy.mean_fn().net();
    const DenseNet& cn = critic.fn().net();
    w.u32(static_cast<std::uint32_t>(an.layer_dims().size()));
    for (int d : an.layer_dims()) w.u32(static_cast<std::uint32_t>(d));
    w.u32(static_cast<std::uint32_t>(cn.layer_dims().size()));
    for (int d : cn.layer_dims()) w.u32(static_cast<std::uint32_t>(d));
  }

  w.vec(policy.flat_params());
  w.vec(critic.flat_params());
  write_normalizer(w, obs_norm.stats());
  write_normalizer(w, rew_norm.stats());

  const std::uint64_t digest = fnv1a_bytes(w.bytes().data(), w.bytes().size());
  Writer tail;
  tail.u64(digest);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.write(tail.bytes().data(), static_cast<std::streamsize>(tail.bytes().size()));
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path,
                                 std::optional<std::uint64_t> expect_structural_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 16) throw std::runtime_error("checkpoint: file too short");
  const std::string payload = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (tail.u64() != fnv1a_bytes(payload.data(), payload.size())) {
    throw std::runtime_error("checkpoint: integrity checksum mismatch (truncated or corrupt)");
  }

  Reader r(payload);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("checkpoint: bad magic");
  if (r.u32() != kVersion) throw std::runtime_error("checkpoint: unsupported format version");

  const std::uint64_t stored_hash = r.u64();
  if (expect_structural_hash && *expect_structural_hash != stored_hash) {
    throw std::runtime_error("checkpoint: config hash mismatch (incompatible configuration)");
  }

  LoadedCheckpoint out;
  out.config = parse_config_text(r.str());
  if (out.config.structural_hash() != stored_hash) {
    throw std::runtime_error("checkpoint: embedded config does not match stored hash");
  }
  r.u8();  // algorithm tag, implied by config
  r.u8();  // env tag

  out.actor_seed = r.u64();
  out.critic_seed = r.u64();

  ActorCritic models = build_models(out.config, out.actor_seed, out.critic_seed);
  if (out.config.algorithm == Algorithm::kRandpol) {
    const std::uint32_t actor_in = r.u32();
    const std::uint32_t critic_in = r.u32();
    const std::uint32_t n_hidden = r.u32();
    std::vector<int> hidden(n_hidden);
    for (auto& h : hidden) h = static_cast<int>(r.u32());
    const std::uint32_t feat = r.u32();
    const std::string tag = r.str();
    if (tag != RandomBasis::kDistributionTag) {
      throw std::runtime_error("checkpoint: unknown frozen-weight distribution tag '" + tag + "'");
    }
    const RandomBasis* ab = models.policy->mean_fn().basis();
    const RandomBasis* cb = models.critic->fn().basis();
    if (static_cast<int>(actor_in) != ab->input_dim() ||
        static_cast<int>(critic_in) != cb->input_dim() ||
        static_cast<int>(feat) != ab->feature_dim() || hidden != ab->hidden_widths()) {
      throw std::runtime_error("checkpoint: stored dims disagree with config");
    }
    // generator-drift guard: regenerated bases must hash to the stored values
    const std::uint64_t actor_sum = r.u64();
    const std::uint64_t critic_sum = r.u64();
    if (ab->checksum() != actor_sum || cb->checksum() != critic_sum) {
      throw std::runtime_error("checkpoint: frozen basis checksum mismatch (generator drift)");
    }
  } else {
    const std::uint32_t an = r.u32();
    std::vector<int> actor_dims(an);
    for (auto& d : actor_dims) d = static_cast<int>(r.u32());
    const std::uint32_t cn = r.u32();
    std::vector<int> critic_dims(cn);
    for (auto& d : critic_dims) d = static_cast<int>(r.u32());
    if (actor_dims != models.policy->mean_fn().net().layer_dims() ||
        critic_dims != models.critic->fn().net().layer_dims()) {
      throw std::runtime_error("checkpoint: stored dims disagree with config");
    }
  }

  Eigen::VectorXd policy_flat = r.vec();
  Eigen::VectorXd critic_flat = r.vec();
  models.policy->set_flat_params(policy_flat);
  models.critic->set_flat_params(critic_flat);

  out.obs_norm =
      std::make_unique<ObservationNormalizer>(out.config.priv_obs_dim(), out.config.normalize_obs);
  out.rew_norm = std::make_unique<RewardNormalizer>(out.config.num_envs, out.config.gamma,
                                                    out.config.normalize_reward);
  read_normalizer(r, out.obs_norm->stats());
  read_normalizer(r, out.rew_norm->stats());

  out.policy = std::move(models.policy);
  out.critic = std::move(models.critic);
  return out;
}

}  // namespace randpol
