#include "randpol/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "randpol/hashing.hpp"

namespace randpol {

std::string to_string(Algorithm a) {
  return a == Algorithm::kRandpol ? "randpol" : "dense_baseline";
}

std::string to_string(EnvKind e) {
  return e == EnvKind::kVelocityTrack ? "velocity_track" : "pendulum";
}

int TrainConfig::actor_obs_dim() const {
  return env == EnvKind::kVelocityTrack ? VelocityTrackEnv::kActorObsDim : PendulumEnv::kObsDim;
}

int TrainConfig::priv_obs_dim() const {
  return env == EnvKind::kVelocityTrack ? VelocityTrackEnv::kPrivObsDim : PendulumEnv::kObsDim;
}

int TrainConfig::action_dim() const {
  return env == EnvKind::kVelocityTrack ? VelocityTrackEnv::kActionDim : PendulumEnv::kActionDim;
}

int TrainConfig::episode_len() const {
  return env == EnvKind::kVelocityTrack ? velocity.episode_len : pendulum.episode_len;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt_double(double v) {
  // shortest representation that round-trips exactly
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string fmt_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

// accumulates parse/validation failures so a bad config reports every
// offending field at once
struct ErrorSink {
  std::vector<std::string> errors;
  void add(const std::string& key, const std::string& why) { errors.push_back(key + ": " + why); }
  void raise_if_any() const {
    if (errors.empty()) return;
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
};

class FieldReader {
 public:
  FieldReader(const std::map<std::string, std::string>& kv, ErrorSink& sink)
      : kv_(kv), sink_(sink) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  void read_int(const std::string& key, int& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    try {
      std::size_t pos = 0;
      long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      out = static_cast<int>(v);
    } catch (const std::exception&) {
      sink_.add(key, "expected integer, got '" + it->second + "'");
    }
  }

  void read_u64(const std::string& key, std::uint64_t& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      out = static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      sink_.add(key, "expected unsigned integer, got '" + it->second + "'");
    }
  }

  void read_double(const std::string& key, double& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      out = v;
    } catch (const std::exception&) {
      sink_.add(key, "expected real number, got '" + it->second + "'");
    }
  }

  void read_bool(const std::string& key, bool& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    if (it->second == "true") {
      out = true;
    } else if (it->second == "false") {
      out = false;
    } else {
      sink_.add(key, "expected true/false, got '" + it->second + "'");
    }
  }

  void read_int_list(const std::string& key, std::vector<int>& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    std::vector<int> vals;
    std::stringstream ss(it->second);
    std::string tok;
    bool ok = true;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      try {
        std::size_t pos = 0;
        vals.push_back(static_cast<int>(std::stol(tok, &pos)));
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || vals.empty()) {
      sink_.add(key, "expected comma-separated integers, got '" + it->second + "'");
    } else {
      out = vals;
    }
  }

 private:
  const std::map<std::string, std::string>& kv_;
  ErrorSink& sink_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "algorithm", "env", "num_envs", "horizon", "iterations", "gamma", "gae_lambda", "epochs",
      "minibatches", "clip_epsilon", "entropy_coef", "learning_rate", "grad_clip", "kl_target",
      "feature_dim", "basis_hidden", "dense_dims", "log_std_init", "normalize_obs",
      "normalize_reward", "normalize_advantages", "master_seed", "checkpoint_every", "env_dt_s",
      "episode_len", "resample_period", "k_v_nominal", "d_v_nominal", "k_w_nominal",
      "d_w_nominal", "randomize_lo", "randomize_hi", "push_prob", "push_magnitude", "v_max_phys",
      "w_max_phys", "reset_speed_range", "reward_w_lin", "reward_w_yaw", "reward_sigma_v",
      "reward_sigma_w", "reward_w_act", "reward_w_rate", "curriculum_v_hi_init",
      "curriculum_w_abs_init", "curriculum_v_hi_max", "curriculum_w_abs_max",
      "curriculum_threshold", "curriculum_step", "pendulum_dt_s", "pendulum_episode_len",
      "pendulum_mass", "pendulum_length", "pendulum_gravity", "pendulum_max_speed",
      "pendulum_max_torque", "pendulum_reset_angle", "pendulum_reset_speed"};
  return keys;
}

std::map<std::string, std::string> tokenize(const std::string& text, ErrorSink& sink) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      sink.add("line " + std::to_string(line_no), "expected 'key = value', got '" + line + "'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (kv.count(key)) {
      sink.add(key, "duplicate key");
      continue;
    }
    kv[key] = value;
  }
  return kv;
}

TrainConfig build_from_kv(const std::map<std::string, std::string>& kv, ErrorSink& sink) {
  // unknown keys are hard errors: silent hyperparameter typos are worse
  for (const auto& [key, value] : kv) {
    (void)value;
    bool found = false;
    for (const auto& k : known_keys()) {
      if (k == key) {
        found = true;
        break;
      }
    }
    if (!found) sink.add(key, "unknown key");
  }

  TrainConfig cfg;
  FieldReader r(kv, sink);

  // algorithm/env first; they pick the dependent defaults
  if (auto it = kv.find("algorithm"); it != kv.end()) {
    if (it->second == "randpol") {
      cfg.algorithm = Algorithm::kRandpol;
    } else if (it->second == "dense_baseline") {
      cfg.algorithm = Algorithm::kDenseBaseline;
    } else {
      sink.add("algorithm", "expected randpol|dense_baseline, got '" + it->second + "'");
    }
  }
  if (auto it = kv.find("env"); it != kv.end()) {
    if (it->second == "velocity_track") {
      cfg.env = EnvKind::kVelocityTrack;
    } else if (it->second == "pendulum") {
      cfg.env = EnvKind::kPendulum;
    } else {
      sink.add("env", "expected velocity_track|pendulum, got '" + it->second + "'");
    }
  }
  if (cfg.algorithm == Algorithm::kDenseBaseline) {
    cfg.horizon = 24;
    cfg.learning_rate = 1e-3;
  }

  r.read_int("num_envs", cfg.num_envs);
  r.read_int("horizon", cfg.horizon);
  r.read_int("iterations", cfg.iterations);
  r.read_double("gamma", cfg.gamma);
  r.read_double("gae_lambda", cfg.gae_lambda);
  r.read_int("epochs", cfg.epochs);
  r.read_int("minibatches", cfg.minibatches);
  r.read_double("clip_epsilon", cfg.clip_epsilon);
  r.read_double("entropy_coef", cfg.entropy_coef);
  r.read_double("learning_rate", cfg.learning_rate);
  r.read_double("grad_clip", cfg.grad_clip);
  r.read_double("kl_target", cfg.kl_target);
  r.read_int("feature_dim", cfg.feature_dim);
  r.read_int_list("basis_hidden", cfg.basis_hidden);
  r.read_int_list("dense_dims", cfg.dense_dims);
  r.read_double("log_std_init", cfg.log_std_init);
  r.read_bool("normalize_obs", cfg.normalize_obs);
  r.read_bool("normalize_reward", cfg.normalize_reward);
  r.read_bool("normalize_advantages", cfg.normalize_advantages);
  r.read_u64("master_seed", cfg.master_seed);
  r.read_int("checkpoint_every", cfg.checkpoint_every);

  r.read_double("env_dt_s", cfg.velocity.dt);
  r.read_int("episode_len", cfg.velocity.episode_len);
  r.read_int("resample_period", cfg.velocity.resample_period);
  r.read_double("k_v_nominal", cfg.velocity.k_v_nominal);
  r.read_double("d_v_nominal", cfg.velocity.d_v_nominal);
  r.read_double("k_w_nominal", cfg.velocity.k_w_nominal);
  r.read_double("d_w_nominal", cfg.velocity.d_w_nominal);
  r.read_double("randomize_lo", cfg.velocity.randomize_lo);
  r.read_double("randomize_hi", cfg.velocity.randomize_hi);
  r.read_double("push_prob", cfg.velocity.push_prob);
  r.read_double("push_magnitude", cfg.velocity.push_magnitude);
  r.read_double("v_max_phys", cfg.velocity.v_max_phys);
  r.read_double("w_max_phys", cfg.velocity.w_max_phys);
  r.read_double("reset_speed_range", cfg.velocity.reset_speed_range);
  r.read_double("reward_w_lin", cfg.velocity.w_lin);
  r.read_double("reward_w_yaw", cfg.velocity.w_yaw);
  r.read_double("reward_sigma_v", cfg.velocity.sigma_v);
  r.read_double("reward_sigma_w", cfg.velocity.sigma_w);
  r.read_double("reward_w_act", cfg.velocity.w_act);
  r.read_double("reward_w_rate", cfg.velocity.w_rate);

  r.read_double("curriculum_v_hi_init", cfg.curriculum_init.v_hi);
  double w_abs_init = cfg.curriculum_init.w_hi;
  r.read_double("curriculum_w_abs_init", w_abs_init);
  cfg.curriculum_init.w_hi = w_abs_init;
  cfg.curriculum_init.w_lo = -w_abs_init;
  r.read_double("curriculum_v_hi_max", cfg.curriculum_init.v_hi_max);
  r.read_double("curriculum_w_abs_max", cfg.curriculum_init.w_abs_max);
  r.read_double("curriculum_threshold", cfg.curriculum_init.promotion_threshold);
  r.read_double("curriculum_step", cfg.curriculum_init.expansion_step);

  r.read_double("pendulum_dt_s", cfg.pendulum.dt);
  r.read_int("pendulum_episode_len", cfg.pendulum.episode_len);
  r.read_double("pendulum_mass", cfg.pendulum.mass);
  r.read_double("pendulum_length", cfg.pendulum.length);
  r.read_double("pendulum_gravity", cfg.pendulum.gravity);
  r.read_double("pendulum_max_speed", cfg.pendulum.max_speed);
  r.read_double("pendulum_max_torque", cfg.pendulum.max_torque);
  r.read_double("pendulum_reset_angle", cfg.pendulum.reset_angle_range);
  r.read_double("pendulum_reset_speed", cfg.pendulum.reset_speed_range);

  return cfg;
}

void validate_into(const TrainConfig& cfg, ErrorSink& sink) {
  auto require = [&](bool ok, const std::string& key, const std::string& why) {
    if (!ok) sink.add(key, why);
  };
  require(cfg.num_envs >= 1, "num_envs", "must be >= 1");
  require(cfg.horizon >= 1, "horizon", "must be >= 1");
  require(cfg.iterations >= 1, "iterations", "must be >= 1");
  require(cfg.gamma > 0.0 && cfg.gamma < 1.0, "gamma", "must lie in (0,1)");
  require(cfg.gae_lambda >= 0.0 && cfg.gae_lambda <= 1.0, "gae_lambda", "must lie in [0,1]");
  require(cfg.epochs >= 1, "epochs", "must be >= 1");
  require(cfg.minibatches >= 1, "minibatches", "must be >= 1");
  require(cfg.minibatches <= cfg.num_envs * cfg.horizon, "minibatches",
          "must not exceed num_envs*horizon");
  require(cfg.clip_epsilon > 0.0, "clip_epsilon", "must be > 0");
  require(cfg.entropy_coef >= 0.0, "entropy_coef", "must be >= 0");
  require(cfg.learning_rate > 0.0, "learning_rate", "must be > 0");
  require(cfg.grad_clip > 0.0, "grad_clip", "must be > 0");
  require(cfg.kl_target > 0.0, "kl_target", "must be > 0");
  require(cfg.feature_dim >= 1, "feature_dim", "must be >= 1");
  for (int wdim : cfg.basis_hidden) require(wdim >= 1, "basis_hidden", "widths must be >= 1");
  require(!cfg.dense_dims.empty(), "dense_dims", "must not be empty");
  for (int d : cfg.dense_dims) require(d >= 1, "dense_dims", "dims must be >= 1");
  require(cfg.checkpoint_every >= 0, "checkpoint_every", "must be >= 0");

  require(cfg.velocity.dt > 0.0, "env_dt_s", "must be > 0");
  require(cfg.velocity.episode_len >= 1, "episode_len", "must be >= 1");
  require(cfg.velocity.resample_period >= 1, "resample_period", "must be >= 1");
  require(cfg.velocity.randomize_lo > 0.0 && cfg.velocity.randomize_lo <= cfg.velocity.randomize_hi,
          "randomize_lo", "need 0 < randomize_lo <= randomize_hi");
  require(cfg.velocity.push_prob >= 0.0 && cfg.velocity.push_prob <= 1.0, "push_prob",
          "must lie in [0,1]");
  require(cfg.velocity.sigma_v > 0.0, "reward_sigma_v", "must be > 0");
  require(cfg.velocity.sigma_w > 0.0, "reward_sigma_w", "must be > 0");
  require(cfg.velocity.v_max_phys > 0.0, "v_max_phys", "must be > 0");
  require(cfg.velocity.w_max_phys > 0.0, "w_max_phys", "must be > 0");

  require(cfg.curriculum_init.v_hi > 0.0 && cfg.curriculum_init.v_hi <= cfg.curriculum_init.v_hi_max,
          "curriculum_v_hi_init", "need 0 < init <= max");
  require(cfg.curriculum_init.w_hi > 0.0 && cfg.curriculum_init.w_hi <= cfg.curriculum_init.w_abs_max,
          "curriculum_w_abs_init", "need 0 < init <= max");
  require(cfg.curriculum_init.expansion_step > 0.0, "curriculum_step", "must be > 0");

  require(cfg.pendulum.dt > 0.0, "pendulum_dt_s", "must be > 0");
  require(cfg.pendulum.episode_len >= 1, "pendulum_episode_len", "must be >= 1");
  require(cfg.pendulum.mass > 0.0, "pendulum_mass", "must be > 0");
  require(cfg.pendulum.length > 0.0, "pendulum_length", "must be > 0");
  require(cfg.pendulum.max_torque > 0.0, "pendulum_max_torque", "must be > 0");
  require(cfg.pendulum.reset_angle_range >= 0.0, "pendulum_reset_angle", "must be >= 0");
  require(cfg.pendulum.reset_speed_range >= 0.0, "pendulum_reset_speed", "must be >= 0");
}

}  // namespace

TrainConfig parse_config_text(const std::string& text) {
  // one sink across parse and validation so the diagnostic lists every
  // offending field at once (unparsed fields keep their defaults, which
  // validate cleanly)
  ErrorSink sink;
  auto kv = tokenize(text, sink);
  TrainConfig cfg = build_from_kv(kv, sink);
  validate_into(cfg, sink);
  sink.raise_if_any();
  return cfg;
}

TrainConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

TrainConfig make_default_config(Algorithm algorithm, EnvKind env) {
  return parse_config_text("algorithm = " + to_string(algorithm) + "\nenv = " + to_string(env) +
                           "\n");
}

void apply_overrides(TrainConfig& cfg, const std::vector<std::string>& overrides) {
  if (overrides.empty()) return;
  // ride on top of the canonical serialization so overrides go through the
  // same parse and validation path; unknown keys fail in the parser
  ErrorSink sink;
  auto kv = tokenize(cfg.to_text(), sink);
  sink.raise_if_any();
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("override must look like key=value, got '" + ov + "'");
    }
    kv[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
  }
  std::string rebuilt;
  for (const auto& [key, value] : kv) rebuilt += key + " = " + value + "\n";
  cfg = parse_config_text(rebuilt);
}

void validate_config(const TrainConfig& cfg) {
  ErrorSink sink;
  validate_into(cfg, sink);
  sink.raise_if_any();
}

std::string TrainConfig::to_text() const {
  std::string s;
  auto put = [&](const std::string& key, const std::string& value) {
    s += key + " = " + value + "\n";
  };
  put("algorithm", randpol::to_string(algorithm));
  put("env", randpol::to_string(env));
  put("num_envs", std::to_string(num_envs));
  put("horizon", std::to_string(horizon));
  put("iterations", std::to_string(iterations));
  put("gamma", fmt_double(gamma));
  put("gae_lambda", fmt_double(gae_lambda));
  put("epochs", std::to_string(epochs));
  put("minibatches", std::to_string(minibatches));
  put("clip_epsilon", fmt_double(clip_epsilon));
  put("entropy_coef", fmt_double(entropy_coef));
  put("learning_rate", fmt_double(learning_rate));
  put("grad_clip", fmt_double(grad_clip));
  put("kl_target", fmt_double(kl_target));
  put("feature_dim", std::to_string(feature_dim));
  put("basis_hidden", fmt_int_list(basis_hidden));
  put("dense_dims", fmt_int_list(dense_dims));
  put("log_std_init", fmt_double(log_std_init));
  put("normalize_obs", normalize_obs ? "true" : "false");
  put("normalize_reward", normalize_reward ? "true" : "false");
  put("normalize_advantages", normalize_advantages ? "true" : "false");
  put("master_seed", std::to_string(master_seed));
  put("checkpoint_every", std::to_string(checkpoint_every));
  put("env_dt_s", fmt_double(velocity.dt));
  put("episode_len", std::to_string(velocity.episode_len));
  put("resample_period", std::to_string(velocity.resample_period));
  put("k_v_nominal", fmt_double(velocity.k_v_nominal));
  put("d_v_nominal", fmt_double(velocity.d_v_nominal));
  put("k_w_nominal", fmt_double(velocity.k_w_nominal));
  put("d_w_nominal", fmt_double(velocity.d_w_nominal));
  put("randomize_lo", fmt_double(velocity.randomize_lo));
  put("randomize_hi", fmt_double(velocity.randomize_hi));
  put("push_prob", fmt_double(velocity.push_prob));
  put("push_magnitude", fmt_double(velocity.push_magnitude));
  put("v_max_phys", fmt_double(velocity.v_max_phys));
  put("w_max_phys", fmt_double(velocity.w_max_phys));
  put("reset_speed_range", fmt_double(velocity.reset_speed_range));
  put("reward_w_lin", fmt_double(velocity.w_lin));
  put("reward_w_yaw", fmt_double(velocity.w_yaw));
  put("reward_sigma_v", fmt_double(velocity.sigma_v));
  put("reward_sigma_w", fmt_double(velocity.sigma_w));
  put("reward_w_act", fmt_double(velocity.w_act));
  put("reward_w_rate", fmt_double(velocity.w_rate));
  put("curriculum_v_hi_init", fmt_double(curriculum_init.v_hi));
  put("curriculum_w_abs_init", fmt_double(curriculum_init.w_hi));
  put("curriculum_v_hi_max", fmt_double(curriculum_init.v_hi_max));
  put("curriculum_w_abs_max", fmt_double(curriculum_init.w_abs_max));
  put("curriculum_threshold", fmt_double(curriculum_init.promotion_threshold));
  put("curriculum_step", fmt_double(curriculum_init.expansion_step));
  put("pendulum_dt_s", fmt_double(pendulum.dt));
  put("pendulum_episode_len", std::to_string(pendulum.episode_len));
  put("pendulum_mass", fmt_double(pendulum.mass));
  put("pendulum_length", fmt_double(pendulum.length));
  put("pendulum_gravity", fmt_double(pendulum.gravity));
  put("pendulum_max_speed", fmt_double(pendulum.max_speed));
  put("pendulum_max_torque", fmt_double(pendulum.max_torque));
  put("pendulum_reset_angle", fmt_double(pendulum.reset_angle_range));
  put("pendulum_reset_speed", fmt_double(pendulum.reset_speed_range));
  return s;
}

std::uint64_t TrainConfig::structural_hash() const {
  Fnv1a h;
  h.update_string(randpol::to_string(algorithm));
  h.update_string(randpol::to_string(env));
  h.update_u64(static_cast<std::uint64_t>(feature_dim));
  for (int wdim : basis_hidden) h.update_u64(static_cast<std::uint64_t>(wdim));
  for (int d : dense_dims) h.update_u64(static_cast<std::uint64_t>(d));
  h.update_u64(normalize_obs ? 1 : 0);
  h.update_u64(normalize_reward ? 1 : 0);
  h.update_u64(static_cast<std::uint64_t>(actor_obs_dim()));
  h.update_u64(static_cast<std::uint64_t>(priv_obs_dim()));
  h.update_u64(static_cast<std::uint64_t>(action_dim()));
  return h.digest();
}

}  // namespace randpol
