#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <filesystem>
#include <fstream>
#include <set>

#include "randpol/envs/pendulum.hpp"
#include "randpol/rollout.hpp"
#include "test_helpers.hpp"

using namespace randpol;
using randpol::testing::random_vector;

namespace {

// fills a single-env buffer from explicit arrays
RolloutBuffer make_stream(const std::vector<double>& rewards, const std::vector<double>& values,
                          double bootstrap, const std::vector<int>& dones,
                          const std::vector<int>& truncs,
                          const std::vector<double>& terminal_values) {
  const int T = static_cast<int>(rewards.size());
  RolloutBuffer buf;
  buf.num_envs = 1;
  buf.horizon = T;
  buf.rewards = Eigen::Map<const Eigen::VectorXd>(rewards.data(), T);
  buf.values = Eigen::Map<const Eigen::VectorXd>(values.data(), T);
  buf.log_probs = Eigen::VectorXd::Zero(T);
  buf.actions = Eigen::MatrixXd::Zero(T, 1);
  buf.actor_obs = Eigen::MatrixXd::Zero(T, 1);
  buf.priv_obs = Eigen::MatrixXd::Zero(T, 1);
  buf.dones.assign(T, 0);
  buf.truncateds.assign(T, 0);
  buf.terminal_values = Eigen::VectorXd::Zero(T);
  for (int t = 0; t < T; ++t) {
    buf.dones[t] = static_cast<std::uint8_t>(dones[t]);
    buf.truncateds[t] = static_cast<std::uint8_t>(truncs[t]);
    buf.terminal_values(t) = terminal_values[t];
  }
  buf.bootstrap_values = Eigen::VectorXd::Constant(1, bootstrap);
  return buf;
}

// explicit double-sum oracle: A_t = sum_l (gamma*lambda)^l delta_{t+l}, the
// sum ending at the first episode boundary (inclusive)
Eigen::VectorXd gae_double_sum(const RolloutBuffer& buf, double gamma, double lambda) {
  const int T = buf.horizon;
  Eigen::VectorXd delta(T);
  for (int t = 0; t < T; ++t) {
    double next_v;
    if (buf.dones[t]) {
      next_v = buf.truncateds[t] ? buf.terminal_values(t) : 0.0;
    } else {
      next_v = (t == T - 1) ? buf.bootstrap_values(0) : buf.values(t + 1);
    }
    delta(t) = buf.rewards(t) + gamma * next_v - buf.values(t);
  }
  Eigen::VectorXd adv(T);
  for (int t = 0; t < T; ++t) {
    double acc = 0.0, w = 1.0;
    for (int l = t; l < T; ++l) {
      acc += w * delta(l);
      if (buf.dones[l]) break;
      w *= gamma * lambda;
    }
    adv(t) = acc;
  }
  return adv;
}

}  // namespace

TEST_CASE("gae: lambda=0 collapses to one-step TD residuals") {
  RolloutBuffer buf = make_stream({1.0, -0.5, 2.0}, {0.3, 0.1, -0.2}, 0.7, {0, 0, 0}, {0, 0, 0},
                                  {0, 0, 0});
  compute_gae(buf, 0.9, 0.0);
  CHECK(buf.advantages(0) == doctest::Approx(1.0 + 0.9 * 0.1 - 0.3).epsilon(1e-15));
  CHECK(buf.advantages(1) == doctest::Approx(-0.5 + 0.9 * -0.2 - 0.1).epsilon(1e-15));
  CHECK(buf.advantages(2) == doctest::Approx(2.0 + 0.9 * 0.7 + 0.2).epsilon(1e-15));
}

TEST_CASE("gae: handcrafted 3-step trajectory equals the explicit double sum") {
  // r=[1,1,1], V=[0.5,0.5,0.5], bootstrap 0.5, gamma=0.9, lambda=0.8:
  // every delta is 0.95, so A = [0.95*(1+.72+.5184), 0.95*(1+.72), 0.95]
  RolloutBuffer buf =
      make_stream({1, 1, 1}, {0.5, 0.5, 0.5}, 0.5, {0, 0, 0}, {0, 0, 0}, {0, 0, 0});
  compute_gae(buf, 0.9, 0.8);
  CHECK(buf.advantages(0) == doctest::Approx(2.12648).epsilon(1e-12));
  CHECK(buf.advantages(1) == doctest::Approx(1.634).epsilon(1e-12));
  CHECK(buf.advantages(2) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(buf.value_targets(0) == doctest::Approx(2.62648).epsilon(1e-12));
  CHECK(buf.value_targets(1) == doctest::Approx(2.134).epsilon(1e-12));
  CHECK(buf.value_targets(2) == doctest::Approx(1.45).epsilon(1e-12));

  Eigen::VectorXd oracle = gae_double_sum(buf, 0.9, 0.8);
  CHECK((buf.advantages - oracle).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("gae: lambda=1 equals discounted return-to-go minus baseline") {
  // single env, terminal (failure) at the last step
  Rng rng(3);
  std::vector<double> r, v;
  for (int i = 0; i < 7; ++i) {
    r.push_back(rng.uniform(-1, 1));
    v.push_back(rng.uniform(-1, 1));
  }
  RolloutBuffer buf =
      make_stream(r, v, 0.4, {0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 0}, std::vector<double>(7, 0.0));
  const double gamma = 0.97;
  compute_gae(buf, gamma, 1.0);

  for (int t = 0; t < 7; ++t) {
    double g = 0.0, w = 1.0;
    for (int l = t; l < 7; ++l) {
      g += w * r[l];
      w *= gamma;
    }
    CHECK(buf.advantages(t) == doctest::Approx(g - v[t]).epsilon(1e-12));
    CHECK(buf.value_targets(t) == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("gae: backward recursion equals double sum on 1000 random trajectories") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int T = 1 + static_cast<int>(rng.next_below(10));
    std::vector<double> r(T), v(T), tv(T, 0.0);
    std::vector<int> dones(T, 0), truncs(T, 0);
    for (int t = 0; t < T; ++t) {
      r[t] = rng.uniform(-2, 2);
      v[t] = rng.uniform(-2, 2);
      if (rng.bernoulli(0.25)) {
        dones[t] = 1;
        if (rng.bernoulli(0.5)) {
          truncs[t] = 1;
          tv[t] = rng.uniform(-2, 2);
        }
      }
    }
    const double gamma = rng.uniform(0.5, 0.999);
    const double lambda = rng.uniform(0.0, 1.0);
    RolloutBuffer buf = make_stream(r, v, rng.uniform(-2, 2), dones, truncs, tv);
    compute_gae(buf, gamma, lambda);
    Eigen::VectorXd oracle = gae_double_sum(buf, gamma, lambda);
    CHECK((buf.advantages - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("gae: hard terminal contributes r - V with no leakage across episodes") {
  Rng rng(11);
  // episode A: 4 steps ending in failure; episode B: 3 steps, truncated
  std::vector<double> ra = {0.3, -0.1, 0.8, 1.0}, va = {0.5, 0.2, -0.3, 0.4};
  std::vector<double> rb = {0.7, 0.1, -0.4}, vb = {0.0, 0.6, 0.2};
  const double tv_b = 0.9, gamma = 0.95, lambda = 0.9;

  // spliced into one env stream
  RolloutBuffer spliced = make_stream(
      {0.3, -0.1, 0.8, 1.0, 0.7, 0.1, -0.4}, {0.5, 0.2, -0.3, 0.4, 0.0, 0.6, 0.2},
      /*bootstrap (unused: last step truncated)*/ 123.0, {0, 0, 0, 1, 0, 0, 1},
      {0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, tv_b});
  compute_gae(spliced, gamma, lambda);

  // terminal step of episode A: delta = r - V exactly
  CHECK(spliced.advantages(3) == doctest::Approx(1.0 - 0.4).epsilon(1e-15));

  // independent per-episode computations
  RolloutBuffer ep_a =
      make_stream(ra, va, 0.0, {0, 0, 0, 1}, {0, 0, 0, 0}, std::vector<double>(4, 0.0));
  compute_gae(ep_a, gamma, lambda);
  RolloutBuffer ep_b = make_stream(rb, vb, 0.0, {0, 0, 1}, {0, 0, 1}, {0.0, 0.0, tv_b});
  compute_gae(ep_b, gamma, lambda);

  for (int t = 0; t < 4; ++t) {
    CHECK(spliced.advantages(t) == doctest::Approx(ep_a.advantages(t)).epsilon(1e-14));
  }
  for (int t = 0; t < 3; ++t) {
    CHECK(spliced.advantages(4 + t) == doctest::Approx(ep_b.advantages(t)).epsilon(1e-14));
  }
}

TEST_CASE("normalize_advantages standardizes the whole buffer") {
  RolloutBuffer buf =
      make_stream({1, 2, 3}, {0, 0, 0}, 0.0, {0, 0, 1}, {0, 0, 0}, {0, 0, 0});
  compute_gae(buf, 0.99, 0.95);
  buf.advantages << 1.0, 2.0, 3.0;  // fixed 3-point set
  normalize_advantages(buf);
  CHECK(buf.advantages(0) == doctest::Approx(-1.2247448713915889).epsilon(1e-4));
  CHECK(buf.advantages(1) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(buf.advantages(2) == doctest::Approx(1.2247448713915889).epsilon(1e-4));

  SUBCASE("degenerate constant advantages go to ~0") {
    RolloutBuffer cbuf =
        make_stream({1, 1, 1}, {0, 0, 0}, 0.0, {0, 0, 1}, {0, 0, 0}, {0, 0, 0});
    compute_gae(cbuf, 0.99, 0.95);
    cbuf.advantages.setConstant(7.5);
    normalize_advantages(cbuf);
    CHECK(cbuf.advantages.lpNorm<Eigen::Infinity>() < 1e-7);
  }

  SUBCASE("moments after standardization: mean ~ 0, std ~ 1") {
    Rng rng(13);
    const int T = 256;
    std::vector<double> r(T), v(T);
    for (int t = 0; t < T; ++t) {
      r[t] = rng.uniform(-3, 3);
      v[t] = rng.uniform(-1, 1);
    }
    RolloutBuffer big = make_stream(r, v, 0.1, std::vector<int>(T, 0), std::vector<int>(T, 0),
                                    std::vector<double>(T, 0.0));
    compute_gae(big, 0.99, 0.95);
    normalize_advantages(big);
    CHECK(std::abs(big.advantages.mean()) < 1e-10);
    const double sd = std::sqrt((big.advantages.array() - big.advantages.mean()).square().mean());
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("compute_gae before collect is an error") {
  RolloutBuffer empty;
  CHECK_THROWS_AS(compute_gae(empty, 0.99, 0.95), std::logic_error);
  RolloutBuffer buf = make_stream({1}, {0}, 0.0, {1}, {1}, {0.5});
  CHECK_THROWS_AS(compute_gae(buf, 1.5, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(compute_gae(buf, 0.9, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(normalize_advantages(buf), std::logic_error);
}

TEST_CASE("minibatch_indices: partition, counting, determinism") {
  Rng rng(17);
  SUBCASE("8 transitions, 1 epoch, 4 minibatches of 2") {
    auto batches = minibatch_indices(8, 1, 4, rng);
    REQUIRE(batches.size() == 4);
    std::set<int> seen;
    for (const auto& b : batches) {
      CHECK(b.size() == 2);
      seen.insert(b.begin(), b.end());
    }
    CHECK(seen.size() == 8);
  }
  SUBCASE("5 epochs x 4 minibatches: 20 batches, each index 5 times") {
    const int N = 37;  // uneven split
    auto batches = minibatch_indices(N, 5, 4, rng);
    REQUIRE(batches.size() == 20);
    std::vector<int> counts(N, 0);
    for (const auto& b : batches) {
      for (int i : b) counts[i] += 1;
    }
    for (int c : counts) CHECK(c == 5);
    // near-equal batch sizes inside each epoch
    for (std::size_t e = 0; e < 5; ++e) {
      int total = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        const auto sz = static_cast<int>(batches[e * 4 + b].size());
        CHECK(sz >= N / 4);
        CHECK(sz <= N / 4 + 1);
        total += sz;
      }
      CHECK(total == N);
    }
  }
  SUBCASE("fixed seed reproduces the batch sequence") {
    Rng r1(99), r2(99);
    auto b1 = minibatch_indices(64, 3, 4, r1);
    auto b2 = minibatch_indices(64, 3, 4, r2);
    CHECK(b1 == b2);
  }
  SUBCASE("more minibatches than transitions is rejected") {
    CHECK_THROWS_AS(minibatch_indices(3, 1, 4, rng), std::invalid_argument);
  }
}

namespace {

struct CollectFixture {
  std::unique_ptr<BatchEnv> envs;
  std::unique_ptr<GaussianPolicy> policy;
  std::unique_ptr<ValueHead> critic;
  ObservationNormalizer obs_norm;
  RewardNormalizer rew_norm;
  Rng action_rng;
  Eigen::MatrixXd raw_obs;

  explicit CollectFixture(int num_envs, std::uint64_t seed, bool normalized = true)
      : obs_norm(PendulumEnv::kObsDim, normalized),
        rew_norm(num_envs, 0.99, normalized),
        action_rng(derive_seed(seed, SeedStream::kActionSampling)) {
    std::vector<std::unique_ptr<Env>> list;
    for (int i = 0; i < num_envs; ++i) {
      list.push_back(std::make_unique<PendulumEnv>(PendulumParams{}));
    }
    envs = std::make_unique<BatchEnv>(std::move(list), seed);
    auto basis = std::make_shared<const RandomBasis>(derive_seed(seed, SeedStream::kActorBasis),
                                                     PendulumEnv::kObsDim, std::vector<int>{16},
                                                     8);
    policy = std::make_unique<GaussianPolicy>(Approximator(basis, PendulumEnv::kActionDim));
    auto cbasis = std::make_shared<const RandomBasis>(derive_seed(seed, SeedStream::kCriticBasis),
                                                      PendulumEnv::kObsDim, std::vector<int>{16},
                                                      8);
    critic = std::make_unique<ValueHead>(Approximator(cbasis, 1));
    // non-zero readouts so values and means are informative
    Rng prng(derive_seed(seed, SeedStream::kParamInit));
    Eigen::VectorXd pf = policy->flat_params();
    for (Eigen::Index i = 0; i < pf.size(); ++i) pf(i) = prng.uniform(-0.3, 0.3);
    policy->set_flat_params(pf);
    Eigen::VectorXd cf = critic->flat_params();
    for (Eigen::Index i = 0; i < cf.size(); ++i) cf(i) = prng.uniform(-0.3, 0.3);
    critic->set_flat_params(cf);

    raw_obs = envs->reset_all();
    obs_norm.observe_batch(raw_obs);
  }

  RolloutBuffer collect_once(int horizon, bool cache = true) {
    return collect(*envs, *policy, *critic, horizon, action_rng, obs_norm, rew_norm, raw_obs,
                   cache);
  }
};

}  // namespace

TEST_CASE("collect: shapes, bootstrap, and stored-value consistency") {
  CollectFixture fx(1, 42);
  RolloutBuffer buf = fx.collect_once(1);
  CHECK(buf.size() == 1);
  CHECK(buf.bootstrap_values.size() == 1);

  CollectFixture fx4(4, 43);
  RolloutBuffer b4 = fx4.collect_once(50);
  CHECK(b4.size() == 200);
  CHECK(b4.num_envs == 4);
  CHECK(b4.horizon == 50);

  // stored values/log-probs are exactly the heads evaluated on stored inputs
  for (int idx : {0, 17, 63, 140, 199}) {
    CHECK(fx4.critic->value(b4.priv_obs.row(idx).transpose()) ==
          doctest::Approx(b4.values(idx)).epsilon(1e-12));
    CHECK(fx4.policy->log_prob(b4.actor_obs.row(idx).transpose(),
                               b4.actions.row(idx).transpose()) ==
          doctest::Approx(b4.log_probs(idx)).epsilon(1e-10));
  }
  // cached features correspond to the stored observations
  REQUIRE(b4.has_features);
  for (int idx : {1, 99}) {
    Eigen::VectorXd f =
        fx4.policy->mean_fn().basis()->features(b4.actor_obs.row(idx).transpose());
    CHECK((b4.actor_features.row(idx).transpose() - f).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("collect is deterministic: same seeds give bit-identical buffers") {
  CollectFixture a(3, 77), b(3, 77);
  RolloutBuffer ba = a.collect_once(40);
  RolloutBuffer bb = b.collect_once(40);
  CHECK(ba.actor_obs == bb.actor_obs);
  CHECK(ba.actions == bb.actions);
  CHECK(ba.rewards == bb.rewards);
  CHECK(ba.values == bb.values);
  CHECK(ba.log_probs == bb.log_probs);
  CHECK(ba.bootstrap_values == bb.bootstrap_values);
  CHECK(ba.dones == bb.dones);
}

TEST_CASE("collect: each env stream replays independently (no normalization)") {
  const std::uint64_t seed = 123;
  CollectFixture fx(4, seed, /*normalized=*/false);
  // pendulum episodes are 200 steps; collect past a reset boundary
  RolloutBuffer buf = fx.collect_once(210);

  for (int e = 0; e < 4; ++e) {
    PendulumEnv replay{PendulumParams{}};
    Rng env_rng(env_seed(seed, e));
    Eigen::VectorXd obs = replay.reset(env_rng);
    for (int t = 0; t < 210; ++t) {
      const int idx = buf.index(e, t);
      // stored observation is what the policy saw before acting
      CHECK((buf.priv_obs.row(idx).transpose() - obs).lpNorm<Eigen::Infinity>() == 0.0);
      StepResult r = replay.step(buf.actions.row(idx).transpose(), env_rng);
      CHECK(buf.rewards(idx) == r.reward);
      CHECK(int(buf.dones[idx]) == int(r.done));
      obs = r.obs;
    }
  }
}

TEST_CASE("collect: truncation records terminal values for bootstrapping") {
  CollectFixture fx(2, 7);
  RolloutBuffer buf = fx.collect_once(205);  // crosses the 200-step truncation
  int done_steps = 0;
  for (int e = 0; e < 2; ++e) {
    const int idx = buf.index(e, 199);
    CHECK(buf.dones[idx] == 1);
    CHECK(buf.truncateds[idx] == 1);
    CHECK(buf.terminal_values(idx) != 0.0);  // critic value of the pre-reset obs
    ++done_steps;
  }
  CHECK(done_steps == 2);
}

TEST_CASE("rollout dump writes one row per transition with the documented columns") {
  CollectFixture fx(2, 31);
  RolloutBuffer buf = fx.collect_once(5);
  compute_gae(buf, 0.99, 0.95);
  const std::string path =
      (std::filesystem::temp_directory_path() / "randpol_dump.csv").string();
  buf.dump_csv(path);

  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header.rfind("env,t,reward,value,log_prob,done,truncated,terminal_value,advantage,"
                     "value_target",
                     0) == 0);
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == buf.size());
}
