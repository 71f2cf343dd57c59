#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "randpol/activation.hpp"
#include "randpol/basis.hpp"
#include "randpol/checkpoint.hpp"
#include "randpol/config.hpp"
#include "randpol/normalize.hpp"
#include "randpol/policy.hpp"
#include "randpol/rollout.hpp"
#include "randpol/trainer.hpp"

namespace py = pybind11;
using namespace randpol;

namespace {

// single-stream GAE on plain arrays; mirrors the buffer-based path
std::pair<Eigen::VectorXd, Eigen::VectorXd> gae_single(
    const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
    const std::vector<bool>& dones, const std::vector<bool>& truncateds,
    const Eigen::VectorXd& terminal_values, double bootstrap, double gamma, double lambda) {
  const int T = static_cast<int>(rewards.size());
  RolloutBuffer buf;
  buf.num_envs = 1;
  buf.horizon = T;
  buf.rewards = rewards;
  buf.values = values;
  buf.log_probs = Eigen::VectorXd::Zero(T);
  buf.actions = Eigen::MatrixXd::Zero(T, 1);
  buf.actor_obs = Eigen::MatrixXd::Zero(T, 1);
  buf.priv_obs = Eigen::MatrixXd::Zero(T, 1);
  buf.terminal_values = terminal_values;
  buf.bootstrap_values = Eigen::VectorXd::Constant(1, bootstrap);
  buf.dones.assign(T, 0);
  buf.truncateds.assign(T, 0);
  for (int t = 0; t < T; ++t) {
    buf.dones[t] = dones[t] ? 1 : 0;
    buf.truncateds[t] = truncateds[t] ? 1 : 0;
  }
  compute_gae(buf, gamma, lambda);
  return {buf.advantages, buf.value_targets};
}

double diag_gaussian_log_prob(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std,
                              const Eigen::VectorXd& action) {
  auto basis = std::make_shared<const RandomBasis>(1, 1, std::vector<int>{1},
                                                   static_cast<int>(mean.size()));
  GaussianPolicy helper(Approximator(basis, static_cast<int>(mean.size())));
  Eigen::VectorXd flat = helper.flat_params();
  flat.tail(log_std.size()) = log_std;
  helper.set_flat_params(flat);
  return helper.log_prob_from_mean(mean.transpose(), action.transpose())(0);
}

double diag_gaussian_entropy(const Eigen::VectorXd& log_std) {
  auto basis = std::make_shared<const RandomBasis>(1, 1, std::vector<int>{1},
                                                   static_cast<int>(log_std.size()));
  GaussianPolicy helper(Approximator(basis, static_cast<int>(log_std.size())));
  Eigen::VectorXd flat = helper.flat_params();
  flat.tail(log_std.size()) = log_std;
  helper.set_flat_params(flat);
  return helper.entropy();
}

py::tuple actor_critic_counts(int actor_obs_dim, int critic_obs_dim, int action_dim,
                              int feature_dim, const std::vector<int>& hidden) {
  auto actor_basis =
      std::make_shared<const RandomBasis>(1, actor_obs_dim, hidden, feature_dim);
  auto critic_basis =
      std::make_shared<const RandomBasis>(2, critic_obs_dim, hidden, feature_dim);
  GaussianPolicy policy(Approximator(actor_basis, action_dim));
  ValueHead value(Approximator(critic_basis, 1));
  return py::make_tuple(count_trainable(policy, value), count_total(policy, value));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "randomized-readout actor-critic core operations";
  m.attr("__version__") = "0.1.0";

  m.def("elu", py::vectorize(&elu), "exponential linear unit, alpha = 1");

  py::class_<RandomBasis, std::shared_ptr<RandomBasis>>(m, "RandomBasis",
                                                        "frozen random feature network")
      .def(py::init<std::uint64_t, int, std::vector<int>, int>(), py::arg("seed"),
           py::arg("input_dim"), py::arg("hidden_widths"), py::arg("feature_dim"))
      .def("features", &RandomBasis::features, py::arg("x"))
      .def("features_batch", &RandomBasis::features_batch, py::arg("x"))
      .def_property_readonly("input_dim", &RandomBasis::input_dim)
      .def_property_readonly("feature_dim", &RandomBasis::feature_dim)
      .def_property_readonly("seed", &RandomBasis::seed)
      .def("param_count", &RandomBasis::param_count)
      .def("checksum", &RandomBasis::checksum);

  py::class_<RunningMeanStd>(m, "RunningMeanStd", "streaming per-dimension moments")
      .def(py::init<int>(), py::arg("dim"))
      .def("update", &RunningMeanStd::update, py::arg("sample"))
      .def("update_batch", &RunningMeanStd::update_batch, py::arg("samples"))
      .def("merge", &RunningMeanStd::merge, py::arg("other"))
      .def_property_readonly("count", &RunningMeanStd::count)
      .def_property_readonly("mean", [](const RunningMeanStd& s) { return s.mean(); })
      .def_property_readonly("variance", &RunningMeanStd::variance);

  m.def("gae", &gae_single, py::arg("rewards"), py::arg("values"), py::arg("dones"),
        py::arg("truncateds"), py::arg("terminal_values"), py::arg("bootstrap"),
        py::arg("gamma"), py::arg("lam"),
        "single-stream generalized advantage estimation; returns (advantages, value_targets)");

  m.def("gaussian_log_prob", &diag_gaussian_log_prob, py::arg("mean"), py::arg("log_std"),
        py::arg("action"), "diagonal Gaussian log density");
  m.def("gaussian_entropy", &diag_gaussian_entropy, py::arg("log_std"),
        "diagonal Gaussian entropy");

  m.def("actor_critic_counts", &actor_critic_counts, py::arg("actor_obs_dim"),
        py::arg("critic_obs_dim"), py::arg("action_dim"), py::arg("feature_dim"),
        py::arg("hidden_widths"),
        "(trainable, total) parameter counts of a randomized actor-critic pair");

  m.def("default_config_text",
        [](const std::string& algorithm, const std::string& env) {
          Algorithm alg = algorithm == "dense_baseline" ? Algorithm::kDenseBaseline
                                                        : Algorithm::kRandpol;
          EnvKind kind = env == "pendulum" ? EnvKind::kPendulum : EnvKind::kVelocityTrack;
          return make_default_config(alg, kind).to_text();
        },
        py::arg("algorithm") = "randpol", py::arg("env") = "velocity_track");

  m.def("evaluate_checkpoint",
        [](const std::string& path, int episodes, std::uint64_t seed) {
          EvalReport r = evaluate_checkpoint(path, episodes, seed);
          py::dict d;
          d["episodes"] = r.episodes;
          d["mean_reward"] = r.mean_reward;
          d["mean_lin_reward"] = r.mean_lin_reward;
          d["mean_yaw_reward"] = r.mean_yaw_reward;
          d["mean_fwd_err"] = r.mean_fwd_err;
          d["mean_yaw_err"] = r.mean_yaw_err;
          return d;
        },
        py::arg("path"), py::arg("episodes") = 16, py::arg("seed") = 1,
        "deterministic policy-mean evaluation of a saved checkpoint");
}
