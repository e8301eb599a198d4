#include "qctrl/reinforce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qctrl/density.hpp"
#include "qctrl/lindblad.hpp"
#include "qctrl/noise.hpp"
#include "qctrl/parallel.hpp"

namespace qctrl {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream per (seed, epoch, agent) so batch rollouts stay deterministic
// no matter how they are scheduled across workers.
std::mt19937_64 agent_rng(std::uint64_t seed, int epoch, int agent) {
  const std::uint64_t mixed =
      splitmix64(splitmix64(seed + 0x51ed270b + static_cast<std::uint64_t>(epoch)) +
                 static_cast<std::uint64_t>(agent));
  return std::mt19937_64(mixed);
}

std::vector<std::array<double, 2>> to_rows(const Eigen::MatrixXd& actions) {
  std::vector<std::array<double, 2>> rows(static_cast<std::size_t>(actions.rows()));
  for (int i = 0; i < actions.rows(); ++i) rows[static_cast<std::size_t>(i)] = {actions(i, 0), actions(i, 1)};
  return rows;
}

}  // namespace

AdamOptimizer::AdamOptimizer(int n_params, const AdamConfig& config) : config_(config) {
  if (n_params < 1) throw std::invalid_argument("AdamOptimizer: empty parameter vector");
  m_ = Eigen::VectorXd::Zero(n_params);
  v_ = Eigen::VectorXd::Zero(n_params);
}

void AdamOptimizer::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("AdamOptimizer: size mismatch");
  ++t_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseProduct(grad);
  const double m_corr = 1.0 - std::pow(config_.beta1, t_);
  const double v_corr = 1.0 - std::pow(config_.beta2, t_);
  params -= (config_.learning_rate / m_corr) * m_.cwiseQuotient(
                ((v_ / v_corr).cwiseSqrt().array() + config_.epsilon).matrix());
}

TrainConfig TrainConfig::restricted() { return {}; }

TrainConfig TrainConfig::wide() {
  TrainConfig config;
  config.n_batch = 100;
  config.n_steps = 20;
  config.T = 20.0;
  config.ranges = {50.0, 50.0};
  config.sigma = {0.001, 0.001};
  config.sink_rate = 0.5;
  return config;
}

std::vector<double> TrainConfig::step_times() const {
  std::vector<double> times(static_cast<std::size_t>(n_steps));
  for (int i = 0; i < n_steps; ++i) times[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_steps;
  return times;
}

void TrainConfig::validate() const {
  if (n_batch < 1) throw std::invalid_argument("TrainConfig: n_batch must be >= 1");
  if (n_epochs < 0) throw std::invalid_argument("TrainConfig: n_epochs must be >= 0");
  if (n_steps < 1) throw std::invalid_argument("TrainConfig: n_steps must be >= 1");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("TrainConfig: bad duration");
  if (!(sink_rate >= 0.0)) throw std::invalid_argument("TrainConfig: sink_rate must be >= 0");
  if (!(sigma[0] > 0.0) || !(sigma[1] > 0.0))
    throw std::invalid_argument("TrainConfig: sigma must be positive");
  if (ranges[0] < 0.0 || ranges[1] < 0.0)
    throw std::invalid_argument("TrainConfig: ranges must be non-negative");
  if (!(init_scale >= 0.0)) throw std::invalid_argument("TrainConfig: bad init_scale");
}

Eigen::MatrixXd sample_actions(const Eigen::MatrixXd& means, std::array<double, 2> sigma,
                               std::mt19937_64& rng) {
  if (means.cols() != 2) throw std::invalid_argument("sample_actions: means must have 2 columns");
  Eigen::MatrixXd actions(means.rows(), 2);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  for (int t = 0; t < means.rows(); ++t)
    for (int k = 0; k < 2; ++k)
      actions(t, k) =
          std::clamp(means(t, k) + sigma[static_cast<std::size_t>(k)] * unit_normal(rng), -1.0, 1.0);
  return actions;
}

double reinforce_loss(const std::vector<double>& rewards,
                      const std::vector<Eigen::MatrixXd>& actions, const Eigen::MatrixXd& means,
                      std::array<double, 2> sigma) {
  if (rewards.empty()) throw std::invalid_argument("reinforce_loss: empty batch");
  if (actions.size() != rewards.size())
    throw std::invalid_argument("reinforce_loss: rewards/actions size mismatch");
  double baseline = 0.0;
  for (double r : rewards) baseline += r;
  baseline /= static_cast<double>(rewards.size());

  double loss = 0.0;
  for (std::size_t j = 0; j < rewards.size(); ++j) {
    if (actions[j].rows() != means.rows() || actions[j].cols() != means.cols())
      throw std::invalid_argument("reinforce_loss: action shape mismatch");
    const double advantage = rewards[j] - baseline;
    for (int k = 0; k < 2; ++k) {
      const double inv_two_var = 0.5 / (sigma[static_cast<std::size_t>(k)] * sigma[static_cast<std::size_t>(k)]);
      loss += advantage * inv_two_var * (actions[j].col(k) - means.col(k)).squaredNorm();
    }
  }
  return loss;
}

Eigen::MatrixXd reinforce_means_grad(const std::vector<double>& rewards,
                                     const std::vector<Eigen::MatrixXd>& actions,
                                     const Eigen::MatrixXd& means, std::array<double, 2> sigma) {
  if (rewards.empty()) throw std::invalid_argument("reinforce_means_grad: empty batch");
  if (actions.size() != rewards.size())
    throw std::invalid_argument("reinforce_means_grad: rewards/actions size mismatch");
  double baseline = 0.0;
  for (double r : rewards) baseline += r;
  baseline /= static_cast<double>(rewards.size());

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(means.rows(), means.cols());
  for (std::size_t j = 0; j < rewards.size(); ++j) {
    const double advantage = rewards[j] - baseline;
    for (int k = 0; k < 2; ++k) {
      const double inv_var = 1.0 / (sigma[static_cast<std::size_t>(k)] * sigma[static_cast<std::size_t>(k)]);
      grad.col(k) -= advantage * inv_var * (actions[j].col(k) - means.col(k));
    }
  }
  return grad;
}

double rollout_reward(const Eigen::MatrixXd& actions, const TrainConfig& config) {
  if (config.T == 0.0) return 0.0;  // zero-length protocol never leaves |g>
  const ControlSchedule schedule = pwc_from_actions(to_rows(actions), config.ranges);
  const std::vector<NoiseChannel> channels{NoiseChannel::sink(config.sink_rate)};
  const Eigen::MatrixXcd rho = propagate_final(ground_state(4), schedule, config.T, channels);
  return rho(kTarget, kTarget).real();
}

namespace {

// The sink exists to shape training; protocols are judged on the closed three-level
// system, so the greedy schedule is scored without it.
double greedy_fidelity(const Eigen::MatrixXd& means, const TrainConfig& config) {
  if (config.T == 0.0) return 0.0;
  const ControlSchedule schedule = pwc_from_actions(to_rows(means), config.ranges);
  return propagate_final(ground_state(3), schedule, config.T, {})(kTarget, kTarget).real();
}

}  // namespace

TrainResult train(const TrainConfig& config) {
  config.validate();
  TrainResult result{
      PolicyNetwork::random_init(config.dims, config.sigma, config.init_scale, config.seed),
      {},
      ControlSchedule{},
      -std::numeric_limits<double>::infinity(),
      -1};
  AdamOptimizer adam(result.net.n_params(), config.adam);
  const std::vector<double> times = config.step_times();

  for (int epoch = 0; epoch < config.n_epochs; ++epoch) {
    PolicyNetwork::Cache cache;
    const Eigen::MatrixXd means = result.net.forward(times, cache);
    const double greedy = greedy_fidelity(means, config);

    std::vector<Eigen::MatrixXd> actions(static_cast<std::size_t>(config.n_batch));
    std::vector<double> rewards(static_cast<std::size_t>(config.n_batch));
    parallel_for(config.n_batch, [&](int agent) {
      auto rng = agent_rng(config.seed, epoch, agent);
      actions[static_cast<std::size_t>(agent)] = sample_actions(means, config.sigma, rng);
      rewards[static_cast<std::size_t>(agent)] =
          rollout_reward(actions[static_cast<std::size_t>(agent)], config);
    });

    EpochStats stats;
    stats.mean_reward = 0.0;
    stats.max_reward = -std::numeric_limits<double>::infinity();
    for (double r : rewards) {
      stats.mean_reward += r;
      stats.max_reward = std::max(stats.max_reward, r);
    }
    stats.mean_reward /= config.n_batch;
    stats.baseline = stats.mean_reward;
    stats.greedy_fidelity = greedy;

    const double loss = reinforce_loss(rewards, actions, means, config.sigma);
    if (!std::isfinite(loss))
      throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
    const Eigen::MatrixXd dmeans = reinforce_means_grad(rewards, actions, means, config.sigma);
    const Eigen::VectorXd grad = result.net.backward(cache, dmeans);
    if (!grad.allFinite())
      throw std::runtime_error("train: non-finite gradient at epoch " + std::to_string(epoch));
    adam.step(result.net.params(), grad);

    if (greedy > result.best_reward) {
      result.best_reward = greedy;
      result.best_epoch = epoch;
      result.best_schedule = pwc_from_actions(to_rows(means), config.ranges);
    }
    result.curve.push_back(stats);
  }

  if (result.best_epoch < 0) {
    // No epochs ran; report the initial network's greedy protocol.
    const Eigen::MatrixXd means = result.net.forward(times);
    result.best_reward = greedy_fidelity(means, config);
    result.best_schedule = pwc_from_actions(to_rows(means), config.ranges);
  }
  return result;
}

}  // namespace qctrl
