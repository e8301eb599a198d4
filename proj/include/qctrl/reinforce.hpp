// reinforce.hpp — REINFORCE-with-baseline training against the sink-augmented simulator

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qctrl/controls.hpp"
#include "qctrl/policy.hpp"

namespace qctrl {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamOptimizer {
 public:
  AdamOptimizer(int n_params, const AdamConfig& config = {});
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  int iterations() const { return t_; }

 private:
  AdamConfig config_;
  Eigen::VectorXd m_, v_;
  int t_ = 0;
};

struct TrainConfig {
  int n_batch = 50;
  int n_epochs = 350;
  int n_steps = 40;
  double T = 40.0;
  std::array<double, 2> ranges = {14.0, 0.2};  // half-ranges for (delta_p, delta)
  std::array<double, 2> sigma = {0.07, 0.07};
  double sink_rate = 0.25;  // 10 / T
  AdamConfig adam;
  std::uint64_t seed = 0;
  PolicyDims dims;
  double init_scale = 0.1;

  static TrainConfig restricted();  // narrow exploration around the known protocol scale
  static TrainConfig wide();        // full-range search at Omega_0 T = 20

  std::vector<double> step_times() const;  // normalized LSTM inputs i / n_steps
  void validate() const;
};

// mean/max/baseline are sink-augmented training rewards; greedy_fidelity is the
// sink-free transfer of the deterministic (actions = means) schedule — the figure of
// merit a discovered protocol is judged by.
struct EpochStats {
  double mean_reward = 0.0;
  double max_reward = 0.0;
  double baseline = 0.0;
  double greedy_fidelity = 0.0;
};
using LearningCurve = std::vector<EpochStats>;

// Normal(mean, sigma) per component, clipped to [-1, 1].
Eigen::MatrixXd sample_actions(const Eigen::MatrixXd& means, std::array<double, 2> sigma,
                               std::mt19937_64& rng);

// C = sum_batch sum_steps sum_dim (R_j - b) (a - mu)^2 / (2 sigma^2), b = batch-mean reward.
double reinforce_loss(const std::vector<double>& rewards,
                      const std::vector<Eigen::MatrixXd>& actions, const Eigen::MatrixXd& means,
                      std::array<double, 2> sigma);

// dC/dmu, the seed for backpropagation through the policy network.
Eigen::MatrixXd reinforce_means_grad(const std::vector<double>& rewards,
                                     const std::vector<Eigen::MatrixXd>& actions,
                                     const Eigen::MatrixXd& means, std::array<double, 2> sigma);

// rho_ff(T) of the piecewise-constant schedule the normalized actions define, propagated
// on the sink-augmented four-level system from |g><g|.
double rollout_reward(const Eigen::MatrixXd& actions, const TrainConfig& config);

struct TrainResult {
  PolicyNetwork net;
  LearningCurve curve;
  ControlSchedule best_schedule;  // greedy schedule with the best sink-free fidelity seen
  double best_reward = 0.0;
  int best_epoch = -1;
};

TrainResult train(const TrainConfig& config);

}  // namespace qctrl
