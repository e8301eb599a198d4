// policy.hpp — LSTM policy network with explicit backpropagation through time

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qctrl {

struct PolicyDims {
  int input = 1;
  int lstm = 50;
  int dense = 30;
  int out = 2;

  int n_params() const;
};

// All parameters live in one flat vector; the named blocks below are Eigen maps into it.
// Layout: lstm W (4L x in), lstm U (4L x L), lstm b (4L), dense W (D x L), dense b (D),
// head W (O x D), head b (O). LSTM gate rows stack as [input; forget; candidate; output].
class PolicyNetwork {
 public:
  explicit PolicyNetwork(const PolicyDims& dims = {},
                         std::array<double, 2> sigma = {0.07, 0.07});

  static PolicyNetwork random_init(const PolicyDims& dims, std::array<double, 2> sigma,
                                   double scale, std::uint64_t seed);

  const PolicyDims& dims() const { return dims_; }
  std::array<double, 2> sigma() const { return sigma_; }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  int n_params() const { return static_cast<int>(params_.size()); }

  Eigen::Map<Eigen::MatrixXd> lstm_w();
  Eigen::Map<Eigen::MatrixXd> lstm_u();
  Eigen::Map<Eigen::VectorXd> lstm_b();
  Eigen::Map<Eigen::MatrixXd> dense_w();
  Eigen::Map<Eigen::VectorXd> dense_b();
  Eigen::Map<Eigen::MatrixXd> head_w();
  Eigen::Map<Eigen::VectorXd> head_b();
  Eigen::Map<const Eigen::MatrixXd> lstm_w() const;
  Eigen::Map<const Eigen::MatrixXd> lstm_u() const;
  Eigen::Map<const Eigen::VectorXd> lstm_b() const;
  Eigen::Map<const Eigen::MatrixXd> dense_w() const;
  Eigen::Map<const Eigen::VectorXd> dense_b() const;
  Eigen::Map<const Eigen::MatrixXd> head_w() const;
  Eigen::Map<const Eigen::VectorXd> head_b() const;

  struct Cache {
    std::vector<double> inputs;
    std::vector<Eigen::VectorXd> gate_i, gate_f, gate_g, gate_o;
    std::vector<Eigen::VectorXd> cell, tanh_cell, hidden, dense_act;
    Eigen::MatrixXd means;
  };

  // Gaussian means, one row (mu_dp, mu_d) in (-1,1)^out per time step. Times must be
  // strictly increasing values in [0, 1]; zero initial hidden and cell state.
  Eigen::MatrixXd forward(const std::vector<double>& times) const;
  Eigen::MatrixXd forward(const std::vector<double>& times, Cache& cache) const;

  // dC/dparams for the seed dC/dmeans; cache must come from the matching forward call.
  Eigen::VectorXd backward(const Cache& cache, const Eigen::MatrixXd& dmeans) const;

 private:
  PolicyDims dims_;
  std::array<double, 2> sigma_;
  Eigen::VectorXd params_;
  int off_u_ = 0, off_b_ = 0, off_wd_ = 0, off_bd_ = 0, off_wh_ = 0, off_bh_ = 0;
};

}  // namespace qctrl
