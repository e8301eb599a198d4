#include "qctrl/policy.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qctrl {
namespace {

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) { return 1.0 / (1.0 + (-z).exp()); }

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("lstm forward: empty time sequence");
  double prev = -1.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0 || t > 1.0)
      throw std::invalid_argument("lstm forward: times must lie in [0, 1]");
    if (t <= prev) throw std::invalid_argument("lstm forward: times must be strictly increasing");
    prev = t;
  }
}

}  // namespace

int PolicyDims::n_params() const {
  return 4 * lstm * input + 4 * lstm * lstm + 4 * lstm + dense * lstm + dense + out * dense + out;
}

PolicyNetwork::PolicyNetwork(const PolicyDims& dims, std::array<double, 2> sigma)
    : dims_(dims), sigma_(sigma) {
  if (dims.input < 1 || dims.lstm < 1 || dims.dense < 1 || dims.out < 1)
    throw std::invalid_argument("PolicyNetwork: layer sizes must be positive");
  if (!(sigma[0] > 0.0) || !(sigma[1] > 0.0))
    throw std::invalid_argument("PolicyNetwork: sigma must be positive");
  params_ = Eigen::VectorXd::Zero(dims.n_params());
  const int L = dims_.lstm;
  off_u_ = 4 * L * dims_.input;
  off_b_ = off_u_ + 4 * L * L;
  off_wd_ = off_b_ + 4 * L;
  off_bd_ = off_wd_ + dims_.dense * L;
  off_wh_ = off_bd_ + dims_.dense;
  off_bh_ = off_wh_ + dims_.out * dims_.dense;
}

PolicyNetwork PolicyNetwork::random_init(const PolicyDims& dims, std::array<double, 2> sigma,
                                         double scale, std::uint64_t seed) {
  PolicyNetwork net(dims, sigma);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  for (int i = 0; i < net.n_params(); ++i) net.params_(i) = uniform(rng);
  return net;
}

Eigen::Map<Eigen::MatrixXd> PolicyNetwork::lstm_w() {
  return {params_.data(), 4 * dims_.lstm, dims_.input};
}
Eigen::Map<Eigen::MatrixXd> PolicyNetwork::lstm_u() {
  return {params_.data() + off_u_, 4 * dims_.lstm, dims_.lstm};
}
Eigen::Map<Eigen::VectorXd> PolicyNetwork::lstm_b() {
  return {params_.data() + off_b_, 4 * dims_.lstm};
}
Eigen::Map<Eigen::MatrixXd> PolicyNetwork::dense_w() {
  return {params_.data() + off_wd_, dims_.dense, dims_.lstm};
}
Eigen::Map<Eigen::VectorXd> PolicyNetwork::dense_b() {
  return {params_.data() + off_bd_, dims_.dense};
}
Eigen::Map<Eigen::MatrixXd> PolicyNetwork::head_w() {
  return {params_.data() + off_wh_, dims_.out, dims_.dense};
}
Eigen::Map<Eigen::VectorXd> PolicyNetwork::head_b() {
  return {params_.data() + off_bh_, dims_.out};
}
Eigen::Map<const Eigen::MatrixXd> PolicyNetwork::lstm_w() const {
  return {params_.data(), 4 * dims_.lstm, dims_.input};
}
Eigen::Map<const Eigen::MatrixXd> PolicyNetwork::lstm_u() const {
  return {params_.data() + off_u_, 4 * dims_.lstm, dims_.lstm};
}
Eigen::Map<const Eigen::VectorXd> PolicyNetwork::lstm_b() const {
  return {params_.data() + off_b_, 4 * dims_.lstm};
}
Eigen::Map<const Eigen::MatrixXd> PolicyNetwork::dense_w() const {
  return {params_.data() + off_wd_, dims_.dense, dims_.lstm};
}
Eigen::Map<const Eigen::VectorXd> PolicyNetwork::dense_b() const {
  return {params_.data() + off_bd_, dims_.dense};
}
Eigen::Map<const Eigen::MatrixXd> PolicyNetwork::head_w() const {
  return {params_.data() + off_wh_, dims_.out, dims_.dense};
}
Eigen::Map<const Eigen::VectorXd> PolicyNetwork::head_b() const {
  return {params_.data() + off_bh_, dims_.out};
}

Eigen::MatrixXd PolicyNetwork::forward(const std::vector<double>& times) const {
  Cache cache;
  return forward(times, cache);
}

Eigen::MatrixXd PolicyNetwork::forward(const std::vector<double>& times, Cache& cache) const {
  check_times(times);
  if (!params_.allFinite()) throw std::invalid_argument("lstm forward: non-finite parameters");
  const int n = static_cast<int>(times.size());
  const int L = dims_.lstm;

  cache = Cache{};
  cache.inputs = times;
  cache.means.resize(n, dims_.out);

  const auto W = lstm_w();
  const auto U = lstm_u();
  const auto b = lstm_b();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(L);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(L);

  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd z = W.col(0) * times[static_cast<std::size_t>(t)] + U * h + b;
    const Eigen::ArrayXd gi = sigmoid(z.head(L).array());
    const Eigen::ArrayXd gf = sigmoid(z.segment(L, L).array());
    const Eigen::ArrayXd gg = z.segment(2 * L, L).array().tanh();
    const Eigen::ArrayXd go = sigmoid(z.tail(L).array());
    c = (gf * c.array() + gi * gg).matrix();
    const Eigen::ArrayXd tc = c.array().tanh();
    h = (go * tc).matrix();
    const Eigen::VectorXd d = (dense_w() * h + dense_b()).array().tanh().matrix();
    const Eigen::VectorXd mu = (head_w() * d + head_b()).array().tanh().matrix();

    cache.gate_i.push_back(gi.matrix());
    cache.gate_f.push_back(gf.matrix());
    cache.gate_g.push_back(gg.matrix());
    cache.gate_o.push_back(go.matrix());
    cache.cell.push_back(c);
    cache.tanh_cell.push_back(tc.matrix());
    cache.hidden.push_back(h);
    cache.dense_act.push_back(d);
    cache.means.row(t) = mu.transpose();
  }
  return cache.means;
}

Eigen::VectorXd PolicyNetwork::backward(const Cache& cache, const Eigen::MatrixXd& dmeans) const {
  const int n = static_cast<int>(cache.inputs.size());
  if (dmeans.rows() != n || dmeans.cols() != dims_.out)
    throw std::invalid_argument("lstm backward: dmeans shape mismatch");
  const int L = dims_.lstm;

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params());
  Eigen::Map<Eigen::MatrixXd> gW(grad.data(), 4 * L, dims_.input);
  Eigen::Map<Eigen::MatrixXd> gU(grad.data() + off_u_, 4 * L, L);
  Eigen::Map<Eigen::VectorXd> gb(grad.data() + off_b_, 4 * L);
  Eigen::Map<Eigen::MatrixXd> gWd(grad.data() + off_wd_, dims_.dense, L);
  Eigen::Map<Eigen::VectorXd> gbd(grad.data() + off_bd_, dims_.dense);
  Eigen::Map<Eigen::MatrixXd> gWh(grad.data() + off_wh_, dims_.out, dims_.dense);
  Eigen::Map<Eigen::VectorXd> gbh(grad.data() + off_bh_, dims_.out);

  const auto U = lstm_u();
  const auto Wd = dense_w();
  const auto Wh = head_w();

  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(L);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(L);

  for (int t = n - 1; t >= 0; --t) {
    const std::size_t s = static_cast<std::size_t>(t);
    const Eigen::ArrayXd mu = cache.means.row(t).transpose().array();
    const Eigen::ArrayXd dyh = dmeans.row(t).transpose().array() * (1.0 - mu * mu);
    gWh += dyh.matrix() * cache.dense_act[s].transpose();
    gbh += dyh.matrix();

    const Eigen::ArrayXd d_act = cache.dense_act[s].array();
    const Eigen::ArrayXd dyd =
        (Wh.transpose() * dyh.matrix()).array() * (1.0 - d_act * d_act);
    gWd += dyd.matrix() * cache.hidden[s].transpose();
    gbd += dyd.matrix();

    const Eigen::ArrayXd dh = (Wd.transpose() * dyd.matrix() + dh_next).array();

    const Eigen::ArrayXd gi = cache.gate_i[s].array();
    const Eigen::ArrayXd gf = cache.gate_f[s].array();
    const Eigen::ArrayXd gg = cache.gate_g[s].array();
    const Eigen::ArrayXd go = cache.gate_o[s].array();
    const Eigen::ArrayXd tc = cache.tanh_cell[s].array();

    const Eigen::ArrayXd dc = dh * go * (1.0 - tc * tc) + dc_next.array();
    const Eigen::ArrayXd c_prev =
        t > 0 ? cache.cell[s - 1].array() : Eigen::ArrayXd::Zero(L).eval();

    Eigen::VectorXd dz(4 * L);
    dz.head(L) = (dc * gg * gi * (1.0 - gi)).matrix();
    dz.segment(L, L) = (dc * c_prev * gf * (1.0 - gf)).matrix();
    dz.segment(2 * L, L) = (dc * gi * (1.0 - gg * gg)).matrix();
    dz.tail(L) = (dh * tc * go * (1.0 - go)).matrix();

    gW.col(0) += dz * cache.inputs[s];
    if (t > 0) gU += dz * cache.hidden[s - 1].transpose();
    gb += dz;

    dh_next = U.transpose() * dz;
    dc_next = (dc * gf).matrix();
  }
  return grad;
}

}  // namespace qctrl
