#include "qctrl/protocol_opt.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qctrl/density.hpp"
#include "qctrl/lindblad.hpp"
#include "qctrl/noise.hpp"

namespace qctrl {
namespace {

ControlSchedule poly_schedule(const Eigen::VectorXd& x, int order) {
  PolyPair poly;
  for (int k = 0; k <= order; ++k) {
    poly.coeffs_dp[static_cast<std::size_t>(k)] = x(k);
    poly.coeffs_d[static_cast<std::size_t>(k)] = x(order + 1 + k);
  }
  return {poly, {}};
}

ControlSchedule ansatz_schedule(const Eigen::VectorXd& x, AnsatzFamily family) {
  if (family == AnsatzFamily::kAnsatz1) return {Ansatz1{x(0), x(1), x(2), x(3)}, {}};
  return {ParityPolys{{x(0), x(1), x(2)}, {x(3), x(4), x(5)}}, {}};
}

// Multi-start Powell over -score; starts drawn up front so the eval order cannot
// perturb the stream.
template <typename MakeSchedule>
ProtocolSearchResult multi_start(int dim, int n_runs, std::array<double, 2> start_range,
                                 std::uint64_t seed, const PowellConfig& cfg, double T,
                                 bool use_sink, double sink_rate,
                                 const MakeSchedule& make_schedule) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(start_range[0], start_range[1]);
  std::vector<Eigen::VectorXd> starts(static_cast<std::size_t>(n_runs));
  for (auto& x0 : starts) {
    x0.resize(dim);
    for (int i = 0; i < dim; ++i) x0(i) = uniform(rng);
  }

  auto objective = [&](const Eigen::VectorXd& x) {
    return -protocol_score(make_schedule(x), T, use_sink, sink_rate);
  };

  ProtocolSearchResult best;
  best.score = -1.0;
  for (const auto& x0 : starts) {
    const PowellResult run = powell_min(objective, x0, cfg);
    best.n_evals += run.n_evals;
    best.run_scores.push_back(-run.f);
    if (-run.f > best.score) {
      best.score = -run.f;
      best.schedule = make_schedule(run.x);
    }
  }
  return best;
}

}  // namespace

double protocol_score(const ControlSchedule& schedule, double T, bool use_sink,
                      double sink_rate) {
  std::vector<NoiseChannel> channels;
  if (use_sink) channels.push_back(NoiseChannel::sink(sink_rate >= 0.0 ? sink_rate : 10.0 / T));
  double ff;
  try {
    const Eigen::MatrixXcd rho =
        propagate_final(ground_state(use_sink ? 4 : 3), schedule, T, channels);
    ff = rho(kTarget, kTarget).real();
  } catch (const std::exception&) {
    return 0.0;  // overflowing detunings and the like: worthless, not fatal
  }
  if (!std::isfinite(ff) || ff < -1e-6 || ff > 1.0 + 1e-6) return 0.0;
  return ff;
}

ProtocolSearchResult optimize_polynomial(double T, int order, int n_runs,
                                         const PowellConfig& cfg, bool use_sink,
                                         std::uint64_t seed) {
  cfg.validate();
  if (order < 0 || order > 5)
    throw std::invalid_argument("optimize_polynomial: order must be in [0, 5]");
  if (n_runs < 1) throw std::invalid_argument("optimize_polynomial: n_runs must be >= 1");
  const int dim = 2 * (order + 1);
  return multi_start(dim, n_runs, cfg.init_range, seed, cfg, T, use_sink, -1.0,
                     [order](const Eigen::VectorXd& x) { return poly_schedule(x, order); });
}

ProtocolSearchResult optimize_ansatz(double T, AnsatzFamily family, const PowellConfig& cfg,
                                     bool use_sink, std::uint64_t seed) {
  cfg.validate();
  const bool bump = family == AnsatzFamily::kAnsatz1;
  const int dim = bump ? 4 : 6;
  const std::array<double, 2> start_range = bump ? std::array<double, 2>{-5.0, 5.0}
                                                 : std::array<double, 2>{0.0, 20.0};
  return multi_start(dim, cfg.restarts, start_range, seed, cfg, T, use_sink, -1.0,
                     [family](const Eigen::VectorXd& x) { return ansatz_schedule(x, family); });
}

}  // namespace qctrl
