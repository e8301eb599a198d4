#include "qctrl/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qctrl/density.hpp"

namespace qctrl {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using namespace std::complex_literals;

constexpr double kMaxRk4Step = 0.01;
constexpr double kMinRk4Substeps = 4000.0;

std::vector<MatrixXcd> collapse_operators(const std::vector<NoiseChannel>& channels, int dim) {
  std::vector<MatrixXcd> ops;
  ops.reserve(channels.size());
  for (const auto& c : channels) ops.push_back(collapse_operator(c, dim));
  return ops;
}

MatrixXcd rhs_from_ops(const MatrixXcd& rho, const MatrixXcd& H,
                       const std::vector<MatrixXcd>& ops) {
  MatrixXcd out = -1.0i * (H * rho - rho * H);
  for (const auto& L : ops) {
    const MatrixXcd LdL = L.adjoint() * L;
    out += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
  }
  return out;
}

MatrixXcd liouvillian_from_ops(const MatrixXcd& H, const std::vector<MatrixXcd>& ops) {
  const int dim = static_cast<int>(H.rows());
  const MatrixXcd id = MatrixXcd::Identity(dim, dim);
  MatrixXcd sup = -1.0i * (Eigen::kroneckerProduct(id, H) -
                           Eigen::kroneckerProduct(H.transpose(), id));
  for (const auto& L : ops) {
    const MatrixXcd LdL = L.adjoint() * L;
    sup += Eigen::kroneckerProduct(L.conjugate(), L).eval();
    sup -= 0.5 * Eigen::kroneckerProduct(id, LdL);
    sup -= 0.5 * Eigen::kroneckerProduct(LdL.transpose(), id);
  }
  return sup;
}

VectorXcd vectorize(const MatrixXcd& rho) {
  return Eigen::Map<const VectorXcd>(rho.data(), rho.size());
}

MatrixXcd devectorize(const VectorXcd& v, int dim) {
  return Eigen::Map<const MatrixXcd>(v.data(), dim, dim);
}

void check_state(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols() || (rho.rows() != 3 && rho.rows() != 4))
    throw std::invalid_argument("propagate: state must be 3x3 or 4x4");
  validate_density(rho, 1e-9, 1e-9, 1e-9);
}

std::vector<double> sample_times(double T, int n_samples) {
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) times[static_cast<std::size_t>(j)] = T * j / (n_samples - 1);
  times.back() = T;
  return times;
}

void record(TrajectoryResult& out, double t, const MatrixXcd& rho) {
  const int dim = static_cast<int>(rho.rows());
  std::array<double, 4> pops{rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
                             dim == 4 ? rho(3, 3).real() : 0.0};
  out.times.push_back(t);
  out.populations.push_back(pops);
  out.coherences.push_back({std::abs(rho(0, 1)), std::abs(rho(0, 2)), std::abs(rho(1, 2))});
  out.max_excited = std::max(out.max_excited, pops[1]);
}

// Breakpoints = sample times merged with the schedule's own discontinuities.
std::vector<double> merge_breakpoints(const std::vector<double>& samples,
                                      const ControlSchedule& schedule, double T) {
  std::vector<double> pts = samples;
  if (const auto* pwc = std::get_if<PiecewiseConstant>(&schedule.shape)) {
    const int n = static_cast<int>(pwc->values.size());
    for (int i = 1; i < n; ++i) pts.push_back(T * i / n);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [T](double a, double b) { return std::abs(a - b) < 1e-12 * T; }),
            pts.end());
  return pts;
}

TrajectoryResult propagate_exact(const MatrixXcd& rho0, const ControlSchedule& schedule, double T,
                                 const std::vector<MatrixXcd>& ops,
                                 const std::vector<double>& samples) {
  const int dim = static_cast<int>(rho0.rows());
  const auto breakpoints = merge_breakpoints(samples, schedule, T);

  TrajectoryResult out;
  record(out, 0.0, rho0);
  VectorXcd v = vectorize(rho0);
  std::size_t next_sample = 1;

  MatrixXcd step;  // exp(dt L) for the last (detunings, dt) pair seen
  Detunings last_d{std::nan(""), std::nan("")};
  MatrixXcd sup;
  double last_dt = -1.0;

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    const double dt = b - a;
    const Detunings d = eval_schedule(schedule, 0.5 * (a + b), T);
    if (d.delta_p != last_d.delta_p || d.delta != last_d.delta) {
      sup = liouvillian_from_ops(build_hamiltonian(d.delta_p, d.delta, {}, dim), ops);
      last_d = d;
      last_dt = -1.0;
    }
    if (std::abs(dt - last_dt) > 1e-15 * T) {
      step = (dt * sup).exp();
      last_dt = dt;
    }
    v = step * v;
    if (next_sample < samples.size() && std::abs(b - samples[next_sample]) < 1e-12 * T) {
      record(out, samples[next_sample], devectorize(v, dim));
      ++next_sample;
    }
  }
  out.final_state = devectorize(v, dim);
  return out;
}

// Large detunings (or rates) stiffen the generator and fixed-step RK4 loses positivity
// beyond round-off. Probe the schedule on a coarse grid and shrink the step cap so the
// smallest eigenvalue stays within ~1e-8 of zero; refinement is capped at 8x.
double stiffness_factor(const ControlSchedule& schedule, double T,
                        const std::vector<MatrixXcd>& ops) {
  double scale = 1.0;
  for (int j = 0; j <= 128; ++j) {
    const Detunings d = eval_schedule(schedule, T * j / 128.0, T);
    scale = std::max({scale, std::abs(d.delta_p), std::abs(d.delta)});
  }
  double rate_sum = 0.0;
  for (const auto& L : ops) rate_sum += L.squaredNorm();
  scale = std::max(scale, rate_sum);
  return std::clamp(4.0 / scale, 0.125, 1.0);
}

TrajectoryResult propagate_rk4(const MatrixXcd& rho0, const ControlSchedule& schedule, double T,
                               const std::vector<MatrixXcd>& ops,
                               const std::vector<double>& samples) {
  const int dim = static_cast<int>(rho0.rows());
  const bool constant_pieces = is_piecewise_constant(schedule);
  const auto breakpoints = merge_breakpoints(samples, schedule, T);
  const double h_max =
      std::min(kMaxRk4Step, T / kMinRk4Substeps) * stiffness_factor(schedule, T, ops);

  TrajectoryResult out;
  record(out, 0.0, rho0);
  MatrixXcd rho = rho0;
  std::size_t next_sample = 1;

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    const int n_sub = std::max(1, static_cast<int>(std::ceil((b - a) / h_max)));
    const double h = (b - a) / n_sub;
    // Within one piece a piecewise-constant schedule has a single Hamiltonian; smooth
    // schedules get stage-time evaluations.
    MatrixXcd H_const;
    if (constant_pieces) {
      const Detunings d = eval_schedule(schedule, 0.5 * (a + b), T);
      H_const = build_hamiltonian(d.delta_p, d.delta, {}, dim);
    }
    auto H_at = [&](double t) -> MatrixXcd {
      if (constant_pieces) return H_const;
      const Detunings d = eval_schedule(schedule, std::min(t, T), T);
      return build_hamiltonian(d.delta_p, d.delta, {}, dim);
    };
    for (int s = 0; s < n_sub; ++s) {
      const double t = a + h * s;
      const MatrixXcd k1 = rhs_from_ops(rho, H_at(t), ops);
      const MatrixXcd H_mid = H_at(t + 0.5 * h);
      const MatrixXcd k2 = rhs_from_ops(rho + 0.5 * h * k1, H_mid, ops);
      const MatrixXcd k3 = rhs_from_ops(rho + 0.5 * h * k2, H_mid, ops);
      const MatrixXcd k4 = rhs_from_ops(rho + h * k3, H_at(t + h), ops);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (next_sample < samples.size() && std::abs(b - samples[next_sample]) < 1e-12 * T) {
      record(out, samples[next_sample], rho);
      ++next_sample;
    }
  }
  out.final_state = rho;
  return out;
}

}  // namespace

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                              const std::vector<NoiseChannel>& channels) {
  if (rho.rows() != rho.cols() || rho.rows() != H.rows() || H.rows() != H.cols())
    throw std::invalid_argument("lindblad_rhs: shape mismatch");
  return rhs_from_ops(rho, H, collapse_operators(channels, static_cast<int>(rho.rows())));
}

Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& H,
                             const std::vector<NoiseChannel>& channels) {
  if (H.rows() != H.cols()) throw std::invalid_argument("liouvillian: H not square");
  return liouvillian_from_ops(H, collapse_operators(channels, static_cast<int>(H.rows())));
}

Eigen::MatrixXcd propagate_constant(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                                    const std::vector<NoiseChannel>& channels, double dt) {
  if (!std::isfinite(dt) || dt < 0.0)
    throw std::invalid_argument("propagate_constant: dt must be finite and non-negative");
  const int dim = static_cast<int>(rho.rows());
  check_state(rho);
  const MatrixXcd sup = liouvillian(H, channels);
  return devectorize(MatrixXcd((dt * sup).exp()) * vectorize(rho), dim);
}

TrajectoryResult propagate_schedule(const Eigen::MatrixXcd& rho0, const ControlSchedule& schedule,
                                    double T, const std::vector<NoiseChannel>& channels,
                                    int n_samples, Integrator method) {
  check_state(rho0);
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::invalid_argument("propagate_schedule: duration must be positive");
  if (n_samples < 2) throw std::invalid_argument("propagate_schedule: need n_samples >= 2");
  const auto ops = collapse_operators(channels, static_cast<int>(rho0.rows()));
  const auto samples = sample_times(T, n_samples);

  const bool exact = method == Integrator::kExact ||
                     (method == Integrator::kAuto && is_piecewise_constant(schedule));
  if (exact && !is_piecewise_constant(schedule))
    throw std::invalid_argument("propagate_schedule: exact path needs a piecewise-constant schedule");
  return exact ? propagate_exact(rho0, schedule, T, ops, samples)
               : propagate_rk4(rho0, schedule, T, ops, samples);
}

Eigen::MatrixXcd propagate_final(const Eigen::MatrixXcd& rho0, const ControlSchedule& schedule,
                                 double T, const std::vector<NoiseChannel>& channels) {
  return propagate_schedule(rho0, schedule, T, channels, 2).final_state;
}

}  // namespace qctrl
