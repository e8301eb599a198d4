// lindblad.hpp — Lindblad generator assembly and density-matrix propagation

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "qctrl/controls.hpp"
#include "qctrl/hamiltonian.hpp"
#include "qctrl/noise.hpp"

namespace qctrl {

// -i[H, rho] + sum_c (L rho L^dag - {L^dag L, rho} / 2).
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                              const std::vector<NoiseChannel>& channels);

// Column-stacking superoperator of the same generator, dim^2 x dim^2.
Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& H, const std::vector<NoiseChannel>& channels);

// exp(dt L) applied to vec(rho).
Eigen::MatrixXcd propagate_constant(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                                    const std::vector<NoiseChannel>& channels, double dt);

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<std::array<double, 4>> populations;  // gg, ee, ff, ss (ss = 0 when dim = 3)
  std::vector<std::array<double, 3>> coherences;   // |ge|, |gf|, |ef|
  Eigen::MatrixXcd final_state;
  double max_excited = 0.0;  // max rho_ee over the sampled points

  double final_target() const { return populations.back()[2]; }
};

enum class Integrator { kAuto, kExact, kRungeKutta };

// Piecewise-constant schedules propagate segment-by-segment through exact exponentials;
// anything else integrates with fixed-step RK4, h <= min(0.01, T/4000). Samples are
// n_samples uniform points including t = 0 and t = T.
TrajectoryResult propagate_schedule(const Eigen::MatrixXcd& rho0, const ControlSchedule& schedule,
                                    double T, const std::vector<NoiseChannel>& channels,
                                    int n_samples, Integrator method = Integrator::kAuto);

Eigen::MatrixXcd propagate_final(const Eigen::MatrixXcd& rho0, const ControlSchedule& schedule,
                                 double T, const std::vector<NoiseChannel>& channels);

}  // namespace qctrl
