// experiments.hpp — robustness sweeps and comparison scans over fixed protocols

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qctrl/controls.hpp"
#include "qctrl/noise.hpp"

namespace qctrl {

enum class SweepScenario { kLambda, kLadder, kDephasing, kStray, kTimeScan, kRamanBaseline };

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int n_points = 21;
  bool log_spacing = false;

  std::vector<double> grid() const;
};

struct SweepSpec {
  ControlSchedule protocol;
  double T = 40.0;
  SweepScenario scenario = SweepScenario::kLambda;
  Level dephased_level = Level::g;      // kDephasing only
  std::vector<Axis> axes;               // empty -> scenario defaults
  std::optional<bool> include_sink;     // default: only stray (and Raman) sweeps leak
  double sink_rate = -1.0;              // negative -> 10 / T
  int trajectory_samples = 501;         // sampling density for max rho_ee

  bool sink_active() const;
  double resolved_sink_rate() const;
  std::vector<Axis> resolved_axes() const;
  void validate() const;
};

// Flattened grid, outer axis first; one row of coordinates per point.
struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> coordinates;
  std::vector<double> final_rho_ff;
  std::vector<double> max_rho_ee;
  std::optional<double> reference_value;  // e.g. the protocol-1 line in the Raman scan

  std::size_t size() const { return final_rho_ff.size(); }
};

// Lambda: decay e->g along one axis. Ladder: (e->g) x (f->e) grid.
SweepResult sweep_decay(const SweepSpec& spec);

// Pure dephasing of the configured level, one axis.
SweepResult sweep_dephasing(const SweepSpec& spec);

// 2-D grid of constant stray offsets added to both detunings; sink on by default.
SweepResult sweep_stray(const SweepSpec& spec);

// Stretches the protocol shape (a function of t/T) to each duration in T_grid.
SweepResult scan_total_time(const ControlSchedule& protocol, const std::vector<double>& T_grid,
                            int trajectory_samples = 501);

// Constant-detuning Raman reference: max over t of rho_ff for each delta_p, leaky by
// default, with the protocol-1 final population at the same T attached as reference.
SweepResult raman_baseline(double T, const std::vector<double>& dp_grid,
                           bool include_sink = true, double sink_rate = -1.0,
                           int trajectory_samples = 2001);

SweepResult run_sweep(const SweepSpec& spec);  // dispatch on spec.scenario

}  // namespace qctrl
