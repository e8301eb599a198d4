// config.hpp — JSON configuration files, schedule serialization, checkpoints

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "qctrl/controls.hpp"
#include "qctrl/experiments.hpp"
#include "qctrl/optimize.hpp"
#include "qctrl/policy.hpp"
#include "qctrl/reinforce.hpp"

namespace qctrl {

using Json = nlohmann::json;

// Bad documents, unknown keys, wrong types/shapes: the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json schedule_to_json(const ControlSchedule& schedule);
ControlSchedule schedule_from_json(const Json& doc);

Json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const Json& doc);

Json powell_config_to_json(const PowellConfig& config);
PowellConfig powell_config_from_json(const Json& doc);

Json sweep_spec_to_json(const SweepSpec& spec);
// The protocol is carried outside the sweep section; the caller installs it afterwards.
SweepSpec sweep_spec_from_json(const Json& doc);

struct SystemConfig {
  double T = 40.0;
  bool sink = false;
  double sink_rate = -1.0;  // negative -> 10 / T

  double resolved_sink_rate() const { return sink_rate >= 0.0 ? sink_rate : 10.0 / T; }
};

struct OptimizeConfig {
  std::string family = "poly";  // poly | ansatz1 | parity
  int order = 5;
  int n_runs = 10;
  bool use_sink = false;
  PowellConfig powell;
};

struct RunConfig {
  std::uint64_t seed = 0;
  SystemConfig system;
  std::optional<std::string> protocol_name;
  std::optional<ControlSchedule> protocol;
  std::optional<TrainConfig> train;
  std::optional<OptimizeConfig> optimize;
  std::optional<SweepSpec> sweep;
  std::string out_path;
  std::string checkpoint_path;
};

RunConfig run_config_from_json(const Json& doc);
Json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::string& path);

// Checkpoint schema: {version, config, epoch, seed, dims, sigma, params (per-block
// shape + data), best_reward, best_epoch, best_actions}. Doubles round-trip exactly.
struct Checkpoint {
  TrainConfig config;
  PolicyNetwork net;
  int epoch = 0;
  double best_reward = 0.0;
  int best_epoch = -1;
  std::vector<std::array<double, 2>> best_actions;
};

Json checkpoint_to_json(const TrainResult& result, const TrainConfig& config);
Checkpoint checkpoint_from_json(const Json& doc);

}  // namespace qctrl
