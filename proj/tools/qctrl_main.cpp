// qctrl_main.cpp — command-line driver: simulate, train, optimize, sweep

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qctrl/config.hpp"
#include "qctrl/csv.hpp"
#include "qctrl/density.hpp"
#include "qctrl/experiments.hpp"
#include "qctrl/lindblad.hpp"
#include "qctrl/protocol_opt.hpp"
#include "qctrl/protocols.hpp"
#include "qctrl/reinforce.hpp"

namespace {

using namespace qctrl;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string protocol;
  std::string sink;  // "", "on", "off"
  std::optional<std::uint64_t> seed;
  std::optional<double> T;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_protocol = true) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  cmd->add_option("--out", opts.out_path, "output path");
  cmd->add_option("--seed", opts.seed, "random seed override");
  if (with_protocol)
    cmd->add_option("--protocol", opts.protocol, "builtin protocol name or schedule JSON path");
  cmd->add_option("--sink", opts.sink, "override the leaky sink: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--T", opts.T, "protocol duration in units of 1/Omega_0");
}

RunConfig load_config_or_default(const CommonOpts& opts) {
  if (opts.config_path.empty()) return {};
  return load_run_config(opts.config_path);
}

double resolve_T(const CommonOpts& opts, const RunConfig& config) {
  const double T = opts.T.value_or(config.system.T);
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  return T;
}

bool resolve_sink(const CommonOpts& opts, bool fallback) {
  if (opts.sink == "on") return true;
  if (opts.sink == "off") return false;
  return fallback;
}

ControlSchedule resolve_schedule(const CommonOpts& opts, const RunConfig& config, double T) {
  std::string name = opts.protocol;
  if (name.empty()) {
    if (config.protocol.has_value()) return *config.protocol;
    name = config.protocol_name.value_or("protocol1");
  }
  if (std::filesystem::exists(name)) {
    std::ifstream in(name);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::exception& err) {
      throw ConfigError("protocol file '" + name + "': " + err.what());
    }
    return schedule_from_json(doc);
  }
  try {
    return resolve_protocol(name, T);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  return out;
}

void write_json(const std::string& path, const Json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

int cmd_simulate(const CommonOpts& opts, int samples) {
  const RunConfig config = load_config_or_default(opts);
  const double T = resolve_T(opts, config);
  const ControlSchedule schedule = resolve_schedule(opts, config, T);
  const bool sink = resolve_sink(opts, config.system.sink);

  std::vector<NoiseChannel> channels;
  if (sink) channels.push_back(NoiseChannel::sink(
      config.system.sink_rate >= 0.0 ? config.system.sink_rate : 10.0 / T));
  const TrajectoryResult traj =
      propagate_schedule(ground_state(sink ? 4 : 3), schedule, T, channels, samples);

  if (!opts.out_path.empty()) {
    auto out = open_out(opts.out_path);
    CsvWriter csv(out);
    csv.header({"t", "rho_gg", "rho_ee", "rho_ff", "rho_ss", "delta_p", "delta"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const Detunings d = eval_schedule(schedule, traj.times[i], T);
      csv.row({traj.times[i], traj.populations[i][0], traj.populations[i][1],
               traj.populations[i][2], traj.populations[i][3], d.delta_p, d.delta});
    }
  }
  std::cout << "final rho_ff = " << format_sig(traj.final_target()) << ", max rho_ee = "
            << format_sig(traj.max_excited) << (sink ? " (sink on)" : "") << '\n';
  return 0;
}

int cmd_train(const CommonOpts& opts, const std::string& checkpoint_path) {
  const RunConfig config = load_config_or_default(opts);
  TrainConfig train_config = config.train.value_or(TrainConfig{});
  if (opts.seed.has_value()) train_config.seed = *opts.seed;
  else if (train_config.seed == 0) train_config.seed = config.seed;
  if (opts.T.has_value()) {
    train_config.T = *opts.T;
    train_config.sink_rate = 10.0 / *opts.T;
  }

  const TrainResult result = train(train_config);

  if (!opts.out_path.empty()) {
    auto out = open_out(opts.out_path);
    CsvWriter csv(out);
    csv.header({"epoch", "mean_reward", "max_reward", "baseline", "greedy_fidelity"});
    for (std::size_t epoch = 0; epoch < result.curve.size(); ++epoch) {
      const EpochStats& stats = result.curve[epoch];
      csv.row({static_cast<double>(epoch), stats.mean_reward, stats.max_reward, stats.baseline,
               stats.greedy_fidelity});
    }
  }
  const std::string ckpt = !checkpoint_path.empty() ? checkpoint_path : config.checkpoint_path;
  if (!ckpt.empty()) write_json(ckpt, checkpoint_to_json(result, train_config));
  std::cout << "best greedy fidelity " << format_sig(result.best_reward) << " at epoch "
            << result.best_epoch << " (" << result.curve.size() << " epochs)\n";
  return 0;
}

int cmd_optimize(const CommonOpts& opts, const std::string& family_flag, bool poly_command) {
  const RunConfig config = load_config_or_default(opts);
  OptimizeConfig optimize = config.optimize.value_or(OptimizeConfig{});
  if (!family_flag.empty()) optimize.family = family_flag;
  if (poly_command) optimize.family = "poly";
  const double T = resolve_T(opts, config);
  const bool use_sink = resolve_sink(opts, optimize.use_sink);
  const std::uint64_t seed = opts.seed.value_or(config.seed);

  ProtocolSearchResult result;
  if (optimize.family == "poly") {
    result = optimize_polynomial(T, optimize.order, optimize.n_runs, optimize.powell, use_sink,
                                 seed);
  } else {
    const AnsatzFamily family =
        optimize.family == "parity" ? AnsatzFamily::kParityPolys : AnsatzFamily::kAnsatz1;
    result = optimize_ansatz(T, family, optimize.powell, use_sink, seed);
  }

  if (!opts.out_path.empty()) {
    Json doc;
    doc["schedule"] = schedule_to_json(result.schedule);
    doc["score"] = result.score;
    doc["run_scores"] = result.run_scores;
    doc["n_evals"] = result.n_evals;
    write_json(opts.out_path, doc);
  }
  std::cout << "best score " << format_sig(result.score) << " over "
            << result.run_scores.size() << " runs (" << result.n_evals << " evaluations)\n";
  return 0;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  if (path.empty()) return;
  auto out = open_out(path);
  CsvWriter csv(out);
  std::vector<std::string> names = result.axis_names;
  names.push_back("final_rho_ff");
  names.push_back("max_rho_ee");
  csv.header(names);
  for (std::size_t i = 0; i < result.size(); ++i) {
    std::vector<double> row = result.coordinates[i];
    row.push_back(result.final_rho_ff[i]);
    row.push_back(result.max_rho_ee[i]);
    csv.row(row);
  }
}

int cmd_sweep(const CommonOpts& opts) {
  const RunConfig config = load_config_or_default(opts);
  if (!config.sweep.has_value())
    throw ConfigError("sweep: the config file needs a 'sweep' section");
  SweepSpec spec = *config.sweep;
  spec.T = resolve_T(opts, config);
  spec.protocol = resolve_schedule(opts, config, spec.T);
  if (!opts.sink.empty()) spec.include_sink = opts.sink == "on";

  const SweepResult result = run_sweep(spec);
  write_sweep_csv(opts.out_path, result);
  std::cout << result.size() << " grid points";
  if (result.reference_value.has_value())
    std::cout << ", reference " << format_sig(*result.reference_value);
  std::cout << '\n';
  return 0;
}

int cmd_scan_time(const CommonOpts& opts, double t_min, double t_max, int points) {
  const RunConfig config = load_config_or_default(opts);
  const ControlSchedule schedule = resolve_schedule(opts, config, opts.T.value_or(40.0));
  const SweepResult result =
      scan_total_time(schedule, Axis{"T", t_min, t_max, points, false}.grid());
  write_sweep_csv(opts.out_path, result);
  std::cout << result.size() << " durations scanned\n";
  return 0;
}

int cmd_raman(const CommonOpts& opts, double dp_min, double dp_max, int points) {
  const RunConfig config = load_config_or_default(opts);
  const double T = resolve_T(opts, config);
  const bool sink = resolve_sink(opts, true);
  const SweepResult result =
      raman_baseline(T, Axis{"delta_p", dp_min, dp_max, points, false}.grid(), sink,
                     config.system.sink_rate);
  write_sweep_csv(opts.out_path, result);
  double best = 0.0;
  for (double v : result.final_rho_ff) best = std::max(best, v);
  std::cout << "best constant-detuning transfer " << format_sig(best) << ", protocol-1 reference "
            << format_sig(result.reference_value.value_or(0.0)) << '\n';
  return 0;
}

int cmd_checkpoint_info(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& err) {
    throw ConfigError("checkpoint '" + path + "': " + err.what());
  }
  const Checkpoint checkpoint = checkpoint_from_json(doc);
  const auto& dims = checkpoint.config.dims;
  std::cout << "network: " << dims.input << " -> lstm " << dims.lstm << " -> dense "
            << dims.dense << " -> " << dims.out << " (" << checkpoint.net.n_params()
            << " parameters)\n"
            << "training: " << checkpoint.epoch << " epochs done, T = "
            << format_sig(checkpoint.config.T) << ", " << checkpoint.config.n_steps
            << " steps, batch " << checkpoint.config.n_batch << ", seed "
            << checkpoint.config.seed << '\n'
            << "best greedy fidelity " << format_sig(checkpoint.best_reward) << " at epoch "
            << checkpoint.best_epoch << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-level population-transfer protocols: simulate, discover, refine, sweep"};
  app.require_subcommand(1);

  CommonOpts simulate_opts, train_opts, poly_opts, ansatz_opts, sweep_opts, scan_opts,
      raman_opts;
  int samples = 1001;
  std::string checkpoint_path, family_flag, info_path;
  double t_min = 20.0, t_max = 80.0, dp_min = -10.0, dp_max = 10.0;
  int t_points = 31, dp_points = 41;

  auto* simulate = app.add_subcommand("simulate", "propagate a protocol and dump the trajectory");
  add_common(simulate, simulate_opts);
  simulate->add_option("--samples", samples, "trajectory sample count")
      ->check(CLI::Range(2, 1000000));

  auto* train_cmd = app.add_subcommand("train", "REINFORCE protocol discovery");
  add_common(train_cmd, train_opts, false);
  train_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint JSON path");

  auto* poly = app.add_subcommand("optimize-poly", "Powell search over polynomial schedules");
  add_common(poly, poly_opts, false);

  auto* ansatz = app.add_subcommand("optimize-ansatz", "Powell search over ansatz families");
  add_common(ansatz, ansatz_opts, false);
  ansatz->add_option("--family", family_flag, "ansatz1 or parity")
      ->check(CLI::IsMember({"ansatz1", "parity"}));

  auto* sweep = app.add_subcommand("sweep", "robustness sweep from a config file");
  add_common(sweep, sweep_opts);

  auto* scan = app.add_subcommand("scan-time", "stretch a protocol over a range of durations");
  add_common(scan, scan_opts);
  scan->add_option("--tmin", t_min, "smallest duration");
  scan->add_option("--tmax", t_max, "largest duration");
  scan->add_option("--points", t_points, "grid size")->check(CLI::Range(1, 100000));

  auto* raman = app.add_subcommand("raman-scan", "constant-detuning Raman reference curve");
  add_common(raman, raman_opts, false);
  raman->add_option("--dpmin", dp_min, "smallest delta_p");
  raman->add_option("--dpmax", dp_max, "largest delta_p");
  raman->add_option("--points", dp_points, "grid size")->check(CLI::Range(1, 100000));

  auto* info = app.add_subcommand("checkpoint-info", "summarize a training checkpoint");
  info->add_option("checkpoint", info_path, "checkpoint JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(simulate_opts, samples);
    if (train_cmd->parsed()) return cmd_train(train_opts, checkpoint_path);
    if (poly->parsed()) return cmd_optimize(poly_opts, "", true);
    if (ansatz->parsed())
      return cmd_optimize(ansatz_opts, family_flag.empty() ? "ansatz1" : family_flag, false);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (scan->parsed()) return cmd_scan_time(scan_opts, t_min, t_max, t_points);
    if (raman->parsed()) return cmd_raman(raman_opts, dp_min, dp_max, dp_points);
    if (info->parsed()) return cmd_checkpoint_info(info_path);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return 2;
  }
  return 1;
}
