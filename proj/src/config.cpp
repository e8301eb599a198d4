#include "qctrl/config.hpp"

#include <fstream>

namespace qctrl {
namespace {

void check_keys(const Json& obj, const char* context,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(context) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (key == name) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(std::string(context) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const Json& obj, const char* context, const char* key) {
  if (!obj.contains(key))
    throw ConfigError(std::string(context) + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string(context) + ": bad value for '" + key + "'");
  }
}

template <typename T>
T get_or(const Json& obj, const char* context, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, context, key);
}

std::array<double, 2> get_pair(const Json& obj, const char* context, const char* key) {
  const auto v = get<std::vector<double>>(obj, context, key);
  if (v.size() != 2)
    throw ConfigError(std::string(context) + ": '" + key + "' must have 2 entries");
  return {v[0], v[1]};
}

template <std::size_t N>
std::array<double, N> get_array(const Json& obj, const char* context, const char* key) {
  const auto v = get<std::vector<double>>(obj, context, key);
  if (v.size() != N)
    throw ConfigError(std::string(context) + ": '" + key + "' must have " +
                      std::to_string(N) + " entries");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
  return out;
}

Json block_to_json(const double* data, int rows, int cols) {
  Json block;
  block["shape"] = {rows, cols};
  block["data"] = std::vector<double>(data, data + static_cast<std::ptrdiff_t>(rows) * cols);
  return block;
}

// Column-major payload back into a parameter block of the expected shape.
void block_from_json(const Json& doc, const char* name, double* dest, int rows, int cols) {
  const std::string context = std::string("checkpoint.params.") + name;
  check_keys(doc, context.c_str(), {"shape", "data"});
  const auto shape = get<std::vector<int>>(doc, context.c_str(), "shape");
  if (shape.size() != 2 || shape[0] != rows || shape[1] != cols)
    throw ConfigError(context + ": shape mismatch");
  const auto data = get<std::vector<double>>(doc, context.c_str(), "data");
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw ConfigError(context + ": data length mismatch");
  std::copy(data.begin(), data.end(), dest);
}

Level level_from_string(const std::string& name, const char* context) {
  if (name == "g") return Level::g;
  if (name == "e") return Level::e;
  if (name == "f") return Level::f;
  throw ConfigError(std::string(context) + ": level must be g, e or f");
}

std::string level_to_string(Level level) {
  switch (level) {
    case Level::g: return "g";
    case Level::e: return "e";
    case Level::f: return "f";
  }
  return "?";
}

const std::pair<SweepScenario, const char*> kScenarioNames[] = {
    {SweepScenario::kLambda, "lambda"},         {SweepScenario::kLadder, "ladder"},
    {SweepScenario::kDephasing, "dephasing"},   {SweepScenario::kStray, "stray"},
    {SweepScenario::kTimeScan, "time_scan"},    {SweepScenario::kRamanBaseline, "raman"},
};

std::string scenario_to_string(SweepScenario scenario) {
  for (const auto& [value, name] : kScenarioNames)
    if (value == scenario) return name;
  return "?";
}

SweepScenario scenario_from_string(const std::string& name) {
  for (const auto& [value, scenario_name] : kScenarioNames)
    if (name == scenario_name) return value;
  throw ConfigError("sweep.scenario: unknown scenario '" + name + "'");
}

Json stray_to_json(const Detunings& stray) { return Json::array({stray.delta_p, stray.delta}); }

}  // namespace

Json schedule_to_json(const ControlSchedule& schedule) {
  Json doc;
  if (const auto* pwc = std::get_if<PiecewiseConstant>(&schedule.shape)) {
    doc["family"] = "pwc";
    Json values = Json::array();
    for (const auto& v : pwc->values) values.push_back({v.delta_p, v.delta});
    doc["values"] = std::move(values);
  } else if (const auto* poly = std::get_if<PolyPair>(&schedule.shape)) {
    doc["family"] = "poly";
    doc["coeffs_dp"] = poly->coeffs_dp;
    doc["coeffs_d"] = poly->coeffs_d;
  } else if (const auto* ansatz = std::get_if<Ansatz1>(&schedule.shape)) {
    doc["family"] = "ansatz1";
    doc["c1"] = ansatz->c1;
    doc["c2"] = ansatz->c2;
    doc["k"] = ansatz->k;
    doc["m"] = ansatz->m;
  } else if (const auto* parity = std::get_if<ParityPolys>(&schedule.shape)) {
    doc["family"] = "parity";
    doc["dp_odd"] = parity->dp_odd;
    doc["d_even"] = parity->d_even;
  } else {
    doc["family"] = "raman";
    doc["dp"] = std::get<ConstantRaman>(schedule.shape).dp;
  }
  doc["stray"] = stray_to_json(schedule.stray);
  return doc;
}

ControlSchedule schedule_from_json(const Json& doc) {
  const char* context = "protocol";
  const auto family = get<std::string>(doc, context, "family");
  ControlSchedule schedule;
  if (family == "pwc") {
    check_keys(doc, context, {"family", "values", "stray"});
    PiecewiseConstant pwc;
    const auto rows = get<std::vector<std::vector<double>>>(doc, context, "values");
    if (rows.empty()) throw ConfigError("protocol: empty piecewise-constant table");
    for (const auto& row : rows) {
      if (row.size() != 2) throw ConfigError("protocol: each value must be [delta_p, delta]");
      pwc.values.push_back({row[0], row[1]});
    }
    schedule.shape = std::move(pwc);
  } else if (family == "poly") {
    check_keys(doc, context, {"family", "coeffs_dp", "coeffs_d", "stray"});
    PolyPair poly;
    poly.coeffs_dp = get_array<6>(doc, context, "coeffs_dp");
    poly.coeffs_d = get_array<6>(doc, context, "coeffs_d");
    schedule.shape = poly;
  } else if (family == "ansatz1") {
    check_keys(doc, context, {"family", "c1", "c2", "k", "m", "stray"});
    schedule.shape = Ansatz1{get<double>(doc, context, "c1"), get<double>(doc, context, "c2"),
                             get<double>(doc, context, "k"), get<double>(doc, context, "m")};
  } else if (family == "parity") {
    check_keys(doc, context, {"family", "dp_odd", "d_even", "stray"});
    ParityPolys parity;
    parity.dp_odd = get_array<3>(doc, context, "dp_odd");
    parity.d_even = get_array<3>(doc, context, "d_even");
    schedule.shape = parity;
  } else if (family == "raman") {
    check_keys(doc, context, {"family", "dp", "stray"});
    schedule.shape = ConstantRaman{get<double>(doc, context, "dp")};
  } else {
    throw ConfigError("protocol: unknown family '" + family + "'");
  }
  if (doc.contains("stray")) {
    const auto stray = get_pair(doc, context, "stray");
    schedule.stray = {stray[0], stray[1]};
  }
  return schedule;
}

Json train_config_to_json(const TrainConfig& config) {
  return Json{{"n_batch", config.n_batch},
              {"n_epochs", config.n_epochs},
              {"n_steps", config.n_steps},
              {"T", config.T},
              {"ranges", config.ranges},
              {"sigma", config.sigma},
              {"sink_rate", config.sink_rate},
              {"adam",
               {{"learning_rate", config.adam.learning_rate},
                {"beta1", config.adam.beta1},
                {"beta2", config.adam.beta2},
                {"epsilon", config.adam.epsilon}}},
              {"seed", config.seed},
              {"dims",
               {{"input", config.dims.input},
                {"lstm", config.dims.lstm},
                {"dense", config.dims.dense},
                {"out", config.dims.out}}},
              {"init_scale", config.init_scale}};
}

TrainConfig train_config_from_json(const Json& doc) {
  const char* context = "train";
  check_keys(doc, context,
             {"n_batch", "n_epochs", "n_steps", "T", "ranges", "sigma", "sink_rate", "adam",
              "seed", "dims", "init_scale"});
  TrainConfig config;
  config.n_batch = get_or(doc, context, "n_batch", config.n_batch);
  config.n_epochs = get_or(doc, context, "n_epochs", config.n_epochs);
  config.n_steps = get_or(doc, context, "n_steps", config.n_steps);
  config.T = get_or(doc, context, "T", config.T);
  if (doc.contains("ranges")) config.ranges = get_pair(doc, context, "ranges");
  if (doc.contains("sigma")) config.sigma = get_pair(doc, context, "sigma");
  config.sink_rate = get_or(doc, context, "sink_rate", config.T > 0.0 ? 10.0 / config.T : 0.0);
  if (doc.contains("adam")) {
    const Json& adam = doc.at("adam");
    check_keys(adam, "train.adam", {"learning_rate", "beta1", "beta2", "epsilon"});
    config.adam.learning_rate =
        get_or(adam, "train.adam", "learning_rate", config.adam.learning_rate);
    config.adam.beta1 = get_or(adam, "train.adam", "beta1", config.adam.beta1);
    config.adam.beta2 = get_or(adam, "train.adam", "beta2", config.adam.beta2);
    config.adam.epsilon = get_or(adam, "train.adam", "epsilon", config.adam.epsilon);
  }
  config.seed = get_or<std::uint64_t>(doc, context, "seed", config.seed);
  if (doc.contains("dims")) {
    const Json& dims = doc.at("dims");
    check_keys(dims, "train.dims", {"input", "lstm", "dense", "out"});
    config.dims.input = get_or(dims, "train.dims", "input", config.dims.input);
    config.dims.lstm = get_or(dims, "train.dims", "lstm", config.dims.lstm);
    config.dims.dense = get_or(dims, "train.dims", "dense", config.dims.dense);
    config.dims.out = get_or(dims, "train.dims", "out", config.dims.out);
  }
  config.init_scale = get_or(doc, context, "init_scale", config.init_scale);
  try {
    config.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("train: ") + err.what());
  }
  return config;
}

Json powell_config_to_json(const PowellConfig& config) {
  return Json{{"x_tol", config.x_tol},
              {"f_tol", config.f_tol},
              {"max_iter", config.max_iter},
              {"bracket_growth", config.bracket_growth},
              {"restarts", config.restarts},
              {"init_range", config.init_range},
              {"max_line_evals", config.max_line_evals}};
}

PowellConfig powell_config_from_json(const Json& doc) {
  const char* context = "optimize.powell";
  check_keys(doc, context,
             {"x_tol", "f_tol", "max_iter", "bracket_growth", "restarts", "init_range",
              "max_line_evals"});
  PowellConfig config;
  config.x_tol = get_or(doc, context, "x_tol", config.x_tol);
  config.f_tol = get_or(doc, context, "f_tol", config.f_tol);
  config.max_iter = get_or(doc, context, "max_iter", config.max_iter);
  config.bracket_growth = get_or(doc, context, "bracket_growth", config.bracket_growth);
  config.restarts = get_or(doc, context, "restarts", config.restarts);
  if (doc.contains("init_range")) config.init_range = get_pair(doc, context, "init_range");
  config.max_line_evals = get_or(doc, context, "max_line_evals", config.max_line_evals);
  try {
    config.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("optimize.powell: ") + err.what());
  }
  return config;
}

Json sweep_spec_to_json(const SweepSpec& spec) {
  Json doc;
  doc["scenario"] = scenario_to_string(spec.scenario);
  if (spec.scenario == SweepScenario::kDephasing)
    doc["level"] = level_to_string(spec.dephased_level);
  if (!spec.axes.empty()) {
    Json axes = Json::array();
    for (const auto& axis : spec.axes)
      axes.push_back({{"name", axis.name},
                      {"min", axis.min},
                      {"max", axis.max},
                      {"n_points", axis.n_points},
                      {"spacing", axis.log_spacing ? "log" : "linear"}});
    doc["axes"] = std::move(axes);
  }
  if (spec.include_sink.has_value()) doc["include_sink"] = *spec.include_sink;
  if (spec.sink_rate >= 0.0) doc["sink_rate"] = spec.sink_rate;
  doc["trajectory_samples"] = spec.trajectory_samples;
  return doc;
}

SweepSpec sweep_spec_from_json(const Json& doc) {
  const char* context = "sweep";
  check_keys(doc, context,
             {"scenario", "level", "axes", "include_sink", "sink_rate", "trajectory_samples"});
  SweepSpec spec;
  spec.scenario = scenario_from_string(get<std::string>(doc, context, "scenario"));
  if (doc.contains("level"))
    spec.dephased_level = level_from_string(get<std::string>(doc, context, "level"), context);
  if (doc.contains("axes")) {
    if (!doc.at("axes").is_array()) throw ConfigError("sweep.axes: expected an array");
    for (const auto& entry : doc.at("axes")) {
      check_keys(entry, "sweep.axes[]", {"name", "min", "max", "n_points", "spacing"});
      Axis axis;
      axis.name = get<std::string>(entry, "sweep.axes[]", "name");
      axis.min = get<double>(entry, "sweep.axes[]", "min");
      axis.max = get<double>(entry, "sweep.axes[]", "max");
      axis.n_points = get_or(entry, "sweep.axes[]", "n_points", axis.n_points);
      const auto spacing = get_or<std::string>(entry, "sweep.axes[]", "spacing", "linear");
      if (spacing != "linear" && spacing != "log")
        throw ConfigError("sweep.axes[]: spacing must be linear or log");
      axis.log_spacing = spacing == "log";
      spec.axes.push_back(std::move(axis));
    }
  }
  if (doc.contains("include_sink"))
    spec.include_sink = get<bool>(doc, context, "include_sink");
  spec.sink_rate = get_or(doc, context, "sink_rate", spec.sink_rate);
  spec.trajectory_samples =
      get_or(doc, context, "trajectory_samples", spec.trajectory_samples);
  return spec;
}

RunConfig run_config_from_json(const Json& doc) {
  check_keys(doc, "config",
             {"seed", "system", "protocol", "train", "optimize", "sweep", "output"});
  RunConfig config;
  config.seed = get_or<std::uint64_t>(doc, "config", "seed", 0);
  if (doc.contains("system")) {
    const Json& system = doc.at("system");
    check_keys(system, "system", {"T", "sink", "sink_rate"});
    config.system.T = get_or(system, "system", "T", config.system.T);
    config.system.sink = get_or(system, "system", "sink", config.system.sink);
    config.system.sink_rate = get_or(system, "system", "sink_rate", config.system.sink_rate);
    if (!(config.system.T > 0.0)) throw ConfigError("system.T: must be positive");
  }
  if (doc.contains("protocol")) {
    if (doc.at("protocol").is_string())
      config.protocol_name = doc.at("protocol").get<std::string>();
    else
      config.protocol = schedule_from_json(doc.at("protocol"));
  }
  if (doc.contains("train")) config.train = train_config_from_json(doc.at("train"));
  if (doc.contains("optimize")) {
    const Json& opt = doc.at("optimize");
    check_keys(opt, "optimize", {"family", "order", "n_runs", "use_sink", "powell"});
    OptimizeConfig optimize;
    optimize.family = get_or<std::string>(opt, "optimize", "family", optimize.family);
    if (optimize.family != "poly" && optimize.family != "ansatz1" &&
        optimize.family != "parity")
      throw ConfigError("optimize.family: must be poly, ansatz1 or parity");
    optimize.order = get_or(opt, "optimize", "order", optimize.order);
    optimize.n_runs = get_or(opt, "optimize", "n_runs", optimize.n_runs);
    optimize.use_sink = get_or(opt, "optimize", "use_sink", optimize.use_sink);
    if (opt.contains("powell")) optimize.powell = powell_config_from_json(opt.at("powell"));
    config.optimize = optimize;
  }
  if (doc.contains("sweep")) config.sweep = sweep_spec_from_json(doc.at("sweep"));
  if (doc.contains("output")) {
    const Json& output = doc.at("output");
    check_keys(output, "output", {"out", "checkpoint"});
    config.out_path = get_or<std::string>(output, "output", "out", "");
    config.checkpoint_path = get_or<std::string>(output, "output", "checkpoint", "");
  }
  return config;
}

Json run_config_to_json(const RunConfig& config) {
  Json doc;
  doc["seed"] = config.seed;
  doc["system"] = {{"T", config.system.T}, {"sink", config.system.sink}};
  if (config.system.sink_rate >= 0.0) doc["system"]["sink_rate"] = config.system.sink_rate;
  if (config.protocol_name.has_value())
    doc["protocol"] = *config.protocol_name;
  else if (config.protocol.has_value())
    doc["protocol"] = schedule_to_json(*config.protocol);
  if (config.train.has_value()) doc["train"] = train_config_to_json(*config.train);
  if (config.optimize.has_value())
    doc["optimize"] = {{"family", config.optimize->family},
                       {"order", config.optimize->order},
                       {"n_runs", config.optimize->n_runs},
                       {"use_sink", config.optimize->use_sink},
                       {"powell", powell_config_to_json(config.optimize->powell)}};
  if (config.sweep.has_value()) doc["sweep"] = sweep_spec_to_json(*config.sweep);
  if (!config.out_path.empty() || !config.checkpoint_path.empty()) {
    doc["output"] = Json::object();
    if (!config.out_path.empty()) doc["output"]["out"] = config.out_path;
    if (!config.checkpoint_path.empty()) doc["output"]["checkpoint"] = config.checkpoint_path;
  }
  return doc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& err) {
    throw ConfigError("config file '" + path + "': " + err.what());
  }
  return run_config_from_json(doc);
}

Json checkpoint_to_json(const TrainResult& result, const TrainConfig& config) {
  const PolicyNetwork& net = result.net;
  const auto& dims = net.dims();
  Json params;
  params["lstm_w"] = block_to_json(net.lstm_w().data(), 4 * dims.lstm, dims.input);
  params["lstm_u"] = block_to_json(net.lstm_u().data(), 4 * dims.lstm, dims.lstm);
  params["lstm_b"] = block_to_json(net.lstm_b().data(), 4 * dims.lstm, 1);
  params["dense_w"] = block_to_json(net.dense_w().data(), dims.dense, dims.lstm);
  params["dense_b"] = block_to_json(net.dense_b().data(), dims.dense, 1);
  params["head_w"] = block_to_json(net.head_w().data(), dims.out, dims.dense);
  params["head_b"] = block_to_json(net.head_b().data(), dims.out, 1);

  Json best_actions = Json::array();
  if (const auto* pwc = std::get_if<PiecewiseConstant>(&result.best_schedule.shape)) {
    for (const auto& v : pwc->values) {
      const double a0 = config.ranges[0] > 0.0 ? v.delta_p / config.ranges[0] : 0.0;
      const double a1 = config.ranges[1] > 0.0 ? v.delta / config.ranges[1] : 0.0;
      best_actions.push_back({a0, a1});
    }
  }

  return Json{{"version", 1},
              {"config", train_config_to_json(config)},
              {"epoch", static_cast<int>(result.curve.size())},
              {"seed", config.seed},
              {"params", std::move(params)},
              {"best_reward", result.best_reward},
              {"best_epoch", result.best_epoch},
              {"best_actions", std::move(best_actions)}};
}

Checkpoint checkpoint_from_json(const Json& doc) {
  check_keys(doc, "checkpoint",
             {"version", "config", "epoch", "seed", "params", "best_reward", "best_epoch",
              "best_actions"});
  if (get<int>(doc, "checkpoint", "version") != 1)
    throw ConfigError("checkpoint: unsupported version");
  TrainConfig config = train_config_from_json(doc.at("config"));
  config.seed = get_or<std::uint64_t>(doc, "checkpoint", "seed", config.seed);

  Checkpoint checkpoint{config, PolicyNetwork(config.dims, config.sigma), 0, 0.0, -1, {}};
  const auto& dims = config.dims;
  if (!doc.contains("params")) throw ConfigError("checkpoint: missing params");
  const Json& params = doc.at("params");
  check_keys(params, "checkpoint.params",
             {"lstm_w", "lstm_u", "lstm_b", "dense_w", "dense_b", "head_w", "head_b"});
  auto block = [&](const char* name, double* dest, int rows, int cols) {
    if (!params.contains(name))
      throw ConfigError(std::string("checkpoint.params: missing block '") + name + "'");
    block_from_json(params.at(name), name, dest, rows, cols);
  };
  PolicyNetwork& net = checkpoint.net;
  block("lstm_w", net.lstm_w().data(), 4 * dims.lstm, dims.input);
  block("lstm_u", net.lstm_u().data(), 4 * dims.lstm, dims.lstm);
  block("lstm_b", net.lstm_b().data(), 4 * dims.lstm, 1);
  block("dense_w", net.dense_w().data(), dims.dense, dims.lstm);
  block("dense_b", net.dense_b().data(), dims.dense, 1);
  block("head_w", net.head_w().data(), dims.out, dims.dense);
  block("head_b", net.head_b().data(), dims.out, 1);

  checkpoint.epoch = get<int>(doc, "checkpoint", "epoch");
  checkpoint.best_reward = get<double>(doc, "checkpoint", "best_reward");
  checkpoint.best_epoch = get_or(doc, "checkpoint", "best_epoch", -1);
  if (doc.contains("best_actions")) {
    const auto rows = get<std::vector<std::vector<double>>>(doc, "checkpoint", "best_actions");
    for (const auto& row : rows) {
      if (row.size() != 2) throw ConfigError("checkpoint.best_actions: rows must be pairs");
      checkpoint.best_actions.push_back({row[0], row[1]});
    }
  }
  return checkpoint;
}

}  // namespace qctrl
