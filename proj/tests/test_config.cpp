// test_config.cpp — JSON round-trips, strict key checking, checkpoints, CSV output

#include <sstream>
#include <stdexcept>
#include <variant>

#include "doctest.h"

#include "qctrl/config.hpp"
#include "qctrl/csv.hpp"
#include "qctrl/protocols.hpp"

using namespace qctrl;

TEST_SUITE("config") {

TEST_CASE("every schedule family round-trips through JSON") {
  SUBCASE("piecewise constant") {
    const ControlSchedule in{PiecewiseConstant{{{1.5, -0.25}, {0.0, 0.125}}}, {0.1, -0.2}};
    const ControlSchedule out = schedule_from_json(schedule_to_json(in));
    const auto& table = std::get<PiecewiseConstant>(out.shape);
    REQUIRE(table.values.size() == 2);
    CHECK(table.values[0].delta_p == 1.5);
    CHECK(table.values[1].delta == 0.125);
    CHECK(out.stray.delta_p == 0.1);
    CHECK(out.stray.delta == -0.2);
  }
  SUBCASE("polynomial pair") {
    PolyPair poly;
    poly.coeffs_dp = {1, 2, 3, 4, 5, 6};
    poly.coeffs_d = {-1, -2, -3, -4, -5, -6};
    const ControlSchedule out = schedule_from_json(schedule_to_json({poly, {}}));
    CHECK(std::get<PolyPair>(out.shape).coeffs_dp == poly.coeffs_dp);
    CHECK(std::get<PolyPair>(out.shape).coeffs_d == poly.coeffs_d);
  }
  SUBCASE("exponential bump") {
    const ControlSchedule out =
        schedule_from_json(schedule_to_json({Ansatz1{5.11, -0.038, 21.51, 0.29}, {}}));
    const auto& bump = std::get<Ansatz1>(out.shape);
    CHECK(bump.c1 == 5.11);
    CHECK(bump.c2 == -0.038);
    CHECK(bump.k == 21.51);
    CHECK(bump.m == 0.29);
  }
  SUBCASE("parity polynomials") {
    const ControlSchedule out = schedule_from_json(
        schedule_to_json({ParityPolys{{26, -87, 312}, {0.19, -0.37, -4.85}}, {}}));
    CHECK(std::get<ParityPolys>(out.shape).dp_odd[2] == 312.0);
    CHECK(std::get<ParityPolys>(out.shape).d_even[0] == 0.19);
  }
  SUBCASE("constant Raman") {
    const ControlSchedule out =
        schedule_from_json(schedule_to_json({ConstantRaman{-4.5}, {}}));
    CHECK(std::get<ConstantRaman>(out.shape).dp == -4.5);
  }
}

TEST_CASE("schedule documents are strictly validated") {
  CHECK_THROWS_AS(schedule_from_json({{"family", "nope"}}), ConfigError);
  CHECK_THROWS_AS(schedule_from_json({{"family", "raman"}, {"dp", 1.0}, {"extra", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(schedule_from_json({{"family", "ansatz1"}, {"c1", 1.0}}), ConfigError);
  CHECK_THROWS_AS(schedule_from_json({{"family", "pwc"}, {"values", Json::array()}}),
                  ConfigError);
  CHECK_THROWS_AS(schedule_from_json(Json::array()), ConfigError);
  Json bad_stray = schedule_to_json({ConstantRaman{0.0}, {}});
  bad_stray["stray"] = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(schedule_from_json(bad_stray), ConfigError);
}

TEST_CASE("training configuration round-trips and applies defaults") {
  TrainConfig config = TrainConfig::wide();
  config.seed = 1234;
  config.adam.learning_rate = 0.01;
  config.dims = {1, 12, 9, 2};
  const TrainConfig out = train_config_from_json(train_config_to_json(config));
  CHECK(out.n_batch == config.n_batch);
  CHECK(out.n_steps == config.n_steps);
  CHECK(out.T == config.T);
  CHECK(out.ranges == config.ranges);
  CHECK(out.sigma == config.sigma);
  CHECK(out.sink_rate == config.sink_rate);
  CHECK(out.adam.learning_rate == 0.01);
  CHECK(out.seed == 1234);
  CHECK(out.dims.lstm == 12);
  CHECK(out.init_scale == config.init_scale);

  SUBCASE("sink rate defaults to 10 / T when absent") {
    const TrainConfig sparse = train_config_from_json({{"T", 25.0}});
    CHECK(sparse.sink_rate == doctest::Approx(10.0 / 25.0));
  }
  SUBCASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(train_config_from_json({{"batch", 10}}), ConfigError);
    CHECK_THROWS_AS(train_config_from_json({{"adam", {{"lr", 0.1}}}}), ConfigError);
    CHECK_THROWS_AS(train_config_from_json({{"dims", {{"width", 4}}}}), ConfigError);
  }
  SUBCASE("invalid values surface as configuration errors") {
    CHECK_THROWS_AS(train_config_from_json({{"n_batch", 0}}), ConfigError);
    CHECK_THROWS_AS(train_config_from_json({{"sigma", {0.0, 0.07}}}), ConfigError);
    CHECK_THROWS_AS(train_config_from_json({{"ranges", {1.0}}}), ConfigError);
  }
}

TEST_CASE("powell configuration round-trips") {
  PowellConfig config;
  config.max_iter = 77;
  config.init_range = {-3.0, 9.0};
  const PowellConfig out = powell_config_from_json(powell_config_to_json(config));
  CHECK(out.max_iter == 77);
  CHECK(out.init_range == config.init_range);
  CHECK(out.x_tol == config.x_tol);
  CHECK_THROWS_AS(powell_config_from_json({{"xtol", 1e-8}}), ConfigError);
  CHECK_THROWS_AS(powell_config_from_json({{"max_iter", 0}}), ConfigError);
}

TEST_CASE("sweep specification round-trips without its protocol") {
  SweepSpec spec;
  spec.scenario = SweepScenario::kDephasing;
  spec.dephased_level = Level::f;
  spec.axes = {{"Gamma_f", 0.0, 0.2, 5, false}};
  spec.include_sink = true;
  spec.sink_rate = 0.125;
  spec.trajectory_samples = 301;

  const SweepSpec out = sweep_spec_from_json(sweep_spec_to_json(spec));
  CHECK(out.scenario == SweepScenario::kDephasing);
  CHECK(out.dephased_level == Level::f);
  REQUIRE(out.axes.size() == 1);
  CHECK(out.axes[0].name == "Gamma_f");
  CHECK(out.axes[0].n_points == 5);
  CHECK(out.include_sink.has_value());
  CHECK(*out.include_sink == true);
  CHECK(out.sink_rate == 0.125);
  CHECK(out.trajectory_samples == 301);

  SUBCASE("scenario names cover every sweep") {
    for (const char* name : {"lambda", "ladder", "dephasing", "stray", "time_scan", "raman"})
      CHECK_NOTHROW(sweep_spec_from_json({{"scenario", name}}));
    CHECK_THROWS_AS(sweep_spec_from_json({{"scenario", "unknown"}}), ConfigError);
    CHECK_THROWS_AS(sweep_spec_from_json({{"scenario", "lambda"}, {"extra", 1}}), ConfigError);
    CHECK_THROWS_AS(
        sweep_spec_from_json({{"scenario", "dephasing"}, {"level", "x"}}), ConfigError);
    CHECK_THROWS_AS(sweep_spec_from_json(Json{{"scenario", "lambda"},
                                              {"axes", {{{"name", "a"}, {"min", 0.0},
                                                         {"max", 1.0}, {"step", 2}}}}}),
                    ConfigError);
  }
}

TEST_CASE("run configuration carries protocol by name or by value") {
  SUBCASE("name") {
    const RunConfig config = run_config_from_json(
        {{"seed", 7}, {"system", {{"T", 20.0}, {"sink", true}}}, {"protocol", "protocol1"}});
    CHECK(config.seed == 7);
    CHECK(config.system.T == 20.0);
    CHECK(config.system.sink);
    REQUIRE(config.protocol_name.has_value());
    CHECK(*config.protocol_name == "protocol1");
    CHECK_FALSE(config.protocol.has_value());
    CHECK_FALSE(config.train.has_value());
  }
  SUBCASE("inline schedule") {
    const RunConfig config = run_config_from_json(
        {{"protocol", {{"family", "raman"}, {"dp", 2.0}}}});
    REQUIRE(config.protocol.has_value());
    CHECK(std::get<ConstantRaman>(config.protocol->shape).dp == 2.0);
  }
  SUBCASE("full document round-trips") {
    RunConfig config;
    config.seed = 99;
    config.system.T = 40.0;
    config.system.sink = true;
    config.system.sink_rate = 0.5;
    config.protocol_name = "protocol2";
    config.train = TrainConfig::restricted();
    OptimizeConfig optimize;
    optimize.family = "parity";
    optimize.n_runs = 4;
    config.optimize = optimize;
    SweepSpec sweep;
    sweep.scenario = SweepScenario::kStray;
    config.sweep = sweep;
    config.out_path = "out.csv";
    config.checkpoint_path = "ckpt.json";

    const RunConfig out = run_config_from_json(run_config_to_json(config));
    CHECK(out.seed == 99);
    CHECK(out.system.sink_rate == 0.5);
    CHECK(*out.protocol_name == "protocol2");
    CHECK(out.train->n_batch == 50);
    CHECK(out.optimize->family == "parity");
    CHECK(out.optimize->n_runs == 4);
    CHECK(out.sweep->scenario == SweepScenario::kStray);
    CHECK(out.out_path == "out.csv");
    CHECK(out.checkpoint_path == "ckpt.json");
  }
  SUBCASE("strictness") {
    CHECK_THROWS_AS(run_config_from_json({{"sweeps", Json::object()}}), ConfigError);
    CHECK_THROWS_AS(run_config_from_json({{"system", {{"T", -1.0}}}}), ConfigError);
    CHECK_THROWS_AS(run_config_from_json({{"optimize", {{"family", "spline"}}}}), ConfigError);
    CHECK_THROWS_AS(run_config_from_json({{"output", {{"file", "x"}}}}), ConfigError);
  }
}

TEST_CASE("checkpoints restore the exact network") {
  TrainConfig config;
  config.n_batch = 3;
  config.n_epochs = 2;
  config.n_steps = 4;
  config.T = 3.0;
  config.sink_rate = 1.0;
  config.dims = {1, 5, 4, 2};
  config.seed = 17;

  const TrainResult result = train(config);
  const Json doc = checkpoint_to_json(result, config);
  CHECK(doc.at("version") == 1);
  CHECK(doc.at("epoch") == 2);

  const Checkpoint restored = checkpoint_from_json(doc);
  CHECK(restored.net.params() == result.net.params());  // bit-exact doubles
  CHECK(restored.epoch == 2);
  CHECK(restored.best_reward == result.best_reward);
  CHECK(restored.best_epoch == result.best_epoch);
  CHECK(restored.config.n_steps == 4);
  CHECK(restored.config.seed == 17);

  REQUIRE(restored.best_actions.size() == 4);
  const auto& table = std::get<PiecewiseConstant>(result.best_schedule.shape);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(restored.best_actions[i][0] ==
          doctest::Approx(table.values[i].delta_p / config.ranges[0]).epsilon(1e-15));
    CHECK(restored.best_actions[i][1] ==
          doctest::Approx(table.values[i].delta / config.ranges[1]).epsilon(1e-15));
    CHECK(std::abs(restored.best_actions[i][0]) <= 1.0);
    CHECK(std::abs(restored.best_actions[i][1]) <= 1.0);
  }

  SUBCASE("shape mismatches and unknown keys are rejected") {
    Json broken = doc;
    broken["params"]["lstm_w"]["shape"] = {3, 1};
    CHECK_THROWS_AS(checkpoint_from_json(broken), ConfigError);
    Json extra = doc;
    extra["note"] = "hello";
    CHECK_THROWS_AS(checkpoint_from_json(extra), ConfigError);
    Json wrong_version = doc;
    wrong_version["version"] = 2;
    CHECK_THROWS_AS(checkpoint_from_json(wrong_version), ConfigError);
    Json missing = doc;
    missing["params"].erase("head_b");
    CHECK_THROWS_AS(checkpoint_from_json(missing), ConfigError);
  }
}

TEST_CASE("builtin protocol registry") {
  const auto& registry = builtin_protocols();
  REQUIRE(registry.count("protocol1_T20") == 1);
  REQUIRE(registry.count("protocol1_T40") == 1);
  REQUIRE(registry.count("protocol2_T40") == 1);

  const auto& long_bump = std::get<Ansatz1>(registry.at("protocol1_T40").shape);
  CHECK(long_bump.c1 == 5.11);
  CHECK(long_bump.m == 0.29);
  const auto& short_bump = std::get<Ansatz1>(registry.at("protocol1_T20").shape);
  CHECK(short_bump.c1 == 2.34);
  CHECK(short_bump.m == 0.58);

  SUBCASE("aliases resolve against the duration") {
    CHECK(std::get<Ansatz1>(resolve_protocol("protocol1", 40.0).shape).c1 == 5.11);
    CHECK(std::get<Ansatz1>(resolve_protocol("protocol1", 20.0).shape).c1 == 2.34);
    CHECK(std::get<Ansatz1>(resolve_protocol("protocol1", 25.0).shape).c1 == 2.34);
    CHECK(std::holds_alternative<ParityPolys>(resolve_protocol("protocol2", 60.0).shape));
  }
  SUBCASE("unknown names list the registry") {
    try {
      resolve_protocol("nonexistent", 40.0);
      FAIL("expected an exception");
    } catch (const std::invalid_argument& err) {
      const std::string what = err.what();
      CHECK(what.find("protocol1_T20") != std::string::npos);
      CHECK(what.find("protocol2_T40") != std::string::npos);
    }
  }
}

TEST_CASE("CSV output is fixed-format") {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.header({"a", "b"});
  csv.row({0.25, 1e-9});
  csv.row({1.0 / 3.0, -12345.678});
  CHECK(out.str() == "a,b\n0.25,1e-09\n0.333333333333,-12345.678\n");

  SUBCASE("column counts are enforced") {
    CHECK_THROWS_AS(csv.row({1.0}), std::invalid_argument);
    std::ostringstream other;
    CsvWriter fresh(other);
    CHECK_THROWS_AS(fresh.row({1.0}), std::logic_error);
    CHECK_THROWS_AS(fresh.header({}), std::invalid_argument);
  }
  SUBCASE("identical data gives identical bytes") {
    std::ostringstream again;
    CsvWriter repeat(again);
    repeat.header({"a", "b"});
    repeat.row({0.25, 1e-9});
    repeat.row({1.0 / 3.0, -12345.678});
    CHECK(again.str() == out.str());
  }
  SUBCASE("significant digits are configurable") {
    CHECK(format_sig(1.0 / 3.0, 3) == "0.333");
    CHECK(format_sig(0.0) == "0");
    CHECK(format_sig(2.5e15) == "2.5e+15");
  }
}

}  // TEST_SUITE
