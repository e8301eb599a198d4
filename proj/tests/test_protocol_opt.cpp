// test_protocol_opt.cpp — derivative-free protocol refinement

#include <cstdlib>
#include <stdexcept>
#include <variant>

#include "doctest.h"

#include "qctrl/protocol_opt.hpp"
#include "qctrl/protocols.hpp"

using namespace qctrl;

namespace {

PowellConfig tiny_budget() {
  PowellConfig cfg;
  cfg.max_iter = 8;
  cfg.max_line_evals = 40;
  cfg.restarts = 2;
  cfg.init_range = {-5.0, 5.0};
  return cfg;
}

}  // namespace

TEST_SUITE("protocol_search") {

TEST_CASE("scoring reproduces the published transfer") {
  const ControlSchedule protocol = resolve_protocol("protocol1_T40", 40.0);
  const double clean = protocol_score(protocol, 40.0);
  CHECK(std::abs(clean - 0.9994) < 0.002);

  SUBCASE("the leaky variant scores lower") {
    const double leaky = protocol_score(protocol, 40.0, true);
    CHECK(leaky < clean);
    CHECK(leaky > 0.9);
  }
  SUBCASE("an explicit sink rate is honored") {
    const double strong = protocol_score(protocol, 40.0, true, 5.0);
    const double weak = protocol_score(protocol, 40.0, true, 0.01);
    CHECK(strong < weak);
  }
}

TEST_CASE("unpropagatable schedules score zero") {
  CHECK(protocol_score({PiecewiseConstant{}, {}}, 40.0) == 0.0);
  // The bump overflows to an infinite detuning inside the integrator.
  CHECK(protocol_score({Ansatz1{0.0, 1.0, 1e6, 0.0}, {}}, 40.0) == 0.0);
}

TEST_CASE("polynomial search over a low order") {
  const ProtocolSearchResult result = optimize_polynomial(10.0, 1, 2, tiny_budget(), false, 11);
  REQUIRE(result.run_scores.size() == 2);
  CHECK(result.n_evals > 0);
  CHECK(result.score >= 0.0);
  CHECK(result.score <= 1.0);
  double best = 0.0;
  for (double s : result.run_scores) best = std::max(best, s);
  CHECK(result.score == doctest::Approx(best).epsilon(1e-15));

  REQUIRE(std::holds_alternative<PolyPair>(result.schedule.shape));
  const PolyPair& pair = std::get<PolyPair>(result.schedule.shape);
  for (std::size_t k = 2; k < 6; ++k) {
    CHECK(pair.coeffs_dp[k] == 0.0);  // order 1 leaves the higher coefficients untouched
    CHECK(pair.coeffs_d[k] == 0.0);
  }
}

TEST_CASE("polynomial search is deterministic for a fixed seed") {
  const ProtocolSearchResult a = optimize_polynomial(10.0, 0, 2, tiny_budget(), false, 5);
  const ProtocolSearchResult b = optimize_polynomial(10.0, 0, 2, tiny_budget(), false, 5);
  CHECK(a.score == b.score);
  CHECK(a.n_evals == b.n_evals);
  const PolyPair& pa = std::get<PolyPair>(a.schedule.shape);
  const PolyPair& pb = std::get<PolyPair>(b.schedule.shape);
  CHECK(pa.coeffs_dp[0] == pb.coeffs_dp[0]);
  CHECK(pa.coeffs_d[0] == pb.coeffs_d[0]);

  SUBCASE("nor does it depend on the worker cap") {
    setenv("QCTRL_THREADS", "3", 1);
    const ProtocolSearchResult capped = optimize_polynomial(10.0, 0, 2, tiny_budget(), false, 5);
    unsetenv("QCTRL_THREADS");
    CHECK(capped.score == a.score);
    CHECK(capped.run_scores == a.run_scores);
  }
}

TEST_CASE("ansatz searches return their own families") {
  const ProtocolSearchResult bump = optimize_ansatz(10.0, AnsatzFamily::kAnsatz1,
                                                    tiny_budget(), false, 2);
  CHECK(std::holds_alternative<Ansatz1>(bump.schedule.shape));
  CHECK(bump.run_scores.size() == 2);
  CHECK(bump.score >= 0.0);

  const ProtocolSearchResult parity = optimize_ansatz(10.0, AnsatzFamily::kParityPolys,
                                                      tiny_budget(), false, 2);
  CHECK(std::holds_alternative<ParityPolys>(parity.schedule.shape));
  CHECK(parity.score <= 1.0);
}

TEST_CASE("invalid search requests are rejected") {
  CHECK_THROWS_AS(optimize_polynomial(10.0, 6, 1, tiny_budget(), false, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize_polynomial(10.0, -1, 1, tiny_budget(), false, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize_polynomial(10.0, 1, 0, tiny_budget(), false, 0),
                  std::invalid_argument);
  PowellConfig bad = tiny_budget();
  bad.restarts = 0;
  CHECK_THROWS_AS(optimize_ansatz(10.0, AnsatzFamily::kAnsatz1, bad, false, 0),
                  std::invalid_argument);
}

}  // TEST_SUITE
