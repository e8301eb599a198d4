// protocol_opt.hpp — derivative-free searches over protocol families

#pragma once

#include <cstdint>
#include <vector>

#include "qctrl/controls.hpp"
#include "qctrl/optimize.hpp"

namespace qctrl {

enum class AnsatzFamily { kAnsatz1, kParityPolys };

struct ProtocolSearchResult {
  ControlSchedule schedule;
  double score = 0.0;  // final target population of the best run
  int n_evals = 0;
  std::vector<double> run_scores;  // best-of-run, one entry per restart
};

// Final rho_ff(T) from |g><g|: sink-free three-level by default, four-level leaky
// (rate < 0 resolves to 10/T) when use_sink. Propagation failures score 0.
double protocol_score(const ControlSchedule& schedule, double T, bool use_sink = false,
                      double sink_rate = -1.0);

// n_runs Powell searches over the 12 polynomial coefficients, starts uniform in
// cfg.init_range; keeps the best final population.
ProtocolSearchResult optimize_polynomial(double T, int order, int n_runs,
                                         const PowellConfig& cfg, bool use_sink,
                                         std::uint64_t seed);

// Best-of-cfg.restarts Powell searches over ansatz parameters; starts uniform in
// [-5, 5] (exponential-bump ansatz) or [0, 20] (parity polynomials).
ProtocolSearchResult optimize_ansatz(double T, AnsatzFamily family, const PowellConfig& cfg,
                                     bool use_sink, std::uint64_t seed);

}  // namespace qctrl
