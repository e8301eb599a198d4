// controls.hpp — detuning schedules: piecewise-constant, polynomial and ansatz families

#pragma once

#include <array>
#include <variant>
#include <vector>

namespace qctrl {

struct Detunings {
  double delta_p = 0.0;
  double delta = 0.0;
};

// Pair i held constant on [i T/n, (i+1) T/n); t = T evaluates to the last pair.
struct PiecewiseConstant {
  std::vector<Detunings> values;
};

// Fifth-order polynomials in x = t/T - 1/2, coefficients lowest degree first.
struct PolyPair {
  std::array<double, 6> coeffs_dp{};
  std::array<double, 6> coeffs_d{};
};

// delta_p = c1 - c2 exp(k x^2), delta = m x, with x = t/T - 1/2.
struct Ansatz1 {
  double c1 = 0.0;
  double c2 = 0.0;
  double k = 0.0;
  double m = 0.0;
};

// delta_p odd in x (coefficients of x, x^3, x^5), delta even (1, x^2, x^4).
struct ParityPolys {
  std::array<double, 3> dp_odd{};
  std::array<double, 3> d_even{};
};

// Constant single-photon detuning, two-photon resonance delta = 0.
struct ConstantRaman {
  double dp = 0.0;
};

using ScheduleShape =
    std::variant<PiecewiseConstant, PolyPair, Ansatz1, ParityPolys, ConstantRaman>;

struct ControlSchedule {
  ScheduleShape shape;
  Detunings stray;  // constant offsets added to every evaluation
};

// Detunings at t in [0, T], stray offsets included. Throws std::domain_error outside [0, T]
// and std::invalid_argument for T <= 0 or an empty piecewise-constant table.
Detunings eval_schedule(const ControlSchedule& schedule, double t, double T);

bool is_piecewise_constant(const ControlSchedule& schedule);

// Normalized actions in [-1, 1]^2 scaled by half-ranges into a piecewise-constant schedule.
ControlSchedule pwc_from_actions(const std::vector<std::array<double, 2>>& actions,
                                 std::array<double, 2> half_ranges);

// RMS deviation of each detuning from its even and odd parts about T/2, on a uniform grid.
struct SymmetryReport {
  double dp_even_dev = 0.0;
  double dp_odd_dev = 0.0;
  double d_even_dev = 0.0;
  double d_odd_dev = 0.0;
};
SymmetryReport symmetry_report(const ControlSchedule& schedule, double T, int n_grid = 201);

}  // namespace qctrl
