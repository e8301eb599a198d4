#include "qctrl/controls.hpp"

#include <cmath>
#include <stdexcept>

namespace qctrl {
namespace {

double poly_eval(const std::array<double, 6>& coeffs, double x) {
  double acc = 0.0;
  for (int k = 5; k >= 0; --k) acc = acc * x + coeffs[k];
  return acc;
}

Detunings eval_shape(const ScheduleShape& shape, double t, double T) {
  const double x = t / T - 0.5;
  if (const auto* pwc = std::get_if<PiecewiseConstant>(&shape)) {
    if (pwc->values.empty())
      throw std::invalid_argument("eval_schedule: empty piecewise-constant table");
    const int n = static_cast<int>(pwc->values.size());
    int idx = static_cast<int>(std::floor(t / T * n));
    if (idx >= n) idx = n - 1;
    if (idx < 0) idx = 0;
    return pwc->values[static_cast<std::size_t>(idx)];
  }
  if (const auto* poly = std::get_if<PolyPair>(&shape))
    return {poly_eval(poly->coeffs_dp, x), poly_eval(poly->coeffs_d, x)};
  if (const auto* ansatz = std::get_if<Ansatz1>(&shape))
    return {ansatz->c1 - ansatz->c2 * std::exp(ansatz->k * x * x), ansatz->m * x};
  if (const auto* parity = std::get_if<ParityPolys>(&shape)) {
    const double x2 = x * x;
    const double dp = x * (parity->dp_odd[0] + x2 * (parity->dp_odd[1] + x2 * parity->dp_odd[2]));
    const double d = parity->d_even[0] + x2 * (parity->d_even[1] + x2 * parity->d_even[2]);
    return {dp, d};
  }
  return {std::get<ConstantRaman>(shape).dp, 0.0};
}

}  // namespace

Detunings eval_schedule(const ControlSchedule& schedule, double t, double T) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::invalid_argument("eval_schedule: duration must be positive");
  if (!std::isfinite(t) || t < 0.0 || t > T)
    throw std::domain_error("eval_schedule: t outside [0, T]");
  Detunings d = eval_shape(schedule.shape, t, T);
  d.delta_p += schedule.stray.delta_p;
  d.delta += schedule.stray.delta;
  return d;
}

bool is_piecewise_constant(const ControlSchedule& schedule) {
  return std::holds_alternative<PiecewiseConstant>(schedule.shape);
}

ControlSchedule pwc_from_actions(const std::vector<std::array<double, 2>>& actions,
                                 std::array<double, 2> half_ranges) {
  if (actions.empty()) throw std::invalid_argument("pwc_from_actions: no actions");
  if (half_ranges[0] < 0.0 || half_ranges[1] < 0.0 || !std::isfinite(half_ranges[0]) ||
      !std::isfinite(half_ranges[1]))
    throw std::invalid_argument("pwc_from_actions: half-ranges must be finite and non-negative");
  PiecewiseConstant pwc;
  pwc.values.reserve(actions.size());
  for (const auto& a : actions) {
    if (!(std::abs(a[0]) <= 1.0) || !(std::abs(a[1]) <= 1.0))
      throw std::invalid_argument("pwc_from_actions: action outside [-1, 1]");
    pwc.values.push_back({a[0] * half_ranges[0], a[1] * half_ranges[1]});
  }
  return {ScheduleShape{std::move(pwc)}, {}};
}

SymmetryReport symmetry_report(const ControlSchedule& schedule, double T, int n_grid) {
  if (n_grid < 2) throw std::invalid_argument("symmetry_report: need at least two grid points");
  double sq[4] = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n_grid; ++i) {
    const double t = T * i / (n_grid - 1);
    const Detunings fwd = eval_schedule(schedule, t, T);
    const Detunings rev = eval_schedule(schedule, T - t, T);
    // Deviation from the even part is the odd component and vice versa.
    sq[0] += 0.25 * (fwd.delta_p - rev.delta_p) * (fwd.delta_p - rev.delta_p);
    sq[1] += 0.25 * (fwd.delta_p + rev.delta_p) * (fwd.delta_p + rev.delta_p);
    sq[2] += 0.25 * (fwd.delta - rev.delta) * (fwd.delta - rev.delta);
    sq[3] += 0.25 * (fwd.delta + rev.delta) * (fwd.delta + rev.delta);
  }
  SymmetryReport report;
  report.dp_even_dev = std::sqrt(sq[0] / n_grid);
  report.dp_odd_dev = std::sqrt(sq[1] / n_grid);
  report.d_even_dev = std::sqrt(sq[2] / n_grid);
  report.d_odd_dev = std::sqrt(sq[3] / n_grid);
  return report;
}

}  // namespace qctrl
