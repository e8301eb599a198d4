// optimize.hpp — Brent line minimization and Powell's direction-set method

#pragma once

#include <array>
#include <functional>

#include <Eigen/Dense>

namespace qctrl {

struct PowellConfig {
  double x_tol = 1e-8;  // Brent line tolerance
  double f_tol = 1e-8;  // relative f decrease per direction cycle
  int max_iter = 1000;
  double bracket_growth = 1.618033988749895;
  int restarts = 10;
  std::array<double, 2> init_range = {-20.0, 20.0};
  int max_line_evals = 200;

  void validate() const;
};

struct Bracket {
  double a = 0.0, b = 0.0, c = 0.0;
  double fa = 0.0, fb = 0.0, fc = 0.0;
};

// Expands (x0, x0 + step) downhill by the growth factor until the middle point is lowest.
Bracket bracket_minimum(const std::function<double(double)>& f, double x0, double step,
                        double growth = 1.618033988749895, int max_evals = 200);

struct ScalarMinResult {
  double x = 0.0;
  double f = 0.0;
  int n_evals = 0;
};

// Parabolic-interpolation / golden-section minimization inside a valid bracket
// (a < b < c or c < b < a, f(b) <= f(a), f(c)).
ScalarMinResult brent_min(const std::function<double(double)>& f, const Bracket& bracket,
                          double tol, int max_evals = 200);

struct PowellResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int n_evals = 0;
  int n_iter = 0;
};

PowellResult powell_min(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const PowellConfig& cfg = {});

}  // namespace qctrl
