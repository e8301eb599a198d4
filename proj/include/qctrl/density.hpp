// density.hpp — density-matrix construction and physicality checks

#pragma once

#include <Eigen/Dense>

namespace qctrl {

// Basis ordering used throughout: g = 0, e = 1, f = 2, sink s = 3 when dim = 4.
inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;
inline constexpr int kTarget = 2;
inline constexpr int kSink = 3;

Eigen::MatrixXcd ground_state(int dim);

double hermiticity_error(const Eigen::MatrixXcd& rho);
double trace_error(const Eigen::MatrixXcd& rho);
double min_eigenvalue(const Eigen::MatrixXcd& rho);
double purity(const Eigen::MatrixXcd& rho);

// Throws std::invalid_argument when rho fails any physicality check.
void validate_density(const Eigen::MatrixXcd& rho, double herm_tol = 1e-12,
                      double trace_tol = 1e-9, double eig_tol = 1e-9);

}  // namespace qctrl
