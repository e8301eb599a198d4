#include "qctrl/density.hpp"

#include <stdexcept>
#include <string>

namespace qctrl {

Eigen::MatrixXcd ground_state(int dim) {
  if (dim < 1) throw std::invalid_argument("ground_state: dim must be positive");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(kGround, kGround) = 1.0;
  return rho;
}

double hermiticity_error(const Eigen::MatrixXcd& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double trace_error(const Eigen::MatrixXcd& rho) { return std::abs(rho.trace() - 1.0); }

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

void validate_density(const Eigen::MatrixXcd& rho, double herm_tol, double trace_tol,
                      double eig_tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("validate_density: matrix not square");
  if (double err = hermiticity_error(rho); err > herm_tol)
    throw std::invalid_argument("validate_density: not Hermitian, deviation " + std::to_string(err));
  if (double err = trace_error(rho); err > trace_tol)
    throw std::invalid_argument("validate_density: trace deviates by " + std::to_string(err));
  if (double lo = min_eigenvalue(rho); lo < -eig_tol)
    throw std::invalid_argument("validate_density: negative eigenvalue " + std::to_string(lo));
}

}  // namespace qctrl
