#include "qctrl/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace qctrl {

Eigen::MatrixXcd build_hamiltonian(double delta_p, double delta, const CouplingSpec& coupling,
                                   int dim) {
  if (dim != 3 && dim != 4) throw std::invalid_argument("build_hamiltonian: dim must be 3 or 4");
  if (!std::isfinite(delta_p) || !std::isfinite(delta))
    throw std::invalid_argument("build_hamiltonian: non-finite detuning");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  h(0, 1) = h(1, 0) = 0.5 * coupling.omega_p;
  h(1, 2) = h(2, 1) = 0.5 * coupling.omega_s;
  h(1, 1) = delta_p;
  h(2, 2) = delta;
  return h;
}

}  // namespace qctrl
