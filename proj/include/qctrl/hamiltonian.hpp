// hamiltonian.hpp — three-level ladder Hamiltonian with always-on couplings

#pragma once

#include <Eigen/Dense>

namespace qctrl {

// Pump and Stokes Rabi frequencies in units of Omega_0; the always-on regime keeps both at 1.
struct CouplingSpec {
  double omega_p = 1.0;
  double omega_s = 1.0;
};

// H / Omega_0 = (1/2) [[0, Wp, 0], [Wp, 2 dp, Ws], [0, Ws, 2 d]] placed in the top-left
// of a dim x dim matrix; the sink row and column stay zero for dim = 4.
Eigen::MatrixXcd build_hamiltonian(double delta_p, double delta, const CouplingSpec& coupling = {},
                                   int dim = 3);

}  // namespace qctrl
