// noise.hpp — Lindblad collapse channels: sink, spontaneous decay, pure dephasing

#pragma once

#include <Eigen/Dense>

namespace qctrl {

enum class Level { g = 0, e = 1, f = 2 };

struct NoiseChannel {
  enum class Kind { Sink, DecayEG, DecayFE, Dephase };

  Kind kind = Kind::Sink;
  double rate = 0.0;       // in units of Omega_0
  Level level = Level::g;  // dephased level, Dephase only

  static NoiseChannel sink(double rate);              // sqrt(G) |s><e|, dim 4 only
  static NoiseChannel decay_eg(double rate);          // sqrt(g_eg) |g><e|
  static NoiseChannel decay_fe(double rate);          // sqrt(g_fe) |e><f|
  static NoiseChannel dephase(Level k, double rate);  // sqrt(G_k) |k><k|
};

// Collapse operator as a dim x dim matrix. Throws on negative rate or Sink with dim != 4.
Eigen::MatrixXcd collapse_operator(const NoiseChannel& channel, int dim);

}  // namespace qctrl
