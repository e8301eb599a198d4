#include "qctrl/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "qctrl/density.hpp"

namespace qctrl {

NoiseChannel NoiseChannel::sink(double rate) { return {Kind::Sink, rate, Level::g}; }
NoiseChannel NoiseChannel::decay_eg(double rate) { return {Kind::DecayEG, rate, Level::g}; }
NoiseChannel NoiseChannel::decay_fe(double rate) { return {Kind::DecayFE, rate, Level::g}; }
NoiseChannel NoiseChannel::dephase(Level k, double rate) { return {Kind::Dephase, rate, k}; }

Eigen::MatrixXcd collapse_operator(const NoiseChannel& channel, int dim) {
  if (dim != 3 && dim != 4) throw std::invalid_argument("collapse_operator: dim must be 3 or 4");
  if (channel.rate < 0.0 || !std::isfinite(channel.rate))
    throw std::invalid_argument("collapse_operator: rate must be finite and non-negative");
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  const double amp = std::sqrt(channel.rate);
  switch (channel.kind) {
    case NoiseChannel::Kind::Sink:
      if (dim != 4) throw std::invalid_argument("collapse_operator: sink channel needs dim 4");
      op(kSink, kExcited) = amp;
      break;
    case NoiseChannel::Kind::DecayEG:
      op(kGround, kExcited) = amp;
      break;
    case NoiseChannel::Kind::DecayFE:
      op(kExcited, kTarget) = amp;
      break;
    case NoiseChannel::Kind::Dephase: {
      const int k = static_cast<int>(channel.level);
      op(k, k) = amp;
      break;
    }
  }
  return op;
}

}  // namespace qctrl
