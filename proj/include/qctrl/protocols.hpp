// protocols.hpp — named registry of published detuning protocols

#pragma once

#include <map>
#include <string>

#include "qctrl/controls.hpp"

namespace qctrl {

// protocol1_T20 / protocol1_T40: exponential-bump ansatz optima for Omega_0 T = 20 / 40.
// protocol2_T40: odd/even fifth-order polynomial optimum for Omega_0 T = 40.
const std::map<std::string, ControlSchedule>& builtin_protocols();

// Exact name, or an alias like "protocol1" resolved against T (nearest published duration).
// Throws std::invalid_argument listing the valid names.
ControlSchedule resolve_protocol(const std::string& name, double T);

}  // namespace qctrl
