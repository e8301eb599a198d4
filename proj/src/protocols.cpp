#include "qctrl/protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace qctrl {

const std::map<std::string, ControlSchedule>& builtin_protocols() {
  static const std::map<std::string, ControlSchedule> registry = {
      {"protocol1_T20", {Ansatz1{2.34, -0.038, 21.52, 0.58}, {}}},
      {"protocol1_T40", {Ansatz1{5.11, -0.038, 21.51, 0.29}, {}}},
      {"protocol2_T40", {ParityPolys{{26.0, -87.0, 312.0}, {0.19, -0.37, -4.85}}, {}}},
  };
  return registry;
}

ControlSchedule resolve_protocol(const std::string& name, double T) {
  const auto& registry = builtin_protocols();
  if (auto it = registry.find(name); it != registry.end()) return it->second;

  // Family aliases pick the published duration closest to T; the shape is a function of
  // t/T, so any other T just stretches it.
  if (name == "protocol1")
    return registry.at(std::abs(T - 20.0) < std::abs(T - 40.0) ? "protocol1_T20"
                                                               : "protocol1_T40");
  if (name == "protocol2") return registry.at("protocol2_T40");

  std::string known = "protocol1, protocol2";
  for (const auto& [key, value] : registry) known += ", " + key;
  throw std::invalid_argument("unknown protocol '" + name + "' (known: " + known + ")");
}

}  // namespace qctrl
