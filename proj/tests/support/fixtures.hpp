#pragma once

#include <clopa/clopa.hpp>

#include <reference.hpp>

#include <string>

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(CLOPA_DATA_DIR) + "/" + name; }

/// The CSTR overflow scenario built in code, independent of the JSON fixture.
inline clopa::LopaScenario cstr() {
  using clopa::Probability;
  using clopa::Rate;
  return clopa::LopaScenario(
      "CSTR overflow", Rate(1e-6),
      {{"Inlet flow surge", Rate(0.1), Probability(1e-3)},
       {"Downstream flow blockage", Rate(0.1), Probability(1e-4)},
       {"Manual valves misalignment", Rate(0.1), Probability(1e-4)}},
      clopa::BpcsParams{Probability(0.1), Rate(0.1), Rate(0.01), Probability(1e-3)});
}

inline clopa::SecurityPosture cstr_posture(double p_as = 0.0, double p_abs = 0.0) {
  return clopa::SecurityPosture::from_values(0.033, p_as, p_abs, 0.2813);
}

inline clopa::LopaScenario to_scenario(const ref::Model& m) {
  using clopa::Probability;
  using clopa::Rate;
  std::vector<clopa::InitiatingEvent> events;
  for (std::size_t i = 0; i < m.events.size(); ++i) {
    events.push_back({"e" + std::to_string(i), Rate(m.events[i].lambda), Probability(m.events[i].layers)});
  }
  return clopa::LopaScenario("random", Rate(m.tmel), std::move(events),
                             clopa::BpcsParams{Probability(m.p_bp), Rate(m.lambda_p), Rate(m.lambda_c),
                                               Probability(m.bpcs_layers)});
}

inline clopa::SecurityPosture to_posture(const ref::Model& m) {
  return clopa::SecurityPosture::from_values(m.p_ab, m.p_as, m.p_abs, m.p_asb);
}

}  // namespace fixtures
