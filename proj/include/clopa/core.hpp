#pragma once

// Validated domain types shared by the whole library.

#include <clopa/error.hpp>

#include <cmath>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace clopa {

/// Dimensionless probability in [0, 1]; checked on construction.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::ProbabilityRange,
                  "probability " + std::to_string(value) + " outside [0, 1]");
    }
  }

  constexpr double value() const noexcept { return value_; }
  constexpr double complement() const noexcept { return 1.0 - value_; }

  friend constexpr auto operator<=>(const Probability&, const Probability&) = default;

 private:
  double value_ = 0.0;
};

/// Non-negative, finite event rate in events per year.
class Rate {
 public:
  constexpr Rate() = default;
  explicit Rate(double per_year) : value_(per_year) {
    if (!(per_year >= 0.0 && std::isfinite(per_year))) {
      throw Error(ErrorCode::RateRange,
                  "rate " + std::to_string(per_year) + " must be finite and >= 0");
    }
  }

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const Rate&, const Rate&) = default;

 private:
  double value_ = 0.0;
};

struct InitiatingEvent {
  std::string name;
  Rate likelihood;
  /// Product of the PFDs of every non-BPCS/SIS layer that protects this event.
  Probability layer_pfd_product{1.0};

  friend bool operator==(const InitiatingEvent&, const InitiatingEvent&) = default;
};

struct BpcsParams {
  Probability pfd_physical;
  Rate lambda_physical;
  Rate lambda_cyber;
  /// Protection layers that apply to BPCS-originated (physical or attack) demands.
  Probability layer_pfd_product{1.0};

  friend bool operator==(const BpcsParams&, const BpcsParams&) = default;
};

/// One hazardous scenario of a LOPA sheet, with per-event layer PFDs folded.
class LopaScenario {
 public:
  LopaScenario(std::string hazard_name, Rate tmel,
               std::vector<InitiatingEvent> initiating_events, BpcsParams bpcs)
      : hazard_name_(std::move(hazard_name)),
        tmel_(tmel),
        initiating_events_(std::move(initiating_events)),
        bpcs_(bpcs) {
    if (!(tmel_.value() > 0.0)) {
      throw Error(ErrorCode::TmelNonpositive, "TMEL must be > 0");
    }
    std::set<std::string> seen;
    for (const auto& e : initiating_events_) {
      if (!seen.insert(e.name).second) {
        throw Error(ErrorCode::DuplicateEventName,
                    "initiating event '" + e.name + "' listed twice");
      }
    }
  }

  const std::string& hazard_name() const noexcept { return hazard_name_; }
  Rate tmel() const noexcept { return tmel_; }
  const std::vector<InitiatingEvent>& initiating_events() const noexcept {
    return initiating_events_;
  }
  const BpcsParams& bpcs() const noexcept { return bpcs_; }

  /// Sum of lambda_i * P[L_i] over the non-BPCS initiating events.
  double mitigated_demand_rate() const noexcept {
    double sum = 0.0;
    for (const auto& e : initiating_events_) {
      sum += e.likelihood.value() * e.layer_pfd_product.value();
    }
    return sum;
  }

  friend bool operator==(const LopaScenario&, const LopaScenario&) = default;

 private:
  std::string hazard_name_;
  Rate tmel_;
  std::vector<InitiatingEvent> initiating_events_;
  BpcsParams bpcs_;
};

/// Success probabilities of the four inter-system attack vectors.
struct SecurityPosture {
  Probability p_ab;   // direct attack on the BPCS
  Probability p_as;   // direct attack on the SIS
  Probability p_abs;  // BPCS -> SIS pivot
  Probability p_asb;  // SIS -> BPCS pivot

  static SecurityPosture from_values(double p_ab, double p_as, double p_abs,
                                     double p_asb) {
    return {Probability(p_ab), Probability(p_as), Probability(p_abs),
            Probability(p_asb)};
  }

  friend bool operator==(const SecurityPosture&, const SecurityPosture&) = default;
};

/// Auxiliary coefficients of the CLOPA bound. alpha/beta/gamma are per year,
/// zeta per year squared.
struct ClopaCoefficients {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta3 = 0.0;

  friend bool operator==(const ClopaCoefficients&, const ClopaCoefficients&) = default;
};

/// A candidate SIS security design (P[A_S], P[A_BS]) and the SIS PFD it implies.
/// Empty pfd_bound/rrf mean the point is infeasible.
struct DesignPoint {
  Probability p_as;
  Probability p_abs;
  std::optional<Probability> pfd_bound;
  std::optional<double> rrf;

  bool feasible() const noexcept { return rrf.has_value(); }
};

// ---------------------------------------------------------------------------
// Unvalidated sheet form and its validation.
// ---------------------------------------------------------------------------

struct LayerCell {
  std::string layer;
  double pfd = 1.0;

  friend bool operator==(const LayerCell&, const LayerCell&) = default;
};

struct EventRow {
  std::string name;
  double likelihood = 0.0;
  std::vector<LayerCell> layers;

  friend bool operator==(const EventRow&, const EventRow&) = default;
};

struct BpcsRow {
  double pfd_physical = 0.0;
  double lambda_physical = 0.0;
  double lambda_cyber = 0.0;
  std::vector<LayerCell> layers;

  friend bool operator==(const BpcsRow&, const BpcsRow&) = default;
};

/// A LOPA sheet as written by an analyst: raw numbers, per-layer columns.
struct ScenarioSheet {
  std::string hazard_name;
  double tmel = 0.0;
  std::vector<std::string> layer_names;
  std::vector<EventRow> events;
  BpcsRow bpcs;

  friend bool operator==(const ScenarioSheet&, const ScenarioSheet&) = default;
};

struct Violation {
  ErrorCode code;
  std::string where;  // field path, e.g. "events[0].layers.Tank dike"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

namespace detail {

inline bool probability_ok(double p) { return p >= 0.0 && p <= 1.0; }
inline bool rate_ok(double r) { return r >= 0.0 && std::isfinite(r); }

inline void check_layers(const std::vector<LayerCell>& cells, const std::string& where,
                         ValidationReport& report) {
  for (const auto& cell : cells) {
    if (!probability_ok(cell.pfd)) {
      report.push_back({ErrorCode::ProbabilityRange, where + ".layers." + cell.layer,
                        "layer PFD " + std::to_string(cell.pfd) + " outside [0, 1]"});
    }
  }
}

inline double fold_layers(const std::vector<LayerCell>& cells) {
  double product = 1.0;
  for (const auto& cell : cells) product *= cell.pfd;
  return product;
}

}  // namespace detail

/// Lists every violated invariant of a sheet. Empty when the sheet is valid.
inline ValidationReport validate_scenario(const ScenarioSheet& sheet) {
  ValidationReport report;
  if (!(sheet.tmel > 0.0) || !std::isfinite(sheet.tmel)) {
    report.push_back({ErrorCode::TmelNonpositive, "tmel", "TMEL must be finite and > 0"});
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < sheet.events.size(); ++i) {
    const auto& row = sheet.events[i];
    const std::string where = "events[" + std::to_string(i) + "]";
    if (!names.insert(row.name).second) {
      report.push_back({ErrorCode::DuplicateEventName, where + ".name",
                        "duplicate initiating event '" + row.name + "'"});
    }
    if (!detail::rate_ok(row.likelihood)) {
      report.push_back({ErrorCode::RateRange, where + ".likelihood",
                        "likelihood must be finite and >= 0"});
    }
    detail::check_layers(row.layers, where, report);
  }
  const auto& b = sheet.bpcs;
  if (!detail::probability_ok(b.pfd_physical)) {
    report.push_back({ErrorCode::ProbabilityRange, "bpcs.pfd_physical",
                      "BPCS PFD outside [0, 1]"});
  }
  if (!detail::rate_ok(b.lambda_physical)) {
    report.push_back({ErrorCode::RateRange, "bpcs.lambda_physical",
                      "rate must be finite and >= 0"});
  }
  if (!detail::rate_ok(b.lambda_cyber)) {
    report.push_back({ErrorCode::RateRange, "bpcs.lambda_cyber",
                      "rate must be finite and >= 0"});
  }
  detail::check_layers(b.layers, "bpcs", report);
  return report;
}

/// Folds per-layer columns into products. Throws VALIDATION_ERROR listing the
/// first violation when the sheet is invalid.
inline LopaScenario build_scenario(const ScenarioSheet& sheet) {
  if (auto report = validate_scenario(sheet); !report.empty()) {
    std::string message;
    for (const auto& v : report) {
      if (!message.empty()) message += "; ";
      message += std::string(to_string(v.code)) + " at " + v.where;
    }
    throw Error(ErrorCode::ValidationError, message);
  }
  std::vector<InitiatingEvent> events;
  events.reserve(sheet.events.size());
  for (const auto& row : sheet.events) {
    events.push_back({row.name, Rate(row.likelihood),
                      Probability(detail::fold_layers(row.layers))});
  }
  BpcsParams bpcs{Probability(sheet.bpcs.pfd_physical), Rate(sheet.bpcs.lambda_physical),
                  Rate(sheet.bpcs.lambda_cyber),
                  Probability(detail::fold_layers(sheet.bpcs.layers))};
  return LopaScenario(sheet.hazard_name, Rate(sheet.tmel), std::move(events), bpcs);
}

}  // namespace clopa
