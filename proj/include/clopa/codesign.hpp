#pragma once

// Iterative safety-security co-design loop. The SIS design/verification
// process and the SIS security assessment are injected as oracles:
//
//   RRF <- RRF_T
//   do
//     (SIS, RRF_v) <- design(RRF)
//     (P[A_S], P[A_BS]) <- assess(SIS)
//     RRF <- required RRF at the assessed posture (BPCS side frozen)
//   while RRF > RRF_v

#include <clopa/core.hpp>
#include <clopa/design_space.hpp>
#include <clopa/engine.hpp>
#include <clopa/error.hpp>

#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clopa {

/// BPCS-side attack probabilities, fixed for a whole co-design run.
struct BpcsSecurity {
  Probability p_ab;
  Probability p_asb;
};

/// SIS-side attack probabilities; the co-design variables.
struct SisSecurity {
  Probability p_as;
  Probability p_abs;

  friend bool operator==(const SisSecurity&, const SisSecurity&) = default;
};

inline SecurityPosture make_posture(const BpcsSecurity& bpcs, const SisSecurity& sis) {
  return {bpcs.p_ab, sis.p_as, sis.p_abs, bpcs.p_asb};
}

/// Output of one SIS design + verification cycle.
struct SisDesign {
  std::string architecture;
  double verified_rrf = 0.0;
};

template <class O>
concept SisDesignOracle = requires(O& oracle, double target_rrf) {
  { oracle.design(target_rrf) } -> std::convertible_to<std::optional<SisDesign>>;
};

template <class O>
concept SecurityAssessmentOracle = requires(O& oracle, const SisDesign& design) {
  { oracle.assess(design) } -> std::convertible_to<std::optional<SisSecurity>>;
};

enum class CodesignOutcome { Converged, MaxIterations, OracleFailure };

constexpr std::string_view to_string(CodesignOutcome outcome) noexcept {
  switch (outcome) {
    case CodesignOutcome::Converged: return "CONVERGED";
    case CodesignOutcome::MaxIterations: return "MAX_ITERATIONS";
    case CodesignOutcome::OracleFailure: return "ORACLE_FAILURE";
  }
  return "UNKNOWN";
}

struct CodesignIteration {
  std::size_t index = 0;  // 1-based
  double target_rrf = 0.0;
  double verified_rrf = 0.0;
  std::string architecture;
  SisSecurity posture;
  /// +infinity when the assessed posture admits no realizable SIS.
  double recomputed_rrf = 0.0;
};

struct CodesignTrace {
  std::vector<CodesignIteration> iterations;
  CodesignOutcome outcome = CodesignOutcome::MaxIterations;
  DesignPoint final_point;
  std::string failure_reason;
};

inline constexpr std::size_t kDefaultMaxIterations = 100;

/// Starting point of the loop: the P[A_BS] on the `rrf_target` contour at the
/// chosen P[A_S].
inline DesignPoint initial_design_point(const LopaScenario& scenario, const BpcsSecurity& bpcs,
                                        double rrf_target, Probability p_as) {
  const auto coeffs = clopa_coefficients(scenario, make_posture(bpcs, {}));
  const auto p_abs = contour_pabs(coeffs, rrf_target, p_as);
  if (!p_abs) {
    throw Error(ErrorCode::PasOutOfRange, "P[A_S] = " + std::to_string(p_as.value()) +
                                              " does not meet the RRF " +
                                              std::to_string(rrf_target) + " contour");
  }
  return evaluate_design_point(coeffs, p_as, *p_abs);
}

template <SisDesignOracle Design, SecurityAssessmentOracle Security>
CodesignTrace run_codesign(const LopaScenario& scenario, const BpcsSecurity& bpcs,
                           const DesignPoint& initial, Design& design_oracle,
                           Security& security_oracle,
                           std::size_t max_iterations = kDefaultMaxIterations) {
  if (max_iterations < 1) throw Error(ErrorCode::DegenerateConfig, "max_iterations must be >= 1");
  if (!initial.rrf) throw Error(ErrorCode::InfeasiblePoint, "initial design point is infeasible");

  // BPCS side frozen for the whole run.
  const auto coeffs = clopa_coefficients(scenario, make_posture(bpcs, {}));
  CodesignTrace trace;
  trace.final_point = initial;
  double rrf = *initial.rrf;

  auto fail = [&](std::string reason) {
    trace.outcome = CodesignOutcome::OracleFailure;
    trace.failure_reason = std::move(reason);
    return trace;
  };

  for (std::size_t i = 1; i <= max_iterations; ++i) {
    const std::optional<SisDesign> sis = design_oracle.design(rrf);
    if (!sis) return fail("SIS design oracle failed at iteration " + std::to_string(i));
    const std::optional<SisSecurity> theta = security_oracle.assess(*sis);
    if (!theta) return fail("security assessment oracle failed at iteration " + std::to_string(i));
    if (!(theta->p_as.value() < 1.0)) {
      return fail("assessed P[A_S] = 1 leaves no realizable SIS");
    }

    const DesignPoint point = evaluate_design_point(coeffs, theta->p_as, theta->p_abs);
    const double recomputed = point.rrf.value_or(std::numeric_limits<double>::infinity());
    trace.iterations.push_back({i, rrf, sis->verified_rrf, sis->architecture, *theta, recomputed});
    trace.final_point = point;
    if (recomputed <= sis->verified_rrf) {
      trace.outcome = CodesignOutcome::Converged;
      return trace;
    }
    rrf = recomputed;
  }
  trace.outcome = CodesignOutcome::MaxIterations;
  return trace;
}

/// One scripted oracle answer: what the design cycle verified and what the
/// security assessment then measured.
struct ScriptedResponse {
  double verified_rrf = 0.0;
  SisSecurity posture;
  std::string architecture;

  friend bool operator==(const ScriptedResponse&, const ScriptedResponse&) = default;
};

/// Replays a fixed response table, one row per iteration. Exhausting the table
/// is an oracle failure unless `cycle` is set.
class ScriptedOracle {
 public:
  explicit ScriptedOracle(std::vector<ScriptedResponse> responses, bool cycle = false)
      : responses_(std::move(responses)), cycle_(cycle) {}

  std::optional<SisDesign> design(double /*target_rrf*/) {
    if (responses_.empty() || (!cycle_ && next_ >= responses_.size())) return std::nullopt;
    current_ = next_ % responses_.size();
    ++next_;
    const auto& row = responses_[current_];
    std::string arch = row.architecture.empty() ? "scripted#" + std::to_string(current_ + 1)
                                                : row.architecture;
    return SisDesign{std::move(arch), row.verified_rrf};
  }

  std::optional<SisSecurity> assess(const SisDesign& /*design*/) const {
    if (next_ == 0) return std::nullopt;
    return responses_[current_].posture;
  }

  const std::vector<ScriptedResponse>& responses() const noexcept { return responses_; }
  bool cycle() const noexcept { return cycle_; }

 private:
  std::vector<ScriptedResponse> responses_;
  bool cycle_ = false;
  std::size_t next_ = 0;
  std::size_t current_ = 0;
};

/// Response table that reproduces a recorded trace.
inline std::vector<ScriptedResponse> responses_from_trace(const CodesignTrace& trace) {
  std::vector<ScriptedResponse> rows;
  rows.reserve(trace.iterations.size());
  for (const auto& it : trace.iterations) {
    rows.push_back({it.verified_rrf, it.posture, it.architecture});
  }
  return rows;
}

}  // namespace clopa
