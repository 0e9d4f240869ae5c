#pragma once

// Closed-form CLOPA mathematics: cyber failure probabilities of the BPCS and
// SIS, the joint BPCS/SIS failure, the expected hazard rate, the coefficient
// sets and the SIS PFD bound in coefficient and attack-probability form.

#include <clopa/core.hpp>
#include <clopa/error.hpp>

#include <algorithm>
#include <optional>
#include <string>

namespace clopa {

/// Marginal and joint probabilities of a cyber-induced BPCS/SIS failure.
struct CyberFailureProbs {
  Probability p_bc;           // P[B_c]
  Probability p_sc;           // P[S_c]
  Probability p_joint_cyber;  // P[S_c, B_c]
};

/// Result of a PFD bound evaluation. `pfd_bound` is empty when the numerator
/// is negative; `rrf` is empty whenever the numerator is not positive (the
/// point lies on or beyond the realizable region).
struct BoundResult {
  std::optional<Probability> pfd_bound;
  std::optional<double> rrf;
  ClopaCoefficients coefficients;
  double numerator = 0.0;
  double denominator = 1.0;

  bool feasible() const noexcept { return rrf.has_value(); }
  /// numerator / denominator without clamping; negative beyond the boundary.
  double raw_ratio() const noexcept { return numerator / denominator; }
  /// A ratio above one means the other layers already meet the TMEL.
  bool sis_required() const noexcept { return !rrf || *rrf > 1.0; }
};

/// B_c = A_B or (A_S and A_SB); S_c = A_S or (A_B and A_BS).
inline CyberFailureProbs cyber_failure_probs(const SecurityPosture& posture) {
  const double ab = posture.p_ab.value();
  const double as = posture.p_as.value();
  const double abs = posture.p_abs.value();
  const double asb = posture.p_asb.value();
  const double bc = ab + as * asb - ab * as * asb;
  const double sc = as + ab * abs - ab * as * abs;
  const double joint = ab * (as + abs) + as * asb - ab * as * (abs + asb);
  auto clamp01 = [](double x) { return Probability(std::clamp(x, 0.0, 1.0)); };
  return {clamp01(bc), clamp01(sc), clamp01(joint)};
}

/// P[S, B] with S = S_p or S_c, B = B_p or B_c, physical failures independent
/// of each other and of the cyber events.
inline Probability joint_sis_bpcs_failure(Probability p_sp, Probability p_bp,
                                          const CyberFailureProbs& cyber) {
  const double sp = p_sp.value();
  const double bp = p_bp.value();
  const double bc = cyber.p_bc.value();
  const double sc = cyber.p_sc.value();
  const double j = cyber.p_joint_cyber.value();
  const double p = sp * (bp * (1.0 - bc - sc) + bc) + sc * bp + j * (1.0 - sp - bp + sp * bp);
  return Probability(std::clamp(p, 0.0, 1.0));
}

/// Expected hazards per year for a given SIS physical PFD.
inline Rate expected_hazard_rate(const LopaScenario& scenario, Probability p_sp,
                                 const CyberFailureProbs& cyber, Probability p_joint_sb) {
  const auto& b = scenario.bpcs();
  const double lb = b.layer_pfd_product.value();
  const double sp = p_sp.value();
  const double sc = cyber.p_sc.value();
  const double p_s = sp + sc - sp * sc;
  const double demand = scenario.mitigated_demand_rate() + lb * b.lambda_cyber.value();
  return Rate(p_joint_sb.value() * demand + p_s * lb * b.lambda_physical.value());
}

/// Convenience overload computing the cyber and joint probabilities from a posture.
inline Rate expected_hazard_rate(const LopaScenario& scenario, Probability p_sp,
                                 const SecurityPosture& posture) {
  const auto cyber = cyber_failure_probs(posture);
  const auto joint = joint_sis_bpcs_failure(p_sp, scenario.bpcs().pfd_physical, cyber);
  return expected_hazard_rate(scenario, p_sp, cyber, joint);
}

/// alpha1, alpha2 and beta only; gamma and zeta are left at zero.
inline ClopaCoefficients lopa_coefficients(const LopaScenario& scenario) {
  const auto& b = scenario.bpcs();
  const double pbp = b.pfd_physical.value();
  const double lb = b.layer_pfd_product.value();
  const double demand = scenario.mitigated_demand_rate() + lb * b.lambda_cyber.value();
  ClopaCoefficients c;
  c.alpha1 = pbp * demand + lb * b.lambda_physical.value();
  c.alpha2 = (1.0 - pbp) * demand;
  c.beta = scenario.tmel().value();
  return c;
}

inline ClopaCoefficients clopa_coefficients(const LopaScenario& scenario,
                                            const SecurityPosture& posture) {
  ClopaCoefficients c = lopa_coefficients(scenario);
  const double ab = posture.p_ab.value();
  const double asb = posture.p_asb.value();
  c.gamma1 = c.alpha1 + c.alpha2 * (ab + asb * (1.0 - ab));
  c.gamma2 = (c.alpha1 + c.alpha2) * ab;
  c.gamma3 = c.alpha1 + c.alpha2 * ab;
  c.zeta1 = c.beta * c.alpha2 * ab;
  c.zeta2 = c.alpha1 * c.gamma1 - c.beta * c.gamma3;
  c.zeta3 = c.gamma2 * (c.alpha1 - c.beta);
  return c;
}

namespace detail {

inline BoundResult make_bound(double numerator, double denominator, ClopaCoefficients coeffs) {
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::DegenerateDenominator,
                "PFD bound denominator " + std::to_string(denominator) + " is not positive");
  }
  BoundResult r;
  r.coefficients = coeffs;
  r.numerator = numerator;
  r.denominator = denominator;
  if (numerator >= 0.0) r.pfd_bound = Probability(std::min(1.0, numerator / denominator));
  if (numerator > 0.0) r.rrf = denominator / numerator;
  return r;
}

}  // namespace detail

/// SIS PFD bound in terms of P[S_c], P[B_c] and P[S_c, B_c].
inline BoundResult sis_pfd_bound_general(const LopaScenario& scenario,
                                         const CyberFailureProbs& cyber) {
  const ClopaCoefficients c = lopa_coefficients(scenario);
  const double sc = cyber.p_sc.value();
  const double bc = cyber.p_bc.value();
  const double j = cyber.p_joint_cyber.value();
  const double num = c.beta - (c.alpha1 * sc + c.alpha2 * j);
  const double den = c.alpha1 - c.alpha1 * sc + c.alpha2 * bc - c.alpha2 * j;
  return detail::make_bound(num, den, c);
}

/// SIS PFD bound at a design point, from precomputed coefficients.
inline BoundResult sis_pfd_bound(const ClopaCoefficients& c, Probability p_as, Probability p_abs) {
  const double as = p_as.value();
  const double pivot = c.gamma2 * p_abs.value() * (1.0 - as);
  const double num = c.beta - c.gamma1 * as - pivot;
  const double den = c.gamma3 - c.gamma3 * as - pivot;
  return detail::make_bound(num, den, c);
}

/// SIS PFD bound in terms of the four attack-vector probabilities.
inline BoundResult sis_pfd_bound(const LopaScenario& scenario, const SecurityPosture& posture) {
  return sis_pfd_bound(clopa_coefficients(scenario, posture), posture.p_as, posture.p_abs);
}

/// Classical LOPA: every attack probability zero, bound = beta / alpha1.
inline BoundResult classical_lopa(const LopaScenario& scenario) {
  const ClopaCoefficients c = lopa_coefficients(scenario);
  return detail::make_bound(c.beta, c.alpha1, c);
}

/// RRF underestimate of classical LOPA relative to CLOPA at this posture.
inline double rrf_error(const ClopaCoefficients& c, Probability p_as, Probability p_abs) {
  const double as = p_as.value();
  const double pivot_share = p_abs.value() * (1.0 - as);
  const double slack = c.beta - c.gamma1 * as - c.gamma2 * pivot_share;
  if (!(slack > 0.0)) {
    throw Error(ErrorCode::InfeasiblePoint, "design point lies outside the realizable region");
  }
  return (c.zeta1 + c.zeta2 * as + c.zeta3 * pivot_share) / (c.beta * slack);
}

inline double rrf_error(const LopaScenario& scenario, const SecurityPosture& posture) {
  return rrf_error(clopa_coefficients(scenario, posture), posture.p_as, posture.p_abs);
}

/// Design point carrying the CLOPA bound at (p_as, p_abs).
inline DesignPoint evaluate_design_point(const ClopaCoefficients& c, Probability p_as,
                                         Probability p_abs) {
  const BoundResult bound = sis_pfd_bound(c, p_as, p_abs);
  return DesignPoint{p_as, p_abs, bound.rrf ? bound.pfd_bound : std::nullopt, bound.rrf};
}

}  // namespace clopa
