#include <clopa/engine.hpp>
#include <clopa/oracle.hpp>

#include <expect_error.hpp>
#include <fixtures.hpp>
#include <reference.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace clopa;

namespace {

// Coefficients written out by hand from the CSTR sheet.
constexpr double kSumLambdaL = 0.1 * 1e-3 + 0.1 * 1e-4 + 0.1 * 1e-4;
constexpr double kLb = 1e-3;
constexpr double kAlpha1 = 0.1 * (kSumLambdaL + kLb * 0.01) + kLb * 0.1;
constexpr double kAlpha2 = 0.9 * (kSumLambdaL + kLb * 0.01);
constexpr double kAb = 0.033;
constexpr double kAsb = 0.2813;

}  // namespace

TEST(Coefficients, CaseStudyHandDerived) {
  const auto c = clopa_coefficients(fixtures::cstr(), fixtures::cstr_posture());
  EXPECT_NEAR(c.alpha1, kAlpha1, 1e-18);
  EXPECT_NEAR(c.alpha2, kAlpha2, 1e-18);
  EXPECT_EQ(c.beta, 1e-6);
  EXPECT_NEAR(c.gamma1, kAlpha1 + kAlpha2 * (kAb + kAsb * (1 - kAb)), 1e-18);
  EXPECT_NEAR(c.gamma2, (kAlpha1 + kAlpha2) * kAb, 1e-18);
  EXPECT_NEAR(c.gamma3, kAlpha1 + kAlpha2 * kAb, 1e-18);
  EXPECT_NEAR(c.zeta1, c.beta * c.alpha2 * kAb, 1e-24);
  EXPECT_NEAR(c.zeta2, c.alpha1 * c.gamma1 - c.beta * c.gamma3, 1e-24);
  EXPECT_NEAR(c.zeta3, c.gamma2 * (c.alpha1 - c.beta), 1e-24);
}

TEST(CyberFailure, ZeroPostureMeansNoCyberFailure) {
  const auto p = cyber_failure_probs(SecurityPosture{});
  EXPECT_EQ(p.p_bc.value(), 0.0);
  EXPECT_EQ(p.p_sc.value(), 0.0);
  EXPECT_EQ(p.p_joint_cyber.value(), 0.0);
}

TEST(CyberFailure, CertainAttacksMeanCertainFailure) {
  const auto p = cyber_failure_probs(SecurityPosture::from_values(1, 1, 1, 1));
  EXPECT_EQ(p.p_bc.value(), 1.0);
  EXPECT_EQ(p.p_sc.value(), 1.0);
  EXPECT_EQ(p.p_joint_cyber.value(), 1.0);
}

TEST(CyberFailure, PivotOnlyCouplesThroughTheOtherSystem) {
  // Only a BPCS compromise plus the BPCS->SIS pivot reaches the SIS.
  const auto p = cyber_failure_probs(SecurityPosture::from_values(0.2, 0.0, 0.5, 0.0));
  EXPECT_DOUBLE_EQ(p.p_bc.value(), 0.2);
  EXPECT_DOUBLE_EQ(p.p_sc.value(), 0.1);
  EXPECT_DOUBLE_EQ(p.p_joint_cyber.value(), 0.1);
}

TEST(Bound, RandomModelsMatchReferenceHazardModel) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 2000; ++i) {
    const auto m = ref::random_model(rng);
    const auto scenario = fixtures::to_scenario(m);
    const auto posture = fixtures::to_posture(m);
    const double expected = ref::pfd_ratio(m);
    const double h1 = ref::hazard_rate(m, 1.0) - ref::hazard_rate(m, 0.0);
    if (!(h1 > 1e-9)) continue;
    const auto coeffs = clopa_coefficients(scenario, posture);
    const double den = coeffs.gamma3 * (1 - m.p_as) - coeffs.gamma2 * m.p_abs * (1 - m.p_as);
    if (!(den > 1e-12)) continue;
    const auto bound = sis_pfd_bound(scenario, posture);
    EXPECT_LT(ref::rel_diff(bound.raw_ratio(), expected), 1e-9) << "model " << i;
    const auto general = sis_pfd_bound_general(scenario, cyber_failure_probs(posture));
    EXPECT_LT(ref::rel_diff(general.raw_ratio(), expected), 1e-9) << "model " << i;
  }
}

TEST(Bound, HazardRateAtBoundEqualsTmel) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 300; ++i) {
    const auto m = ref::random_model(rng, 0.0, 0.3);
    const auto scenario = fixtures::to_scenario(m);
    const auto posture = fixtures::to_posture(m);
    BoundResult bound;
    try {
      bound = sis_pfd_bound(scenario, posture);
    } catch (const Error&) {
      continue;
    }
    if (!bound.feasible() || bound.raw_ratio() > 1.0) continue;
    const auto rate = expected_hazard_rate(scenario, *bound.pfd_bound, posture);
    EXPECT_LT(ref::rel_diff(rate.value(), m.tmel), 1e-9);
    EXPECT_LT(ref::rel_diff(rate.value(), ref::hazard_rate(m, bound.pfd_bound->value())), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Bound, ZeroPostureReducesToClassical) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    auto m = ref::random_model(rng);
    m.p_ab = m.p_as = m.p_abs = m.p_asb = 0.0;
    const auto scenario = fixtures::to_scenario(m);
    const double a1 = lopa_coefficients(scenario).alpha1;
    if (!(a1 > 0.0)) continue;
    const auto clopa = sis_pfd_bound(scenario, SecurityPosture{});
    const auto classic = classical_lopa(scenario);
    EXPECT_LT(ref::rel_diff(clopa.raw_ratio(), classic.raw_ratio()), 1e-12);
    EXPECT_LT(ref::rel_diff(classic.raw_ratio(), m.tmel / a1), 1e-15);
  }
}

TEST(Bound, CaseStudyHeadlineNumbers) {
  const auto scenario = fixtures::cstr();
  EXPECT_NEAR(*classical_lopa(scenario).rrf, kAlpha1 / 1e-6, 1e-9);
  const auto c = clopa_coefficients(scenario, fixtures::cstr_posture());
  EXPECT_NEAR(*sis_pfd_bound(c, Probability(0), Probability(0)).rrf, c.gamma3 / c.beta, 1e-9);
  EXPECT_NEAR(*sis_pfd_bound(c, Probability(0.003), Probability(0.0426)).rrf, 500.0, 5.0);
  EXPECT_NEAR(*sis_pfd_bound(c, Probability(0.005), Probability(0.02)).rrf, 1098.0, 11.0);
}

TEST(Bound, InfeasiblePointHasNoRrf) {
  const auto c = clopa_coefficients(fixtures::cstr(), fixtures::cstr_posture());
  const auto bound = sis_pfd_bound(c, Probability(0.01), Probability(0.05));
  EXPECT_FALSE(bound.feasible());
  EXPECT_FALSE(bound.pfd_bound.has_value());
  EXPECT_LT(bound.raw_ratio(), 0.0);
}

TEST(Bound, OnBoundaryPfdIsZeroWithoutRrf) {
  ClopaCoefficients c;
  c.beta = 1.0;
  c.gamma1 = 2.0;
  c.gamma2 = 1.0;
  c.gamma3 = 3.0;
  const auto bound = sis_pfd_bound(c, Probability(0.5), Probability(0.0));
  ASSERT_TRUE(bound.pfd_bound.has_value());
  EXPECT_EQ(bound.pfd_bound->value(), 0.0);
  EXPECT_FALSE(bound.rrf.has_value());
}

TEST(Bound, LooseTmelClampsPfdAndNeedsNoSis) {
  const auto s = LopaScenario("easy", Rate(1.0), {{"x", Rate(0.1)}},
                              BpcsParams{Probability(0.1), Rate(0.1), Rate(0.0)});
  const auto bound = classical_lopa(s);
  EXPECT_EQ(bound.pfd_bound->value(), 1.0);
  EXPECT_GT(bound.raw_ratio(), 1.0);
  EXPECT_LT(*bound.rrf, 1.0);
  EXPECT_FALSE(bound.sis_required());
}

TEST(Bound, CertainSisAttackIsDegenerate) {
  const auto c = clopa_coefficients(fixtures::cstr(), fixtures::cstr_posture());
  EXPECT_CLOPA_ERROR(sis_pfd_bound(c, Probability(1.0), Probability(0.0)), ErrorCode::DegenerateDenominator);
}

TEST(Bound, NoDemandIsDegenerate) {
  const auto s = LopaScenario("idle", Rate(1e-6), {}, BpcsParams{});
  EXPECT_CLOPA_ERROR(classical_lopa(s), ErrorCode::DegenerateDenominator);
}

TEST(RrfError, MatchesDirectSubtraction) {
  std::mt19937_64 rng(11);
  const auto scenario = fixtures::cstr();
  const auto c = clopa_coefficients(scenario, fixtures::cstr_posture());
  std::uniform_real_distribution<double> a(0.0, 0.0067), b(0.0, 0.13);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Probability pa(a(rng)), pb(b(rng));
    const auto bound = sis_pfd_bound(c, pa, pb);
    if (!bound.feasible()) continue;
    const double direct = *bound.rrf - *classical_lopa(scenario).rrf;
    EXPECT_LT(ref::rel_diff(rrf_error(c, pa, pb), direct), 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(RrfError, MinimumAtZeroPosture) {
  const auto c = clopa_coefficients(fixtures::cstr(), fixtures::cstr_posture());
  EXPECT_NEAR(rrf_error(c, Probability(0), Probability(0)), (c.gamma3 - c.alpha1) / c.beta, 1e-9);
  EXPECT_CLOPA_ERROR(rrf_error(c, Probability(0.01), Probability(0.05)), ErrorCode::InfeasiblePoint);
}

TEST(DesignPoint, CarriesBound) {
  const auto c = clopa_coefficients(fixtures::cstr(), fixtures::cstr_posture());
  const auto p = evaluate_design_point(c, Probability(0.003), Probability(0.0426));
  ASSERT_TRUE(p.feasible());
  EXPECT_NEAR(p.pfd_bound->value() * *p.rrf, 1.0, 1e-12);
  EXPECT_FALSE(evaluate_design_point(c, Probability(0.01), Probability(0.05)).feasible());
}
