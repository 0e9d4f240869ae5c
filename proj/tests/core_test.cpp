#include <clopa/core.hpp>

#include <expect_error.hpp>
#include <fixtures.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace clopa;

namespace {

ScenarioSheet table_sheet() {
  ScenarioSheet s;
  s.hazard_name = "overflow";
  s.tmel = 1e-6;
  s.layer_names = {"dike", "procedure", "human"};
  s.events = {{"surge", 0.1, {{"dike", 1e-2}, {"procedure", 1.0}, {"human", 1e-1}}},
              {"blockage", 0.1, {{"dike", 1e-2}, {"procedure", 1e-1}, {"human", 1e-1}}}};
  s.bpcs = {0.1, 0.1, 0.01, {{"dike", 1e-2}, {"procedure", 1.0}, {"human", 1e-1}}};
  return s;
}

}  // namespace

TEST(Probability, AcceptsClosedUnitInterval) {
  EXPECT_EQ(Probability(0.0).value(), 0.0);
  EXPECT_EQ(Probability(1.0).value(), 1.0);
  EXPECT_DOUBLE_EQ(Probability(0.25).complement(), 0.75);
}

TEST(Probability, RejectsOutOfRange) {
  EXPECT_CLOPA_ERROR(Probability(-1e-9), ErrorCode::ProbabilityRange);
  EXPECT_CLOPA_ERROR(Probability(1.0000001), ErrorCode::ProbabilityRange);
  EXPECT_CLOPA_ERROR(Probability(std::nan("")), ErrorCode::ProbabilityRange);
}

TEST(Rate, RejectsNegativeAndNonFinite) {
  EXPECT_EQ(Rate(0.0).value(), 0.0);
  EXPECT_CLOPA_ERROR(Rate(-0.1), ErrorCode::RateRange);
  EXPECT_CLOPA_ERROR(Rate(std::numeric_limits<double>::infinity()), ErrorCode::RateRange);
}

TEST(LopaScenario, RejectsZeroTmel) {
  EXPECT_CLOPA_ERROR(LopaScenario("h", Rate(0.0), {}, BpcsParams{}), ErrorCode::TmelNonpositive);
}

TEST(LopaScenario, RejectsDuplicateEventNames) {
  std::vector<InitiatingEvent> events{{"a", Rate(0.1)}, {"a", Rate(0.2)}};
  EXPECT_CLOPA_ERROR(LopaScenario("h", Rate(1e-6), events, BpcsParams{}), ErrorCode::DuplicateEventName);
}

TEST(LopaScenario, MitigatedDemandRateSumsEvents) {
  const auto s = fixtures::cstr();
  EXPECT_NEAR(s.mitigated_demand_rate(), 1.2e-4, 1e-18);
}

TEST(ValidateScenario, ValidSheetHasNoViolations) {
  EXPECT_TRUE(validate_scenario(table_sheet()).empty());
}

TEST(ValidateScenario, ReportsEveryViolationWithPath) {
  auto s = table_sheet();
  s.tmel = -1.0;
  s.events[1].name = "surge";
  s.events[0].likelihood = -2.0;
  s.events[1].layers[2].pfd = 1.5;
  s.bpcs.pfd_physical = 2.0;
  s.bpcs.lambda_cyber = std::numeric_limits<double>::infinity();
  const auto report = validate_scenario(s);
  ASSERT_EQ(report.size(), 6U);
  EXPECT_EQ(report[0].code, ErrorCode::TmelNonpositive);
  EXPECT_EQ(report[1].where, "events[0].likelihood");
  EXPECT_EQ(report[2].code, ErrorCode::DuplicateEventName);
  EXPECT_EQ(report[2].where, "events[1].name");
  EXPECT_EQ(report[3].where, "events[1].layers.human");
  EXPECT_EQ(report[3].code, ErrorCode::ProbabilityRange);
  EXPECT_EQ(report[4].where, "bpcs.pfd_physical");
  EXPECT_EQ(report[5].code, ErrorCode::RateRange);
}

TEST(BuildScenario, FoldsLayerColumns) {
  const auto s = build_scenario(table_sheet());
  ASSERT_EQ(s.initiating_events().size(), 2U);
  EXPECT_NEAR(s.initiating_events()[0].layer_pfd_product.value(), 1e-3, 1e-18);
  EXPECT_NEAR(s.initiating_events()[1].layer_pfd_product.value(), 1e-4, 1e-18);
  EXPECT_NEAR(s.bpcs().layer_pfd_product.value(), 1e-3, 1e-18);
  EXPECT_EQ(s.tmel().value(), 1e-6);
}

TEST(BuildScenario, EmptyLayerListMeansNoExtraProtection) {
  auto sheet = table_sheet();
  sheet.events[0].layers.clear();
  EXPECT_EQ(build_scenario(sheet).initiating_events()[0].layer_pfd_product.value(), 1.0);
}

TEST(BuildScenario, InvalidSheetThrowsValidationError) {
  auto sheet = table_sheet();
  sheet.tmel = 0.0;
  EXPECT_CLOPA_ERROR(build_scenario(sheet), ErrorCode::ValidationError);
}

TEST(ErrorCode, NamesAreStable) {
  EXPECT_EQ(to_string(ErrorCode::TmelNonpositive), "TMEL_NONPOSITIVE");
  EXPECT_EQ(to_string(ErrorCode::RrfBelowMinimum), "RRF_BELOW_MINIMUM");
  const Error e(ErrorCode::IoError, "disk");
  EXPECT_STREQ(e.what(), "IO_ERROR: disk");
}
