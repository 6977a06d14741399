#include "iernn/theorems.hpp"

#include <gtest/gtest.h>

#include "json.hpp"
#include "oracles.hpp"

#include <cmath>
#include <sstream>

using namespace iernn;

TEST(Roots, Classification)
{
  EXPECT_EQ(classify_roots(3, 2), RootCase::distinct);
  EXPECT_EQ(classify_roots(2, 1), RootCase::repeated);
  EXPECT_EQ(classify_roots(2, 4), RootCase::complex);
  EXPECT_EQ(classify_roots(500, 2500), RootCase::distinct);
}

TEST(ClosedForm, MatchesComplexArithmeticOracle)
{
  for (auto [nu1, nu2] : {std::pair{3.0, 2.0}, {2.0, 1.0}, {2.0, 4.0}, {10.0, 3.0}, {1.0, 9.0}}) {
    for (double t = 0.0; t <= 3.0; t += 0.05) {
      EXPECT_NEAR(closed_form_residual(nu1, nu2, 1.5, t), oracle::scalar_residual(nu1, nu2, 1.5, t),
                  1e-13)
          << nu1 << "," << nu2 << " t=" << t;
    }
  }
}

TEST(ClosedForm, FrozenValues)
{
  EXPECT_NEAR(closed_form_residual(3, 2, 1, 1), -0.09720887, 1e-8);
  EXPECT_NEAR(closed_form_residual(2, 1, 1, 1), 0.0, 1e-15);
  // alpha = -1, beta = sqrt(3)
  const double b = std::sqrt(3.0);
  EXPECT_NEAR(closed_form_residual(2, 4, 1, 0.7),
              std::exp(-0.7) * (-std::sin(b * 0.7) / b + std::cos(b * 0.7)), 1e-14);
}

TEST(Verify, DefaultMatrixPasses)
{
  const auto report = verify_theorems();
  EXPECT_TRUE(report.all_passed());
  std::ostringstream text;
  write_report_text(report, text);
  const std::string s = text.str();
  for (const char* needle : {"case 1", "case 2", "case 3", "ramp", "constant noise", "0.002"}) {
    EXPECT_NE(s.find(needle), std::string::npos) << needle;
  }
}

TEST(Verify, RampRowReportsSlopeOverNu2)
{
  const auto report = verify_theorems();
  bool found = false;
  for (const auto& c : report.cases) {
    if (c.label.find("ramp") != std::string::npos) {
      found = true;
      EXPECT_DOUBLE_EQ(c.expected, 0.002);
      EXPECT_NEAR(c.measured, 0.002, 1e-4);
      EXPECT_TRUE(c.passed);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Verify, JsonSummaryIsValid)
{
  const auto report = verify_theorems();
  std::ostringstream os;
  write_report_json(report, os);
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j.at("all_passed").get<bool>(), true);
  EXPECT_EQ(j.at("cases").size(), report.cases.size());
  EXPECT_TRUE(j.at("cases")[0].contains("measured"));
}

TEST(Verify, FailingCaseIsReported)
{
  VerifyPlan plan;
  plan.gains = {{3.0, 2.0}};
  plan.noise_cases = {NoiseCase{NoiseKind::constant, Variant::ie_rnn, 10.0, 500, 2500, 0.01, 0.0}};
  // After 10 ms the integral action has not yet removed the constant disturbance.
  const auto report = verify_theorems(plan);
  EXPECT_FALSE(report.all_passed());
}

TEST(Verify, PlanValidation)
{
  VerifyPlan plan;
  plan.gains = {{2.0, 0.0}};
  EXPECT_THROW(plan.validate(), ConfigError);
  plan = {};
  plan.dt = 0.0;
  EXPECT_THROW(plan.validate(), ConfigError);
  plan = {};
  plan.noise_cases[0].window_start = 9.0;
  EXPECT_THROW(plan.validate(), ConfigError);
  EXPECT_THROW(verify_theorems(plan), ConfigError);
}
