#include "iernn/harness.hpp"
#include "iernn/schemes.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

using namespace iernn;

namespace {

const Vec kTheta0 = (Vec(3) << 0.4, 0.8, 0.9).finished();

PathSpec circle_at(const SerialChain& chain, const Vec& theta0, PathKind kind = PathKind::circle)
{
  PathParams p;
  p.kind = kind;
  p.center = Vec::Zero(chain.task_dim());
  p.scale = 0.2;
  p.period = 8.0;
  return PathSpec(p).anchored_at(forward_kinematics(chain, theta0));
}

RepetitiveMotionParams rm_params(double w = 10.0)
{
  const auto chain = presets::planar_three_link();
  return {4.0, w, kTheta0, circle_at(chain, kTheta0), chain};
}

HybridTorqueParams ht_params(double mu = 0.5)
{
  const auto chain = presets::planar_three_link();
  return {mu, 10.0, 1.0, 4.0, 4.0, kTheta0, circle_at(chain, kTheta0, PathKind::butterfly), chain};
}

}  // namespace

TEST(RepetitiveMotion, NoDriftTermAtStart)
{
  auto feed = std::make_shared<JointState>(JointState::at_rest(kTheta0));
  const auto qp = build_repetitive_motion_qp(rm_params(), feed);
  EXPECT_EQ(qp.sample_P(0.0), Vec::Zero(3));
  EXPECT_EQ(qp.sample_Q(0.0), Mat::Identity(3, 3));
}

TEST(RepetitiveMotion, OnPathWithoutFeedbackTracksPathVelocity)
{
  const auto p = rm_params(0.0);
  auto feed = std::make_shared<JointState>(JointState::at_rest(kTheta0));
  const auto qp = build_repetitive_motion_qp(p, feed);
  for (double t : {0.5, 2.0}) {
    EXPECT_LT((qp.sample_B(t) - evaluate_path(p.path, t).velocity).norm(), 1e-15);
  }
}

TEST(RepetitiveMotion, AnalyticRatesMatchFlowDifferences)
{
  const auto p = rm_params();
  const Vec dth = (Vec(3) << 0.3, -0.7, 0.2).finished();
  auto feed = std::make_shared<JointState>();
  const auto qp = build_repetitive_motion_qp(p, feed);
  const double t = 1.3, h = 1e-5;
  const auto at = [&](double s) {
    *feed = JointState{kTheta0 + s * dth, dth, Vec::Zero(3)};
    return std::tuple{qp.sample_P(t + s), qp.sample_J(t + s), qp.sample_B(t + s)};
  };
  const auto [Pp, Jp, Bp] = at(h);
  const auto [Pm, Jm, Bm] = at(-h);
  at(0.0);
  EXPECT_LT((qp.sample_dP(t) - (Pp - Pm) / (2 * h)).norm(), 1e-8);
  EXPECT_LT((qp.sample_dJ(t) - (Jp - Jm) / (2 * h)).norm(), 1e-8);
  EXPECT_LT((qp.sample_dB(t) - (Bp - Bm) / (2 * h)).norm(), 1e-8);
}

TEST(RepetitiveMotion, KktSolutionMatchesPseudoInverseOracle)
{
  const auto p = rm_params();
  auto feed = std::make_shared<JointState>(JointState::at_rest(kTheta0));
  const auto aug = assemble_augmented(build_repetitive_motion_qp(p, feed));
  feed->theta = (Vec(3) << 0.5, 0.7, 1.0).finished();
  const Vec y = theoretical_solution(aug, 2.0).stacked();
  const Vec ref = oracle::repetitive_motion_solution(p.chain, p.path, p.kappa, p.feedback_gain,
                                                     p.theta0, 2.0, feed->theta);
  EXPECT_LT((y - ref).norm(), 1e-8);
}

TEST(RepetitiveMotion, OptimalOverNullspaceGrid)
{
  const auto p = rm_params();
  auto feed = std::make_shared<JointState>(JointState::at_rest((Vec(3) << 0.2, 1.0, 0.6).finished()));
  const auto qp = build_repetitive_motion_qp(p, feed);
  const Vec x = theoretical_solution(assemble_augmented(qp), 3.0).x;
  const Vec grid =
      oracle::nullspace_grid_minimize(qp.sample_Q(3.0), qp.sample_P(3.0), qp.sample_J(3.0), qp.sample_B(3.0));
  EXPECT_LE((x - grid).norm(), 1e-6);
}

TEST(RepetitiveMotion, OracleResolvedRateTracksPath)
{
  // Integrate dtheta = x*(theta, t) with the independent oracle; tracking error stays small.
  const auto p = rm_params();
  const auto f = [&](double t, const Vec& th) {
    return Vec(oracle::repetitive_motion_solution(p.chain, p.path, p.kappa, p.feedback_gain,
                                                  p.theta0, t, th).head(3));
  };
  Vec th = kTheta0;
  double worst = 0.0;
  const int chunks = 80;
  for (int k = 0; k < chunks; ++k) {
    const double t0 = 8.0 * k / chunks, t1 = 8.0 * (k + 1) / chunks;
    th = oracle::rk4(f, th, t0, t1, 1000);
    worst = std::max(worst, (forward_kinematics(p.chain, th) - evaluate_path(p.path, t1).position).norm());
  }
  EXPECT_LE(worst, 1e-4);
  EXPECT_LE((th - kTheta0).norm(), 0.01);
}

TEST(RepetitiveMotion, ValidationErrors)
{
  auto p = rm_params();
  p.kappa = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = rm_params();
  p.theta0 = Vec::Zero(2);
  EXPECT_THROW(validate(p), DimensionError);
  const auto two = presets::planar_two_link();
  RepetitiveMotionParams q{4.0, 1.0, Vec::Zero(2), circle_at(two, (Vec(2) << 0.3, 1.0).finished()), two};
  EXPECT_THROW(validate(q), ConfigError);  // not redundant
  auto feed = std::make_shared<JointState>(JointState::at_rest(kTheta0));
  EXPECT_THROW(build_repetitive_motion_qp(rm_params(), nullptr), ConfigError);
}

TEST(HybridTorque, PureKinematicWeight)
{
  const auto p = ht_params(1.0);
  const Vec dth = (Vec(3) << 0.1, 0.2, -0.3).finished();
  auto feed = std::make_shared<JointState>(JointState{kTheta0, dth, Vec::Zero(3)});
  const auto qp = build_hybrid_torque_qp(p, feed);
  EXPECT_LT((qp.sample_Q(0.5) - Mat::Identity(3, 3)).norm(), 1e-15);
  const Vec S = (p.xi1 + p.xi2) * dth;
  EXPECT_LT((qp.sample_P(0.5) - S).norm(), 1e-14);
}

TEST(HybridTorque, TorqueWeightAtRestIsInertiaTimesGravity)
{
  const auto p = ht_params(0.0);
  auto feed = std::make_shared<JointState>(JointState::at_rest(kTheta0));
  const auto qp = build_hybrid_torque_qp(p, feed);
  const Mat M = oracle::rnea_inertia(oracle::PlanarArm::uniform_rods(3), kTheta0);
  const Vec G = oracle::rnea(oracle::PlanarArm::uniform_rods(3), kTheta0, Vec::Zero(3), Vec::Zero(3));
  EXPECT_LT((qp.sample_P(0.0) - M.transpose() * G).norm(), 1e-11);
  EXPECT_LT((qp.sample_Q(0.0) - M.transpose() * M).norm(), 1e-11);
}

TEST(HybridTorque, AtRestOnPathConstraintVanishes)
{
  auto feed = std::make_shared<JointState>(JointState::at_rest(kTheta0));
  const auto qp = build_hybrid_torque_qp(ht_params(), feed);
  EXPECT_LT(qp.sample_B(0.0).norm(), 1e-14);
}

TEST(HybridTorque, KktSolutionMatchesIndependentOracle)
{
  const auto p = ht_params();
  const Vec th = (Vec(3) << 0.45, 0.75, 0.95).finished();
  const Vec dth = (Vec(3) << 0.2, -0.4, 0.3).finished();
  auto feed = std::make_shared<JointState>(JointState{th, dth, Vec::Zero(3)});
  const Vec y = theoretical_solution(assemble_augmented(build_hybrid_torque_qp(p, feed)), 2.5).stacked();
  const Vec ref = oracle::hybrid_torque_solution(p.chain, oracle::PlanarArm::uniform_rods(3), p.path,
                                                 {p.mu, p.alpha, p.beta, p.xi1, p.xi2}, p.theta0,
                                                 2.5, th, dth);
  EXPECT_LT((y - ref).norm(), 1e-6 * (1.0 + ref.norm()));
}

TEST(HybridTorque, FlowRatesMatchDifferences)
{
  const auto p = ht_params();
  const Vec th = (Vec(3) << 0.45, 0.75, 0.95).finished();
  const Vec dth = (Vec(3) << 0.2, -0.4, 0.3).finished();
  const Vec ddth = (Vec(3) << -1.0, 0.5, 0.8).finished();
  auto feed = std::make_shared<JointState>();
  const auto qp = build_hybrid_torque_qp(p, feed);
  const double t = 1.7, h = 1e-4;
  const auto at = [&](double s) {
    *feed = JointState{th + s * dth + 0.5 * s * s * ddth, dth + s * ddth, ddth};
    return std::tuple<Mat, Vec, Vec>{qp.sample_Q(t + s), qp.sample_P(t + s), qp.sample_B(t + s)};
  };
  const auto [Qp, Pp, Bp] = at(h);
  const auto [Qm, Pm, Bm] = at(-h);
  at(0.0);
  EXPECT_LT((qp.sample_dQ(t) - (Qp - Qm) / (2 * h)).norm(), 1e-5);
  EXPECT_LT((qp.sample_dP(t) - (Pp - Pm) / (2 * h)).norm(), 1e-5);
  EXPECT_LT((qp.sample_dB(t) - (Bp - Bm) / (2 * h)).norm(), 1e-5);
}

TEST(HybridTorque, NeedsDynamics)
{
  const auto chain = presets::spatial_6r();
  const Vec th0 = (Vec(6) << 1.67, 2.845, -3.218, 4.182, -1.715, -2.655).finished();
  HybridTorqueParams p{0.5, 10, 1, 4, 4, th0, circle_at(chain, th0), chain};
  EXPECT_THROW(validate(p), DynamicsUnavailable);
}

TEST(HybridTorque, GainValidation)
{
  auto p = ht_params();
  p.mu = 1.5;
  EXPECT_THROW(validate(p), ConfigError);
  p = ht_params();
  p.beta = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
}

TEST(TorqueOutput, StaticsAndEquilibrium)
{
  const auto two = presets::planar_two_link();
  const Vec hang = (Vec(2) << -std::numbers::pi / 2, 0.0).finished();
  EXPECT_LT(torque_output(two, JointState::at_rest(hang)).norm(), 1e-14);
  const auto three = presets::planar_three_link();
  const Vec G = dynamics_terms(three, JointState::at_rest(kTheta0)).gravity_vec;
  EXPECT_EQ(torque_output(three, JointState::at_rest(kTheta0)), G);
}

TEST(Scheme, ParseNames)
{
  EXPECT_EQ(parse_scheme("hybrid_torque"), Scheme::hybrid_torque);
  EXPECT_THROW(parse_scheme("other"), ConfigError);
}
