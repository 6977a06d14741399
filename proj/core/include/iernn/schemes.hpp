#pragma once

#include "iernn/chain.hpp"
#include "iernn/paths.hpp"
#include "iernn/qp.hpp"

#include <memory>

namespace iernn {

/// Live joint state read by scheme samplers. The owner (normally the tracking
/// harness) writes it before every evaluation; samplers never modify it.
using StateFeed = std::shared_ptr<JointState>;

enum class Scheme { repetitive_motion, hybrid_torque };

Scheme parse_scheme(const std::string& s);

/// Velocity-level scheme: x = dtheta,
///   minimize 1/2 |kappa (theta - theta0) + dtheta|^2
///   s.t.     J(theta) dtheta = Rdot + w (R - F(theta)).
struct RepetitiveMotionParams
{
  double kappa = 4.0;          // 1/s
  double feedback_gain = 10.0; // 1/s, W = w I
  Vec theta0;
  PathSpec path;
  SerialChain chain;
};

/// Acceleration-level scheme: x = ddtheta,
///   Q = mu I + (1 - mu) I(theta)' I(theta)
///   P = (1 - mu) I' (C + G) + mu S,  S = (xi1 + xi2) dtheta + xi1 xi2 (theta - theta0)
///   B = Rddot - Jdot dtheta + alpha (Rdot - J dtheta) + beta (R - F(theta)).
struct HybridTorqueParams
{
  double mu = 0.5;
  double alpha = 10.0;
  double beta = 10.0;
  double xi1 = 4.0;
  double xi2 = 4.0;
  Vec theta0;
  PathSpec path;
  SerialChain chain;
};

void validate(const RepetitiveMotionParams& p);
void validate(const HybridTorqueParams& p);

/// Q, P, J, B read theta (and dtheta) from the feed. Derivative samplers are
/// exact total time derivatives along the feed's motion (dtheta = x).
TimeVaryingQP build_repetitive_motion_qp(const RepetitiveMotionParams& params, StateFeed feed);

/// dJ is analytic; dQ, dP, dB are five-point differences along the curve
/// (t + s, theta + s dtheta, dtheta + s ddtheta) with ddtheta = x read from the feed.
TimeVaryingQP build_hybrid_torque_qp(const HybridTorqueParams& params, StateFeed feed);

/// Joint torque I ddtheta + C + G for logging.
Vec torque_output(const SerialChain& chain, const JointState& state);

}  // namespace iernn
