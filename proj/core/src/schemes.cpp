#include "iernn/schemes.hpp"

#include <cmath>

namespace iernn {

Scheme parse_scheme(const std::string& s)
{
  if (s == "repetitive_motion") return Scheme::repetitive_motion;
  if (s == "hybrid_torque") return Scheme::hybrid_torque;
  throw ConfigError("unknown scheme '" + s + "' (repetitive_motion | hybrid_torque)");
}

namespace {

void check_common(const SerialChain& chain, const PathSpec& path, const Vec& theta0)
{
  if (path.dim() != chain.task_dim()) {
    throw DimensionError("path dimension " + std::to_string(path.dim()) +
                         " does not match chain task dimension " +
                         std::to_string(chain.task_dim()));
  }
  if (chain.n_joints() < chain.task_dim() + 1) {
    throw ConfigError("chain '" + chain.name() + "' is not redundant for its task dimension");
  }
  require_dim(theta0.size(), chain.n_joints(), "theta0");
  if (!theta0.allFinite()) {
    throw ConfigError("theta0 must be finite");
  }
}

}  // namespace

void validate(const RepetitiveMotionParams& p)
{
  check_common(p.chain, p.path, p.theta0);
  if (!(p.kappa > 0.0)) {
    throw ConfigError("repetitive motion: kappa must be positive");
  }
  if (!(p.feedback_gain >= 0.0)) {
    throw ConfigError("repetitive motion: feedback gain must be non-negative");
  }
}

void validate(const HybridTorqueParams& p)
{
  check_common(p.chain, p.path, p.theta0);
  if (!(p.mu >= 0.0 && p.mu <= 1.0)) {
    throw ConfigError("hybrid torque: mu must lie in [0, 1]");
  }
  if (!(p.alpha > 0.0) || !(p.beta > 0.0) || !(p.xi1 > 0.0) || !(p.xi2 > 0.0)) {
    throw ConfigError("hybrid torque: alpha, beta, xi1, xi2 must be positive");
  }
  if (!p.chain.dynamics()) {
    throw DynamicsUnavailable("hybrid torque scheme needs a chain with dynamics; '" +
                              p.chain.name() + "' has none");
  }
}

TimeVaryingQP build_repetitive_motion_qp(const RepetitiveMotionParams& params, StateFeed feed)
{
  validate(params);
  if (!feed) {
    throw ConfigError("repetitive motion: state feed is null");
  }
  auto p = std::make_shared<const RepetitiveMotionParams>(params);
  const int n = p->chain.n_joints();
  const int m = p->chain.task_dim();

  TimeVaryingQP qp;
  qp.n = n;
  qp.m = m;
  qp.sample_Q = [n](double) -> Mat { return Mat::Identity(n, n); };
  qp.sample_dQ = [n](double) -> Mat { return Mat::Zero(n, n); };
  qp.sample_P = [p, feed](double) -> Vec { return p->kappa * (feed->theta - p->theta0); };
  qp.sample_dP = [p, feed](double) -> Vec { return p->kappa * feed->dtheta; };
  qp.sample_J = [p, feed](double) -> Mat { return jacobian(p->chain, feed->theta); };
  qp.sample_dJ = [p, feed](double) -> Mat { return jacobian_time_derivative(p->chain, *feed); };
  qp.sample_B = [p, feed](double t) -> Vec {
    const PathSample r = evaluate_path(p->path, t);
    return r.velocity + p->feedback_gain * (r.position - forward_kinematics(p->chain, feed->theta));
  };
  qp.sample_dB = [p, feed](double t) -> Vec {
    const PathSample r = evaluate_path(p->path, t);
    const Vec ee_vel = jacobian(p->chain, feed->theta) * feed->dtheta;
    return r.acceleration + p->feedback_gain * (r.velocity - ee_vel);
  };
  return qp;
}

namespace {

struct HybridTerms
{
  Mat Q;
  Vec P;
  Vec B;
};

HybridTerms hybrid_terms(const HybridTorqueParams& p, double t, const Vec& theta,
                         const Vec& dtheta)
{
  const int n = p.chain.n_joints();
  JointState js{theta, dtheta, Vec::Zero(n)};
  const DynamicsTerms dyn = dynamics_terms(p.chain, js);
  const Vec S = (p.xi1 + p.xi2) * dtheta + p.xi1 * p.xi2 * (theta - p.theta0);
  const Mat J = jacobian(p.chain, theta);
  const Mat dJ = jacobian_time_derivative(p.chain, js);
  const PathSample r = evaluate_path(p.path, t);

  HybridTerms h;
  h.Q = p.mu * Mat::Identity(n, n) + (1.0 - p.mu) * dyn.inertia.transpose() * dyn.inertia;
  h.P = (1.0 - p.mu) * dyn.inertia.transpose() * (dyn.coriolis_centrifugal + dyn.gravity_vec) +
        p.mu * S;
  h.B = r.acceleration - dJ * dtheta + p.alpha * (r.velocity - J * dtheta) +
        p.beta * (r.position - forward_kinematics(p.chain, theta));
  return h;
}

// Memoizes the last value and the last along-flow derivative. A built QP is
// confined to one run, so the cache needs no locking.
class HybridCache
{
public:
  explicit HybridCache(std::shared_ptr<const HybridTorqueParams> p) : p_(std::move(p)) {}

  const HybridTerms& value(double t, const JointState& s)
  {
    if (!(has_value_ && t == vt_ && s.theta == vtheta_ && s.dtheta == vdtheta_)) {
      value_ = hybrid_terms(*p_, t, s.theta, s.dtheta);
      vt_ = t;
      vtheta_ = s.theta;
      vdtheta_ = s.dtheta;
      has_value_ = true;
    }
    return value_;
  }

  const HybridTerms& rate(double t, const JointState& s)
  {
    if (!(has_rate_ && t == rt_ && s.theta == rtheta_ && s.dtheta == rdtheta_ &&
          s.ddtheta == rddtheta_)) {
      const auto at = [&](double tau) {
        return hybrid_terms(*p_, t + tau, s.theta + tau * s.dtheta, s.dtheta + tau * s.ddtheta);
      };
      const double h = kDerivativeStep;
      const HybridTerms m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h);
      const auto stencil = [h](const auto& a, const auto& b, const auto& c, const auto& d) {
        return ((a - d) + 8.0 * (c - b)) / (12.0 * h);
      };
      rate_.Q = stencil(m2.Q, m1.Q, p1.Q, p2.Q);
      rate_.P = stencil(m2.P, m1.P, p1.P, p2.P);
      rate_.B = stencil(m2.B, m1.B, p1.B, p2.B);
      rt_ = t;
      rtheta_ = s.theta;
      rdtheta_ = s.dtheta;
      rddtheta_ = s.ddtheta;
      has_rate_ = true;
    }
    return rate_;
  }

private:
  std::shared_ptr<const HybridTorqueParams> p_;
  bool has_value_ = false;
  double vt_ = 0.0;
  Vec vtheta_, vdtheta_;
  HybridTerms value_;
  bool has_rate_ = false;
  double rt_ = 0.0;
  Vec rtheta_, rdtheta_, rddtheta_;
  HybridTerms rate_;
};

}  // namespace

TimeVaryingQP build_hybrid_torque_qp(const HybridTorqueParams& params, StateFeed feed)
{
  validate(params);
  if (!feed) {
    throw ConfigError("hybrid torque: state feed is null");
  }
  auto p = std::make_shared<const HybridTorqueParams>(params);
  auto cache = std::make_shared<HybridCache>(p);
  TimeVaryingQP qp;
  qp.n = p->chain.n_joints();
  qp.m = p->chain.task_dim();
  qp.sample_Q = [cache, feed](double t) -> Mat { return cache->value(t, *feed).Q; };
  qp.sample_P = [cache, feed](double t) -> Vec { return cache->value(t, *feed).P; };
  qp.sample_J = [p, feed](double) -> Mat { return jacobian(p->chain, feed->theta); };
  qp.sample_B = [cache, feed](double t) -> Vec { return cache->value(t, *feed).B; };
  qp.sample_dQ = [cache, feed](double t) -> Mat { return cache->rate(t, *feed).Q; };
  qp.sample_dP = [cache, feed](double t) -> Vec { return cache->rate(t, *feed).P; };
  qp.sample_dJ = [p, feed](double) -> Mat { return jacobian_time_derivative(p->chain, *feed); };
  qp.sample_dB = [cache, feed](double t) -> Vec { return cache->rate(t, *feed).B; };
  return qp;
}

Vec torque_output(const SerialChain& chain, const JointState& state)
{
  return joint_torque(chain, state);
}

}  // namespace iernn
