#include "iernn/harness.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace iernn {

PathSpec default_path()
{
  PathParams p;
  p.kind = PathKind::circle;
  p.center = Eigen::Vector2d(1.5, 1.0);
  p.scale = 0.2;
  p.period = 8.0;
  return PathSpec(std::move(p));
}

void TrackingConfig::validate() const
{
  solver.validate();
  noise.validate();
  if (path.dim() != chain.task_dim()) {
    throw DimensionError("path dimension does not match chain task dimension");
  }
  require_dim(theta0.size(), chain.n_joints(), "theta0");
  if (log_stride < 1) {
    throw ConfigError("log_stride must be at least 1");
  }
  const long steps = step_count(duration, solver.dt);
  if (steps % log_stride != 0) {
    throw ConfigError("log_stride must divide the number of steps so the final state is logged");
  }
  if (initial_perturbation < 0.0) {
    throw ConfigError("initial_perturbation must be non-negative");
  }
  if (scheme == Scheme::hybrid_torque && !chain.dynamics()) {
    throw DynamicsUnavailable("hybrid torque scheme needs a chain with dynamics; '" +
                              chain.name() + "' has none");
  }
}

PathSpec effective_path(const TrackingConfig& cfg)
{
  if (!cfg.anchor_path) {
    return cfg.path;
  }
  return cfg.path.anchored_at(forward_kinematics(cfg.chain, cfg.theta0));
}

namespace {

TimeVaryingQP build_scheme_qp(const TrackingConfig& cfg, const PathSpec& path, StateFeed feed)
{
  if (cfg.scheme == Scheme::repetitive_motion) {
    RepetitiveMotionParams p{cfg.gains.kappa, cfg.gains.feedback_gain, cfg.theta0, path, cfg.chain};
    return build_repetitive_motion_qp(p, std::move(feed));
  }
  HybridTorqueParams p{cfg.gains.mu,  cfg.gains.alpha, cfg.gains.beta, cfg.gains.xi1,
                       cfg.gains.xi2, cfg.theta0,      path,           cfg.chain};
  return build_hybrid_torque_qp(p, std::move(feed));
}

// Layout of the coupled ODE state.
//   repetitive motion: [theta (n); Y (n+m); integral (n+m)]
//   hybrid torque:     [theta (n); dtheta (n); Y (n+m); integral (n+m)]
struct Layout
{
  Eigen::Index n;
  Eigen::Index dim;
  bool second_order;

  Eigen::Index joints() const { return second_order ? 2 * n : n; }
  Eigen::Index size() const { return joints() + 2 * dim; }
  Eigen::Index y_at() const { return joints(); }
  Eigen::Index integral_at() const { return joints() + dim; }
};

}  // namespace

TrajectoryLog run_tracking(const TrackingConfig& cfg)
{
  cfg.validate();
  const PathSpec path = effective_path(cfg);
  const int n = cfg.chain.n_joints();
  const int m = cfg.chain.task_dim();
  const bool hybrid = cfg.scheme == Scheme::hybrid_torque;
  const Layout L{n, n + m, hybrid};

  auto feed = std::make_shared<JointState>(JointState::at_rest(cfg.theta0));
  const AugmentedSystem aug = assemble_augmented(build_scheme_qp(cfg, path, feed));

  TrajectoryLog log;
  log.n = n;
  log.m = m;
  log.has_tau = hybrid;

  // Exact initial network state, optionally perturbed.
  Vec y0;
  try {
    y0 = theoretical_solution(aug, 0.0).stacked();
  } catch (const SolverError& e) {
    const bool singular = e.kind() == Degeneracy::constraint;
    throw RunAborted(std::string(singular ? "kinematic singularity at the initial configuration: "
                                          : "initial KKT solve failed: ") +
                         e.what(),
                     singular ? RunAborted::Kind::singularity : RunAborted::Kind::solver, log);
  }
  if (cfg.initial_perturbation > 0.0) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> u(-cfg.initial_perturbation, cfg.initial_perturbation);
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
      y0(i) += u(rng);
    }
  }

  Vec s = Vec::Zero(L.size());
  s.head(n) = cfg.theta0;
  s.segment(L.y_at(), L.dim) = y0;

  // Writes the feed from an ODE state, joints first.
  const auto publish = [&](const Vec& state) {
    const auto x = state.segment(L.y_at(), n);
    feed->theta = state.head(n);
    if (hybrid) {
      feed->dtheta = state.segment(n, n);
      feed->ddtheta = x;
    } else {
      feed->dtheta = x;
      feed->ddtheta.setZero(n);
    }
  };

  const auto rhs = [&](double t, const Vec& state) {
    publish(state);
    const KktSnapshot kkt = KktSnapshot::sample(aug, t);
    const Vec y = state.segment(L.y_at(), L.dim);
    const Vec integral = state.segment(L.integral_at(), L.dim);
    Vec ds(L.size());
    if (hybrid) {
      ds.head(n) = state.segment(n, n);
      ds.segment(n, n) = y.head(n);
    } else {
      ds.head(n) = y.head(n);
    }
    ds.segment(L.y_at(), L.dim) =
        network_rate(kkt, y, integral, t, cfg.solver, cfg.noise, cfg.solver.variant);
    ds.segment(L.integral_at(), L.dim) = kkt.A * y - kkt.Z;
    return ds;
  };

  const auto record = [&](double t, const Vec& state) {
    const Vec ds = rhs(t, state);  // also publishes the feed
    LogRow row;
    row.t = t;
    row.theta = state.head(n);
    row.y = state.segment(L.y_at(), L.dim);
    if (hybrid) {
      row.dtheta = state.segment(n, n);
      row.ddtheta = row.y.head(n);
    } else {
      row.dtheta = row.y.head(n);
      row.ddtheta = ds.segment(L.y_at(), n);
    }
    row.qp_residual = ds.segment(L.integral_at(), L.dim).norm();
    row.position = forward_kinematics(cfg.chain, row.theta);
    row.eps = row.position - evaluate_path(path, t).position;
    row.rms = row.eps.norm();
    if (hybrid) {
      row.tau = joint_torque(cfg.chain, JointState{row.theta, row.dtheta, row.ddtheta});
    }
    return row;
  };

  const long steps = step_count(cfg.duration, cfg.solver.dt);
  log.rows.reserve(static_cast<std::size_t>(steps / cfg.log_stride + 1));

  const auto abort_solver = [&](const SolverError& e) {
    const bool singular = e.kind() == Degeneracy::constraint ||
                          rank_ratio(jacobian(cfg.chain, feed->theta)) < kRankTolerance;
    throw RunAborted(singular ? std::string("kinematic singularity: ") + e.what() : e.what(),
                     singular ? RunAborted::Kind::singularity : RunAborted::Kind::solver, log);
  };

  try {
    log.rows.push_back(record(0.0, s));
    for (long k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * cfg.solver.dt;
      Vec next = integrate_step(cfg.solver.integrator, rhs, t, s, cfg.solver.dt);
      const double t_next = static_cast<double>(k + 1) * cfg.solver.dt;
      if (!next.allFinite()) {
        std::ostringstream os;
        os << "non-finite state at t=" << t_next << "; last finite state at t=" << t;
        throw RunAborted(os.str(), RunAborted::Kind::divergence, log);
      }
      s = std::move(next);
      const double ratio = rank_ratio(jacobian(cfg.chain, s.head(n)));
      if (ratio < kRankTolerance) {
        std::ostringstream os;
        os << "kinematic singularity at t=" << t_next << " (sigma ratio " << ratio << ")";
        throw RunAborted(os.str(), RunAborted::Kind::singularity, log);
      }
      if ((k + 1) % cfg.log_stride == 0) {
        log.rows.push_back(record(t_next, s));
      }
    }
  } catch (const SolverError& e) {
    abort_solver(e);
  }
  return log;
}

ErrorMetrics compute_error_metrics(const TrajectoryLog& log, const PathSpec& path)
{
  if (log.rows.empty()) {
    throw ConfigError("compute_error_metrics: empty log");
  }
  ErrorMetrics out;
  out.eps_xyz.reserve(log.rows.size());
  out.rms.reserve(log.rows.size());
  for (const auto& row : log.rows) {
    Vec e = row.position - evaluate_path(path, row.t).position;
    const double r = e.norm();
    out.max_rms = std::max(out.max_rms, r);
    out.rms.push_back(r);
    out.eps_xyz.push_back(std::move(e));
  }
  out.joint_drift = (log.rows.back().theta - log.rows.front().theta).norm();
  return out;
}

std::vector<double> oracle_gap(const TrackingConfig& cfg, const TrajectoryLog& log)
{
  const PathSpec path = effective_path(cfg);
  auto feed = std::make_shared<JointState>(JointState::at_rest(cfg.theta0));
  const AugmentedSystem aug = assemble_augmented(build_scheme_qp(cfg, path, feed));
  std::vector<double> gaps;
  gaps.reserve(log.rows.size());
  for (const auto& row : log.rows) {
    feed->theta = row.theta;
    feed->dtheta = row.dtheta;
    feed->ddtheta = row.ddtheta;
    gaps.push_back((row.y - theoretical_solution(aug, row.t).stacked()).norm());
  }
  return gaps;
}

}  // namespace iernn
