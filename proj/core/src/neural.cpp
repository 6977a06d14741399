#include "iernn/neural.hpp"

#include <cmath>
#include <sstream>

namespace iernn {

long step_count(double duration, double dt)
{
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw ConfigError("duration and dt must be positive");
  }
  const double ratio = duration / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "duration " << duration << " s is not a multiple of dt " << dt << " s";
    throw ConfigError(os.str());
  }
  return static_cast<long>(steps);
}

std::vector<std::string> NeuralConfig::validate() const
{
  if (!(nu1 > 0.0) || !std::isfinite(nu1)) {
    throw ConfigError("nu1 must be positive");
  }
  if (variant == Variant::ie_rnn && (!(nu2 > 0.0) || !std::isfinite(nu2))) {
    throw ConfigError("nu2 must be positive");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt must be positive");
  }
  activation.validate();
  std::vector<std::string> warnings;
  if (integrator == IntegratorKind::euler && dt * nu1 >= 2.0) {
    std::ostringstream os;
    os << "explicit Euler with dt*nu1 = " << dt * nu1 << " >= 2 is likely unstable";
    warnings.push_back(os.str());
  }
  return warnings;
}

NeuralState NeuralState::initial(Vec y0, double t0)
{
  NeuralState s;
  s.t = t0;
  s.eps_integral = Vec::Zero(y0.size());
  s.y = std::move(y0);
  return s;
}

KktSnapshot KktSnapshot::sample(const AugmentedSystem& aug, double t)
{
  return {aug.A(t), aug.Z(t), aug.dA(t), aug.dZ(t)};
}

Vec network_rate(const KktSnapshot& kkt, const Vec& y, const Vec& eps_integral, double t,
                 const NeuralConfig& cfg, const NoiseModel& noise, Variant variant)
{
  const Eigen::Index dim = kkt.A.rows();
  require_dim(y.size(), dim, "network state");
  require_dim(eps_integral.size(), dim, "residual integral");

  const Vec eps = kkt.A * y - kkt.Z;
  Vec rhs = -cfg.nu1 * cfg.activation.apply(eps) + kkt.dZ;
  if (variant == Variant::ie_rnn) {
    rhs -= cfg.nu2 * eps_integral;
  }
  rhs -= kkt.dA * y;
  if (noise.kind != NoiseKind::none) {
    rhs += noise.evaluate(t, dim);
  }

  const auto lu = factor_kkt(kkt.A, t, "A(t) singular during network update");
  return lu.solve(rhs);
}

Vec ie_rnn_derivative(const AugmentedSystem& aug, const NeuralState& state,
                      const NeuralConfig& cfg, const NoiseModel& noise)
{
  return network_rate(KktSnapshot::sample(aug, state.t), state.y, state.eps_integral, state.t,
                      cfg, noise, Variant::ie_rnn);
}

Vec z_rnn_derivative(const AugmentedSystem& aug, const NeuralState& state,
                     const NeuralConfig& cfg, const NoiseModel& noise)
{
  return network_rate(KktSnapshot::sample(aug, state.t), state.y, state.eps_integral, state.t,
                      cfg, noise, Variant::z_rnn);
}

std::vector<TrajectorySample> solve_kkt_trajectory(const KktProvider& kkt_at, const Vec& y0,
                                                   const NeuralConfig& cfg,
                                                   const NoiseModel& noise, double t_end,
                                                   long sample_every)
{
  cfg.validate();
  noise.validate();
  if (sample_every < 1) {
    throw ConfigError("sample_every must be at least 1");
  }
  const long steps = step_count(t_end, cfg.dt);
  if (steps % sample_every != 0) {
    throw ConfigError("sample_every must divide the number of steps so the final state is sampled");
  }
  const Eigen::Index dim = y0.size();
  require_dim(kkt_at(0.0).A.rows(), dim, "initial state");

  // s = [Y; integral of eps]
  const auto rhs = [&](double t, const Vec& s) {
    const KktSnapshot kkt = kkt_at(t);
    require_dim(kkt.A.rows(), dim, "KKT matrix");
    const Vec y = s.head(dim);
    const Vec integral = s.tail(dim);
    Vec ds(2 * dim);
    ds.head(dim) = network_rate(kkt, y, integral, t, cfg, noise, cfg.variant);
    ds.tail(dim) = kkt.A * y - kkt.Z;
    return ds;
  };

  const auto record = [&](double t, const Vec& s) {
    const KktSnapshot kkt = kkt_at(t);
    const Vec y = s.head(dim);
    return TrajectorySample{t, y, kkt.A * y - kkt.Z, s.tail(dim)};
  };

  Vec s(2 * dim);
  s.head(dim) = y0;
  s.tail(dim).setZero();

  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(steps / sample_every + 1));
  out.push_back(record(0.0, s));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    Vec next = integrate_step(cfg.integrator, rhs, t, s, cfg.dt);
    if (!next.allFinite()) {
      std::ostringstream os;
      os << "non-finite network state at t=" << static_cast<double>(k + 1) * cfg.dt
         << "; last finite sample at t=" << t;
      throw DivergenceError(os.str(), record(t, s));
    }
    s = std::move(next);
    if ((k + 1) % sample_every == 0) {
      out.push_back(record(static_cast<double>(k + 1) * cfg.dt, s));
    }
  }
  return out;
}

std::vector<TrajectorySample> solve_trajectory(const AugmentedSystem& aug, const Vec& y0,
                                               const NeuralConfig& cfg,
                                               const NoiseModel& noise, double t_end,
                                               long sample_every)
{
  require_dim(y0.size(), aug.dim(), "initial state");
  return solve_kkt_trajectory([&aug](double t) { return KktSnapshot::sample(aug, t); }, y0, cfg,
                              noise, t_end, sample_every);
}

}  // namespace iernn
