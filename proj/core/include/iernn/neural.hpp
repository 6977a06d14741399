#pragma once

#include "iernn/activation.hpp"
#include "iernn/integrator.hpp"
#include "iernn/noise.hpp"
#include "iernn/qp.hpp"

#include <string>
#include <vector>

namespace iernn {

enum class Variant { ie_rnn, z_rnn };

struct NeuralConfig
{
  double nu1 = 500.0;   // 1/s
  double nu2 = 2500.0;  // 1/s^2, unused by z_rnn
  ActivationSpec activation;
  double dt = 1e-4;     // s
  IntegratorKind integrator = IntegratorKind::rk4;
  Variant variant = Variant::ie_rnn;

  /// Throws ConfigError on invalid gains/step/activation. Returns non-fatal
  /// warnings, currently the explicit-Euler guard dt * nu1 < 2.
  std::vector<std::string> validate() const;
};

/// Network state: Y = [x; lambda] and the running integral of the residual.
struct NeuralState
{
  double t = 0.0;
  Vec y;
  Vec eps_integral;

  static NeuralState initial(Vec y0, double t0 = 0.0);
};

/// A(t), Z(t) and their time derivatives sampled at one instant.
struct KktSnapshot
{
  Mat A;
  Vec Z;
  Mat dA;
  Vec dZ;

  static KktSnapshot sample(const AugmentedSystem& aug, double t);
};

/// Solves A Ydot = -nu1 Phi(A Y - Z) + dZ [- nu2 * integral] - dA Y + noise(t).
/// The bracketed term is present for Variant::ie_rnn only.
Vec network_rate(const KktSnapshot& kkt, const Vec& y, const Vec& eps_integral, double t,
                 const NeuralConfig& cfg, const NoiseModel& noise, Variant variant);

Vec ie_rnn_derivative(const AugmentedSystem& aug, const NeuralState& state,
                      const NeuralConfig& cfg, const NoiseModel& noise);
Vec z_rnn_derivative(const AugmentedSystem& aug, const NeuralState& state,
                     const NeuralConfig& cfg, const NoiseModel& noise);

struct TrajectorySample
{
  double t;
  Vec y;
  Vec eps;
  Vec eps_integral;
};

/// Thrown when the integrated state stops being finite.
class DivergenceError : public std::runtime_error
{
public:
  DivergenceError(const std::string& what, TrajectorySample last_finite)
  : std::runtime_error(what), last_(std::move(last_finite))
  {}
  const TrajectorySample& last_finite() const noexcept { return last_; }

private:
  TrajectorySample last_;
};

using KktProvider = std::function<KktSnapshot(double)>;

/// Fixed-step integration of the coupled system (Y, integral of eps) using
/// cfg.variant; the integral advances inside the same stages as Y.
/// Samples are recorded at step 0 and every sample_every steps.
std::vector<TrajectorySample> solve_kkt_trajectory(const KktProvider& kkt, const Vec& y0,
                                                   const NeuralConfig& cfg,
                                                   const NoiseModel& noise, double t_end,
                                                   long sample_every);

/// solve_kkt_trajectory over an assembled QP.
std::vector<TrajectorySample> solve_trajectory(const AugmentedSystem& aug, const Vec& y0,
                                               const NeuralConfig& cfg,
                                               const NoiseModel& noise, double t_end,
                                               long sample_every);

}  // namespace iernn
