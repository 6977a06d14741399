#pragma once

#include "iernn/chain.hpp"
#include "iernn/neural.hpp"
#include "iernn/paths.hpp"
#include "iernn/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace iernn {

struct SchemeGains
{
  // repetitive motion
  double kappa = 4.0;
  double feedback_gain = 10.0;
  // hybrid torque
  double mu = 0.5;
  double alpha = 10.0;
  double beta = 10.0;
  double xi1 = 4.0;
  double xi2 = 4.0;
};

PathSpec default_path();

struct TrackingConfig
{
  Scheme scheme = Scheme::repetitive_motion;
  NeuralConfig solver;
  NoiseModel noise;
  SerialChain chain = presets::planar_three_link();
  PathSpec path = default_path();
  /// Shift the path so that it starts at the initial end-effector position.
  bool anchor_path = true;
  SchemeGains gains;
  Vec theta0;
  double duration = 8.0;  // s
  long log_stride = 100;  // steps
  std::uint64_t rng_seed = 1;
  /// Half-width of a uniform, seeded perturbation added to the exact initial
  /// network state Y*(0). Zero for tracking runs.
  double initial_perturbation = 0.0;

  void validate() const;
};

/// Path actually tracked (anchored when cfg.anchor_path is set).
PathSpec effective_path(const TrackingConfig& cfg);

struct LogRow
{
  double t = 0.0;
  Vec theta;
  Vec dtheta;
  Vec ddtheta;
  Vec y;
  double qp_residual = 0.0;
  Vec position;
  Vec eps;  // F(theta) - R(t)
  double rms = 0.0;
  Vec tau;  // hybrid torque only
};

struct TrajectoryLog
{
  int n = 0;
  int m = 0;
  bool has_tau = false;
  std::vector<LogRow> rows;
};

/// Throws on bad runs and carries whatever was logged before the failure.
class RunAborted : public std::runtime_error
{
public:
  enum class Kind { divergence, singularity, solver };

  RunAborted(const std::string& what, Kind kind, TrajectoryLog partial)
  : std::runtime_error(what), kind_(kind), partial_(std::move(partial))
  {}
  Kind kind() const noexcept { return kind_; }
  const TrajectoryLog& partial() const noexcept { return partial_; }

private:
  Kind kind_;
  TrajectoryLog partial_;
};

/// Closed-loop simulation. Joint angles (and rates, for hybrid torque) are
/// integrated together with the network state in one fixed-step ODE; the
/// state feed is rewritten before every stage evaluation, joints first.
TrajectoryLog run_tracking(const TrackingConfig& cfg);

struct ErrorMetrics
{
  std::vector<Vec> eps_xyz;
  std::vector<double> rms;
  double max_rms = 0.0;
  double joint_drift = 0.0;  // |theta(T) - theta(0)|
};

/// Position errors against the reference path, recomputed from the logged
/// positions; drift uses the first and last logged rows.
ErrorMetrics compute_error_metrics(const TrajectoryLog& log, const PathSpec& path);

/// |Y(t) - Y*(t)| per row, with Y* from theoretical_solution at the logged joint state.
std::vector<double> oracle_gap(const TrackingConfig& cfg, const TrajectoryLog& log);

/// Column names in CSV order.
std::vector<std::string> csv_header(const TrajectoryLog& log);
void write_log_csv(const TrajectoryLog& log, std::ostream& os);
/// Inverse of write_log_csv; n and m are recovered from the header.
TrajectoryLog read_log_csv(std::istream& is);

}  // namespace iernn
