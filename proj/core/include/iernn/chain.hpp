#pragma once

#include "iernn/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iernn {

/// Standard Denavit-Hartenberg row for a revolute joint:
/// Rz(theta + theta_offset) * Tz(d) * Tx(a) * Rx(alpha).
struct DhRow
{
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
};

/// Rigid-body parameters for planar chains. Link i has its centre of mass
/// com_offsets[i] metres along the link from its proximal joint and rotational
/// inertia inertias[i] about that point. Gravity acts along -y of the base.
struct PlanarDynamicsParams
{
  std::vector<double> masses;       // kg
  std::vector<double> com_offsets;  // m
  std::vector<double> inertias;     // kg m^2
  double gravity = 9.81;            // m/s^2
};

class SerialChain
{
public:
  SerialChain(std::string name, std::vector<DhRow> rows, int task_dim,
              std::optional<PlanarDynamicsParams> dynamics = std::nullopt);

  const std::string& name() const { return name_; }
  int n_joints() const { return static_cast<int>(rows_.size()); }
  int task_dim() const { return task_dim_; }
  const std::vector<DhRow>& rows() const { return rows_; }
  const std::optional<PlanarDynamicsParams>& dynamics() const { return dynamics_; }

  /// All rows have alpha = 0 and d = 0.
  bool is_planar() const;

private:
  std::string name_;
  std::vector<DhRow> rows_;
  int task_dim_;
  std::optional<PlanarDynamicsParams> dynamics_;
};

struct JointState
{
  Vec theta;
  Vec dtheta;
  Vec ddtheta;

  static JointState at_rest(Vec theta);
};

struct DynamicsTerms
{
  Mat inertia;
  Vec coriolis_centrifugal;
  Vec gravity_vec;
};

/// End-effector position, first task_dim components.
Vec forward_kinematics(const SerialChain& chain, const Vec& theta);

/// Analytic position Jacobian (task_dim x n).
Mat jacobian(const SerialChain& chain, const Vec& theta);

/// dJ/dt along the joint velocity state.dtheta.
Mat jacobian_time_derivative(const SerialChain& chain, const JointState& state);

/// Inertia, combined Coriolis/centrifugal vector and gravity vector for planar
/// chains with dynamic parameters. Throws DynamicsUnavailable otherwise.
DynamicsTerms dynamics_terms(const SerialChain& chain, const JointState& state);

/// Gravitational potential energy (J) of a planar chain with dynamics.
double potential_energy(const SerialChain& chain, const Vec& theta);

/// I(theta) * ddtheta + C(theta, dtheta) + G(theta).
Vec joint_torque(const SerialChain& chain, const JointState& state);

namespace presets {

/// Planar arm of uniform rods: com at mid-link,
/// inertia m l^2 / 12 about the com.
SerialChain planar(std::string name, const std::vector<double>& lengths,
                   const std::vector<double>& masses);
SerialChain planar_two_link();
SerialChain planar_three_link();
/// Generic 6R spatial arm with JACO2-like proportions (no dynamics).
SerialChain spatial_6r();

/// Looks up a built-in chain by name: planar2, planar3, spatial6r.
std::optional<SerialChain> by_name(const std::string& name);

}  // namespace presets

/// Parses the plain-text chain format:
///
///   # comment
///   name <id>
///   task_dim <2|3>
///   <a> <alpha> <d> <theta_offset>        one line per joint
///   dynamics
///   gravity <g>
///   <mass> <com_offset> [<inertia>]       one line per link
///
/// Missing inertias default to mass * a^2 / 12.
SerialChain parse_chain(const std::string& text);
SerialChain load_chain_file(const std::string& path);
std::string format_chain(const SerialChain& chain);

}  // namespace iernn
