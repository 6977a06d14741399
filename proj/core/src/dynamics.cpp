#include "iernn/chain.hpp"

#include <cmath>

namespace iernn {

namespace {

const PlanarDynamicsParams& require_dynamics(const SerialChain& chain)
{
  if (!chain.dynamics()) {
    throw DynamicsUnavailable("dynamics unavailable for chain '" + chain.name() +
                              "': no dynamic parameters (planar chains only)");
  }
  return *chain.dynamics();
}

// Absolute link angles phi_k = sum_{j<=k} (theta_j + offset_j).
Vec link_angles(const SerialChain& chain, const Vec& theta)
{
  const int n = chain.n_joints();
  require_dim(theta.size(), n, "joint vector");
  Vec phi(n);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += theta(k) + chain.rows()[k].theta_offset;
    phi(k) = acc;
  }
  return phi;
}

// Centre-of-mass position of link i (x, y).
Eigen::Vector2d com_position(const SerialChain& chain, const Vec& phi, int i)
{
  const auto& dyn = *chain.dynamics();
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  for (int k = 0; k < i; ++k) {
    const double a = chain.rows()[k].a;
    p += a * Eigen::Vector2d(std::cos(phi(k)), std::sin(phi(k)));
  }
  p += dyn.com_offsets[i] * Eigen::Vector2d(std::cos(phi(i)), std::sin(phi(i)));
  return p;
}

// 2 x n Jacobian of the com of link i.
Mat com_jacobian(const SerialChain& chain, const Vec& phi, int i)
{
  const auto& dyn = *chain.dynamics();
  const int n = chain.n_joints();
  // Per-link contribution of d p / d phi_k.
  Mat dp(2, n);
  dp.setZero();
  for (int k = 0; k <= i; ++k) {
    const double r = (k < i) ? chain.rows()[k].a : dyn.com_offsets[i];
    dp(0, k) = -r * std::sin(phi(k));
    dp(1, k) = r * std::cos(phi(k));
  }
  // phi_k depends on theta_j for j <= k.
  Mat J(2, n);
  J.setZero();
  for (int j = 0; j <= i; ++j) {
    for (int k = j; k <= i; ++k) {
      J.col(j) += dp.col(k);
    }
  }
  return J;
}

}  // namespace

DynamicsTerms dynamics_terms(const SerialChain& chain, const JointState& state)
{
  const auto& dyn = require_dynamics(chain);
  const int n = chain.n_joints();
  require_dim(state.dtheta.size(), n, "joint velocity");
  const Vec phi = link_angles(chain, state.theta);

  // Absolute link rates.
  Vec dphi(n);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += state.dtheta(k);
    dphi(k) = acc;
  }

  DynamicsTerms out;
  out.inertia = Mat::Zero(n, n);
  out.coriolis_centrifugal = Vec::Zero(n);
  out.gravity_vec = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    const Mat Jc = com_jacobian(chain, phi, i);
    const double mi = dyn.masses[i];
    out.inertia += mi * Jc.transpose() * Jc;
    // Rotational part: link i spins at sum_{j<=i} dtheta_j.
    out.inertia.topLeftCorner(i + 1, i + 1).array() += dyn.inertias[i];

    // dJc/dt * dtheta: centripetal acceleration of the com.
    Eigen::Vector2d centripetal = Eigen::Vector2d::Zero();
    for (int k = 0; k <= i; ++k) {
      const double r = (k < i) ? chain.rows()[k].a : dyn.com_offsets[i];
      centripetal -= r * dphi(k) * dphi(k) * Eigen::Vector2d(std::cos(phi(k)), std::sin(phi(k)));
    }
    out.coriolis_centrifugal += mi * Jc.transpose() * centripetal;
    out.gravity_vec += mi * dyn.gravity * Jc.row(1).transpose();
  }
  return out;
}

double potential_energy(const SerialChain& chain, const Vec& theta)
{
  const auto& dyn = require_dynamics(chain);
  const Vec phi = link_angles(chain, theta);
  double u = 0.0;
  for (int i = 0; i < chain.n_joints(); ++i) {
    u += dyn.masses[i] * dyn.gravity * com_position(chain, phi, i).y();
  }
  return u;
}

Vec joint_torque(const SerialChain& chain, const JointState& state)
{
  const DynamicsTerms d = dynamics_terms(chain, state);
  require_dim(state.ddtheta.size(), chain.n_joints(), "joint acceleration");
  return d.inertia * state.ddtheta + d.coriolis_centrifugal + d.gravity_vec;
}

}  // namespace iernn
