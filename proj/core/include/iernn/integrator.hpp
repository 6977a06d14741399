#pragma once

#include "iernn/common.hpp"

namespace iernn {

enum class IntegratorKind { euler, rk4 };

/// One fixed step of s' = f(t, s). Stage evaluations happen in a fixed order,
/// so identical inputs give bit-identical outputs on one platform.
template <typename Rhs>
Vec integrate_step(IntegratorKind kind, const Rhs& f, double t, const Vec& s, double dt)
{
  if (kind == IntegratorKind::euler) {
    return s + dt * f(t, s);
  }
  const Vec k1 = f(t, s);
  const Vec k2 = f(t + 0.5 * dt, s + (0.5 * dt) * k1);
  const Vec k3 = f(t + 0.5 * dt, s + (0.5 * dt) * k2);
  const Vec k4 = f(t + dt, s + dt * k3);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Number of fixed steps covering duration; throws ConfigError unless
/// duration is an integer multiple of dt (to 1e-9 relative).
long step_count(double duration, double dt);

}  // namespace iernn
