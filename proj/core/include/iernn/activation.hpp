#pragma once

#include "iernn/common.hpp"

namespace iernn {

enum class ActivationKind { power_sigmoid, linear };

struct ActivationSpec
{
  ActivationKind kind = ActivationKind::power_sigmoid;
  int n_exponent = 3;

  /// Throws ConfigError unless n_exponent is odd and positive.
  void validate() const;

  double operator()(double u) const;
  /// Elementwise application (the activation array).
  Vec apply(const Vec& e) const;
};

/// Scaled sigmoid on |u| <= 1, u^n outside. n must be odd.
double power_sigmoid(double u, int n);

}  // namespace iernn
