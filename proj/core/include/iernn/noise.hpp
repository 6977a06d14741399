#pragma once

#include "iernn/common.hpp"

namespace iernn {

enum class NoiseKind { none, constant, ramp, sinusoid_vector };

/// Additive disturbance on the right-hand side of the network dynamics.
///
///   none             0
///   constant         base
///   ramp             t * base
///   sinusoid_vector  base_i * sin(frequencies_i * t + phases_i)
///
/// When the model has fewer components than the system it is applied to,
/// components repeat cyclically (component i uses index i mod size()).
struct NoiseModel
{
  NoiseKind kind = NoiseKind::none;
  Vec base;
  Vec frequencies;
  Vec phases;

  static NoiseModel none() { return {}; }
  static NoiseModel constant(Vec delta);
  static NoiseModel ramp(Vec slope);
  static NoiseModel sinusoid(Vec amplitudes, Vec frequencies, Vec phases);

  /// Nine-component sinusoidal disturbance used for the tracking comparisons.
  /// Arguments are t / (pi * period). With literal_seventh the seventh
  /// component takes t * pi * period instead.
  static NoiseModel paper_sinusoid(double period, bool literal_seventh = false);

  void validate() const;
  Vec evaluate(double t, Eigen::Index dim) const;
};

}  // namespace iernn
