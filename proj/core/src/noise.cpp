#include "iernn/noise.hpp"

#include <cmath>
#include <numbers>

namespace iernn {

NoiseModel NoiseModel::constant(Vec delta)
{
  NoiseModel nm;
  nm.kind = NoiseKind::constant;
  nm.base = std::move(delta);
  return nm;
}

NoiseModel NoiseModel::ramp(Vec slope)
{
  NoiseModel nm;
  nm.kind = NoiseKind::ramp;
  nm.base = std::move(slope);
  return nm;
}

NoiseModel NoiseModel::sinusoid(Vec amplitudes, Vec frequencies, Vec phases)
{
  NoiseModel nm;
  nm.kind = NoiseKind::sinusoid_vector;
  nm.base = std::move(amplitudes);
  nm.frequencies = std::move(frequencies);
  nm.phases = std::move(phases);
  nm.validate();
  return nm;
}

NoiseModel NoiseModel::paper_sinusoid(double period, bool literal_seventh)
{
  if (!(period > 0.0)) {
    throw ConfigError("paper_sinusoid: period must be positive");
  }
  using std::numbers::pi;
  const double w = 1.0 / (pi * period);
  const double half = pi / 2.0;  // cos(x) = sin(x + pi/2)
  Vec amp(9), freq(9), phase(9);
  amp << 3.0, 6.0, -7.5, 1.5, -1.5, 4.5, -1.5, -1.5, 1.5;
  freq << w, 2 * w, 3 * w, 3 * w, 3 * w, w, w, 2 * w, w;
  phase << 0.0, half, 0.0, half, 0.0, half, 0.0, 0.0, half;
  if (literal_seventh) {
    freq(6) = pi * period;
  }
  return sinusoid(std::move(amp), std::move(freq), std::move(phase));
}

void NoiseModel::validate() const
{
  if (kind == NoiseKind::none) {
    return;
  }
  if (base.size() == 0) {
    throw ConfigError("noise model needs at least one component");
  }
  if (!base.allFinite()) {
    throw ConfigError("noise components must be finite");
  }
  if (kind == NoiseKind::sinusoid_vector &&
      (frequencies.size() != base.size() || phases.size() != base.size())) {
    throw ConfigError("sinusoid noise: amplitudes, frequencies and phases must have equal length");
  }
}

Vec NoiseModel::evaluate(double t, Eigen::Index dim) const
{
  Vec out = Vec::Zero(dim);
  if (kind == NoiseKind::none) {
    return out;
  }
  const Eigen::Index k = base.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index j = i % k;
    switch (kind) {
      case NoiseKind::constant: out(i) = base(j); break;
      case NoiseKind::ramp: out(i) = t * base(j); break;
      case NoiseKind::sinusoid_vector:
        out(i) = base(j) * std::sin(frequencies(j) * t + phases(j));
        break;
      case NoiseKind::none: break;
    }
  }
  return out;
}

}  // namespace iernn
