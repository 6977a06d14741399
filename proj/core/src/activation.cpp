#include "iernn/activation.hpp"

#include <cmath>

namespace iernn {

namespace {

void check_exponent(int n)
{
  if (n < 1 || n % 2 == 0) {
    throw ConfigError("power-sigmoid exponent must be an odd positive integer, got " +
                      std::to_string(n));
  }
}

}  // namespace

double power_sigmoid(double u, int n)
{
  check_exponent(n);
  if (std::abs(u) > 1.0) {
    return std::pow(u, n);
  }
  const double en = std::exp(-static_cast<double>(n));
  const double enu = std::exp(-n * u);
  return (1.0 + en) / (1.0 - en) * ((1.0 - enu) / (1.0 + enu));
}

void ActivationSpec::validate() const
{
  if (kind == ActivationKind::power_sigmoid) {
    check_exponent(n_exponent);
  }
}

double ActivationSpec::operator()(double u) const
{
  return kind == ActivationKind::linear ? u : power_sigmoid(u, n_exponent);
}

Vec ActivationSpec::apply(const Vec& e) const
{
  if (kind == ActivationKind::linear) {
    return e;
  }
  check_exponent(n_exponent);
  return e.unaryExpr([n = n_exponent](double u) { return power_sigmoid(u, n); });
}

}  // namespace iernn
