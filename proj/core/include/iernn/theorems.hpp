#pragma once

#include "iernn/neural.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace iernn {

/// Characteristic roots of s^2 + nu1 s + nu2: distinct real, repeated, complex pair.
enum class RootCase { distinct = 1, repeated = 2, complex = 3 };

RootCase classify_roots(double nu1, double nu2);

/// Noise-free scalar IE-RNN residual with linear activation and zero initial
/// integral, written in the three characteristic-root forms.
double closed_form_residual(double nu1, double nu2, double eps0, double t);

struct NoiseCase
{
  NoiseKind kind = NoiseKind::constant;  // constant or ramp
  Variant variant = Variant::ie_rnn;
  double amplitude = 5.0;  // constant value or ramp slope
  double nu1 = 500.0;
  double nu2 = 2500.0;
  double horizon = 8.0;       // s
  double window_start = 6.0;  // residual averaged over [window_start, horizon]
};

struct VerifyPlan
{
  std::vector<std::pair<double, double>> gains{{3.0, 2.0}, {2.0, 1.0}, {2.0, 4.0}};
  std::vector<NoiseCase> noise_cases = default_noise_cases();
  double dt = 1e-4;
  double closed_form_horizon = 2.0;  // s
  double closed_form_tolerance = 1e-5;
  double floor_tolerance = 0.05;

  static std::vector<NoiseCase> default_noise_cases();
  void validate() const;
};

struct CaseResult
{
  std::string label;
  std::string check;    // what is compared
  double expected = 0.0;
  double measured = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyReport
{
  std::vector<CaseResult> cases;
  bool all_passed() const;
};

/// Scalar, linear-activation runs (A = 1, Z = 0): closed-form comparison for
/// every gain pair, then steady residuals under constant and ramp noise.
VerifyReport verify_theorems(const VerifyPlan& plan = {});

void write_report_text(const VerifyReport& report, std::ostream& os);
void write_report_json(const VerifyReport& report, std::ostream& os);

}  // namespace iernn
