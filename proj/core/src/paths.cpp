#include "iernn/paths.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace iernn {

using std::numbers::pi;

namespace {

double butterfly_raw(double a) { return std::exp(std::sin(a)) - 2.0 * std::cos(4.0 * a); }

// max |exp(sin a) - 2 cos 4a| over one period: dense scan then golden-section refinement.
double butterfly_peak()
{
  static const double peak = [] {
    constexpr int kGrid = 20000;
    int best = 0;
    double best_val = 0.0;
    for (int i = 0; i < kGrid; ++i) {
      const double v = std::abs(butterfly_raw(2.0 * pi * i / kGrid));
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    double lo = 2.0 * pi * (best - 1) / kGrid;
    double hi = 2.0 * pi * (best + 1) / kGrid;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
      const double a = hi - g * (hi - lo);
      const double b = lo + g * (hi - lo);
      if (std::abs(butterfly_raw(a)) > std::abs(butterfly_raw(b))) {
        hi = b;
      } else {
        lo = a;
      }
    }
    return std::abs(butterfly_raw(0.5 * (lo + hi)));
  }();
  return peak;
}

// Angle, rate and acceleration of the timing law.
Eigen::Vector3d angle_law(Timing timing, double t, double T)
{
  const double w = 2.0 * pi / T;
  if (timing == Timing::uniform) {
    return {w * t, w, 0.0};
  }
  const double s = std::sin(w * t), c = std::cos(w * t);
  return {w * t - s, w * (1.0 - c), w * w * s};
}

}  // namespace

PathSpec::PathSpec(PathParams params) : p_(std::move(params))
{
  if (!(p_.period > 0.0) || !std::isfinite(p_.period)) {
    throw ConfigError("path period must be positive");
  }
  if (!(p_.scale > 0.0) || !std::isfinite(p_.scale)) {
    throw ConfigError("path scale must be positive");
  }
  const auto m = p_.center.size();
  if (m != 2 && m != 3) {
    throw ConfigError("path center must have 2 or 3 components");
  }
  if (p_.e1.size() == 0 && p_.e2.size() == 0) {
    p_.e1 = Vec::Unit(m, 0);
    p_.e2 = Vec::Unit(m, 1);
  }
  if (p_.e1.size() != m || p_.e2.size() != m) {
    throw ConfigError("path plane basis must match the center dimension");
  }
  if (std::abs(p_.e1.norm() - 1.0) > 1e-12 || std::abs(p_.e2.norm() - 1.0) > 1e-12 ||
      std::abs(p_.e1.dot(p_.e2)) > 1e-12) {
    throw ConfigError("path plane basis must be orthonormal");
  }
  if (p_.kind == PathKind::starfish && !(p_.starfish_r0 > std::abs(p_.starfish_r1))) {
    throw ConfigError("starfish needs r0 > |r1|");
  }
}

PathSpec PathSpec::anchored_at(const Vec& start) const
{
  require_dim(start.size(), dim(), "path anchor");
  PathParams q = p_;
  q.center = start - p_.scale * radius(0.0)(0) * p_.e1;
  return PathSpec(std::move(q));
}

Eigen::Vector3d PathSpec::radius(double a) const
{
  switch (p_.kind) {
    case PathKind::circle: return {1.0, 0.0, 0.0};
    case PathKind::starfish: {
      const double r0 = p_.starfish_r0, r1 = p_.starfish_r1;
      return {r0 + r1 * std::cos(5 * a), -5 * r1 * std::sin(5 * a), -25 * r1 * std::cos(5 * a)};
    }
    case PathKind::butterfly: {
      const double k = 1.0 / butterfly_peak();
      const double e = std::exp(std::sin(a));
      const double ca = std::cos(a), sa = std::sin(a);
      const double r = e - 2 * std::cos(4 * a);
      const double dr = ca * e + 8 * std::sin(4 * a);
      const double ddr = (ca * ca - sa) * e + 32 * std::cos(4 * a);
      return {k * r, k * dr, k * ddr};
    }
  }
  return {0.0, 0.0, 0.0};
}

PathSample evaluate_path(const PathSpec& spec, double t)
{
  const auto& p = spec.params();
  const Eigen::Vector3d law = angle_law(p.timing, t, p.period);
  const double a = law(0), da = law(1), dda = law(2);
  const Eigen::Vector3d rho = spec.radius(a);
  const double ca = std::cos(a), sa = std::sin(a);

  // Curve in the plane as a function of the angle, then chain rule through a(t).
  const Vec u = ca * p.e1 + sa * p.e2;      // radial direction
  const Vec du = -sa * p.e1 + ca * p.e2;    // d u / d a
  const Vec c = rho(0) * u;                 // d^0
  const Vec dc = rho(1) * u + rho(0) * du;  // d / d a
  const Vec ddc = (rho(2) - rho(0)) * u + 2 * rho(1) * du;

  PathSample s;
  s.position = p.center + p.scale * c;
  s.velocity = p.scale * da * dc;
  s.acceleration = p.scale * (dda * dc + da * da * ddc);
  return s;
}

PathSample sample_path(const PathSpec& spec, double t)
{
  if (!(t >= 0.0 && t <= spec.period())) {
    throw RangeError("path sampled at t=" + std::to_string(t) + " outside [0, " +
                     std::to_string(spec.period()) + "]");
  }
  return evaluate_path(spec, t);
}

PathReport path_consistency_check(const PathSpec& spec, int grid_points)
{
  PathReport r;
  const double T = spec.period();
  const double h = 1e-5 * T;
  const auto& p = spec.params();
  Vec normal;
  if (spec.dim() == 3) {
    normal = p.e1.head<3>().cross(p.e2.head<3>());
  }
  for (int i = 0; i <= grid_points; ++i) {
    const double t = T * i / grid_points;
    const PathSample s = evaluate_path(spec, t);
    const PathSample plus = evaluate_path(spec, t + h);
    const PathSample minus = evaluate_path(spec, t - h);
    const Vec dp = (plus.position - minus.position) / (2 * h);
    const Vec dv = (plus.velocity - minus.velocity) / (2 * h);
    r.velocity_fd_error = std::max(r.velocity_fd_error, (s.velocity - dp).cwiseAbs().maxCoeff());
    r.acceleration_fd_error =
        std::max(r.acceleration_fd_error, (s.acceleration - dv).cwiseAbs().maxCoeff());
    if (spec.dim() == 3) {
      r.plane_residual = std::max(r.plane_residual, std::abs((s.position - p.center).dot(normal)));
    }
  }
  const PathSample s0 = sample_path(spec, 0.0);
  const PathSample sT = sample_path(spec, T);
  r.closure_error = (s0.position - sT.position).norm();
  r.velocity_closure_error = (s0.velocity - sT.velocity).norm();

  r.velocity_ok = r.velocity_fd_error <= 1e-6;
  r.acceleration_ok = r.acceleration_fd_error <= 1e-4;
  r.closure_ok = r.closure_error <= 1e-12 &&
                 (p.timing != Timing::smoothstart ||
                  (s0.velocity.norm() == 0.0 && sT.velocity.norm() <= 1e-12));
  r.plane_ok = r.plane_residual <= 1e-14 * std::max(1.0, p.center.norm() + p.scale);
  return r;
}

void write_path_csv(const PathSpec& spec, int samples, std::ostream& os)
{
  static const char* axes[] = {"x", "y", "z"};
  os << "t";
  for (int i = 0; i < spec.dim(); ++i) {
    os << "," << axes[i];
  }
  os << "\n" << std::setprecision(17);
  for (int k = 0; k < samples; ++k) {
    const double t = samples > 1 ? spec.period() * k / (samples - 1) : 0.0;
    const Vec pos = sample_path(spec, t).position;
    os << t;
    for (int i = 0; i < spec.dim(); ++i) {
      os << "," << pos(i);
    }
    os << "\n";
  }
}

PathKind parse_path_kind(const std::string& s)
{
  if (s == "circle") return PathKind::circle;
  if (s == "starfish") return PathKind::starfish;
  if (s == "butterfly") return PathKind::butterfly;
  throw ConfigError("unknown path kind '" + s + "' (circle | starfish | butterfly)");
}

Timing parse_timing(const std::string& s)
{
  if (s == "uniform") return Timing::uniform;
  if (s == "smoothstart") return Timing::smoothstart;
  throw ConfigError("unknown timing law '" + s + "' (uniform | smoothstart)");
}

}  // namespace iernn
