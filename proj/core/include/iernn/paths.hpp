#pragma once

#include "iernn/common.hpp"

#include <iosfwd>
#include <string>

namespace iernn {

enum class PathKind { circle, starfish, butterfly };
enum class Timing { uniform, smoothstart };

struct PathParams
{
  PathKind kind = PathKind::circle;
  Vec center;           // m
  double scale = 0.1;   // m
  double period = 8.0;  // s
  Vec e1;               // drawing-plane basis, unit length
  Vec e2;
  Timing timing = Timing::smoothstart;
  double starfish_r0 = 1.0;
  double starfish_r1 = 0.2;
};

/// Closed planar curve position = center + scale * rho(a) * (cos a e1 + sin a e2)
/// traversed once over [0, period], with a(t) given by the timing law:
///
///   uniform      a = 2 pi t / T
///   smoothstart  a = 2 pi (t / T - sin(2 pi t / T) / (2 pi))   (zero rate at both ends)
///
///   circle    rho = 1
///   starfish  rho = r0 + r1 cos(5 a)
///   butterfly rho = (exp(sin a) - 2 cos(4 a)) / max |.|
class PathSpec
{
public:
  /// Validates and throws ConfigError on period <= 0, scale <= 0, or a
  /// non-orthonormal basis. An empty basis defaults to the first two axes.
  explicit PathSpec(PathParams params);

  const PathParams& params() const { return p_; }
  int dim() const { return static_cast<int>(p_.center.size()); }
  double period() const { return p_.period; }

  /// Same curve shifted so that position(0) == start.
  PathSpec anchored_at(const Vec& start) const;

  /// rho and its first two derivatives with respect to the angle.
  Eigen::Vector3d radius(double angle) const;

private:
  PathParams p_;
};

struct PathSample
{
  Vec position;
  Vec velocity;
  Vec acceleration;
};

/// Throws RangeError when t is outside [0, T].
PathSample sample_path(const PathSpec& spec, double t);

/// Same formulas without the domain check; the timing law extends smoothly
/// past both ends. Used for finite differences at the boundaries.
PathSample evaluate_path(const PathSpec& spec, double t);

struct PathReport
{
  double velocity_fd_error = 0.0;      // max |v - d/dt p| on the grid
  double acceleration_fd_error = 0.0;  // max |a - d/dt v| on the grid
  double closure_error = 0.0;          // |p(0) - p(T)|
  double velocity_closure_error = 0.0; // |v(0) - v(T)|
  double plane_residual = 0.0;         // max out-of-plane component
  bool velocity_ok = false;
  bool acceleration_ok = false;
  bool closure_ok = false;
  bool plane_ok = false;

  bool passed() const { return velocity_ok && acceleration_ok && closure_ok && plane_ok; }
};

PathReport path_consistency_check(const PathSpec& spec, int grid_points = 1000);

/// Writes "t,x,y[,z]" rows (header included) at `samples` evenly spaced times.
void write_path_csv(const PathSpec& spec, int samples, std::ostream& os);

PathKind parse_path_kind(const std::string& s);
Timing parse_timing(const std::string& s);

}  // namespace iernn
