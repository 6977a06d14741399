#pragma once

#include "iernn/common.hpp"

#include <functional>

namespace iernn {

using MatSampler = std::function<Mat(double)>;
using VecSampler = std::function<Vec(double)>;

/// Equality-constrained QP with time-varying coefficients:
///
///   minimize   1/2 x' Q(t) x + P(t)' x
///   subject to J(t) x = B(t)
///
/// Derivative samplers may be left empty; complete() fills them with
/// five-point central differences.
struct TimeVaryingQP
{
  int n = 0;
  int m = 0;

  MatSampler sample_Q;
  VecSampler sample_P;
  MatSampler sample_J;
  VecSampler sample_B;

  MatSampler sample_dQ;
  VecSampler sample_dP;
  MatSampler sample_dJ;
  VecSampler sample_dB;
};

/// Step used for finite-difference derivative samplers (seconds).
inline constexpr double kDerivativeStep = 1e-4;

/// J is constraint-degenerate when sigma_min < kRankTolerance * sigma_max.
inline constexpr double kRankTolerance = 1e-8;

/// A(t) is rejected when its estimated condition number exceeds this cap.
inline constexpr double kConditionCap = 1e14;

/// (-f(t+2h) + 8 f(t+h) - 8 f(t-h) + f(t-2h)) / 12h, truncation error O(h^4).
template <typename F>
auto five_point_derivative(const F& f, double t, double h = kDerivativeStep)
{
  using R = std::decay_t<decltype(f(t))>;
  R d = (f(t - 2 * h) - f(t + 2 * h) + 8.0 * (f(t + h) - f(t - h))) / (12.0 * h);
  return d;
}

/// Returns a copy of qp with any missing derivative sampler replaced by a
/// five-point central difference of the corresponding coefficient sampler.
TimeVaryingQP complete(TimeVaryingQP qp);

/// Checks sampler output shapes at time t; throws DimensionError naming the sampler.
void check_dimensions(const TimeVaryingQP& qp, double t = 0.0);

/// Block system A(t) Y = Z(t) with A = [Q J'; J 0] and Z = [-P; B].
struct AugmentedSystem
{
  int n = 0;
  int m = 0;
  TimeVaryingQP qp;

  int dim() const { return n + m; }

  Mat A(double t) const;
  Vec Z(double t) const;
  Mat dA(double t) const;
  Vec dZ(double t) const;
};

struct SolutionVector
{
  Vec x;
  Vec lambda;

  Vec stacked() const;
  static SolutionVector split(const Vec& y, int n);
};

AugmentedSystem assemble_augmented(TimeVaryingQP qp);

/// Places [Q J'; J 0] into a preallocated (n+m) square matrix.
void fill_kkt_matrix(const Mat& Q, const Mat& J, Mat& A);

/// Full-pivoting LU of a KKT matrix. Throws SolverError (Degeneracy::objective)
/// when A is rank deficient or its condition estimate exceeds kConditionCap;
/// `what` leads the error message.
Eigen::FullPivLU<Mat> factor_kkt(const Mat& A, double t, const char* what);

/// Direct KKT solve at one instant. Throws SolverError with
/// Degeneracy::constraint when J loses row rank and Degeneracy::objective
/// when A(t) is otherwise singular or ill-conditioned.
SolutionVector theoretical_solution(const AugmentedSystem& aug, double t);

/// epsilon(t) = A(t) Y - Z(t).
Vec kkt_residual(const AugmentedSystem& aug, const SolutionVector& y, double t);
Vec kkt_residual(const AugmentedSystem& aug, const Vec& y, double t);

/// Smallest over largest singular value of J.
double rank_ratio(const Mat& J);

}  // namespace iernn
