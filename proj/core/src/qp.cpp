#include "iernn/qp.hpp"

#include <cmath>
#include <sstream>

namespace iernn {

TimeVaryingQP complete(TimeVaryingQP qp)
{
  if (!qp.sample_Q || !qp.sample_P || !qp.sample_J || !qp.sample_B) {
    throw DimensionError("TimeVaryingQP: coefficient samplers Q, P, J, B are required");
  }
  if (!qp.sample_dQ) {
    qp.sample_dQ = [f = qp.sample_Q](double t) { return five_point_derivative(f, t); };
  }
  if (!qp.sample_dP) {
    qp.sample_dP = [f = qp.sample_P](double t) { return five_point_derivative(f, t); };
  }
  if (!qp.sample_dJ) {
    qp.sample_dJ = [f = qp.sample_J](double t) { return five_point_derivative(f, t); };
  }
  if (!qp.sample_dB) {
    qp.sample_dB = [f = qp.sample_B](double t) { return five_point_derivative(f, t); };
  }
  return qp;
}

namespace {

void check_matrix(const Mat& M, Eigen::Index rows, Eigen::Index cols, const char* name)
{
  if (M.rows() != rows || M.cols() != cols) {
    std::ostringstream os;
    os << "sampler " << name << " returned " << M.rows() << "x" << M.cols() << ", expected "
       << rows << "x" << cols;
    throw DimensionError(os.str());
  }
}

void check_vector(const Vec& v, Eigen::Index size, const char* name)
{
  if (v.size() != size) {
    std::ostringstream os;
    os << "sampler " << name << " returned length " << v.size() << ", expected " << size;
    throw DimensionError(os.str());
  }
}

}  // namespace

void check_dimensions(const TimeVaryingQP& qp, double t)
{
  if (qp.n <= 0 || qp.m <= 0) {
    throw DimensionError("TimeVaryingQP: n and m must be positive");
  }
  if (qp.m > qp.n) {
    throw DimensionError("TimeVaryingQP: more constraints than variables (m > n)");
  }
  check_matrix(qp.sample_Q(t), qp.n, qp.n, "Q");
  check_vector(qp.sample_P(t), qp.n, "P");
  check_matrix(qp.sample_J(t), qp.m, qp.n, "J");
  check_vector(qp.sample_B(t), qp.m, "B");
  check_matrix(qp.sample_dQ(t), qp.n, qp.n, "dQ");
  check_vector(qp.sample_dP(t), qp.n, "dP");
  check_matrix(qp.sample_dJ(t), qp.m, qp.n, "dJ");
  check_vector(qp.sample_dB(t), qp.m, "dB");
}

void fill_kkt_matrix(const Mat& Q, const Mat& J, Mat& A)
{
  const auto n = Q.rows();
  const auto m = J.rows();
  A.resize(n + m, n + m);
  A.topLeftCorner(n, n) = Q;
  A.topRightCorner(n, m) = J.transpose();
  A.bottomLeftCorner(m, n) = J;
  A.bottomRightCorner(m, m).setZero();
}

Mat AugmentedSystem::A(double t) const
{
  Mat out;
  fill_kkt_matrix(qp.sample_Q(t), qp.sample_J(t), out);
  return out;
}

Vec AugmentedSystem::Z(double t) const
{
  Vec out(dim());
  out.head(n) = -qp.sample_P(t);
  out.tail(m) = qp.sample_B(t);
  return out;
}

Mat AugmentedSystem::dA(double t) const
{
  Mat out;
  fill_kkt_matrix(qp.sample_dQ(t), qp.sample_dJ(t), out);
  return out;
}

Vec AugmentedSystem::dZ(double t) const
{
  Vec out(dim());
  out.head(n) = -qp.sample_dP(t);
  out.tail(m) = qp.sample_dB(t);
  return out;
}

Vec SolutionVector::stacked() const
{
  Vec y(x.size() + lambda.size());
  y << x, lambda;
  return y;
}

SolutionVector SolutionVector::split(const Vec& y, int n)
{
  if (n < 0 || n > y.size()) {
    throw DimensionError("SolutionVector::split: n exceeds vector length");
  }
  return {y.head(n), y.tail(y.size() - n)};
}

AugmentedSystem assemble_augmented(TimeVaryingQP qp)
{
  qp = complete(std::move(qp));
  check_dimensions(qp, 0.0);
  AugmentedSystem aug;
  aug.n = qp.n;
  aug.m = qp.m;
  aug.qp = std::move(qp);
  return aug;
}

double rank_ratio(const Mat& J)
{
  if (J.size() == 0) {
    return 0.0;
  }
  const Eigen::JacobiSVD<Mat> svd(J);
  const Vec& s = svd.singularValues();
  const double smax = s(0);
  if (smax == 0.0) {
    return 0.0;
  }
  // J has m <= n rows, so there are exactly m singular values.
  return s(s.size() - 1) / smax;
}

Eigen::FullPivLU<Mat> factor_kkt(const Mat& A, double t, const char* what)
{
  Eigen::FullPivLU<Mat> lu(A);
  const double rcond = lu.isInvertible() ? lu.rcond() : 0.0;
  if (!(rcond * kConditionCap > 1.0)) {
    std::ostringstream os;
    os << what << " at t=" << t << " (condition ~ " << (rcond > 0 ? 1.0 / rcond : INFINITY) << ")";
    throw SolverError(os.str(), Degeneracy::objective, rcond > 0 ? 1.0 / rcond : INFINITY, t);
  }
  return lu;
}

SolutionVector theoretical_solution(const AugmentedSystem& aug, double t)
{
  const Mat J = aug.qp.sample_J(t);
  const double ratio = rank_ratio(J);
  if (ratio < kRankTolerance) {
    std::ostringstream os;
    os << "constraint-degenerate: J(t) loses row rank at t=" << t << " (sigma ratio " << ratio
       << ")";
    throw SolverError(os.str(), Degeneracy::constraint, ratio > 0 ? 1.0 / ratio : INFINITY, t);
  }
  Mat A;
  fill_kkt_matrix(aug.qp.sample_Q(t), J, A);
  const auto lu = factor_kkt(A, t, "objective-degenerate: A(t) singular or ill-conditioned");
  return SolutionVector::split(lu.solve(aug.Z(t)), aug.n);
}

Vec kkt_residual(const AugmentedSystem& aug, const Vec& y, double t)
{
  require_dim(y.size(), aug.dim(), "kkt_residual");
  return aug.A(t) * y - aug.Z(t);
}

Vec kkt_residual(const AugmentedSystem& aug, const SolutionVector& y, double t)
{
  require_dim(y.x.size(), aug.n, "kkt_residual x");
  require_dim(y.lambda.size(), aug.m, "kkt_residual lambda");
  return kkt_residual(aug, y.stacked(), t);
}

}  // namespace iernn
