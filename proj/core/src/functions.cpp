#include "dcsplit/functions.hpp"

#include <cmath>

namespace dcsplit {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(what) + " must be > 0");
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw InvalidArgument(std::string(what) + " must be >= 0");
}

}  // namespace

Vec shrink(const Vec& w, double alpha) {
  require_nonnegative(alpha, "shrink: alpha");
  return w.unaryExpr([alpha](double v) {
    const double mag = std::abs(v) - alpha;
    return mag > 0.0 ? std::copysign(mag, v) : 0.0;
  });
}

Vec prox_elastic_l1(const Vec& w, double alpha, double lambda) {
  require_positive(alpha, "prox_elastic_l1: alpha");
  require_nonnegative(lambda, "prox_elastic_l1: lambda");
  return shrink(w, alpha) / (1.0 + alpha * lambda);
}

Vec prox_smoothed_l2(const Vec& w, double alpha, double r2, double lambda) {
  require_positive(alpha, "prox_smoothed_l2: alpha");
  require_nonnegative(r2, "prox_smoothed_l2: r2");
  require_nonnegative(lambda, "prox_smoothed_l2: lambda");
  const double norm = w.norm();
  if (norm == 0.0) return Vec::Zero(w.size());
  const double t = std::max(norm - alpha * r2, 0.0) / (1.0 + alpha * lambda);
  return (t / norm) * w;
}

double eval_conj_elastic_l1(const Vec& z, double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("eval_conj_elastic_l1: lambda = 0 makes the conjugate an indicator");
  }
  return shrink(z, 1.0).squaredNorm() / (2.0 * lambda);
}

double eval_conj_smoothed_l2(const Vec& y, double r2, double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("eval_conj_smoothed_l2: lambda = 0 makes the conjugate an indicator");
  }
  const double excess = std::max(y.norm() - r2, 0.0);
  return excess * excess / (2.0 * lambda);
}

Vec project_ball(const Vec& center, double radius, const Vec& x) {
  require_positive(radius, "project_ball: radius");
  require_dim(x.size(), center.size(), "project_ball");
  const Vec offset = x - center;
  const double dist = offset.norm();
  if (dist <= radius) return x;
  return center + (radius / dist) * offset;
}

Vec conj_prox(const ConvexFunction& fn, const Vec& w, double step) {
  require_positive(step, "conj_prox: step");
  return w - step * fn.prox(w / step, 1.0 / step);
}

double ZeroFunction::eval_conj(const Vec& z) const {
  return z.lpNorm<Eigen::Infinity>() <= kIndicatorTol ? 0.0 : kInf;
}

Vec L1Norm::prox(const Vec& w, double step) const {
  require_positive(step, "L1Norm::prox: step");
  return shrink(w, step);
}

double L1Norm::eval_conj(const Vec& z) const {
  return z.lpNorm<Eigen::Infinity>() <= 1.0 + kIndicatorTol ? 0.0 : kInf;
}

ElasticL1::ElasticL1(double lambda) : lambda_(lambda) {
  require_nonnegative(lambda, "ElasticL1: lambda");
}

double ElasticL1::eval(const Vec& x) const {
  return x.lpNorm<1>() + 0.5 * lambda_ * x.squaredNorm();
}

Vec ElasticL1::prox(const Vec& w, double step) const { return prox_elastic_l1(w, step, lambda_); }

double ElasticL1::eval_conj(const Vec& z) const {
  if (lambda_ == 0.0) return L1Norm().eval_conj(z);
  return eval_conj_elastic_l1(z, lambda_);
}

double ElasticL1::local_lipschitz(Index dim, double radius) const {
  if (dim < 0) throw InvalidArgument("ElasticL1::local_lipschitz: dim must be >= 0");
  require_nonnegative(radius, "ElasticL1::local_lipschitz: radius");
  return std::sqrt(static_cast<double>(dim)) + lambda_ * radius;
}

SmoothedL2::SmoothedL2(double r2, double lambda) : r2_(r2), lambda_(lambda) {
  require_nonnegative(r2, "SmoothedL2: r2");
  require_nonnegative(lambda, "SmoothedL2: lambda");
}

double SmoothedL2::eval(const Vec& x) const {
  return r2_ * x.norm() + 0.5 * lambda_ * x.squaredNorm();
}

Vec SmoothedL2::prox(const Vec& w, double step) const {
  return prox_smoothed_l2(w, step, r2_, lambda_);
}

double SmoothedL2::eval_conj(const Vec& y) const {
  if (lambda_ == 0.0) return y.norm() <= r2_ + kIndicatorTol ? 0.0 : kInf;
  return eval_conj_smoothed_l2(y, r2_, lambda_);
}

double LinearForm::eval_conj(const Vec& z) const {
  require_dim(z.size(), c_.size(), "LinearForm::eval_conj");
  return (z - c_).lpNorm<Eigen::Infinity>() <= kIndicatorTol ? 0.0 : kInf;
}

Ball::Ball(Vec center, double radius) : center_(std::move(center)), radius_(radius) {
  require_positive(radius, "Ball: radius");
}

bool Ball::contains(const Vec& x, double tol) const {
  return x.allFinite() && (x - center_).norm() <= radius_ + tol;
}

double Ball::normal_cone_residual(const Vec& x, const Vec& v) const {
  const Vec offset = x - center_;
  const double dist = offset.norm();
  // Interior points have a trivial normal cone.
  if (dist < radius_ * (1.0 - 1e-12)) return v.norm();
  const Vec normal = offset / dist;
  const double along = std::max(v.dot(normal), 0.0);
  return (v - along * normal).norm();
}

}  // namespace dcsplit
