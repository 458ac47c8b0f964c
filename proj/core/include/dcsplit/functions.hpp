#pragma once

#include "dcsplit/types.hpp"

#include <memory>
#include <string>

namespace dcsplit {

/// Containment slack for indicator-type conjugates (iota of a ball or a
/// point). Absorbs floating-point drift in energy bookkeeping.
inline constexpr double kIndicatorTol = 1e-9;

// ---------------------------------------------------------------------------
// Closed-form building blocks.

/// Componentwise soft threshold max(|w| - alpha, 0) * sign(w).
Vec shrink(const Vec& w, double alpha);

/// prox of ||.||_1 + (lambda/2)||.||^2 with step alpha: shrink(w, alpha) / (1 + alpha*lambda).
Vec prox_elastic_l1(const Vec& w, double alpha, double lambda);

/// prox of r2||.||_2 + (lambda/2)||.||^2 with step alpha. Radial: the norm
/// becomes max(|w| - alpha*r2, 0) / (1 + alpha*lambda); w = 0 maps to 0.
Vec prox_smoothed_l2(const Vec& w, double alpha, double r2, double lambda);

/// Conjugate of ||.||_1 + (lambda/2)||.||^2: ||shrink(z, 1)||^2 / (2 lambda). Requires lambda > 0.
double eval_conj_elastic_l1(const Vec& z, double lambda);

/// Conjugate of r2||.||_2 + (lambda/2)||.||^2: max(|y| - r2, 0)^2 / (2 lambda). Requires lambda >
/// 0.
double eval_conj_smoothed_l2(const Vec& y, double r2, double lambda);

/// Euclidean projection onto the closed ball B(center, radius).
Vec project_ball(const Vec& center, double radius, const Vec& x);

// ---------------------------------------------------------------------------
// Proper closed convex functions with a closed-form prox and conjugate.

class ConvexFunction {
 public:
  virtual ~ConvexFunction() = default;

  /// Value in R or +inf.
  virtual double eval(const Vec& x) const = 0;
  /// argmin_v f(v) + |v - w|^2 / (2 step), step > 0.
  virtual Vec prox(const Vec& w, double step) const = 0;
  /// f^*(z) = sup_x <z, x> - f(x), in R or +inf.
  virtual double eval_conj(const Vec& z) const = 0;
  virtual std::string name() const = 0;
};

using FunctionPtr = std::shared_ptr<const ConvexFunction>;

/// prox of f^* with step `step`, from the Moreau identity
///   prox_{f,t}(w) + t * prox_{f^*,1/t}(w / t) = w,
/// i.e. prox_{f^*,s}(w) = w - s * prox_{f,1/s}(w / s).
Vec conj_prox(const ConvexFunction& fn, const Vec& w, double step);

class ZeroFunction final : public ConvexFunction {
 public:
  double eval(const Vec&) const override { return 0.0; }
  Vec prox(const Vec& w, double) const override { return w; }
  double eval_conj(const Vec& z) const override;
  std::string name() const override { return "zero"; }
};

class L1Norm final : public ConvexFunction {
 public:
  double eval(const Vec& x) const override { return x.lpNorm<1>(); }
  Vec prox(const Vec& w, double step) const override;
  /// Indicator of the unit sup-norm ball.
  double eval_conj(const Vec& z) const override;
  std::string name() const override { return "l1"; }
};

/// g(x) = ||x||_1 + (lambda/2)||x||^2.
class ElasticL1 final : public ConvexFunction {
 public:
  explicit ElasticL1(double lambda);

  double lambda() const noexcept { return lambda_; }
  double eval(const Vec& x) const override;
  Vec prox(const Vec& w, double step) const override;
  double eval_conj(const Vec& z) const override;
  std::string name() const override { return "elastic_l1"; }

  /// Lipschitz constant of g on {||v|| <= radius} in R^dim: sqrt(dim) + lambda * radius.
  double local_lipschitz(Index dim, double radius) const;

 private:
  double lambda_;
};

/// f(x) = r2 ||x||_2 + (lambda/2)||x||^2.
class SmoothedL2 final : public ConvexFunction {
 public:
  SmoothedL2(double r2, double lambda);

  double r2() const noexcept { return r2_; }
  double lambda() const noexcept { return lambda_; }
  double eval(const Vec& x) const override;
  Vec prox(const Vec& w, double step) const override;
  double eval_conj(const Vec& y) const override;
  std::string name() const override { return "smoothed_l2"; }

 private:
  double r2_;
  double lambda_;
};

/// f(x) = <c, x>; its conjugate is the indicator of {c}.
class LinearForm final : public ConvexFunction {
 public:
  explicit LinearForm(Vec c) : c_(std::move(c)) {}

  const Vec& coefficients() const noexcept { return c_; }
  double eval(const Vec& x) const override { return c_.dot(x); }
  Vec prox(const Vec& w, double step) const override { return w - step * c_; }
  double eval_conj(const Vec& z) const override;
  std::string name() const override { return "linear"; }

 private:
  Vec c_;
};

// ---------------------------------------------------------------------------
// Smooth terms.

class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual double eval(const Vec& x) const = 0;
  virtual Vec grad(const Vec& x) const = 0;
  /// Lipschitz constant of the gradient.
  virtual double lipschitz() const = 0;
  virtual std::string name() const = 0;
};

using SmoothPtr = std::shared_ptr<const SmoothFunction>;

class ZeroSmooth final : public SmoothFunction {
 public:
  double eval(const Vec&) const override { return 0.0; }
  Vec grad(const Vec& x) const override { return Vec::Zero(x.size()); }
  double lipschitz() const override { return 0.0; }
  std::string name() const override { return "zero"; }
};

/// phi(x) = (r1/2)||x - u||^2.
class QuadFidelity final : public SmoothFunction {
 public:
  QuadFidelity(double r1, Vec u) : r1_(r1), u_(std::move(u)) {}

  double r1() const noexcept { return r1_; }
  const Vec& anchor() const noexcept { return u_; }
  double eval(const Vec& x) const override { return 0.5 * r1_ * (x - u_).squaredNorm(); }
  Vec grad(const Vec& x) const override { return r1_ * (x - u_); }
  double lipschitz() const override { return r1_; }
  std::string name() const override { return "quad_fidelity"; }

 private:
  double r1_;
  Vec u_;
};

/// phi(x) = -(1/2)||x||^2. Concave, but with a 1-Lipschitz gradient.
class NegHalfSquaredNorm final : public SmoothFunction {
 public:
  double eval(const Vec& x) const override { return -0.5 * x.squaredNorm(); }
  Vec grad(const Vec& x) const override { return -x; }
  double lipschitz() const override { return 1.0; }
  std::string name() const override { return "neg_half_sq_norm"; }
};

// ---------------------------------------------------------------------------
// Closed convex sets with an exact projection.

class ProjectableSet {
 public:
  virtual ~ProjectableSet() = default;
  virtual Vec project(const Vec& x) const = 0;
  virtual bool contains(const Vec& x, double tol) const = 0;
  /// dist(v, N_S(x)) for x in S.
  virtual double normal_cone_residual(const Vec& x, const Vec& v) const = 0;
  virtual std::string name() const = 0;
};

using SetPtr = std::shared_ptr<const ProjectableSet>;

class WholeSpace final : public ProjectableSet {
 public:
  Vec project(const Vec& x) const override { return x; }
  bool contains(const Vec& x, double) const override { return x.allFinite(); }
  double normal_cone_residual(const Vec&, const Vec& v) const override { return v.norm(); }
  std::string name() const override { return "whole_space"; }
};

class Ball final : public ProjectableSet {
 public:
  Ball(Vec center, double radius);

  const Vec& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  Vec project(const Vec& x) const override { return project_ball(center_, radius_, x); }
  bool contains(const Vec& x, double tol) const override;
  double normal_cone_residual(const Vec& x, const Vec& v) const override;
  std::string name() const override { return "ball"; }

 private:
  Vec center_;
  double radius_;
};

}  // namespace dcsplit
