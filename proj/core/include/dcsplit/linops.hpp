#pragma once

#include "dcsplit/types.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace dcsplit {

/// A real linear map R^n_in -> R^n_out with its adjoint.
///
/// Instances are immutable after construction; `apply` and `adjoint_apply`
/// are re-entrant and may be called concurrently.
class LinearOperator {
 public:
  LinearOperator(Index n_in, Index n_out) : n_in_(n_in), n_out_(n_out) {}
  virtual ~LinearOperator() = default;

  Index n_in() const noexcept { return n_in_; }
  Index n_out() const noexcept { return n_out_; }

  Vec apply(const Vec& x) const {
    require_dim(x.size(), n_in_, "LinearOperator::apply");
    Vec out(n_out_);
    apply_into(x, out);
    return out;
  }

  Vec adjoint_apply(const Vec& y) const {
    require_dim(y.size(), n_out_, "LinearOperator::adjoint_apply");
    Vec out(n_in_);
    adjoint_into(y, out);
    return out;
  }

 protected:
  // `out` is pre-sized; implementations overwrite it entirely.
  virtual void apply_into(const Vec& x, Vec& out) const = 0;
  virtual void adjoint_into(const Vec& y, Vec& out) const = 0;

 private:
  Index n_in_;
  Index n_out_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Index n) : LinearOperator(n, n) {}

 protected:
  void apply_into(const Vec& x, Vec& out) const override { out = x; }
  void adjoint_into(const Vec& y, Vec& out) const override { out = y; }
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Mat matrix)
      : LinearOperator(matrix.cols(), matrix.rows()), matrix_(std::move(matrix)) {}

  const Mat& matrix() const noexcept { return matrix_; }

 protected:
  void apply_into(const Vec& x, Vec& out) const override { out.noalias() = matrix_ * x; }
  void adjoint_into(const Vec& y, Vec& out) const override {
    out.noalias() = matrix_.transpose() * y;
  }

 private:
  Mat matrix_;
};

struct PowerIterationResult {
  double estimate = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Rayleigh quotient after each iteration.
  std::vector<double> history;
};

/// Estimates sigma_A = ||A||^2, the largest eigenvalue of A^*A, by power
/// iteration from a seeded random start. Stops once successive estimates
/// differ relatively by less than `tol`. A zero operator yields 0.
PowerIterationResult power_iteration(const LinearOperator& op, int max_iters, double tol,
                                     std::uint64_t seed = 0x5eed);

double op_norm_sq_estimate(const LinearOperator& op, int max_iters = 200, double tol = 1e-9);

/// Largest absolute value of <Ax, y> - <x, A^*y>, relative to 1 + |x||y|,
/// over `trials` seeded random pairs.
double adjoint_mismatch(const LinearOperator& op, int trials, std::uint64_t seed);

}  // namespace dcsplit
