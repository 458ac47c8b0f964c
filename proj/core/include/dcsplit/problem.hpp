#pragma once

#include "dcsplit/functions.hpp"
#include "dcsplit/linops.hpp"

#include <optional>

namespace dcsplit {

/// min_{x in S} g(Ax) + phi(x) - f(Kx)
///
/// g and f are proper closed convex with closed-form proxes and conjugates,
/// phi has a Lipschitz gradient, and S is closed convex with an exact
/// projection.
struct Problem {
  FunctionPtr g;
  FunctionPtr f;
  SmoothPtr phi;
  OperatorPtr A;
  OperatorPtr K;
  SetPtr S;

  /// Throws InvalidArgument on missing parts or incoherent dimensions.
  void validate() const;

  Index dim_x() const { return A->n_in(); }
  Index dim_y() const { return K->n_out(); }
  Index dim_z() const { return A->n_out(); }

  /// A and K are the same object, so one forward and one adjoint
  /// application serve both.
  bool shares_operator() const noexcept { return A == K; }
};

/// A x and K x; `Kx` is a copy of `Ax` when the operator is shared.
struct Images {
  Vec Ax;
  Vec Kx;
};

Images apply_operators(const Problem& prob, const Vec& x);

/// A^* z - K^* y.
Vec adjoint_difference(const Problem& prob, const Vec& z, const Vec& y);

/// Iterate triple plus the parameter values in effect for the next step.
struct SolverState {
  Vec x;
  Vec y;
  Vec z;
  Vec z_prev;
  double alpha_k = 0.0;
  double rho_k = 0.0;
  double delta_k = 0.0;
  double beta_k = 0.0;
  /// Number of decrease events so far; alpha_k = alpha_at(schedule_index).
  long schedule_index = 0;
  /// The last freeze test did not fire.
  bool frozen = false;
  /// First iteration from which the parameters have stayed constant.
  std::optional<long> frozen_at;
  long k = 0;
};

}  // namespace dcsplit
