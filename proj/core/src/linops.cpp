#include "dcsplit/linops.hpp"

#include "dcsplit/rng.hpp"

#include <algorithm>
#include <cmath>

namespace dcsplit {

PowerIterationResult power_iteration(const LinearOperator& op, int max_iters, double tol,
                                     std::uint64_t seed) {
  if (max_iters < 1) throw InvalidArgument("power_iteration: max_iters must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("power_iteration: tol must be > 0");

  PowerIterationResult result;
  Vec v = CounterRng(seed).normal_vector(op.n_in());
  double norm = v.norm();
  if (norm == 0.0) return result;
  v /= norm;

  double previous = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = op.adjoint_apply(op.apply(v));
    // v has unit norm, so <v, A^*A v> is the Rayleigh quotient.
    const double rayleigh = v.dot(w);
    result.history.push_back(rayleigh);
    result.estimate = rayleigh;
    result.iterations = it + 1;

    norm = w.norm();
    if (norm == 0.0) {
      result.estimate = 0.0;
      result.converged = true;
      return result;
    }
    if (it > 0 && std::abs(rayleigh - previous) < tol * std::abs(rayleigh)) {
      result.converged = true;
      return result;
    }
    previous = rayleigh;
    v = w / norm;
  }
  return result;
}

double op_norm_sq_estimate(const LinearOperator& op, int max_iters, double tol) {
  return power_iteration(op, max_iters, tol).estimate;
}

double adjoint_mismatch(const LinearOperator& op, int trials, std::uint64_t seed) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vec x = CounterRng(seed, 2 * static_cast<std::uint64_t>(t)).normal_vector(op.n_in());
    const Vec y = CounterRng(seed, 2 * static_cast<std::uint64_t>(t) + 1).normal_vector(op.n_out());
    const double lhs = op.apply(x).dot(y);
    const double rhs = x.dot(op.adjoint_apply(y));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + x.norm() * y.norm()));
  }
  return worst;
}

}  // namespace dcsplit
