#pragma once

#include "dcsplit/types.hpp"

namespace dcsplit {

/// Step-size regime of the DPFS family.
///
///   alpha_j = alpha + gamma / (j + 1)^r_exp         (j = schedule index)
///   rho     = lip_phi/2 + 3 sigma_a gamma / (2 (alpha_k - alpha)^2) + mu
///   delta   = alpha / alpha_k
///   beta    = beta0 (held constant)
///
/// The schedule index advances once per decrease event, so the realized
/// values are always a prefix of the closed-form sequence.
struct StepSchedule {
  double alpha = 0.1 / 64.0;
  double gamma = 0.1;
  double r_exp = 0.5;
  double mu = 1.0;
  double lip_phi = 0.0;
  double sigma_a = 1.0;
  double eps = 1e-10;
  double beta0 = 1.0;

  /// Throws ConfigError naming the violated inequality.
  void validate() const;

  double alpha_at(long j) const;
  double rho_of(double alpha_k) const;
  double delta_of(double alpha_k) const;
  double beta_at(long) const noexcept { return beta0; }

  /// Freeze test: true iff (alpha_k - alpha) * ||z_next|| > eps.
  bool should_decrease(double alpha_k, const Vec& z_next) const;
  double certificate(double alpha_k, const Vec& z_next) const;
};

}  // namespace dcsplit
