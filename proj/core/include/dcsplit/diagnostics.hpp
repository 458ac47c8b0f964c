#pragma once

#include "dcsplit/problem.hpp"
#include "dcsplit/schedule.hpp"
#include "dcsplit/trace.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dcsplit {

/// F(x) = g(Ax) + phi(x) - f(Kx). Does not include iota_S.
double eval_F(const Problem& prob, const Vec& x);
double eval_F(const Problem& prob, const Vec& x, const Images& img);

/// Psi(x, y, z) = <z, Ax> - g^*(z) + phi(x) + iota_S(x) - <Kx, y> + f^*(y).
double eval_Psi(const Problem& prob, const Vec& x, const Vec& y, const Vec& z);
double eval_Psi(const Problem& prob, const Vec& x, const Images& img, const Vec& y, const Vec& z);

/// Psi + (alpha/2)(1 + 4 alpha / (alpha_tilde - alpha)) |z - u|^2 - ((alpha_tilde - alpha)/2)|z|^2.
double eval_merit(const Problem& prob, const Vec& x, const Vec& y, const Vec& z, const Vec& u,
                  double alpha_tilde, double alpha);
double merit_from_psi(double Psi, const Vec& z, const Vec& u, double alpha_tilde, double alpha);

/// alpha_k, alpha_{k-1}, alpha_{k-2} and the limit alpha.
struct AlphaWindow {
  double alpha_k;
  double alpha_km1;
  double alpha_km2;
  double alpha;
};

struct PsiOmega {
  double psi_k;
  double omega_k;
};

/// psi_k and omega_k of the DPFS energy argument for iterate k >= 2 with
/// z = z^k and z_prev = z^{k-1}.
PsiOmega eval_psi_and_omega(const Problem& prob, const Vec& x, const Vec& y, const Vec& z,
                            const Vec& z_prev, const AlphaWindow& a);
PsiOmega psi_omega_from_psi(double Psi, const Vec& z, const Vec& z_prev, const AlphaWindow& a);

/// min(mu, beta0, alpha (1 - 2 alpha / gamma)).
double descent_constant(const StepSchedule& sched);

struct DescentAudit {
  long first_checked = 0;
  long checked = 0;
  std::vector<long> violations;
  /// Largest varpi_{k+1} - (varpi_k - c * velocity^2) seen.
  double max_excess = -kInf;

  bool ok() const noexcept { return violations.empty(); }
  std::string to_json() const;
};

/// Counts k >= frozen_at + 2 with
///   varpi_{k+1} > varpi_k - c (|dx|^2 + |dy|^2 + |dz|^2) + tol,
/// velocities taken from record k+1.
DescentAudit descent_audit(std::span<const TraceRecord> records, long frozen_at, double c,
                           double tol = 1e-9);

struct NonmonotoneAudit {
  long checked = 0;
  long fallbacks = 0;
  std::vector<long> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Replays the line-search acceptance test on every non-fallback record.
NonmonotoneAudit nonmonotone_audit(std::span<const TraceRecord> records, long lookback, double c,
                                   double tol = 0.0);

struct RateFit {
  bool ok = false;
  std::string status;
  double q = kNaN;
  double r_squared = kNaN;
  long first = 0;
  long last = 0;
};

/// Least-squares line through (k, log d_k) over the last `tail_fraction`
/// of the sequence; q = exp(slope). Non-positive entries are skipped.
RateFit rate_fit(std::span<const double> dists, double tail_fraction);

struct KlCheck {
  bool holds = false;
  double threshold = 0.0;
  double margin = 0.0;
};

/// r1 > sigma_T (2 r2 / mu_inj + lambda), strictly.
KlCheck kl_condition_check(double r1, double r2, double lambda, double sigma_T, double mu_inj);

struct KktResiduals {
  /// |x+ - x|, |y+ - y|, |z+ - z| after one DPFS sweep at frozen parameters.
  double fixed_point_x = 0.0;
  double fixed_point_y = 0.0;
  double fixed_point_z = 0.0;
  /// (alpha_tilde - alpha) |z|.
  double certificate = 0.0;
  bool certificate_ok = false;
  /// g(Ax) + g^*(z) - <z, Ax>: zero iff Ax in d g^*(z), <= eps for the relaxed block.
  double g_gap = 0.0;
  /// f(Kx) + f^*(y) - <y, Kx>.
  double f_gap = 0.0;
  /// dist(K^*y - A^*z - grad phi(x), N_S(x)).
  double stationarity = 0.0;
  /// |K^*y - A^*z - grad phi(x)|_inf, ignoring N_S.
  double stationarity_inf = 0.0;

  std::string to_json() const;
};

KktResiduals kkt_residuals(const Problem& prob, const StepSchedule& sched, const Vec& x,
                           const Vec& y, const Vec& z, double alpha_tilde);

}  // namespace dcsplit
