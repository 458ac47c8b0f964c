#include "dcsplit/diagnostics.hpp"

#include "dcsplit/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace dcsplit {

double eval_F(const Problem& prob, const Vec& x, const Images& img) {
  const double g_val = prob.g->eval(img.Ax);
  if (g_val == kInf) return kInf;
  return g_val + prob.phi->eval(x) - prob.f->eval(img.Kx);
}

double eval_F(const Problem& prob, const Vec& x) {
  return eval_F(prob, x, apply_operators(prob, x));
}

double eval_Psi(const Problem& prob, const Vec& x, const Images& img, const Vec& y, const Vec& z) {
  if (!prob.S->contains(x, 1e-9)) return kInf;
  const double g_conj = prob.g->eval_conj(z);
  const double f_conj = prob.f->eval_conj(y);
  if (g_conj == kInf || f_conj == kInf) return kInf;
  return z.dot(img.Ax) - g_conj + prob.phi->eval(x) - img.Kx.dot(y) + f_conj;
}

double eval_Psi(const Problem& prob, const Vec& x, const Vec& y, const Vec& z) {
  return eval_Psi(prob, x, apply_operators(prob, x), y, z);
}

double merit_from_psi(double Psi, const Vec& z, const Vec& u, double alpha_tilde, double alpha) {
  if (!(alpha_tilde > alpha)) throw InvalidArgument("eval_merit: alpha_tilde must exceed alpha");
  const double gap = alpha_tilde - alpha;
  return Psi + 0.5 * alpha * (1.0 + 4.0 * alpha / gap) * (z - u).squaredNorm() -
         0.5 * gap * z.squaredNorm();
}

double eval_merit(const Problem& prob, const Vec& x, const Vec& y, const Vec& z, const Vec& u,
                  double alpha_tilde, double alpha) {
  return merit_from_psi(eval_Psi(prob, x, y, z), z, u, alpha_tilde, alpha);
}

PsiOmega psi_omega_from_psi(double Psi, const Vec& z, const Vec& z_prev, const AlphaWindow& a) {
  if (!(a.alpha_k > a.alpha && a.alpha_km1 > a.alpha && a.alpha_km2 > a.alpha)) {
    return {kNaN, kNaN};
  }
  const double z_sq = z.squaredNorm();
  const double step_sq = (z - z_prev).squaredNorm();
  const double gap_k = a.alpha_k - a.alpha;
  const double gap_km1 = a.alpha_km1 - a.alpha;

  const double psi = Psi + a.alpha * (0.5 + 2.0 * a.alpha / gap_k) * step_sq -
                     (0.5 * (a.alpha_km2 - a.alpha) -
                      2.0 * a.alpha * (a.alpha_km1 - a.alpha_km2) / gap_km1) *
                         z_sq;
  const double omega =
      (0.5 * (a.alpha_km2 - a.alpha_km1) +
       2.0 * a.alpha *
           ((a.alpha_km2 - a.alpha_km1) / gap_km1 - (a.alpha_km1 - a.alpha_k) / gap_k)) *
      z_sq;
  return {psi, omega};
}

PsiOmega eval_psi_and_omega(const Problem& prob, const Vec& x, const Vec& y, const Vec& z,
                            const Vec& z_prev, const AlphaWindow& a) {
  return psi_omega_from_psi(eval_Psi(prob, x, y, z), z, z_prev, a);
}

double descent_constant(const StepSchedule& sched) {
  return std::min({sched.mu, sched.beta0, sched.alpha * (1.0 - 2.0 * sched.alpha / sched.gamma)});
}

DescentAudit descent_audit(std::span<const TraceRecord> records, long frozen_at, double c,
                           double tol) {
  DescentAudit audit;
  audit.first_checked = frozen_at + 2;
  for (long k = std::max(frozen_at + 2, 0L); k + 1 < static_cast<long>(records.size()); ++k) {
    const TraceRecord& now = records[static_cast<std::size_t>(k)];
    const TraceRecord& next = records[static_cast<std::size_t>(k) + 1];
    const double decrease =
        c * (next.vel_x * next.vel_x + next.vel_y * next.vel_y + next.vel_z * next.vel_z);
    const double excess = next.varpi - (now.varpi - decrease);
    ++audit.checked;
    audit.max_excess = std::max(audit.max_excess, excess);
    if (!(excess <= tol)) audit.violations.push_back(k);
  }
  return audit;
}

std::string DescentAudit::to_json() const {
  nlohmann::json j;
  j["first_checked"] = first_checked;
  j["checked"] = checked;
  j["violations"] = violations;
  j["max_excess"] = std::isfinite(max_excess) ? nlohmann::json(max_excess) : nlohmann::json();
  j["ok"] = ok();
  return j.dump(2);
}

NonmonotoneAudit nonmonotone_audit(std::span<const TraceRecord> records, long lookback, double c,
                                   double tol) {
  NonmonotoneAudit audit;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const TraceRecord& r = records[i];
    if (r.ls_fallback) {
      ++audit.fallbacks;
      continue;
    }
    const long k = static_cast<long>(i) - 1;
    double window = -kInf;
    for (long t = std::max(k - lookback, 0L); t <= k; ++t) {
      window = std::max(window, records[static_cast<std::size_t>(t)].F);
    }
    ++audit.checked;
    if (!(r.F <= window - 0.5 * c * r.vel_x * r.vel_x + tol)) {
      audit.violations.push_back(static_cast<long>(i));
    }
  }
  return audit;
}

RateFit rate_fit(std::span<const double> dists, double tail_fraction) {
  RateFit fit;
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InvalidArgument("rate_fit: tail_fraction must lie in (0, 1]");
  }
  const long n = static_cast<long>(dists.size());
  const long count = static_cast<long>(std::ceil(tail_fraction * static_cast<double>(n)));
  fit.first = n - count;
  fit.last = n - 1;

  std::vector<double> ks;
  std::vector<double> logs;
  for (long k = fit.first; k < n; ++k) {
    const double d = dists[static_cast<std::size_t>(k)];
    if (d > 0.0 && std::isfinite(d)) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(d));
    }
  }
  if (ks.size() < 5) {
    fit.status = "fit-unavailable";
    return fit;
  }

  const double m = static_cast<double>(ks.size());
  double k_mean = 0.0;
  double l_mean = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    k_mean += ks[i];
    l_mean += logs[i];
  }
  k_mean /= m;
  l_mean /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double dk = ks[i] - k_mean;
    const double dl = logs[i] - l_mean;
    sxx += dk * dk;
    sxy += dk * dl;
    syy += dl * dl;
  }
  const double slope = sxy / sxx;
  fit.q = std::exp(slope);
  // A spread of logs at rounding level is a constant sequence: q = 1, exact fit.
  double scale = 0.0;
  for (double l : logs) scale = std::max(scale, std::abs(l));
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
  if (syy <= m * noise * noise) {
    fit.q = 1.0;
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = (sxy * sxy) / (sxx * syy);
  }
  fit.ok = true;
  fit.status = "ok";
  return fit;
}

KlCheck kl_condition_check(double r1, double r2, double lambda, double sigma_T, double mu_inj) {
  if (!(mu_inj > 0.0)) throw InvalidArgument("kl_condition_check: mu_inj must be > 0");
  if (r2 < 0.0 || lambda < 0.0 || !(sigma_T > 0.0)) {
    throw InvalidArgument("kl_condition_check: r2, lambda >= 0 and sigma_T > 0 required");
  }
  KlCheck out;
  out.threshold = sigma_T * (2.0 * r2 / mu_inj + lambda);
  out.margin = r1 - out.threshold;
  out.holds = r1 > out.threshold;
  return out;
}

KktResiduals kkt_residuals(const Problem& prob, const StepSchedule& sched, const Vec& x,
                           const Vec& y, const Vec& z, double alpha_tilde) {
  KktResiduals out;
  SolverState st;
  st.x = x;
  st.y = y;
  st.z = z;
  st.z_prev = z;
  st.alpha_k = alpha_tilde;
  st.rho_k = sched.rho_of(alpha_tilde);
  st.delta_k = sched.delta_of(alpha_tilde);
  st.beta_k = sched.beta0;
  const SolverState next = dpfs_step(prob, st, sched);
  out.fixed_point_x = (next.x - x).norm();
  out.fixed_point_y = (next.y - y).norm();
  out.fixed_point_z = (next.z - z).norm();

  out.certificate = sched.certificate(alpha_tilde, z);
  out.certificate_ok = out.certificate <= sched.eps;

  const Images img = apply_operators(prob, x);
  out.g_gap = prob.g->eval(img.Ax) + prob.g->eval_conj(z) - z.dot(img.Ax);
  out.f_gap = prob.f->eval(img.Kx) + prob.f->eval_conj(y) - y.dot(img.Kx);

  const Vec residual = -adjoint_difference(prob, z, y) - prob.phi->grad(x);
  out.stationarity = prob.S->normal_cone_residual(x, residual);
  out.stationarity_inf = residual.lpNorm<Eigen::Infinity>();
  return out;
}

std::string KktResiduals::to_json() const {
  nlohmann::json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  j["fixed_point"] = {
      {"x", num(fixed_point_x)}, {"y", num(fixed_point_y)}, {"z", num(fixed_point_z)}};
  j["certificate"] = num(certificate);
  j["certificate_ok"] = certificate_ok;
  j["g_gap"] = num(g_gap);
  j["f_gap"] = num(f_gap);
  j["stationarity"] = num(stationarity);
  j["stationarity_inf"] = num(stationarity_inf);
  return j.dump(2);
}

}  // namespace dcsplit
