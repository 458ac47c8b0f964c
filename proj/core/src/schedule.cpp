#include "dcsplit/schedule.hpp"

#include <cmath>
#include <sstream>

namespace dcsplit {

namespace {

[[noreturn]] void fail(const std::string& inequality, double lhs, double rhs) {
  std::ostringstream os;
  os << "schedule: violated " << inequality << " (" << lhs << " vs " << rhs << ")";
  throw ConfigError(os.str());
}

}  // namespace

void StepSchedule::validate() const {
  if (!(alpha > 0.0)) fail("0 < alpha", alpha, 0.0);
  if (!(gamma > 0.0)) fail("0 < gamma", gamma, 0.0);
  if (!(alpha < gamma / 2.0)) fail("alpha < gamma/2", alpha, gamma / 2.0);
  if (!(r_exp > 0.0 && r_exp <= 1.0)) fail("0 < r_exp <= 1", r_exp, 1.0);
  if (!(mu > 0.0)) fail("0 < mu", mu, 0.0);
  if (!(lip_phi >= 0.0)) fail("0 <= lip_phi", lip_phi, 0.0);
  if (!(sigma_a >= 0.0)) fail("0 <= sigma_a", sigma_a, 0.0);
  if (!(eps > 0.0)) fail("0 < eps", eps, 0.0);
  if (!(beta0 > 0.0)) fail("0 < beta0", beta0, 0.0);
}

double StepSchedule::alpha_at(long j) const {
  if (j < 0) throw InvalidArgument("alpha_at: schedule index must be >= 0");
  return alpha + gamma / std::pow(static_cast<double>(j) + 1.0, r_exp);
}

double StepSchedule::rho_of(double alpha_k) const {
  if (!(alpha_k > alpha)) throw InvalidArgument("rho_of: alpha_k must exceed alpha");
  const double gap = alpha_k - alpha;
  return lip_phi / 2.0 + 3.0 * sigma_a * gamma / (2.0 * gap * gap) + mu;
}

double StepSchedule::delta_of(double alpha_k) const {
  if (!(alpha_k > 0.0)) throw InvalidArgument("delta_of: alpha_k must be > 0");
  return alpha / alpha_k;
}

double StepSchedule::certificate(double alpha_k, const Vec& z_next) const {
  return (alpha_k - alpha) * z_next.norm();
}

bool StepSchedule::should_decrease(double alpha_k, const Vec& z_next) const {
  return certificate(alpha_k, z_next) > eps;
}

}  // namespace dcsplit
