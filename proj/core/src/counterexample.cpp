#include "dcsplit/solver.hpp"

#include <algorithm>
#include <cmath>

namespace dcsplit {

namespace {

const Vec& coefficient_c() {
  static const Vec c = Vec::Constant(2, 2.0);
  return c;
}

constexpr double kRadius = 200.0;

}  // namespace

Problem counterexample_problem() {
  auto id = std::make_shared<IdentityOperator>(2);
  Problem prob;
  prob.g = std::make_shared<L1Norm>();
  prob.f = std::make_shared<LinearForm>(coefficient_c());
  prob.phi = std::make_shared<NegHalfSquaredNorm>();
  prob.A = id;
  prob.K = id;
  prob.S = std::make_shared<Ball>(Vec::Zero(2), kRadius);
  return prob;
}

StepSchedule counterexample_schedule() {
  StepSchedule s;
  s.alpha = 1.0;
  s.gamma = 3.0;
  s.r_exp = 1.0;
  s.mu = 0.5;
  s.lip_phi = 1.0;
  s.sigma_a = 1.0;
  s.eps = 1e-10;
  s.beta0 = 1.0;
  return s;
}

std::pair<Trace, CounterexampleReport> run_counterexample(long n_iters, const Vec& z0) {
  if (n_iters < 1) throw InvalidArgument("run_counterexample: n_iters must be >= 1");
  require_dim(z0.size(), 2, "run_counterexample: z0");
  if (!(z0.lpNorm<Eigen::Infinity>() <= 1.0)) {
    throw InvalidArgument("run_counterexample: ||z0||_inf must be <= 1");
  }

  const Problem prob = counterexample_problem();
  CounterexampleReport rep;
  auto watch = [&](const SolverState& st, const TraceRecord& rec) {
    if (rec.norm_x > kRadius * (1.0 + 1e-12)) {
      throw DivergenceError("counterexample: ||x|| left the ball of radius 200", st.k);
    }
    rep.max_norm_x = std::max(rep.max_norm_x, rec.norm_x);
  };

  StopRule stop;
  stop.max_iters = n_iters;
  Trace trace = dpfs(prob, counterexample_schedule(), {Vec::Zero(2), coefficient_c(), z0}, stop,
                     watch);

  rep.iterations = trace.iterations();
  for (long k = 0; k < rep.iterations; ++k) {
    rep.sum_inv_rho += 1.0 / trace.records[static_cast<std::size_t>(k)].rho_k;
  }
  const SolverState& fin = trace.final_state;
  const Vec diff = fin.z - fin.x;
  const Vec resid = coefficient_c() - diff;
  rep.kkt_gap = resid.minCoeff();
  rep.max_z_minus_x = diff.maxCoeff();
  rep.stationarity_inf = resid.lpNorm<Eigen::Infinity>();
  const TraceRecord& last = trace.records.back();
  rep.vel_x = last.vel_x;
  rep.vel_y = last.vel_y;
  rep.vel_z = last.vel_z;
  return {std::move(trace), rep};
}

}  // namespace dcsplit
