#include "dcsplit/diagnostics.hpp"
#include "dcsplit/experiment.hpp"
#include "dcsplit/rng.hpp"
#include "dcsplit/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

namespace dcsplit {
namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

double grid_max(const std::function<double(double)>& h, double lo, double hi, double step) {
  double best = -kInf;
  for (double x = lo; x <= hi; x += step) best = std::max(best, h(x));
  return best;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.signal.length = 256;
  cfg.gabor.window_len = 64;
  cfg.gabor.hop = 16;
  cfg.schedule.eps = 1.0;
  return cfg;
}

TEST(EvalF, CounterexampleOriginIsZero) {
  const Problem prob = counterexample_problem();
  EXPECT_EQ(eval_F(prob, Vec::Zero(2)), 0.0);
  const Vec x = v({1.5, -0.5});
  EXPECT_NEAR(eval_F(prob, x), 2.0 - 0.5 * 2.5 - 2.0, 1e-15);
}

TEST(EvalF, DenoiseAtAnchorCancelsQuadratics) {
  const ExperimentConfig cfg = small_config();
  const DenoiseInstance inst = make_synthetic_instance(cfg);
  const DenoiseProblem dp = build_denoise_problem(inst.noisy.samples, cfg);
  const Vec c = dp.gabor->apply(inst.noisy.samples);
  const double want = c.lpNorm<1>() - cfg.r2 * c.norm();
  EXPECT_NEAR(eval_F(dp.problem, inst.noisy.samples), want, 1e-10 * std::abs(want));
}

TEST(EvalPsi, CounterexampleIndicatorConjugates) {
  const Problem prob = counterexample_problem();
  const Vec c = v({2, 2});
  for (int i = 0; i < 20; ++i) {
    const Vec x = 10.0 * CounterRng(i).normal_vector(2);
    const Vec z = CounterRng(i, 1).uniform_vector(2, -1.0, 1.0);
    const double want = z.dot(x) - 0.5 * x.squaredNorm() - x.dot(c);
    EXPECT_NEAR(eval_Psi(prob, x, c, z), want, 1e-12);
  }
  EXPECT_EQ(eval_Psi(prob, v({1, 1}), c, v({1.5, 0})), kInf);
  EXPECT_EQ(eval_Psi(prob, v({300, 0}), c, v({0, 0})), kInf);
}

TEST(EvalPsi, FenchelYoungLowerBound) {
  const ExperimentConfig cfg = small_config();
  const DenoiseInstance inst = make_synthetic_instance(cfg);
  const DenoiseProblem dp = build_denoise_problem(inst.noisy.samples, cfg);
  const Problem& p = dp.problem;
  const Vec& x = inst.noisy.samples;
  const Vec Tx = dp.gabor->apply(x);
  // y = grad f(Tx) attains f(Tx) + f*(y) = <y, Tx>.
  const Vec y = cfg.r2 * Tx / Tx.norm() + cfg.lambda * Tx;
  const Vec z = CounterRng(9).uniform_vector(Tx.size(), -1.5, 1.5);
  const double slack = p.g->eval_conj(z) - z.dot(Tx) + p.g->eval(Tx);
  EXPECT_GE(slack, -1e-9);
  EXPECT_NEAR(eval_Psi(p, x, y, z), eval_F(p, x) - slack, 1e-8 * std::abs(eval_F(p, x)));
}

TEST(EvalPsi, GridConjugationOnSlices) {
  Problem p;
  const double lambda = 0.3;
  const double r2 = 0.6;
  const Mat m = Mat::NullaryExpr(3, 3, [](Index i, Index j) { return std::cos(i + 2.0 * j); });
  p.g = std::make_shared<ElasticL1>(lambda);
  p.f = std::make_shared<SmoothedL2>(r2, lambda);
  p.phi = std::make_shared<QuadFidelity>(2.0, v({0.1, 0.2, 0.3}));
  p.A = std::make_shared<DenseOperator>(m);
  p.K = p.A;
  p.S = std::make_shared<WholeSpace>();
  for (int i = 0; i < 10; ++i) {
    const Vec x = CounterRng(20 + i).normal_vector(3);
    const Vec y = 1.5 * CounterRng(40 + i).normal_vector(3);
    const Vec z = 1.5 * CounterRng(60 + i).normal_vector(3);
    double g_conj = 0.0;
    for (Index j = 0; j < 3; ++j) {
      const double zj = z[j];
      g_conj += grid_max([&](double t) { return zj * t - std::abs(t) - 0.5 * lambda * t * t; },
                         -20, 20, 1e-3);
    }
    const double ny = y.norm();
    const double f_conj =
        grid_max([&](double t) { return ny * t - r2 * t - 0.5 * lambda * t * t; }, 0, 20, 1e-3);
    const Vec Ax = m * x;
    const double want = z.dot(Ax) - g_conj + p.phi->eval(x) - Ax.dot(y) + f_conj;
    EXPECT_NEAR(eval_Psi(p, x, y, z), want, 1e-3);
  }
}

TEST(Merit, SpecialCases) {
  const Problem prob = counterexample_problem();
  const Vec x = v({1, 2});
  const Vec y = v({2, 2});
  const Vec z = v({0.5, -0.25});
  const double Psi = eval_Psi(prob, x, y, z);
  EXPECT_NEAR(eval_merit(prob, x, y, z, z, 3.0, 1.0), Psi - 1.0 * z.squaredNorm(), 1e-14);
  const Vec u = v({0.3, 0.1});
  const Vec z0 = Vec::Zero(2);
  EXPECT_NEAR(eval_merit(prob, x, y, z0, u, 3.0, 1.0),
              eval_Psi(prob, x, y, z0) + 0.5 * (1.0 + 2.0) * u.squaredNorm(), 1e-14);
  EXPECT_THROW(eval_merit(prob, x, y, z, u, 1.0, 1.0), InvalidArgument);
}

TEST(PsiOmega, ConstantAlphaHasNoPerturbation) {
  const Vec z = v({0.3, -0.2});
  const Vec zp = v({0.1, 0.4});
  const PsiOmega po = psi_omega_from_psi(1.0, z, zp, {2.0, 2.0, 2.0, 1.0});
  EXPECT_EQ(po.omega_k, 0.0);
  // With equal alphas psi_k reduces to the merit function.
  EXPECT_NEAR(po.psi_k, merit_from_psi(1.0, z, zp, 2.0, 1.0), 1e-14);
  // By hand: 1 + 1 * (1/2 + 2) * 0.4 - (1/2) * 0.13.
  EXPECT_NEAR(po.psi_k, 1.0 + 2.5 * 0.4 - 0.065, 1e-14);
}

TEST(PsiOmega, HandComputedOmega) {
  const StepSchedule s = counterexample_schedule();
  EXPECT_DOUBLE_EQ(s.alpha_at(0), 4.0);
  EXPECT_DOUBLE_EQ(s.alpha_at(1), 2.5);
  EXPECT_DOUBLE_EQ(s.alpha_at(2), 2.0);
  const Vec z = v({0.6, 0.8});
  const PsiOmega po = psi_omega_from_psi(0.0, z, z, {2.0, 2.5, 4.0, 1.0});
  EXPECT_NEAR(po.omega_k, 1.75 * z.squaredNorm(), 1e-14);
  EXPECT_TRUE(std::isnan(psi_omega_from_psi(0.0, z, z, {1.0, 2.5, 4.0, 1.0}).psi_k));
}

TEST(PsiOmega, OmegaSumBoundedOnScheduleRun) {
  const Problem prob = counterexample_problem();
  const StepSchedule s = counterexample_schedule();
  std::vector<Vec> zs;
  StopRule stop;
  stop.max_iters = 1000;
  dpfs(prob, s, {Vec::Zero(2), v({2, 2}), Vec::Zero(2)}, stop,
       [&](const SolverState& st, const TraceRecord&) { zs.push_back(st.z); });
  double ell = 0.0;
  for (const Vec& z : zs) ell = std::max(ell, z.norm());
  double sum = 0.0;
  for (std::size_t k = 2; k < zs.size(); ++k) {
    const long j = static_cast<long>(k);
    const PsiOmega po = psi_omega_from_psi(
        0.0, zs[k], zs[k - 1], {s.alpha_at(j), s.alpha_at(j - 1), s.alpha_at(j - 2), s.alpha});
    EXPECT_GE(po.omega_k, 0.0) << k;
    sum += po.omega_k;
  }
  const double a0 = s.alpha_at(0);
  const double a1 = s.alpha_at(1);
  EXPECT_LT(sum, (0.5 * a0 + 2.0 * s.alpha * (a0 - a1) / (a1 - s.alpha)) * ell * ell);
}

TEST(DescentAudit, HealthyRunAndInjectedFault) {
  const ExperimentConfig cfg = small_config();
  const DenoiseInstance inst = make_synthetic_instance(cfg);
  const DenoiseResult res = run_denoise(inst, [&] {
    ExperimentConfig c = cfg;
    c.iters = 300;
    return c;
  }());
  ASSERT_TRUE(res.trace.frozen_at.has_value());
  const DenoiseProblem dp = build_denoise_problem(inst.noisy.samples, cfg);
  const double c = descent_constant(schedule_for(cfg, dp));
  std::vector<TraceRecord> recs = res.trace.records;
  const long k0 = *res.trace.frozen_at;
  EXPECT_TRUE(descent_audit(recs, k0, c).ok());

  // Late in the run the merit barely moves, so a bump of 1 breaks exactly
  // the step into the bumped record.
  const std::size_t bump = recs.size() - 10;
  recs[bump].varpi += 1.0;
  const DescentAudit bad = descent_audit(recs, k0, c);
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_EQ(bad.violations[0], static_cast<long>(bump) - 1);
}

TEST(DescentAudit, MisconfiguredRhoDoesNotCrash) {
  ExperimentConfig cfg = small_config();
  cfg.rho0 = cfg.r1 / 2.0;
  cfg.schedule.eps = 1e6;
  cfg.iters = 100;
  const DenoiseResult res = run_denoise(make_synthetic_instance(cfg), cfg);
  ASSERT_TRUE(res.trace.frozen_at.has_value());
  const DescentAudit audit = descent_audit(res.trace.records, *res.trace.frozen_at, 0.1);
  EXPECT_GT(audit.checked, 0);
  EXPECT_FALSE(audit.to_json().empty());
}

TEST(DescentAudit, ReplayReproducesStoredMerit) {
  const Problem prob = counterexample_problem();
  StepSchedule s = counterexample_schedule();
  s.eps = 0.1;
  std::vector<SolverState> states;
  StopRule stop;
  stop.max_iters = 120;
  const Trace tr = adaptive_dpfs(prob, s, {Vec::Zero(2), v({2, 2}), Vec::Zero(2)}, stop,
                                 [&](const SolverState& st, const TraceRecord&) {
                                   states.push_back(st);
                                 });
  for (std::size_t k = 1; k < states.size(); ++k) {
    const SolverState& st = states[k];
    const double varpi = eval_merit(prob, st.x, st.y, st.z, st.z_prev, st.alpha_k, s.alpha);
    EXPECT_EQ(varpi, tr.records[k].varpi) << k;
  }
}

TEST(RateFit, PlantedSequences) {
  std::vector<double> geo(200);
  for (std::size_t k = 0; k < geo.size(); ++k) geo[k] = std::pow(0.9, static_cast<double>(k));
  const RateFit g = rate_fit(geo, 0.5);
  EXPECT_TRUE(g.ok);
  EXPECT_NEAR(g.q, 0.9, 1e-12);
  EXPECT_NEAR(g.r_squared, 1.0, 1e-12);

  const std::vector<double> flat(50, 3.0);
  const RateFit f = rate_fit(flat, 1.0);
  EXPECT_NEAR(f.q, 1.0, 1e-15);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-15);

  const std::vector<double> few{1.0, 0.5, 0.25, 0.0};
  const RateFit n = rate_fit(few, 1.0);
  EXPECT_FALSE(n.ok);
  EXPECT_EQ(n.status, "fit-unavailable");
  EXPECT_THROW(rate_fit(geo, 0.0), InvalidArgument);
}

TEST(KlCheck, ShortcutAndBoundary) {
  const KlCheck k = kl_condition_check(9.0, 0.6, 0.1, 4.0, 2.0);
  EXPECT_TRUE(k.holds);
  EXPECT_NEAR(k.threshold, 2.8, 1e-14);
  EXPECT_NEAR(k.margin, 6.2, 1e-14);
  EXPECT_FALSE(kl_condition_check(k.threshold, 0.6, 0.1, 4.0, 2.0).holds);
  EXPECT_TRUE(kl_condition_check(1e-6, 0.0, 0.0, 4.0, 2.0).holds);
  EXPECT_THROW(kl_condition_check(9.0, 0.6, 0.1, 4.0, 0.0), InvalidArgument);
}

TEST(Kkt, ExactPointOfLineProblem) {
  Problem p;
  p.g = std::make_shared<ZeroFunction>();
  p.f = std::make_shared<LinearForm>(v({1.5}));
  p.phi = std::make_shared<QuadFidelity>(3.0, v({0.7}));
  p.A = std::make_shared<IdentityOperator>(1);
  p.K = p.A;
  p.S = std::make_shared<WholeSpace>();
  StepSchedule s;
  s.lip_phi = 3.0;
  const KktResiduals r = kkt_residuals(p, s, v({1.2}), v({1.5}), v({0.0}), s.alpha_at(5));
  EXPECT_LE(r.fixed_point_x, 1e-10);
  EXPECT_LE(r.fixed_point_y, 1e-10);
  EXPECT_LE(r.fixed_point_z, 1e-10);
  EXPECT_LE(r.stationarity, 1e-10);
  EXPECT_LE(std::abs(r.g_gap), 1e-10);
  EXPECT_LE(std::abs(r.f_gap), 1e-10);
  EXPECT_TRUE(r.certificate_ok);
  EXPECT_FALSE(r.to_json().empty());
}

TEST(Kkt, CounterexampleTerminalGap) {
  const auto [tr, rep] = run_counterexample(20000, Vec::Zero(2));
  const SolverState& st = tr.final_state;
  const Vec gap = v({2, 2}) - (st.z - st.x);
  EXPECT_GE(gap.lpNorm<Eigen::Infinity>(), 0.9);
  EXPECT_NEAR(rep.stationarity_inf, gap.lpNorm<Eigen::Infinity>(), 1e-12);
  const KktResiduals r = kkt_residuals(counterexample_problem(), counterexample_schedule(), st.x,
                                       st.y, st.z, st.alpha_k);
  EXPECT_GE(r.stationarity_inf, 0.9);
}

}  // namespace
}  // namespace dcsplit
