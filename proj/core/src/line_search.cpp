#include "solver_detail.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace dcsplit {

void LineSearchParams::validate() const {
  if (!(eta > 1.0)) throw ConfigError("line search: eta > 1 required");
  if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("line search: 0 < nu < 1 required");
  if (!(c > 0.0)) throw ConfigError("line search: c > 0 required");
  if (lookback < 0) throw ConfigError("line search: lookback >= 0 required");
  if (t_max < 1) throw ConfigError("line search: t_max >= 1 required");
}

Trace adaptive_dpfs_ls(const Problem& prob, const StepSchedule& sched, const LineSearchParams& ls,
                       const InitialPoint& init, const StopRule& stop, const Observer& observer,
                       const RunOptions& options) {
  prob.validate();
  sched.validate();
  ls.validate();
  if (stop.max_iters < 0) throw InvalidArgument("StopRule: max_iters must be >= 0");

  Trace trace;
  trace.method = "adaptive_dpfs_ls";
  const detail::Stopwatch clock;

  SolverState st = initial_state(prob, sched, init, options.rho0);
  if (options.z0_bound > 0.0 && st.z.norm() > options.z0_bound) {
    std::ostringstream os;
    os << "||z0|| = " << st.z.norm() << " exceeds the bound " << options.z0_bound;
    trace.warnings.push_back(os.str());
  }
  Images img = apply_operators(prob, st.x);
  detail::AlphaHistory hist;

  // F(x^t) for t in [k - T, k].
  std::deque<double> window;

  auto emit = [&](const SolverState& cur, const SolverState* prev, const Images& images,
                  double accepted, bool fallback) {
    TraceRecord rec =
        detail::make_record(prob, &sched, cur, prev, images, hist, options.record_energies);
    rec.accepted_rho = accepted;
    rec.ls_fallback = fallback;
    rec.t_ms = clock.ms();
    trace.records.push_back(rec);
    if (observer) observer(cur, rec);
    return rec;
  };
  const TraceRecord first = emit(st, nullptr, img, kNaN, false);
  if (!std::isfinite(first.F)) {
    throw DivergenceError("line search: F is not finite at the starting point", 0);
  }
  window.push_back(first.F);

  for (long k = 0; k < stop.max_iters; ++k) {
    SolverState next = st;
    next.k = k + 1;
    next.y = conj_prox(*prob.f, st.y + img.Kx / st.beta_k, 1.0 / st.beta_k);
    next.z = conj_prox(*prob.g, st.delta_k * st.z + img.Ax / st.alpha_k, 1.0 / st.alpha_k);
    next.z_prev = st.z;

    if (sched.should_decrease(st.alpha_k, next.z)) {
      next.schedule_index = st.schedule_index + 1;
      next.alpha_k = sched.alpha_at(next.schedule_index);
      next.rho_k = sched.rho_of(next.alpha_k);
      next.delta_k = sched.delta_of(next.alpha_k);
      next.frozen = false;
      next.frozen_at.reset();
      trace.decrease_events.push_back(k);
    } else {
      next.frozen = true;
      if (!next.frozen_at) next.frozen_at = k;
    }
    next.beta_k = sched.beta_at(k + 1);

    const Vec d = -prob.phi->grad(st.x) - adjoint_difference(prob, next.z, next.y);
    const double f_ref = *std::max_element(window.begin(), window.end());

    bool accepted = false;
    double rho_used = next.rho_k;
    Images next_img;
    double scale = ls.nu;
    for (long j = 0; j < ls.t_max; ++j, scale *= ls.eta) {
      const double rho_j = scale * next.rho_k;
      Vec candidate = prob.S->project(st.x + d / rho_j);
      Images cand_img = apply_operators(prob, candidate);
      const double F_cand = eval_F(prob, candidate, cand_img);
      if (F_cand <= f_ref - 0.5 * ls.c * (st.x - candidate).squaredNorm()) {
        next.x = std::move(candidate);
        next_img = std::move(cand_img);
        rho_used = rho_j;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      next.x = prob.S->project(st.x + d / next.rho_k);
      next_img = apply_operators(prob, next.x);
      ++trace.ls_fallbacks;
    }
    detail::check_finite(next, k);

    hist.km2 = hist.km1;
    hist.km1 = st.alpha_k;
    const TraceRecord rec = emit(next, &st, next_img, rho_used, !accepted);
    if (!std::isfinite(rec.F)) throw DivergenceError("line search: F is not finite", k);

    window.push_back(rec.F);
    while (static_cast<long>(window.size()) > ls.lookback + 1) window.pop_front();

    st = std::move(next);
    img = std::move(next_img);

    if (detail::velocities_below(rec, stop.vel_tol)) {
      trace.status = StopStatus::kVelocityTol;
      break;
    }
    if (stop.max_seconds > 0.0 && clock.ms() > 1e3 * stop.max_seconds) {
      trace.status = StopStatus::kTimeBudget;
      break;
    }
  }

  trace.frozen_at = st.frozen_at;
  trace.final_state = std::move(st);
  return trace;
}

}  // namespace dcsplit
