#include "solver_detail.hpp"

#include <cmath>
#include <sstream>

namespace dcsplit {

namespace detail {

void check_finite(const SolverState& st, long iteration) {
  if (!st.x.allFinite()) throw DivergenceError("non-finite x iterate", iteration);
  if (!st.y.allFinite()) throw DivergenceError("non-finite y iterate", iteration);
  if (!st.z.allFinite()) throw DivergenceError("non-finite z iterate", iteration);
}

bool velocities_below(const TraceRecord& r, double tol) {
  return tol > 0.0 && r.vel_x < tol && r.vel_y < tol && r.vel_z < tol;
}

StepOutput dpfs_step_with_images(const Problem& prob, const SolverState& st) {
  if (!(st.rho_k > 0.0 && st.alpha_k > 0.0 && st.beta_k > 0.0)) {
    throw InvalidArgument("dpfs_step: rho_k, alpha_k and beta_k must be positive");
  }
  require_dim(st.x.size(), prob.dim_x(), "dpfs_step: x");
  require_dim(st.y.size(), prob.dim_y(), "dpfs_step: y");
  require_dim(st.z.size(), prob.dim_z(), "dpfs_step: z");

  StepOutput out;
  SolverState& next = out.state;
  next = st;

  const Vec direction = adjoint_difference(prob, st.z, st.y) + prob.phi->grad(st.x);
  next.x = prob.S->project(st.x - direction / st.rho_k);
  out.images = apply_operators(prob, next.x);

  next.y = conj_prox(*prob.f, st.y + out.images.Kx / st.beta_k, 1.0 / st.beta_k);
  next.z = conj_prox(*prob.g, st.delta_k * st.z + out.images.Ax / st.alpha_k, 1.0 / st.alpha_k);
  next.z_prev = st.z;
  check_finite(next, st.k);
  return out;
}

TraceRecord make_record(const Problem& prob, const StepSchedule* sched, const SolverState& cur,
                        const SolverState* prev, const Images& img, const AlphaHistory& hist,
                        bool energies) {
  TraceRecord r;
  r.k = cur.k;
  r.norm_x = cur.x.norm();
  r.norm_y = cur.y.norm();
  r.norm_z = cur.z.norm();
  if (prev != nullptr) {
    r.vel_x = (cur.x - prev->x).norm();
    r.vel_y = (cur.y - prev->y).norm();
    r.vel_z = (cur.z - prev->z).norm();
  }
  r.F = eval_F(prob, cur.x, img);
  if (sched == nullptr) return r;

  r.alpha_k = cur.alpha_k;
  r.rho_k = cur.rho_k;
  if (prev != nullptr) r.cert = sched->certificate(prev->alpha_k, cur.z);
  if (!energies) return r;

  r.Psi = eval_Psi(prob, cur.x, img, cur.y, cur.z);
  if (cur.k >= 1 && cur.alpha_k > sched->alpha) {
    r.varpi = merit_from_psi(r.Psi, cur.z, cur.z_prev, cur.alpha_k, sched->alpha);
  }
  if (cur.k >= 2) {
    r.psi_k = psi_omega_from_psi(r.Psi, cur.z, cur.z_prev,
                                 {cur.alpha_k, hist.km1, hist.km2, sched->alpha})
                  .psi_k;
  }
  return r;
}

namespace {

Trace run_dpfs_family(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
                      const StopRule& stop, const Observer& observer, const RunOptions& options,
                      bool always_decrease, const char* method) {
  prob.validate();
  sched.validate();
  if (stop.max_iters < 0) throw InvalidArgument("StopRule: max_iters must be >= 0");

  Trace trace;
  trace.method = method;
  const Stopwatch clock;

  SolverState st = initial_state(prob, sched, init, options.rho0);
  if (options.z0_bound > 0.0 && st.z.norm() > options.z0_bound) {
    std::ostringstream os;
    os << "||z0|| = " << st.z.norm() << " exceeds the bound " << options.z0_bound;
    trace.warnings.push_back(os.str());
  }
  Images img = apply_operators(prob, st.x);
  AlphaHistory hist;

  auto emit = [&](const SolverState& cur, const SolverState* prev, const Images& images) {
    TraceRecord rec = make_record(prob, &sched, cur, prev, images, hist, options.record_energies);
    rec.t_ms = clock.ms();
    trace.records.push_back(rec);
    if (observer) observer(cur, rec);
    return rec;
  };
  emit(st, nullptr, img);

  for (long k = 0; k < stop.max_iters; ++k) {
    detail::StepOutput step = dpfs_step_with_images(prob, st);
    SolverState& next = step.state;
    next.k = k + 1;

    if (always_decrease || sched.should_decrease(st.alpha_k, next.z)) {
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

    hist.km2 = hist.km1;
    hist.km1 = st.alpha_k;
    const TraceRecord rec = emit(next, &st, step.images);

    st = std::move(next);
    img = std::move(step.images);

    if (velocities_below(rec, stop.vel_tol)) {
      trace.status = StopStatus::kVelocityTol;
      break;
    }
    if (stop.max_seconds > 0.0 && clock.ms() > 1e3 * stop.max_seconds) {
      trace.status = StopStatus::kTimeBudget;
      break;
    }
  }

  trace.frozen_at = always_decrease ? std::nullopt : st.frozen_at;
  trace.final_state = std::move(st);
  return trace;
}

}  // namespace
}  // namespace detail

SolverState initial_state(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
                          double rho0_override) {
  require_dim(init.x0.size(), prob.dim_x(), "initial x0");
  require_dim(init.y0.size(), prob.dim_y(), "initial y0");
  require_dim(init.z0.size(), prob.dim_z(), "initial z0");
  if (!init.x0.allFinite() || !init.y0.allFinite() || !init.z0.allFinite()) {
    throw InvalidArgument("initial point must be finite");
  }
  SolverState st;
  st.x = prob.S->project(init.x0);
  st.y = init.y0;
  st.z = init.z0;
  st.z_prev = init.z0;
  st.schedule_index = 0;
  st.alpha_k = sched.alpha_at(0);
  st.rho_k = rho0_override > 0.0 ? rho0_override : sched.rho_of(st.alpha_k);
  st.delta_k = sched.delta_of(st.alpha_k);
  st.beta_k = sched.beta_at(0);
  st.k = 0;
  return st;
}

SolverState dpfs_step(const Problem& prob, const SolverState& st, const StepSchedule&) {
  return detail::dpfs_step_with_images(prob, st).state;
}

Trace dpfs(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
           const StopRule& stop, const Observer& observer, const RunOptions& options) {
  return detail::run_dpfs_family(prob, sched, init, stop, observer, options, true, "dpfs");
}

Trace adaptive_dpfs(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
                    const StopRule& stop, const Observer& observer, const RunOptions& options) {
  return detail::run_dpfs_family(prob, sched, init, stop, observer, options, false,
                                 "adaptive_dpfs");
}

}  // namespace dcsplit
