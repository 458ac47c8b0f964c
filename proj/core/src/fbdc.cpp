#include "solver_detail.hpp"

#include <cmath>
#include <sstream>

namespace dcsplit {

InnerResult inner_prox_composite(const ConvexFunction& g, const LinearOperator& T, const Vec& w,
                                 double gamma, double sigma_T, double tol, long max_inner,
                                 const ProjectableSet* S, const Vec* warm_dual) {
  if (!(gamma > 0.0)) throw InvalidArgument("inner_prox_composite: gamma must be > 0");
  if (!(sigma_T > 0.0)) throw InvalidArgument("inner_prox_composite: sigma_T must be > 0");
  if (max_inner < 1) throw InvalidArgument("inner_prox_composite: max_inner must be >= 1");
  require_dim(w.size(), T.n_in(), "inner_prox_composite: w");

  auto primal = [&](const Vec& v) {
    Vec x = w - gamma * T.adjoint_apply(v);
    return S != nullptr ? S->project(x) : x;
  };

  const double s = 1.0 / (gamma * sigma_T);
  Vec v = Vec::Zero(T.n_out());
  if (warm_dual != nullptr && warm_dual->size() == T.n_out()) v = *warm_dual;
  Vec u = v;
  double t = 1.0;

  InnerResult out;
  Vec x_prev = primal(v);
  for (long j = 1; j <= max_inner; ++j) {
    const Vec xu = primal(u);
    Vec v_next = conj_prox(g, u + s * T.apply(xu), s);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    u = v_next + ((t - 1.0) / t_next) * (v_next - v);
    v = std::move(v_next);
    t = t_next;

    Vec x = primal(v);
    out.residual = (x - x_prev).norm();
    out.iterations = j;
    if (out.residual <= tol * std::max(1.0, x.norm())) {
      out.converged = true;
      out.x = std::move(x);
      break;
    }
    x_prev = std::move(x);
  }
  if (!out.converged) out.x = std::move(x_prev);
  out.dual = std::move(v);
  return out;
}

Trace fbdc(const Problem& prob, const FbdcParams& params, const InitialPoint& init,
           const StopRule& stop, const Observer& observer) {
  prob.validate();
  if (!(params.step > 0.0 && params.dual_step > 0.0)) {
    throw ConfigError("fbdc: step and dual_step must be > 0");
  }
  if (stop.max_iters < 0) throw InvalidArgument("StopRule: max_iters must be >= 0");
  require_dim(init.x0.size(), prob.dim_x(), "initial x0");
  require_dim(init.y0.size(), prob.dim_y(), "initial y0");

  const double sigma_T =
      params.sigma_T > 0.0 ? params.sigma_T : 1.01 * op_norm_sq_estimate(*prob.A);
  if (!(sigma_T > 0.0)) throw InvalidArgument("fbdc: operator A is zero");

  Trace trace;
  trace.method = "fbdc";
  const detail::Stopwatch clock;

  SolverState st;
  st.x = prob.S->project(init.x0);
  st.y = init.y0;
  st.z = Vec::Zero(prob.dim_z());
  st.z_prev = st.z;

  auto emit = [&](const SolverState& cur, const SolverState* prev) {
    TraceRecord rec = detail::make_record(prob, nullptr, cur, prev,
                                          apply_operators(prob, cur.x), {}, false);
    rec.t_ms = clock.ms();
    trace.records.push_back(rec);
    if (observer) observer(cur, rec);
    return rec;
  };
  emit(st, nullptr);

  for (long k = 0; k < stop.max_iters; ++k) {
    SolverState next = st;
    next.k = k + 1;
    const Vec w = st.x + params.step * (prob.K->adjoint_apply(st.y) - prob.phi->grad(st.x));
    InnerResult inner =
        inner_prox_composite(*prob.g, *prob.A, w, params.step, sigma_T, params.inner.tol,
                             params.inner.max_inner, prob.S.get(), &st.z);
    if (!inner.converged) ++trace.inner_unconverged;
    next.x = std::move(inner.x);
    // The inner dual doubles as the z iterate (a subgradient of g at A x).
    next.z = std::move(inner.dual);
    next.z_prev = st.z;
    next.y = conj_prox(*prob.f, st.y + params.dual_step * prob.K->apply(next.x),
                       params.dual_step);
    detail::check_finite(next, k);

    const TraceRecord rec = emit(next, &st);
    st = std::move(next);

    if (detail::velocities_below(rec, stop.vel_tol)) {
      trace.status = StopStatus::kVelocityTol;
      break;
    }
    if (stop.max_seconds > 0.0 && clock.ms() > 1e3 * stop.max_seconds) {
      trace.status = StopStatus::kTimeBudget;
      break;
    }
  }

  if (trace.inner_unconverged > 0) {
    std::ostringstream os;
    os << "inner solver hit max_inner in " << trace.inner_unconverged << " outer iterations";
    trace.warnings.push_back(os.str());
  }
  trace.final_state = std::move(st);
  return trace;
}

}  // namespace dcsplit
