#pragma once

#include "dcsplit/problem.hpp"
#include "dcsplit/schedule.hpp"
#include "dcsplit/trace.hpp"

#include <functional>
#include <utility>

namespace dcsplit {

struct StopRule {
  long max_iters = 1000;
  /// Stop once all three velocities fall below this; 0 disables.
  double vel_tol = 0.0;
  /// Wall-clock budget; 0 disables.
  double max_seconds = 0.0;
};

struct InitialPoint {
  Vec x0;
  Vec y0;
  Vec z0;
};

struct RunOptions {
  /// Overrides rho_0 = rho_of(alpha_0) when positive.
  double rho0 = 0.0;
  /// Warn (do not reject) when ||z0|| exceeds this; 0 disables.
  double z0_bound = 0.0;
  /// Evaluate Psi, psi_k and varpi per iteration.
  bool record_energies = true;
};

/// Called once per trace record, starting with the initial point. Must not
/// retain references beyond the call.
using Observer = std::function<void(const SolverState&, const TraceRecord&)>;

/// Starting state: x0 projected onto S, alpha_0 = alpha + gamma, rho_0 from
/// the schedule, delta_0 = alpha / alpha_0, beta_0.
SolverState initial_state(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
                          double rho0_override = 0.0);

/// One DPFS sweep with the parameters stored in `st`:
///   x+ = Proj_S(x - (A^*z - K^*y + grad phi(x)) / rho_k)
///   y+ = prox_{f^*, 1/beta_k}(y + K x+ / beta_k)
///   z+ = prox_{g^*, 1/alpha_k}(delta_k z + A x+ / alpha_k)
/// Parameters are carried over unchanged; z_prev becomes the old z.
/// Throws DivergenceError on non-finite output.
SolverState dpfs_step(const Problem& prob, const SolverState& st, const StepSchedule& sched);

/// DPFS with the schedule advanced on every iteration (vanishing steps).
Trace dpfs(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
           const StopRule& stop, const Observer& observer = {}, const RunOptions& options = {});

/// Adaptive DPFS: the schedule advances only while
/// (alpha_k - alpha) ||z^{k+1}|| > eps, and is otherwise frozen.
Trace adaptive_dpfs(const Problem& prob, const StepSchedule& sched, const InitialPoint& init,
                    const StopRule& stop, const Observer& observer = {},
                    const RunOptions& options = {});

struct LineSearchParams {
  double eta = 1.3;
  double nu = 0.1;
  double c = 1e-3;
  long lookback = 1;
  long t_max = 5;

  void validate() const;
};

/// Adaptive DPFS with a nonmonotone line search on the x-step. The dual
/// updates use x^k, then x^{k+1} = Proj_S(x^k + d / rho') for the first
/// rho' = nu * eta^j * rho_{k+1} (j < t_max) satisfying
///   F(x^{k+1}) <= max_{[k-T]_+ <= t <= k} F(x^t) - (c/2) ||x^k - x^{k+1}||^2.
/// When no candidate passes, the unscaled rho_{k+1} step is taken and the
/// record is flagged `ls_fallback`.
Trace adaptive_dpfs_ls(const Problem& prob, const StepSchedule& sched, const LineSearchParams& ls,
                       const InitialPoint& init, const StopRule& stop,
                       const Observer& observer = {}, const RunOptions& options = {});

struct InnerSolveParams {
  double tol = 1e-6;
  long max_inner = 200;
};

struct InnerResult {
  Vec x;
  /// Final dual variable; feed back as a warm start.
  Vec dual;
  long iterations = 0;
  double residual = kInf;
  bool converged = false;
};

/// argmin_x g(Tx) + iota_S(x) + ||x - w||^2 / (2 gamma), by accelerated
/// proximal gradient on the dual:
///   x(v) = Proj_S(w - gamma T^* v),  v+ = prox_{s g^*}(v + s T x(v)),  s = 1/(gamma sigma_T).
/// Stops when ||x_j - x_{j-1}|| <= tol * max(1, ||x_j||). Passing S = nullptr
/// means the whole space.
InnerResult inner_prox_composite(const ConvexFunction& g, const LinearOperator& T, const Vec& w,
                                 double gamma, double sigma_T, double tol, long max_inner,
                                 const ProjectableSet* S = nullptr, const Vec* warm_dual = nullptr);

struct FbdcParams {
  double step = 0.025;
  double dual_step = 0.5;
  InnerSolveParams inner;
  /// ||A||^2; estimated by power iteration (times 1.01) when 0.
  double sigma_T = 0.0;
};

/// Double proximal-gradient baseline:
///   x+ = prox_{step (g o A + iota_S)}(x + step (K^*y - grad phi(x)))
///   y+ = prox_{dual_step f^*}(y + dual_step K x+)
Trace fbdc(const Problem& prob, const FbdcParams& params, const InitialPoint& init,
           const StopRule& stop, const Observer& observer = {});

/// Outcome of the two-dimensional divergence example.
struct CounterexampleReport {
  long iterations = 0;
  double max_norm_x = 0.0;
  /// sum_{k < iterations} 1 / rho_k.
  double sum_inv_rho = 0.0;
  /// min_i (c - (z - x))_i at the final iterate; 0 at a KKT point.
  double kkt_gap = 0.0;
  /// max_i (z - x)_i at the final iterate.
  double max_z_minus_x = 0.0;
  /// ||c - (z - x)||_inf at the final iterate.
  double stationarity_inf = 0.0;
  double vel_x = 0.0;
  double vel_y = 0.0;
  double vel_z = 0.0;
};

/// The problem g = ||.||_1, f = <c, .> with c = (2, 2), phi = -(1/2)||.||^2,
/// A = K = I, S = {|x| <= 200}; gamma = 3, alpha = 1, mu = 1/2, r = 1.
Problem counterexample_problem();
StepSchedule counterexample_schedule();

/// Runs DPFS from x0 = (0, 0), y0 = c and the given z0 (|z0|_inf <= 1).
std::pair<Trace, CounterexampleReport> run_counterexample(long n_iters, const Vec& z0);

}  // namespace dcsplit
