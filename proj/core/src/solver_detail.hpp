#pragma once

#include "dcsplit/diagnostics.hpp"
#include "dcsplit/solver.hpp"

#include <chrono>

namespace dcsplit::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}

  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct StepOutput {
  SolverState state;
  /// A x+ and K x+.
  Images images;
};

StepOutput dpfs_step_with_images(const Problem& prob, const SolverState& st);

/// alpha_{k-1} and alpha_{k-2} for the energy of iterate k.
struct AlphaHistory {
  double km1 = kNaN;
  double km2 = kNaN;
};

/// Fills norms, velocities, objective, energies and schedule columns of the
/// record for iterate `cur.k`.
TraceRecord make_record(const Problem& prob, const StepSchedule* sched, const SolverState& cur,
                        const SolverState* prev, const Images& img, const AlphaHistory& hist,
                        bool energies);

void check_finite(const SolverState& st, long iteration);

bool velocities_below(const TraceRecord& r, double tol);

}  // namespace dcsplit::detail
